#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "qtoda/scattering.hpp"

using namespace qtoda;
using std::numbers::pi;
using cplx = std::complex<double>;

namespace {

ParamSet p1() { return preset("P1"); }

ParamSet rank_one() {
  return ParamSet(1, Rational(1, 4), Rational(0),
                  {Rational(1, 2), Rational(1, 2), Rational(1, 2), Rational(1, 2)},
                  Mode::t_zero);
}

}  // namespace

TEST_CASE("pair factor is one at the fixed points and unimodular everywhere") {
  const ParamSet P = p1();
  CHECK(std::abs(s_pair(0.0, P) - 1.0) < 1e-15);
  CHECK(std::abs(s_pair(pi, P) - 1.0) < 1e-12);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-3.5, 3.5);
  for (int trial = 0; trial < 100; ++trial)
    CHECK(std::abs(std::abs(s_pair(dist(rng), P)) - 1.0) < 1e-12);
}

TEST_CASE("boundary factor is unimodular") {
  const ParamSet P = p1();
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> dist(-3.5, 3.5);
  for (int trial = 0; trial < 100; ++trial)
    CHECK(std::abs(std::abs(s_boundary(dist(rng), P)) - 1.0) < 1e-12);
}

TEST_CASE("matrix value factorizes over its breakdown") {
  const ParamSet P = p1();
  const std::vector<double> xi = {2.0, 1.0};
  const SMatrixValue S = s_matrix(xi, P);
  REQUIRE(S.pair_factors.size() == 2);
  REQUIRE(S.boundary_factors.size() == 2);
  CHECK(std::abs(S.pair_factors[0] - s_pair(1.0, P)) < 1e-15);
  CHECK(std::abs(S.pair_factors[1] - s_pair(3.0, P)) < 1e-15);
  CHECK(std::abs(S.boundary_factors[0] - s_boundary(2.0, P)) < 1e-15);
  CHECK(std::abs(S.boundary_factors[1] - s_boundary(1.0, P)) < 1e-15);
  const cplx recomposed =
      s_pair(1.0, P) * s_pair(3.0, P) * s_boundary(2.0, P) * s_boundary(1.0, P);
  CHECK(std::abs(S.value - recomposed) < 1e-12);
  CHECK(std::abs(std::abs(S.value) - 1.0) < 1e-12);

  std::mt19937 rng(13);
  std::uniform_real_distribution<double> dist(0.1, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::vector<double> pt = {dist(rng), dist(rng)};
    CHECK(std::abs(std::abs(s_matrix(pt, P).value) - 1.0) < 1e-12);
  }
}

TEST_CASE("rank-one matrix reduces to the boundary factor") {
  const ParamSet P = rank_one();
  const std::vector<double> xi = {1.234};
  const SMatrixValue S = s_matrix(xi, P);
  CHECK(S.pair_factors.empty());
  CHECK(std::abs(S.value - s_boundary(1.234, P)) < 1e-15);
}

TEST_CASE("coinciding momenta contribute a trivial difference factor") {
  const ParamSet P = p1();
  const std::vector<double> xi = {1.3, 1.3};
  const SMatrixValue S = s_matrix(xi, P);
  const cplx want = s_pair(2.6, P) * s_boundary(1.3, P) * s_boundary(1.3, P);
  CHECK(std::abs(S.pair_factors[0] - 1.0) < 1e-15);
  CHECK(std::abs(S.value - want) < 1e-12);
}

TEST_CASE("branch roots square to the factors") {
  const ParamSet P = p1();
  CHECK(std::abs(sqrt_branch(0.0, SFactor::pair, P) - 1.0) < 1e-15);
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> dist(-3.5, 3.5);
  for (int trial = 0; trial < 100; ++trial) {
    const double x = dist(rng);
    const cplx rp = sqrt_branch(x, SFactor::pair, P);
    const cplx rb = sqrt_branch(x, SFactor::boundary, P);
    CHECK(std::abs(rp * rp - s_pair(x, P)) < 1e-12);
    CHECK(std::abs(rb * rb - s_boundary(x, P)) < 1e-12);
  }

  // Boundary branch against its explicit product form.
  const double q = 0.25, x = 1.0;
  const cplx num = qpoch_infinite(q * std::polar(1.0, 2 * x), q);
  cplx want = num / std::abs(num);
  for (int r = 0; r < 4; ++r) {
    const cplx f = qpoch_infinite(0.5 * std::polar(1.0, x), q);
    want *= std::abs(f) / f;
  }
  CHECK(std::abs(sqrt_branch(x, SFactor::boundary, P) - want) < 1e-15);

  const std::vector<double> xi = {2.0, 1.0};
  const SMatrixValue S = s_matrix(xi, P);
  CHECK(std::abs(S.branch_root * S.branch_root - S.value) < 1e-12);
}

TEST_CASE("operator symbol conjugates the matrix on the regular alcove") {
  const ParamSet P = p1();
  const std::vector<double> a = {pi / 2, pi / 4};
  CHECK(in_regular_alcove(a));
  CHECK(std::abs(s_operator_symbol(a, P) - std::conj(s_matrix(a, P).value)) < 1e-12);

  // Gradient magnitudes out of order: the signed permutation swaps before
  // flipping, so the conjugated matrix is taken at the swapped point.
  const std::vector<double> b = {2.8, 1.2};
  const std::vector<double> b_swapped = {1.2, 2.8};
  CHECK(in_regular_alcove(b));
  CHECK(std::abs(s_operator_symbol(b, P) - std::conj(s_matrix(b_swapped, P).value)) < 1e-12);

  CHECK_FALSE(in_regular_alcove(std::vector<double>{1.0, 0.0}));
  CHECK_FALSE(in_regular_alcove(std::vector<double>{2.0, pi - 2.0}));
  CHECK_FALSE(in_regular_alcove(std::vector<double>{pi / 2, pi / 2}));
  CHECK_THROWS_AS(s_operator_symbol(std::vector<double>{1.0, 0.0}, P), Error);
  CHECK_THROWS_AS(s_operator_symbol(std::vector<double>{2.0, pi - 2.0}, P), Error);
}

TEST_CASE("anti-invariant kernel matches the rank-one closed form and alternates") {
  for (double x : {0.3, 1.1, 2.7}) {
    const cplx got0 = chi_kernel(Partition({0}), std::vector<double>{x});
    const cplx got3 = chi_kernel(Partition({3}), std::vector<double>{x});
    CHECK(std::abs(got0 - std::sqrt(2.0 / pi) * std::sin(x)) < 1e-13);
    CHECK(std::abs(got3 - std::sqrt(2.0 / pi) * std::sin(4 * x)) < 1e-13);
  }

  const Partition lam({2, 1});
  const cplx base = chi_kernel(lam, std::vector<double>{2.0, 1.0});
  CHECK(std::abs(chi_kernel(lam, std::vector<double>{1.0, 2.0}) + base) < 1e-12);
  CHECK(std::abs(chi_kernel(lam, std::vector<double>{2.0, -1.0}) + base) < 1e-12);
  CHECK(std::abs(base) > 1e-3);
}

TEST_CASE("free transform round-trips lattice indicators through the alcove") {
  const TorusGrid grid(512, 1);
  for (int l = 0; l <= 4; ++l) {
    LatticeFn f;
    f[Partition({l})] = Rational(1);
    const auto fhat = free_transform(f, grid);
    for (int m = 0; m <= 4; ++m) {
      const cplx got = free_inverse(fhat, grid, Partition({m}));
      const double want = l == m ? 1.0 : 0.0;
      CHECK(std::abs(got - want) < 1e-6);
    }
  }
}

TEST_CASE("free transform preserves the two-point norm") {
  const TorusGrid grid(512, 1);
  LatticeFn f;
  f[Partition({0})] = Rational(1);
  f[Partition({3})] = Rational(2);
  const auto fhat = free_transform(f, grid);
  double mass = 0;
  std::vector<double> xi(1);
  for (long node = 0; node < grid.size(); ++node) {
    grid.node(node, xi);
    if (!(xi[0] > 0.0 && xi[0] < pi)) continue;
    mass += std::norm(fhat[node]);
  }
  mass *= grid.cell();
  CHECK(std::abs(mass - 5.0) < 1e-5);
}

TEST_CASE("rank-two round trip recovers an indicator") {
  const TorusGrid grid(128, 2);
  LatticeFn f;
  f[Partition({1, 0})] = Rational(1);
  const auto fhat = free_transform(f, grid);
  for (const Partition& mu : partitions_up_to_weight(2, 2)) {
    const cplx got = free_inverse(fhat, grid, mu);
    const double want = mu == Partition({1, 0}) ? 1.0 : 0.0;
    CHECK(std::abs(got - want) < 1e-4);
  }
}
