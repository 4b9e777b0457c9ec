#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qtoda/toda.hpp"

using namespace qtoda;

namespace {

ParamSet rank1_tzero() {
  const Rational h(1, 2);
  return ParamSet(1, Rational(1, 4), Rational(0), {h, h, h, h}, Mode::t_zero);
}

Rational rat(long n, long d) { return Rational(n, d); }

}  // namespace

TEST_CASE("one-step stencil basics") {
  const ParamSet P = preset("P1");
  const TodaStencil s0 = toda_stencil(P, Partition::zero(2));
  CHECK(s0.up[0] == Rational(1));
  CHECK(s0.up[1].is_zero());    // equal parts block the inner up-move
  CHECK(s0.down[0].is_zero());  // equal parts block the inner down-move
  CHECK(s0.down[1].is_zero());  // lambda_n = 0 blocks the boundary down-move

  const TodaStencil s = toda_stencil(P, Partition({3, 1}));
  CHECK(s.up[0] == Rational(1));
  CHECK(s.up[1] == (Rational(1) - P.q().pow(2)) * toda_wplus(P, 1));
  const Rational pair = Rational(1) - P.t0_sq() * P.q().pow(4);
  CHECK(s.down[0] == (Rational(1) - P.q().pow(2)) * pair);
  CHECK(s.down[1] == pair * toda_wminus(P, 1));
  CHECK(s.diag == toda_u(P, Partition({3, 1})));
}

TEST_CASE("application matches the stencil sum on a flat function") {
  const ParamSet P = preset("P1");
  // Constant 1 on a box; deep inside, H(1) = sum of all stencil entries.
  LatticeFn one;
  for (const auto& p : partitions_up_to_weight(2, 8)) one.emplace(p, Rational(1));
  const LatticeFn g = apply_toda(P, one);
  for (const auto& lambda : {Partition({2, 1}), Partition({3, 1}), Partition({2, 2})}) {
    const TodaStencil s = toda_stencil(P, lambda);
    Rational expect = s.diag;
    for (int j = 0; j < 2; ++j) expect += s.up[j] + s.down[j];
    CHECK(g.at(lambda) == expect);
  }
}

TEST_CASE("rank-one integral stencil by brute force") {
  const ParamSet P = rank1_tzero();
  const Rational th = P.that(0);
  for (int m = 0; m <= 5; ++m) {
    const Partition lm({m});
    const auto st = integral_stencil(P, lm);
    const Rational wp = toda_wplus(P, m);
    const Rational wm = toda_wminus(P, m);
    CHECK(st.at(Partition({m + 1})) == wp);
    if (m >= 1)
      CHECK(st.at(Partition({m - 1})) == wm);
    else
      CHECK(st.size() == 2);  // the down coefficient vanished with its move
    CHECK(st.at(lm) == -th.inv() * wp - th * wm);
    // The same three-point data solves the diagonal identity linking the two
    // operators at rank one: u - (th + th^{-1}) = -th^{-1} w_+ - th w_-.
    CHECK(toda_u(P, lm) - th - th.inv() == st.at(lm));
  }
}

TEST_CASE("eigen identity for the Hamiltonian") {
  const ParamSet P1 = preset("P1");
  const DualTable tab = dual_table(P1, 4);
  for (const auto& lambda : partitions_up_to_weight(2, 3))
    CHECK(toda_eigen_residual(P1, tab, lambda).is_zero());

  const ParamSet R1 = rank1_tzero();
  const DualTable tab1 = dual_table(R1, 5);
  for (const auto& lambda : partitions_up_to_weight(1, 4))
    CHECK(toda_eigen_residual(R1, tab1, lambda).is_zero());
}

TEST_CASE("eigen identity for the commuting integral") {
  const ParamSet P1 = preset("P1");
  const DualTable tab = dual_table(P1, 4);
  for (const auto& lambda : partitions_up_to_weight(2, 2))
    CHECK(integral_eigen_residual(P1, tab, lambda).is_zero());
}

TEST_CASE("detailed balance") {
  const ParamSet P1 = preset("P1");
  for (const auto& lambda : partitions_up_to_weight(2, 4))
    for (int j = 1; j <= 2; ++j) CHECK(balance_residual(P1, lambda, j).is_zero());
  for (const auto& lambda : partitions_up_to_weight(2, 2))
    for (const auto& [mu, r] : integral_balance_residuals(P1, lambda)) CHECK(r.is_zero());

  const ParamSet R1 = rank1_tzero();
  for (int m = 0; m <= 5; ++m) CHECK(balance_residual(R1, Partition({m}), 1).is_zero());
}

TEST_CASE("commutator of the Hamiltonian and the integral vanishes") {
  const ParamSet P1 = preset("P1");
  for (const auto& nu : partitions_up_to_weight(2, 2))
    CHECK(commutator_column(P1, nu).empty());
  const ParamSet R1 = rank1_tzero();
  CHECK(commutator_column(R1, Partition({2})).empty());
}

TEST_CASE("reduced chain at vanishing that_0") {
  const ParamSet R = ParamSet(1, Rational(1, 4), Rational(0),
                              {Rational(0), rat(1, 2), rat(1, 3), rat(-1, 2)}, Mode::that0_zero);
  const DualTable tab = dual_table(R, 5);
  for (const auto& lambda : partitions_up_to_weight(1, 4))
    CHECK(toda_eigen_residual(R, tab, lambda).is_zero());

  const ParamSet R2 = preset("P1", Mode::that0_zero);
  const DualTable tab2 = dual_table(R2, 3);
  for (const auto& lambda : partitions_up_to_weight(2, 2)) {
    CHECK(toda_eigen_residual(R2, tab2, lambda).is_zero());
    for (int j = 1; j <= 2; ++j) CHECK(balance_residual(R2, lambda, j).is_zero());
  }
  CHECK(toda_stencil(R2, Partition({1, 0})).down[1].is_zero());
}

TEST_CASE("pure hyperoctahedral chain when all boundary parameters vanish") {
  const ParamSet B = ParamSet(2, Rational(1, 4), Rational(0),
                              {Rational(0), Rational(0), Rational(0), Rational(0)},
                              Mode::that0_zero);
  for (const auto& lambda : partitions_up_to_weight(2, 4)) {
    const TodaStencil s = toda_stencil(B, lambda);
    CHECK(s.diag.is_zero());
    if (lambda[1] > 0) {
      Rational expect = Rational(1) - B.q().pow(lambda[1]);
      if (lambda[0] > lambda[1]) CHECK(s.down[1] == expect);
    }
  }
  const DualTable tab = dual_table(B, 3);
  for (const auto& lambda : partitions_up_to_weight(2, 2))
    CHECK(toda_eigen_residual(B, tab, lambda).is_zero());
}

TEST_CASE("extended boundary point with identically zero potential") {
  const ParamSet E = ParamSet(2, Rational(1, 4), Rational(0),
                              {rat(3, 4), rat(-3, 4), rat(1, 2), rat(-1, 2)},
                              Mode::extended_boundary);
  for (const auto& lambda : partitions_up_to_weight(2, 4)) {
    CHECK(toda_u(E, lambda).is_zero());
    toda_stencil(E, lambda);  // hopping coefficients stay finite here
  }
}

TEST_CASE("boundary weights trivialize at the endpoint parameter corner") {
  const ParamSet D = ParamSet(2, Rational(1, 4), Rational(0),
                              {Rational(1), Rational(-1), rat(1, 2), rat(-1, 2)},
                              Mode::extended_boundary);
  for (int m = 1; m <= 5; ++m) {
    CHECK(toda_wplus(D, m) == Rational(1));
    CHECK(toda_wminus(D, m) == Rational(1));
  }
  CHECK(toda_wminus(D, 0).is_zero());
  // At m = 0 the parameter-continuous value doubles: the two unit hops off the
  // wall fold onto one target.
  CHECK(toda_wplus(D, 0) == Rational(2));
  for (const auto& lambda : partitions_up_to_weight(2, 3))
    CHECK(toda_u(D, lambda).is_zero());
}

TEST_CASE("lattice weights agree with the continuous weight functions off walls") {
  const ParamSet P1 = preset("P1");
  for (int m = 1; m <= 4; ++m) {
    const Rational X = P1.t0() * P1.q().pow(m);
    CHECK(toda_wplus(P1, m) == cont_wplus(P1, X));
    CHECK(toda_wminus(P1, m) == cont_wminus(P1, X));
  }
  CHECK(toda_wplus(P1, 0) == cont_wplus(P1, P1.t0()));
}

TEST_CASE("boundary rational identity at random points") {
  std::mt19937_64 rng(20240817u);
  std::uniform_int_distribution<long> num(-60, 60), den(1, 60);
  auto sample = [&](const ParamSet& P) {
    for (int attempt = 0; attempt < 200; ++attempt) {
      std::vector<Rational> X;
      bool ok = true;
      for (int j = 0; j < P.n(); ++j) {
        const long a = num(rng);
        if (a == 0) {
          ok = false;
          break;
        }
        X.emplace_back(a, den(rng));
      }
      if (!ok) continue;
      try {
        const Rational lhs = boundary_identity_lhs(P, X);
        const Rational rhs = boundary_identity_rhs(P, X);
        return std::make_pair(lhs, rhs);
      } catch (const Error&) {
        continue;  // pole at the sample point: resample
      }
    }
    throw Error("sampling failed");
  };
  const ParamSet P1 = preset("P1", Mode::generic_t);
  for (int trial = 0; trial < 25; ++trial) {
    const auto [lhs, rhs] = sample(P1);
    CHECK(lhs == rhs);
  }
  const ParamSet P2 = preset("P2", Mode::generic_t);
  for (int trial = 0; trial < 10; ++trial) {
    const auto [lhs, rhs] = sample(P2);
    CHECK(lhs == rhs);
  }
  const ParamSet R1 = ParamSet(1, Rational(1, 4), Rational(1, 3),
                               {rat(1, 2), rat(1, 2), rat(1, 2), rat(1, 2)}, Mode::generic_t);
  for (int trial = 0; trial < 10; ++trial) {
    const auto [lhs, rhs] = sample(R1);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("diagonal potential is the small-t limit of the Pieri deficit") {
  const ParamSet P1 = preset("P1");
  const auto that = std::array<Rational, 4>{rat(1, 2), rat(1, 2), rat(1, 2), rat(1, 2)};
  for (const auto& lambda : {Partition({2, 1}), Partition({3, 1}), Partition({2, 2})}) {
    const Rational u = toda_u(P1, lambda);
    double resid[2];
    int i = 0;
    for (long d : {10000L, 1000000L}) {
      const ParamSet Pt(2, Rational(1, 4), Rational(1, d), that, Mode::generic_t);
      resid[i++] = std::abs((pieri_deficit(Pt, lambda) - u).to_double());
    }
    CHECK(resid[0] < 1e-2);
    CHECK(resid[1] < 0.05 * resid[0]);
  }
}
