#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "qtoda/params.hpp"
#include "qtoda/partition.hpp"
#include "qtoda/qseries.hpp"
#include "qtoda/quadrature.hpp"
#include "qtoda/toda.hpp"

namespace qtoda {

namespace detail {

inline std::complex<double> unit_phase(double x) {
  return {std::cos(x), std::sin(x)};
}

inline int perm_parity(std::span<const int> idx) {
  int inv = 0;
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = a + 1; b < idx.size(); ++b)
      if (idx[a] > idx[b]) ++inv;
  return inv % 2 == 0 ? 1 : -1;
}

}  // namespace detail

// Two-particle factor (q e^{ix})_inf / (q e^{-ix})_inf; the denominator is the
// conjugate of the numerator for real x, so the value is unimodular.
inline std::complex<double> s_pair(double x, const ParamSet& P, double tol = 1e-17) {
  const double q = P.q().to_double();
  return qpoch_infinite(q * detail::unit_phase(x), q, tol) /
         qpoch_infinite(q * detail::unit_phase(-x), q, tol);
}

// One-particle boundary factor; unimodular for real x by the same conjugation.
inline std::complex<double> s_boundary(double x, const ParamSet& P, double tol = 1e-17) {
  const double q = P.q().to_double();
  std::complex<double> acc = qpoch_infinite(q * detail::unit_phase(2 * x), q, tol) /
                             qpoch_infinite(q * detail::unit_phase(-2 * x), q, tol);
  for (int r = 0; r < 4; ++r) {
    const double tr = P.that(r).to_double();
    acc *= qpoch_infinite(tr * detail::unit_phase(-x), q, tol) /
           qpoch_infinite(tr * detail::unit_phase(x), q, tol);
  }
  return acc;
}

enum class SFactor { pair, boundary };

// Unimodular square root fixed by dividing the numerator product by its own
// modulus; squaring it recovers the factor.
inline std::complex<double> sqrt_branch(double x, SFactor kind, const ParamSet& P,
                                        double tol = 1e-17) {
  const double q = P.q().to_double();
  if (kind == SFactor::pair) {
    const std::complex<double> num = qpoch_infinite(q * detail::unit_phase(x), q, tol);
    return num / std::abs(num);
  }
  const std::complex<double> num = qpoch_infinite(q * detail::unit_phase(2 * x), q, tol);
  std::complex<double> acc = num / std::abs(num);
  for (int r = 0; r < 4; ++r) {
    const double tr = P.that(r).to_double();
    const std::complex<double> f = qpoch_infinite(tr * detail::unit_phase(x), q, tol);
    acc *= std::abs(f) / f;
  }
  return acc;
}

// Factorized n-particle matrix with its factor breakdown.  Pair factors come
// in lex order over j < k, difference argument before sum argument.
struct SMatrixValue {
  std::complex<double> value;                          // |value| = 1 off walls
  std::vector<std::complex<double>> pair_factors;      // s(xi_j - xi_k), s(xi_j + xi_k)
  std::vector<std::complex<double>> boundary_factors;  // s0(xi_j)
  std::complex<double> branch_root;                    // product of the square-root branches
};

inline SMatrixValue s_matrix(std::span<const double> xi, const ParamSet& P, double tol = 1e-17) {
  const int n = P.n();
  if (static_cast<int>(xi.size()) != n) throw Error("s_matrix: rank mismatch");
  SMatrixValue out;
  out.value = 1.0;
  out.branch_root = 1.0;
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k)
      for (double arg : {xi[j] - xi[k], xi[j] + xi[k]}) {
        out.pair_factors.push_back(s_pair(arg, P, tol));
        out.value *= out.pair_factors.back();
        out.branch_root *= sqrt_branch(arg, SFactor::pair, P, tol);
      }
  for (int j = 0; j < n; ++j) {
    out.boundary_factors.push_back(s_boundary(xi[j], P, tol));
    out.value *= out.boundary_factors.back();
    out.branch_root *= sqrt_branch(xi[j], SFactor::boundary, P, tol);
  }
  return out;
}

// Regular part of the alcove: interior points where no component of the
// eigenvalue gradient (-2 sin xi_j) vanishes and their absolute values are
// pairwise distinct, so the reordering element below is unique.  Ties within
// rounding slack count as degenerate.
inline bool in_regular_alcove(std::span<const double> xi, double slack = 1e-12) {
  const int n = static_cast<int>(xi.size());
  if (!(xi[n - 1] > 0.0) || !(xi[0] < std::numbers::pi)) return false;
  for (int j = 0; j + 1 < n; ++j)
    if (!(xi[j] > xi[j + 1])) return false;
  for (int j = 0; j < n; ++j) {
    if (std::abs(std::sin(xi[j])) < slack) return false;
    for (int k = j + 1; k < n; ++k)
      if (std::abs(std::abs(std::sin(xi[j])) - std::abs(std::sin(xi[k]))) < slack) return false;
  }
  return true;
}

// Symbol of the scattering operator at a regular point: the matrix evaluated
// at the signed permutation of xi that makes the gradient components positive
// and descending.  On the alcove every gradient component is negative, so the
// signs always flip and only the ordering varies.
inline std::complex<double> s_operator_symbol(std::span<const double> xi, const ParamSet& P,
                                              double tol = 1e-17) {
  if (static_cast<int>(xi.size()) != P.n()) throw Error("s_operator_symbol: rank mismatch");
  if (!in_regular_alcove(xi))
    throw Error("s_operator_symbol: point outside the regular part of the alcove");
  std::vector<std::pair<double, double>> gx;
  for (double x : xi) gx.emplace_back(2.0 * std::sin(x), -x);
  std::sort(gx.begin(), gx.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<double> eta;
  for (const auto& [g, x] : gx) eta.push_back(x);
  return s_matrix(eta, P, tol).value;
}

// Anti-invariant Fourier kernel: alternating sum over signed permutations of
// the strictly decreasing vector rho + lambda, rho = (n, ..., 1).
inline std::complex<double> chi_kernel(const Partition& lambda, std::span<const double> xi) {
  const int n = lambda.rank();
  if (static_cast<int>(xi.size()) != n) throw Error("chi_kernel: rank mismatch");
  std::vector<double> a(n);
  for (int j = 0; j < n; ++j) a[j] = static_cast<double>(n - j + lambda[j]);
  std::vector<int> idx(n);
  for (int j = 0; j < n; ++j) idx[j] = j;
  std::complex<double> acc(0);
  do {
    const int ps = detail::perm_parity(idx);
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      double phase = 0;
      int sgn = ps;
      for (int j = 0; j < n; ++j) {
        const double c = (mask >> j) & 1u ? -1.0 : 1.0;
        if ((mask >> j) & 1u) sgn = -sgn;
        phase += c * a[idx[j]] * xi[j];
      }
      acc += static_cast<double>(sgn) * detail::unit_phase(phase);
    }
  } while (std::next_permutation(idx.begin(), idx.end()));
  static constexpr std::complex<double> ipow[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  return std::pow(2.0 * std::numbers::pi, -0.5 * n) * ipow[(n * n) % 4] * acc;
}

// Forward free transform of a finitely supported lattice function, evaluated
// pointwise and on a full grid (flat node order).
inline std::complex<double> free_transform_at(const LatticeFn& f, std::span<const double> xi) {
  std::complex<double> acc(0);
  for (const auto& [lambda, c] : f) acc += c.to_double() * std::conj(chi_kernel(lambda, xi));
  return acc;
}

inline std::vector<std::complex<double>> free_transform(const LatticeFn& f, const TorusGrid& grid) {
  std::vector<std::complex<double>> out(grid.size());
  std::vector<double> xi(grid.rank);
  for (long node = 0, sz = grid.size(); node < sz; ++node) {
    grid.node(node, xi);
    out[node] = free_transform_at(f, xi);
  }
  return out;
}

// Inverse free transform by quadrature over the open alcove: the integrand is
// not invariant, so the torus grid is restricted to nodes strictly inside the
// alcove instead of being divided by the group order.
inline std::complex<double> free_inverse(const std::vector<std::complex<double>>& fhat,
                                         const TorusGrid& grid, const Partition& lambda) {
  if (static_cast<long>(fhat.size()) != grid.size())
    throw Error("free_inverse: grid value count mismatch");
  std::complex<double> acc(0);
  std::vector<double> xi(grid.rank);
  for (long node = 0, sz = grid.size(); node < sz; ++node) {
    grid.node(node, xi);
    bool inside = xi[grid.rank - 1] > 0.0 && xi[0] < std::numbers::pi;
    for (int j = 0; j + 1 < grid.rank && inside; ++j) inside = xi[j] > xi[j + 1];
    if (!inside) continue;
    acc += fhat[node] * chi_kernel(lambda, xi);
  }
  return acc * grid.cell();
}

}  // namespace qtoda
