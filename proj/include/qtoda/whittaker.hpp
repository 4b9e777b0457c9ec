#pragma once

#include <cstring>
#include <map>
#include <utility>
#include <vector>

#include "qtoda/difference_op.hpp"
#include "qtoda/params.hpp"
#include "qtoda/partition.hpp"
#include "qtoda/qseries.hpp"
#include "qtoda/table.hpp"

namespace qtoda {

namespace dual {

// prod_r (1 - that_r z_j^eps) / ((1 - z_j^{2eps})(1 - q z_j^{2eps}))
inline void mul_aw_factor(RationalCoeff& v, const ParamSet& P, int j, int eps) {
  const int n = P.n();
  ExpVec e(n, 0), e2(n, 0);
  e[j] = eps;
  e2[j] = 2 * eps;
  for (int r = 0; r < 4; ++r) v.mul_binom_num(P.that(r), e);
  v.mul_binom_den(Rational(1), e2);
  v.mul_binom_den(P.q(), e2);
}

inline ExpVec pair_exp(int n, int j, int sj, int k, int sk) {
  ExpVec e(n, 0);
  e[j] += sj;
  e[k] += sk;
  return e;
}

// Diagonal-block coefficient: signed sum over p-subsets I of K with signs,
// each with its own attraction/repulsion factors against K \ I.
inline RationalCoeff u_block(const ParamSet& P, unsigned K, int p) {
  const int n = P.n();
  RationalCoeff acc = RationalCoeff::one(n);
  if (p == 0) return acc;
  acc.mul_scalar(Rational(0));
  std::vector<int> members;
  for (int j = 0; j < n; ++j)
    if (K & (1u << j)) members.push_back(j);
  const int m = static_cast<int>(members.size());
  if (p > m) return acc;  // empty sum
  for (unsigned pick = 0; pick < (1u << m); ++pick) {
    if (__builtin_popcount(pick) != p) continue;
    std::vector<int> I, rest;
    for (int b = 0; b < m; ++b) ((pick >> b) & 1u ? I : rest).push_back(members[b]);
    for (unsigned smask = 0; smask < (1u << p); ++smask) {
      RationalCoeff term = RationalCoeff::one(n);
      std::vector<int> sgn(p);
      for (int b = 0; b < p; ++b) sgn[b] = (smask >> b) & 1u ? -1 : 1;
      for (int b = 0; b < p; ++b) mul_aw_factor(term, P, I[b], sgn[b]);
      for (int b = 0; b < p; ++b)
        for (int k : rest) {
          term.mul_binom_den(Rational(1), pair_exp(n, I[b], sgn[b], k, 1));
          term.mul_binom_den(Rational(1), pair_exp(n, I[b], sgn[b], k, -1));
        }
      for (int b = 0; b < p; ++b)
        for (int c = b + 1; c < p; ++c) {
          term.mul_binom_den(Rational(1), pair_exp(n, I[b], sgn[b], I[c], sgn[c]));
          term.mul_binom_den(P.q().inv(), pair_exp(n, I[b], -sgn[b], I[c], -sgn[c]));
        }
      acc.add(term);
    }
  }
  if (p % 2) acc.mul_scalar(Rational(-1));
  return acc;
}

}  // namespace dual

// l-th member of the commuting family acting on symmetric Laurent polynomials
// in z = e^{i xi}: sum over shifted subsets J with sign choices, each term a
// shift-block coefficient times the diagonal block on the complement.
inline DifferenceOp dual_op(const ParamSet& P, int l) {
  const int n = P.n();
  if (l < 1 || l > n) throw Error("dual_op: order out of range");
  DifferenceOp op(n, P.q());
  std::map<std::pair<unsigned, int>, RationalCoeff> u_cache;
  for (unsigned J = 0; J < (1u << n); ++J) {
    const int jsz = __builtin_popcount(J);
    if (jsz > l) continue;
    const unsigned K = ~J & ((1u << n) - 1);
    const int p = l - jsz;
    if (p > n - jsz) continue;  // diagonal block is an empty sum
    auto uc = u_cache.find({K, p});
    if (uc == u_cache.end())
      uc = u_cache.emplace(std::pair<unsigned, int>{K, p}, dual::u_block(P, K, p)).first;
    if (uc->second.is_zero()) continue;
    std::vector<int> members;
    for (int j = 0; j < n; ++j)
      if (J & (1u << j)) members.push_back(j);
    for (unsigned smask = 0; smask < (1u << jsz); ++smask) {
      RationalCoeff v = RationalCoeff::one(n);
      std::vector<int> sgn(jsz);
      for (int b = 0; b < jsz; ++b) sgn[b] = (smask >> b) & 1u ? -1 : 1;
      for (int b = 0; b < jsz; ++b) dual::mul_aw_factor(v, P, members[b], sgn[b]);
      for (int b = 0; b < jsz; ++b)
        for (int k = 0; k < n; ++k) {
          if (J & (1u << k)) continue;
          v.mul_binom_den(Rational(1), dual::pair_exp(n, members[b], sgn[b], k, 1));
          v.mul_binom_den(Rational(1), dual::pair_exp(n, members[b], sgn[b], k, -1));
        }
      for (int b = 0; b < jsz; ++b)
        for (int c = b + 1; c < jsz; ++c) {
          v.mul_binom_den(Rational(1), dual::pair_exp(n, members[b], sgn[b], members[c], sgn[c]));
          v.mul_binom_den(P.q(), dual::pair_exp(n, members[b], sgn[b], members[c], sgn[c]));
        }
      v.mul(uc->second);
      std::vector<int> shift(n, 0);
      for (int b = 0; b < jsz; ++b) shift[members[b]] = sgn[b];
      op.add_term(std::move(v), std::move(shift));
    }
  }
  return op;
}

// Eigenvalue of the l-th member on the eigenpolynomial labelled by lambda.
inline Rational dual_eigenvalue(const ParamSet& P, const Partition& lambda, int l) {
  const int n = P.n();
  if (l < 1 || l > n) throw Error("dual_eigenvalue: order out of range");
  const Rational qi = P.q().inv();
  Rational prefix(1);
  for (int i = 0; i < l - 1; ++i) prefix *= qi.pow(lambda[i]);
  Rational acc = prefix * (qi.pow(lambda[l - 1]) - Rational(1));
  if (l == n) {
    Rational full(1);
    for (int i = 0; i < n - 1; ++i) full *= qi.pow(lambda[i]);
    acc += P.t0_sq() * full * (P.q().pow(lambda[n - 1]) - Rational(1));
  }
  return acc;
}

// Eigenpolynomial table at t = 0.  Single members of the family have
// degenerate spectra on down-sets, so the triangular solve runs on an
// integer-weighted combination; weights are redrawn deterministically until
// the combined diagonal separates.  Each member's eigen-identity is then
// verified exactly from its cached columns.
struct DualTable {
  std::vector<Partition> basis;
  std::vector<std::map<Partition, InvariantPoly>> columns;  // [l-1]: op_l on m_nu
  std::map<Partition, InvariantPoly> polys;
  std::vector<Rational> weights;
};

inline DualTable dual_table(const ParamSet& P, int max_weight) {
  static const long primes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                                31, 37, 41, 43, 47, 53, 59, 61, 67, 71};
  const int n = P.n();
  if (2 * n > static_cast<int>(sizeof(primes) / sizeof(primes[0])))
    throw Error("dual_table: rank exceeds the weight pool");
  DualTable tab;
  tab.basis = partitions_up_to_weight(n, max_weight);
  tab.columns.resize(n);
  for (int l = 1; l <= n; ++l) {
    const DifferenceOp op = dual_op(P, l);
    for (const auto& nu : tab.basis) {
      InvariantPoly col = op.apply(InvariantPoly::monomial(nu));
      if (check_column(nu, col) != dual_eigenvalue(P, nu, l))
        throw Error("dual diagonal mismatch at " + nu.to_string() + ", order " +
                    std::to_string(l));
      tab.columns[l - 1].emplace(nu, std::move(col));
    }
  }
  for (int attempt = 0;; ++attempt) {
    std::vector<Rational> w(n);
    for (int l = 0; l < n; ++l) w[l] = Rational(primes[l] + attempt * primes[l + n]);
    std::map<Partition, InvariantPoly> columns;
    std::map<Partition, Rational> diagonal;
    for (const auto& nu : tab.basis) {
      InvariantPoly c(n);
      for (int l = 0; l < n; ++l) c += tab.columns[l].at(nu) * w[l];
      diagonal.emplace(nu, c.coeff(nu));
      columns.emplace(nu, std::move(c));
    }
    try {
      tab.polys.clear();
      for (const auto& lambda : tab.basis)
        tab.polys.emplace(lambda, solve_eigenpoly(lambda, columns, diagonal));
    } catch (const Error& e) {
      if (attempt < 8 && std::strstr(e.what(), "degenerate diagonal")) continue;
      throw;
    }
    tab.weights = std::move(w);
    break;
  }
  for (const auto& [lambda, p] : tab.polys)
    for (int l = 1; l <= n; ++l) {
      InvariantPoly lhs(n);
      for (const auto& [nu, x] : p.coeffs()) lhs += tab.columns[l - 1].at(nu) * x;
      if (!(lhs == p * dual_eigenvalue(P, lambda, l)))
        throw Error("dual eigen-identity failed at " + lambda.to_string() + ", order " +
                    std::to_string(l));
    }
  return tab;
}

// Lattice norm relative to its boundary-independent constant.  The two
// denominator families tie together through complementary products of the
// deformation parameters, which keeps every factor rational and makes the
// formula specialize correctly when the 0th parameter vanishes.
inline Rational lattice_delta_ratio(const ParamSet& P, const Partition& lambda) {
  const int n = P.n();
  const Rational& q = P.q();
  const long ln = lambda[n - 1];
  Rational acc(1);
  if (n >= 2) acc /= qpoch_finite(q * P.t0_sq(), q, lambda[n - 2] + ln);
  acc *= (Rational(1) - P.t0_sq() * q.pow(2 * ln)) / (Rational(1) - P.t0_sq());
  for (int r = 0; r < 4; ++r) {
    acc *= qpoch_finite(P.t0_t(r), q, ln);
    // q t0/t_r = q for r = 0, else the complementary pair of that-parameters
    const Rational comp = r == 0 ? q : P.that(r == 1 ? 2 : 1) * P.that(r == 3 ? 2 : 3);
    acc /= qpoch_finite(comp, q, ln);
  }
  for (int j = 0; j + 1 < n; ++j) acc /= qpoch_finite(q, q, lambda[j] - lambda[j + 1]);
  return acc;
}

// Norm constant, numeric: the limit of the generic-family constant when the
// interpolation parameter vanishes.  One scale factor per variable; in one
// variable the complementary product of all four deformation parameters
// survives the limit (in the classical one-variable total mass it appears the
// same way).  It specializes to the three-parameter constant when the 0th
// deformation parameter vanishes.
inline double lattice_delta0(const ParamSet& P, double tol = 1e-17) {
  const double q = P.q().to_double();
  double acc = std::pow(qpoch_infinite({q, 0.0}, q, tol).real(), P.n());
  for (int r = 0; r < 4; ++r)
    for (int s = r + 1; s < 4; ++s)
      acc *= qpoch_infinite({P.that(r).to_double() * P.that(s).to_double(), 0.0}, q, tol).real();
  if (P.n() == 1) {
    double prod = 1;
    for (int r = 0; r < 4; ++r) prod *= P.that(r).to_double();
    acc /= qpoch_infinite({prod, 0.0}, q, tol).real();
  }
  return acc;
}

// Prefactor relating the lattice wave function on the shifted cone to the
// eigenpolynomial; identically 1 when the 0th deformation parameter vanishes.
inline Rational wave_prefactor(const ParamSet& P, const Partition& lambda) {
  const long ln = lambda[P.n() - 1];
  Rational acc = qpoch_finite(P.t0_sq(), P.q(), 2 * ln);
  for (int r = 0; r < 4; ++r) acc /= qpoch_finite(P.t0_t(r), P.q(), ln);
  return acc;
}

}  // namespace qtoda
