#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "qtoda/params.hpp"
#include "qtoda/partition.hpp"
#include "qtoda/polynomial.hpp"
#include "qtoda/whittaker.hpp"

namespace qtoda {

// Lattice difference Toda chain with Askey-Wilson boundary interactions.
// Hopping coefficients live on the cone of partitions; the boundary weight
// functions are evaluated at q^x = t0 q^m.  All values are exact rationals
// (requires rational sqrt(q) and t0, which the presets provide).  Where the
// literal quotient degenerates at a lattice point, the value used is the
// continuous extension in the parameters: identical numerator/denominator
// factor pairs are removed before evaluating, never after dividing by zero.

// w_+ at q^x = t0 q^m.  At m = 0 the r = 0 numerator factor (1 - t0^2) is the
// first denominator factor; the pair cancels identically in the parameters.
inline Rational toda_wplus(const ParamSet& P, long m) {
  const Rational& q = P.q();
  if (m == 0) {
    Rational num(1);
    for (int r = 1; r < 4; ++r) num *= Rational(1) - P.that(0) * P.that(r);
    const Rational den = Rational(1) - P.t0_sq() * q;
    if (den.is_zero()) throw Error("toda_wplus: pole at this parameter point");
    return num / den;
  }
  Rational num(1);
  for (int r = 0; r < 4; ++r) num *= Rational(1) - P.t0_t(r) * q.pow(m);
  // t0^2 q^{2m} <= q^{2m-1} < 1 on the closed parameter domain: no pole.
  return num / ((Rational(1) - P.t0_sq() * q.pow(2 * m)) *
                (Rational(1) - P.t0_sq() * q.pow(2 * m + 1)));
}

// w_- at q^x = t0 q^m.  The r = 0 numerator factor is (1 - q^m): the literal
// product is computed and its vanishing at m = 0 is asserted, not hard-coded.
inline Rational toda_wminus(const ParamSet& P, long m) {
  const Rational& q = P.q();
  Rational num(1);
  for (int r = 0; r < 4; ++r) {
    const Rational c = r == 0 ? Rational(1) : P.t0_sq() / (P.that(r) * P.that(0));
    num *= Rational(1) - c * q.pow(m);
  }
  if (m == 0) {
    if (!num.is_zero()) throw Error("toda_wminus: expected identical vanishing at m = 0");
    return Rational(0);
  }
  if (num.is_zero()) return Rational(0);
  const Rational den = (Rational(1) - P.t0_sq() * q.pow(2 * m)) *
                       (Rational(1) - P.t0_sq() * q.pow(2 * m - 1));
  if (den.is_zero()) throw Error("toda_wminus: pole at this parameter point");
  return num / den;
}

// Diagonal boundary potential: sum over eps = +-1 of
//   c_eps (1 - eps t0 q^{lambda_{n-1}+1/2})
//   / ((1 - eps t0 q^{lambda_n-1/2})(1 - eps t0^{-1} q^{-lambda_n-1/2})),
// c_eps = (2 that_0)^{-1} prod_r (1 - eps q^{-1/2} t_r).  At lambda_n = 0 the
// first denominator factor is exactly the r = 0 factor of c_eps; the pair is
// removed.  At n = 1 the lambda_0 = +infinity convention kills the numerator's
// q-power.
inline Rational toda_u(const ParamSet& P, const Partition& lambda) {
  const int n = P.n();
  const Rational sq = P.sqrt_q();
  const Rational t0 = P.t0();
  const long ln = lambda[n - 1];
  Rational total(0);
  for (int e : {1, -1}) {
    const Rational eps(e);
    Rational c_rest = Rational(1) / (Rational(2) * P.that(0));
    for (int r = 1; r < 4; ++r) c_rest *= Rational(1) - eps * P.t_unhat(r) * sq.inv();
    const Rational num =
        n >= 2 ? Rational(1) - eps * t0 * sq.pow(2 * lambda[n - 2] + 1) : Rational(1);
    const Rational d2 = Rational(1) - eps * t0.inv() * sq.pow(-(2 * ln + 1));
    if (ln == 0) {
      const Rational top = c_rest * num;
      if (top.is_zero()) continue;
      if (d2.is_zero()) throw Error("toda_u: pole at this parameter point");
      total += top / d2;
    } else {
      const Rational top = c_rest * (Rational(1) - eps * t0 * sq.inv()) * num;
      if (top.is_zero()) continue;
      const Rational d1 = Rational(1) - eps * t0 * sq.pow(2 * ln - 1);
      if (d1.is_zero() || d2.is_zero()) throw Error("toda_u: pole at this parameter point");
      total += top / (d1 * d2);
    }
  }
  return total;
}

// One-step stencil of the Hamiltonian at lambda: up[j-1] multiplies
// f(lambda+e_j), down[j-1] multiplies f(lambda-e_j), diag multiplies f(lambda).
// Entries on moves leaving the cone vanish through their own factors; this is
// verified, not imposed.
struct TodaStencil {
  std::vector<Rational> up, down;
  Rational diag;
};

inline TodaStencil toda_stencil(const ParamSet& P, const Partition& lambda) {
  const int n = P.n();
  if (lambda.rank() != n) throw Error("toda_stencil: rank mismatch");
  const Rational& q = P.q();
  const long ln = lambda[n - 1];
  TodaStencil s;
  s.up.assign(n, Rational(1));
  s.down.assign(n, Rational(1));
  if (P.mode() == Mode::generic_t) throw Error("toda_stencil: defined at t = 0 only");
  if (P.mode() == Mode::that0_zero) {
    for (int j = 2; j <= n; ++j)
      s.up[j - 1] = Rational(1) - q.pow(lambda[j - 2] - lambda[j - 1]);
    for (int j = 1; j < n; ++j)
      s.down[j - 1] = Rational(1) - q.pow(lambda[j - 1] - lambda[j]);
    Rational boundary = Rational(1) - q.pow(ln);
    for (int r = 1; r < 4; ++r)
      for (int ss = r + 1; ss < 4; ++ss)
        boundary *= Rational(1) - P.that(r) * P.that(ss) * q.pow(ln - 1);
    s.down[n - 1] *= boundary;
    const Rational sum3 = P.that(1) + P.that(2) + P.that(3);
    const Rational prod3 = P.that(1) * P.that(2) * P.that(3);
    // q^{lambda_{n-1} - lambda_n} is 0 at n = 1 (lambda_0 = +infinity).
    const Rational hop = n >= 2 ? q.pow(lambda[n - 2] - ln) : Rational(0);
    s.diag = sum3 * q.pow(ln) +
             prod3 * q.pow(2 * ln) * (hop + q.pow(-ln - 1) - Rational(1) - q.inv());
  } else {
    for (int j = 2; j <= n; ++j)
      s.up[j - 1] = Rational(1) - q.pow(lambda[j - 2] - lambda[j - 1]);
    s.up[n - 1] *= toda_wplus(P, ln);
    for (int j = 1; j < n; ++j)
      s.down[j - 1] = Rational(1) - q.pow(lambda[j - 1] - lambda[j]);
    if (n >= 2) {
      const Rational pair = Rational(1) - P.t0_sq() * q.pow(lambda[n - 2] + ln);
      s.down[n - 2] *= pair;
      s.down[n - 1] *= pair;
    }
    s.down[n - 1] *= toda_wminus(P, ln);
    s.diag = toda_u(P, lambda);
  }
  for (int j = 1; j <= n; ++j) {
    if (!shift_part(lambda, j - 1, +1) && !s.up[j - 1].is_zero())
      throw Error("toda_stencil: nonzero coefficient on a move leaving the cone");
    if (!shift_part(lambda, j - 1, -1) && !s.down[j - 1].is_zero())
      throw Error("toda_stencil: nonzero coefficient on a move leaving the cone");
  }
  return s;
}

// Multi-hop stencil of the commuting quantum integral whose symbol is
// prod_j (2 cos xi_j - that_0 - that_0^{-1}): sum over assignments of each site
// to one of four blocks (up-hop, down-hop, diagonal-up, diagonal-down).
// Coefficients are accumulated on raw integer targets; a nonzero total on a
// vector outside the cone is an error.
inline std::map<Partition, Rational> integral_stencil(const ParamSet& P,
                                                      const Partition& lambda) {
  const int n = P.n();
  if (lambda.rank() != n) throw Error("integral_stencil: rank mismatch");
  if (P.mode() != Mode::t_zero && P.mode() != Mode::extended_boundary)
    throw Error("integral_stencil: requires nonzero boundary parameter that_0");
  const Rational& q = P.q();
  const long ln = lambda[n - 1];
  // Block codes per site: 0 = up-hop, 1 = down-hop, 2 = diagonal-up, 3 = diagonal-down.
  std::vector<int> blk(n, 0);
  std::map<std::vector<int>, Rational> raw;
  unsigned long total = 1;
  for (int j = 0; j < n; ++j) total *= 4;
  for (unsigned long code = 0; code < total; ++code) {
    unsigned long c = code;
    for (int j = 0; j < n; ++j, c /= 4) blk[j] = static_cast<int>(c % 4);
    Rational coeff(1);
    int kp = 0, km = 0;
    for (int j = 1; j <= n; ++j) {
      if (blk[j - 1] == 2) ++kp;
      if (blk[j - 1] == 3) ++km;
      if (blk[j - 1] == 0 && j >= 2 && blk[j - 2] != 0)
        coeff *= Rational(1) - q.pow(lambda[j - 2] - lambda[j - 1]);
      if (blk[j - 1] == 1 && j < n && blk[j] != 1)
        coeff *= Rational(1) - q.pow(lambda[j - 1] - lambda[j] - (blk[j] == 0 ? 1 : 0));
      if (blk[j - 1] == 2 && j >= 2 && blk[j - 2] == 3)
        coeff *= Rational(1) - q.pow(lambda[j - 2] - lambda[j - 1]);
      if (blk[j - 1] == 2 && j < n && blk[j] == 3)
        coeff *= Rational(1) - q.pow(lambda[j - 1] - lambda[j] + 1);
    }
    if (coeff.is_zero()) continue;
    if (n >= 2) {
      const int a = blk[n - 2], b = blk[n - 1];
      const bool no_up = a != 0 && b != 0;
      const bool all_diag = no_up && a != 1 && b != 1;
      if (no_up && !all_diag) coeff *= Rational(1) - P.t0_sq() * q.pow(lambda[n - 2] + ln);
      if (a == 1 && b == 1) coeff *= Rational(1) - P.t0_sq() * q.pow(lambda[n - 2] + ln - 1);
      if (a == 2 && b == 2) coeff *= Rational(1) - P.t0_sq() * q.pow(lambda[n - 2] + ln + 1);
      if (a == 3 && b == 3) coeff *= Rational(1) - P.t0_sq() * q.pow(lambda[n - 2] + ln);
    }
    if (blk[n - 1] == 0 || blk[n - 1] == 2) coeff *= toda_wplus(P, ln);
    if (blk[n - 1] == 1 || blk[n - 1] == 3) coeff *= toda_wminus(P, ln);
    if (coeff.is_zero()) continue;
    coeff *= (-P.that(0)).pow(km - kp);
    std::vector<int> target(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j)
      target[j] = static_cast<int>(lambda[j]) + (blk[j] == 0 ? 1 : 0) - (blk[j] == 1 ? 1 : 0);
    raw[target] += coeff;
  }
  std::map<Partition, Rational> out;
  for (const auto& [vec, c] : raw) {
    if (c.is_zero()) continue;
    bool valid = vec.back() >= 0;
    for (size_t j = 0; j + 1 < vec.size(); ++j)
      if (vec[j] < vec[j + 1]) valid = false;
    if (!valid) throw Error("integral_stencil: nonzero coefficient on a move leaving the cone");
    out.emplace(Partition(vec), c);
  }
  return out;
}

// Symbols of the two operators as invariant polynomials in e^{i xi}.
inline InvariantPoly hop_symbol(int rank) {
  std::vector<int> e(static_cast<size_t>(rank), 0);
  e[0] = 1;
  return InvariantPoly::monomial(Partition(e));
}

inline InvariantPoly integral_symbol(const ParamSet& P) {
  const int n = P.n();
  if (P.that(0).is_zero()) throw Error("integral_symbol: requires nonzero that_0");
  const Rational diag = -P.that(0) - P.that(0).inv();
  LaurentPoly prod(n);
  prod.add_term(ExpVec(static_cast<size_t>(n), 0), Rational(1));
  for (int j = 0; j < n; ++j) {
    LaurentPoly f(n);
    ExpVec up(static_cast<size_t>(n), 0), dn(static_cast<size_t>(n), 0);
    up[j] = 1;
    dn[j] = -1;
    f.add_term(up, Rational(1));
    f.add_term(dn, Rational(1));
    f.add_term(ExpVec(static_cast<size_t>(n), 0), diag);
    prod = prod * f;
  }
  return symmetrize(prod);
}

// Lattice functions of finite support and exact stencil application.  The
// result is evaluated at every cone point whose stencil can read the support.
using LatticeFn = std::map<Partition, Rational>;

namespace detail {
inline Rational fn_at(const LatticeFn& f, const Partition& p) {
  const auto it = f.find(p);
  return it == f.end() ? Rational(0) : it->second;
}
inline int max_weight(const LatticeFn& f) {
  int w = 0;
  for (const auto& [p, c] : f) w = std::max<int>(w, p.weight());
  return w;
}
}  // namespace detail

inline LatticeFn apply_toda(const ParamSet& P, const LatticeFn& f) {
  LatticeFn g;
  if (f.empty()) return g;
  for (const auto& mu : partitions_up_to_weight(P.n(), detail::max_weight(f) + 1)) {
    const TodaStencil s = toda_stencil(P, mu);
    Rational acc = s.diag * detail::fn_at(f, mu);
    for (int j = 1; j <= P.n(); ++j) {
      if (const auto up = shift_part(mu, j - 1, +1)) acc += s.up[j - 1] * detail::fn_at(f, *up);
      if (const auto dn = shift_part(mu, j - 1, -1)) acc += s.down[j - 1] * detail::fn_at(f, *dn);
    }
    if (!acc.is_zero()) g.emplace(mu, acc);
  }
  return g;
}

inline LatticeFn apply_integral(const ParamSet& P, const LatticeFn& f) {
  LatticeFn g;
  if (f.empty()) return g;
  for (const auto& mu : partitions_up_to_weight(P.n(), detail::max_weight(f) + P.n())) {
    Rational acc(0);
    for (const auto& [target, c] : integral_stencil(P, mu)) acc += c * detail::fn_at(f, target);
    if (!acc.is_zero()) g.emplace(mu, acc);
  }
  return g;
}

// Residual of the eigenvalue identity at lambda, as an exact polynomial
// identity in xi: the stencil applied to the wave functions minus the symbol
// times the wave function.  The table must extend one shell past lambda for
// the Hamiltonian and n shells for the integral.
inline InvariantPoly wave_fn(const ParamSet& P, const DualTable& tab, const Partition& lambda) {
  return tab.polys.at(lambda) * wave_prefactor(P, lambda);
}

inline InvariantPoly toda_eigen_residual(const ParamSet& P, const DualTable& tab,
                                         const Partition& lambda) {
  const TodaStencil s = toda_stencil(P, lambda);
  InvariantPoly res = wave_fn(P, tab, lambda) * s.diag;
  for (int j = 1; j <= P.n(); ++j) {
    if (const auto up = shift_part(lambda, j - 1, +1)) res += wave_fn(P, tab, *up) * s.up[j - 1];
    if (const auto dn = shift_part(lambda, j - 1, -1)) res += wave_fn(P, tab, *dn) * s.down[j - 1];
  }
  res -= invariant_mul(hop_symbol(P.n()), wave_fn(P, tab, lambda));
  return res;
}

inline InvariantPoly integral_eigen_residual(const ParamSet& P, const DualTable& tab,
                                             const Partition& lambda) {
  InvariantPoly res(P.n());
  for (const auto& [target, c] : integral_stencil(P, lambda)) res += wave_fn(P, tab, target) * c;
  res -= invariant_mul(integral_symbol(P), wave_fn(P, tab, lambda));
  return res;
}

// Detailed balance: Delta_lambda v_j^+(lambda) = Delta_{lambda+e_j} v_j^-(lambda+e_j),
// expressed through the rational norm ratio Delta_lambda / Delta_0.  Returns the
// exact difference (zero when the move leaves the cone: both sides vanish).
inline Rational balance_residual(const ParamSet& P, const Partition& lambda, int j) {
  const auto target = shift_part(lambda, j - 1, +1);
  if (!target) return Rational(0);
  return lattice_delta_ratio(P, lambda) * toda_stencil(P, lambda).up[j - 1] -
         lattice_delta_ratio(P, *target) * toda_stencil(P, *target).down[j - 1];
}

// Same symmetry for every move of the integral's stencil.
inline std::map<Partition, Rational> integral_balance_residuals(const ParamSet& P,
                                                                const Partition& lambda) {
  std::map<Partition, Rational> out;
  const Rational dl = lattice_delta_ratio(P, lambda);
  for (const auto& [mu, c] : integral_stencil(P, lambda)) {
    if (mu == lambda) continue;
    const auto back = integral_stencil(P, mu);
    const auto it = back.find(lambda);
    const Rational rev = it == back.end() ? Rational(0) : it->second;
    out.emplace(mu, dl * c - lattice_delta_ratio(P, mu) * rev);
  }
  return out;
}

// Column of the commutator of the Hamiltonian and the integral on the
// indicator of nu.  Commutativity makes this vanish identically; no
// truncation is involved since both compositions have finite support.
inline LatticeFn commutator_column(const ParamSet& P, const Partition& nu) {
  LatticeFn e;
  e.emplace(nu, Rational(1));
  LatticeFn a = apply_toda(P, apply_integral(P, e));
  const LatticeFn b = apply_integral(P, apply_toda(P, e));
  for (const auto& [p, c] : b) {
    const auto it = a.find(p);
    if (it == a.end())
      a.emplace(p, -c);
    else if ((it->second -= c).is_zero())
      a.erase(it);
  }
  return a;
}

// Continuous boundary weight functions at a free rational point X = q^x.
// Numerator and denominator are products of linear factors (1 - c X); a
// numerator coefficient equal to a denominator coefficient makes the two
// factors identical in X, and the pair is removed, which realizes the
// continuous extension through their common zero.
namespace detail {
inline Rational linear_quotient(std::vector<Rational> num, std::vector<Rational> den,
                                const Rational& X) {
  for (auto it = den.begin(); it != den.end();) {
    bool cancelled = false;
    for (auto jt = num.begin(); jt != num.end(); ++jt)
      if (*jt == *it) {
        num.erase(jt);
        it = den.erase(it);
        cancelled = true;
        break;
      }
    if (!cancelled) ++it;
  }
  Rational acc(1);
  for (const auto& c : num) acc *= Rational(1) - c * X;
  for (const auto& c : den) {
    const Rational d = Rational(1) - c * X;
    if (d.is_zero()) throw Error("continuous boundary weight: pole at the evaluation point");
    acc /= d;
  }
  return acc;
}
}  // namespace detail

inline Rational cont_wplus(const ParamSet& P, const Rational& X) {
  const Rational sq = P.sqrt_q();
  std::vector<Rational> num = {P.t0(), P.t_unhat(1), P.t_unhat(2), P.t_unhat(3)};
  std::vector<Rational> den = {Rational(1), Rational(-1), sq, -sq};
  return detail::linear_quotient(std::move(num), std::move(den), X);
}

inline Rational cont_wminus(const ParamSet& P, const Rational& X) {
  const Rational sqi = P.sqrt_q().inv();
  std::vector<Rational> num = {P.t0().inv(), P.t_unhat(1).inv(), P.t_unhat(2).inv(),
                               P.t_unhat(3).inv()};
  std::vector<Rational> den = {Rational(1), Rational(-1), sqi, -sqi};
  return detail::linear_quotient(std::move(num), std::move(den), X);
}

// The two sides of the boundary rational identity behind self-adjointness of
// the chain, evaluated at free rational points X_j = q^{x_j} at generic t.
// Left side: hyperoctahedral one-row Pieri sums with the boundary weights;
// right side: the two-term eps-sum with prefactor
// -t / (2 that_0 (1-t)(1-q^{-1}t)).
inline Rational boundary_identity_lhs(const ParamSet& P, const std::vector<Rational>& X) {
  const int n = P.n();
  if (static_cast<int>(X.size()) != n) throw Error("boundary_identity_lhs: rank mismatch");
  if (P.t().is_zero()) throw Error("boundary_identity_lhs: defined at generic t only");
  const Rational& t = P.t();
  Rational acc(0);
  for (int j = 0; j < n; ++j) {
    Rational plus = cont_wplus(P, X[j]);
    Rational minus = cont_wminus(P, X[j]);
    for (int k = 0; k < n; ++k) {
      if (k == j) continue;
      const Rational pair = X[j] * X[k];
      const Rational ratio = X[j] / X[k];
      for (const Rational& y : {pair, ratio}) {
        const Rational d = Rational(1) - y;
        if (d.is_zero()) throw Error("boundary_identity_lhs: pole at the evaluation point");
        plus *= (Rational(1) - t * y) / d;
        minus *= (Rational(1) - t.inv() * y) / d;
      }
    }
    acc += P.tau_hat(j + 1).inv() - P.tau_hat(1).inv() * plus;
    acc += P.tau_hat(j + 1) - P.tau_hat(1) * minus;
  }
  return acc;
}

inline Rational boundary_identity_rhs(const ParamSet& P, const std::vector<Rational>& X) {
  const int n = P.n();
  if (static_cast<int>(X.size()) != n) throw Error("boundary_identity_rhs: rank mismatch");
  if (P.t().is_zero()) throw Error("boundary_identity_rhs: defined at generic t only");
  const Rational& t = P.t();
  const Rational sq = P.sqrt_q();
  const Rational pref = -t / (Rational(2) * P.that(0) * (Rational(1) - t) *
                              (Rational(1) - t / P.q()));
  Rational acc(0);
  for (int e : {1, -1}) {
    const Rational eps(e);
    Rational term(1);
    term *= Rational(1) - eps * P.t0() * sq.inv();
    for (int r = 1; r < 4; ++r) term *= Rational(1) - eps * P.t_unhat(r) * sq.inv();
    Rational prod(1);
    for (int j = 0; j < n; ++j) {
      const Rational lo = eps * X[j] * sq.inv();
      const Rational hi = eps * X[j] * sq;
      const Rational d1 = Rational(1) - lo;
      const Rational d2 = Rational(1) - hi;
      if (d1.is_zero() || d2.is_zero())
        throw Error("boundary_identity_rhs: pole at the evaluation point");
      prod *= (Rational(1) - t * lo) / d1;
      prod *= (Rational(1) - t.inv() * hi) / d2;
    }
    acc += term * (Rational(1) - prod);
  }
  return pref * acc;
}

// Left side of the identity at the lattice spectral point X_j = tau_j q^{lambda_j};
// its t -> 0 limit is the diagonal potential of the t = 0 chain.
inline Rational pieri_deficit(const ParamSet& P, const Partition& lambda) {
  std::vector<Rational> X;
  X.reserve(static_cast<size_t>(P.n()));
  for (int j = 1; j <= P.n(); ++j) X.push_back(P.tau(j) * P.q().pow(lambda[j - 1]));
  return boundary_identity_lhs(P, X);
}

}  // namespace qtoda
