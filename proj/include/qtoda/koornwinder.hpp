#pragma once

#include <optional>

#include "qtoda/difference_op.hpp"
#include "qtoda/params.hpp"
#include "qtoda/partition.hpp"
#include "qtoda/qseries.hpp"
#include "qtoda/table.hpp"

namespace qtoda {

// Rational building blocks: tau_j = t^{n-j} t0 only ever enters through even or
// t0 t_r-type combinations, so no square roots appear anywhere in this layer.
namespace mk {

inline Rational tau_sq(const ParamSet& P, int j) {
  return P.t().pow(2L * (P.n() - j)) * P.t0_sq();
}
// t_r tau_j  (r = 0..3)
inline Rational t_r_tau(const ParamSet& P, int r, int j) {
  return P.t0_t(r) * P.t().pow(P.n() - j);
}
// t_r^{-1} tau_j
inline Rational t_r_inv_tau(const ParamSet& P, int r, int j) {
  if (r == 0) return P.t().pow(P.n() - j);
  return P.t().pow(P.n() - j) * P.t0_sq() / P.t0_t(r);
}
// tau_j tau_k
inline Rational tau_pair(const ParamSet& P, int j, int k) {
  return P.t().pow(2L * P.n() - j - k) * P.t0_sq();
}
// tau_j / tau_k
inline Rational tau_ratio(const ParamSet& P, int j, int k) {
  return P.t().pow(static_cast<long>(k) - j);
}

}  // namespace mk

// Eigenvalue of the q-difference operator on the eigenpolynomial of lambda.
inline Rational mk_eigenvalue(const ParamSet& P, const Partition& lambda) {
  Rational acc(0);
  const Rational qi = P.q().inv();
  for (int j = 1; j <= P.n(); ++j) {
    acc += P.t0_sq() * P.t().pow(2L * P.n() - 1 - j) * (P.q().pow(lambda[j - 1]) - Rational(1));
    acc += P.t().pow(j - 1) * (qi.pow(lambda[j - 1]) - Rational(1));
  }
  return acc;
}

// The second-order q-difference operator: sum over j and both shift directions
// of the coefficient V-hat_j(+-xi) times (shift - identity).  At t = 0 this is
// the first member of the dual commuting family.
inline DifferenceOp mk_operator(const ParamSet& P) {
  const int n = P.n();
  DifferenceOp op(n, P.q());
  for (int j = 0; j < n; ++j)
    for (int sigma : {1, -1}) {
      RationalCoeff v = RationalCoeff::one(n);
      ExpVec ej(n, 0);
      ej[j] = sigma;
      ExpVec e2j(n, 0);
      e2j[j] = 2 * sigma;
      for (int r = 0; r < 4; ++r) v.mul_binom_num(P.that(r), ej);
      v.mul_binom_den(Rational(1), e2j);
      v.mul_binom_den(P.q(), e2j);
      for (int k = 0; k < n; ++k) {
        if (k == j) continue;
        for (int dir : {1, -1}) {
          ExpVec cross(n, 0);
          cross[j] = sigma;
          cross[k] = dir;
          if (!P.t().is_zero()) v.mul_binom_num(P.t(), cross);
          v.mul_binom_den(Rational(1), cross);
        }
      }
      std::vector<int> shift(n, 0);
      shift[j] = sigma;
      RationalCoeff diag = v;
      diag.mul_scalar(Rational(-1));
      op.add_term(std::move(v), std::move(shift));
      op.add_term(std::move(diag), std::vector<int>(n, 0));
    }
  return op;
}

inline OperatorTable mk_table(const ParamSet& P, int max_weight) {
  const DifferenceOp op = mk_operator(P);
  return build_table(
      P.n(), max_weight, [&](const InvariantPoly& p) { return op.apply(p); },
      [&](const Partition& nu) { return mk_eigenvalue(P, nu); });
}

// Normalization constant turning the monic eigenpolynomial into the form
// entering the Pieri recurrence.
inline Rational mk_c_lambda(const ParamSet& P, const Partition& lambda) {
  const Rational& q = P.q();
  Rational acc(1);
  for (int j = 1; j <= P.n(); ++j) {
    acc *= qpoch_finite(mk::tau_sq(P, j), q, 2L * lambda[j - 1]);
    for (int r = 0; r < 4; ++r)
      acc /= qpoch_finite(mk::t_r_tau(P, r, j), q, lambda[j - 1]);
  }
  for (int j = 1; j <= P.n(); ++j)
    for (int k = j + 1; k <= P.n(); ++k) {
      const long wsum = lambda[j - 1] + lambda[k - 1], wdif = lambda[j - 1] - lambda[k - 1];
      acc *= qpoch_finite(mk::tau_pair(P, j, k), q, wsum) /
             qpoch_finite(P.t() * mk::tau_pair(P, j, k), q, wsum);
      acc *= qpoch_finite(mk::tau_ratio(P, j, k), q, wdif) /
             qpoch_finite(P.t() * mk::tau_ratio(P, j, k), q, wdif);
    }
  return acc;
}

// Norm ratio for the normalized eigenpolynomials (the overall infinite-product
// constant is split off and only ever evaluated numerically).
inline Rational mk_delta_ratio(const ParamSet& P, const Partition& lambda) {
  if (P.t().is_zero()) throw Error("mk_delta_ratio: defined at generic t only");
  const Rational& q = P.q();
  Rational acc(1);
  for (int j = 1; j <= P.n(); ++j) {
    const long lj = lambda[j - 1];
    acc *= (Rational(1) - mk::tau_sq(P, j) * q.pow(2 * lj)) / (Rational(1) - mk::tau_sq(P, j));
    for (int r = 0; r < 4; ++r)
      acc *= qpoch_finite(mk::t_r_tau(P, r, j), q, lj) /
             qpoch_finite(q * mk::t_r_inv_tau(P, r, j), q, lj);
  }
  for (int j = 1; j <= P.n(); ++j)
    for (int k = j + 1; k <= P.n(); ++k) {
      const long wsum = lambda[j - 1] + lambda[k - 1], wdif = lambda[j - 1] - lambda[k - 1];
      const Rational pair = mk::tau_pair(P, j, k), ratio = mk::tau_ratio(P, j, k);
      acc *= (Rational(1) - pair * q.pow(wsum)) / (Rational(1) - pair);
      acc *= qpoch_finite(P.t() * pair, q, wsum) / qpoch_finite(q * pair / P.t(), q, wsum);
      acc *= (Rational(1) - ratio * q.pow(wdif)) / (Rational(1) - ratio);
      acc *= qpoch_finite(P.t() * ratio, q, wdif) / qpoch_finite(q * ratio / P.t(), q, wdif);
    }
  return acc;
}

// Overall norm constant, numeric.
inline double mk_delta0(const ParamSet& P, double tol = 1e-17) {
  const double q = P.q().to_double(), t = P.t().to_double();
  double acc = 1;
  auto ip = [&](double x) { return qpoch_infinite({x, 0.0}, q, tol).real(); };
  double prod_that = 1;
  for (int r = 0; r < 4; ++r) prod_that *= P.that(r).to_double();
  for (int j = 1; j <= P.n(); ++j) {
    double num = ip(q) * ip(std::pow(t, j));
    for (int r = 0; r < 4; ++r)
      for (int s = r + 1; s < 4; ++s)
        num *= ip(P.that(r).to_double() * P.that(s).to_double() * std::pow(t, P.n() - j));
    acc *= num / (ip(t) * ip(prod_that * std::pow(t, 2 * P.n() - j - 1)));
  }
  return acc;
}

// Pieri one-step coefficients (direction +1 raises part j, -1 lowers it).
// At a wall the coefficient carries a factor that is identically (1 - 1) = 0,
// so it is returned before any parameter-specific denominator can vanish.
inline Rational pieri_V(const ParamSet& P, const Partition& lambda, int j, int dir) {
  if (P.t().is_zero()) throw Error("pieri_V: defined at generic t only");
  const Rational& q = P.q();
  const int n = P.n();
  const long lj = lambda[j - 1];
  if (dir > 0 && j > 1 && lambda[j - 2] == lj) return Rational(0);
  if (dir < 0 && j < n && lambda[j] == lj) return Rational(0);
  if (dir < 0 && j == n && lj == 0) return Rational(0);
  Rational acc = dir > 0 ? P.tau_hat(1).inv() : P.tau_hat(1);
  for (int r = 0; r < 4; ++r) {
    const Rational base = dir > 0 ? mk::t_r_tau(P, r, j) : mk::t_r_inv_tau(P, r, j);
    acc *= Rational(1) - base * q.pow(lj);
  }
  acc /= Rational(1) - mk::tau_sq(P, j) * q.pow(2 * lj);
  acc /= Rational(1) - mk::tau_sq(P, j) * q.pow(2 * lj + dir);
  const Rational tfac = dir > 0 ? P.t() : P.t().inv();
  for (int k = 1; k <= n; ++k) {
    if (k == j) continue;
    const long lk = lambda[k - 1];
    const Rational pair = mk::tau_pair(P, j, k) * q.pow(lj + lk);
    const Rational ratio = mk::tau_ratio(P, j, k) * q.pow(lj - lk);
    acc *= (Rational(1) - tfac * pair) / (Rational(1) - pair);
    acc *= (Rational(1) - tfac * ratio) / (Rational(1) - ratio);
  }
  return acc;
}

// Residual of the Pieri recurrence for the normalized eigenpolynomials; zero
// when the recurrence holds.  Requires the table to extend one step above
// lambda in weight.
inline InvariantPoly pieri_residual(const ParamSet& P, const OperatorTable& tab,
                                    const Partition& lambda) {
  const int n = P.n();
  auto normalized = [&](const Partition& mu) {
    InvariantPoly p = tab.polys.at(mu);
    p *= mk_c_lambda(P, mu);
    return p;
  };
  const InvariantPoly Pl = normalized(lambda);
  // multiplier: m_{(1,0,...)} minus the sum of tau-hat_j + tau-hat_j^{-1}
  std::vector<int> e1(n, 0);
  e1[0] = 1;
  InvariantPoly mult = InvariantPoly::monomial(Partition(e1));
  Rational shift_sum(0);
  for (int j = 1; j <= n; ++j) shift_sum += P.tau_hat(j) + P.tau_hat(j).inv();
  mult.add_coeff(Partition::zero(n), -shift_sum);
  InvariantPoly residual = invariant_mul(Pl, mult);
  for (int j = 1; j <= n; ++j)
    for (int dir : {1, -1}) {
      const Rational V = pieri_V(P, lambda, j, dir);
      const auto target = shift_part(lambda, j - 1, dir);
      if (!target) {
        if (!V.is_zero())
          throw Error("Pieri coefficient fails to vanish outside the cone at " +
                      lambda.to_string());
        continue;
      }
      const Rational th = dir > 0 ? P.tau_hat(j) : P.tau_hat(j).inv();
      InvariantPoly step = normalized(*target);
      step *= th;
      step -= Pl;
      step *= V;
      residual -= step;
    }
  return residual;
}

}  // namespace qtoda
