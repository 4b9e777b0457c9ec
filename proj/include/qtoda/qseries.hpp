#pragma once

#include <cmath>
#include <complex>

#include "qtoda/rational.hpp"

namespace qtoda {

// (x;q)_m = prod_{l=0}^{m-1} (1 - x q^l).  (x;q)_0 = 1.
inline Rational qpoch_finite(const Rational& x, const Rational& q, long m) {
  if (m < 0) throw Error("qpoch_finite: negative length");
  Rational acc(1), xq = x;
  for (long l = 0; l < m; ++l) {
    acc *= Rational(1) - xq;
    xq *= q;
  }
  return acc;
}

template <class Real>
std::complex<Real> qpoch_finite_c(std::complex<Real> x, Real q, long m) {
  if (m < 0) throw Error("qpoch_finite_c: negative length");
  std::complex<Real> acc(1);
  for (long l = 0; l < m; ++l) {
    acc *= std::complex<Real>(1) - x;
    x *= q;
  }
  return acc;
}

// (x;q)_infinity truncated at the smallest M with |x| q^M < tol.
// Dropped tail multiplies the result by 1 + O(tol/(1-q)).
template <class Real>
std::complex<Real> qpoch_infinite_t(std::complex<Real> x, Real q, Real tol) {
  if (!(q > Real(0) && q < Real(1))) throw Error("qpoch_infinite: q outside (0,1)");
  if (!(tol > Real(0))) throw Error("qpoch_infinite: tolerance must be positive");
  const Real ax = std::abs(x);
  long m = 0;
  if (ax >= tol) m = 1 + static_cast<long>(std::floor(std::log(tol / ax) / std::log(q)));
  auto r = qpoch_finite_c<Real>(x, q, m < 0 ? 0 : m);
  if (!std::isfinite(r.real()) || !std::isfinite(r.imag()))
    throw Error("qpoch_infinite: non-finite result");
  return r;
}

inline std::complex<double> qpoch_infinite(std::complex<double> x, double q,
                                           double tol = 1e-17) {
  return qpoch_infinite_t<double>(x, q, tol);
}

}  // namespace qtoda
