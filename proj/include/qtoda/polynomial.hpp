#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <span>
#include <vector>

#include "qtoda/partition.hpp"
#include "qtoda/rational.hpp"

namespace qtoda {

using ExpVec = std::vector<int>;

// Sparse Laurent polynomial in z_1..z_n with exact coefficients.
// Invariant: no zero coefficients stored; keys have length rank.
class LaurentPoly {
 public:
  explicit LaurentPoly(int rank) : rank_(rank) {
    if (rank <= 0) throw Error("LaurentPoly: rank must be positive");
  }

  int rank() const { return rank_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }
  const std::map<ExpVec, Rational>& terms() const { return terms_; }

  void add_term(const ExpVec& e, const Rational& c) {
    if (static_cast<int>(e.size()) != rank_) throw Error("LaurentPoly: exponent rank mismatch");
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  Rational coeff(const ExpVec& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  LaurentPoly& operator+=(const LaurentPoly& o) {
    check_rank(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  LaurentPoly& operator-=(const LaurentPoly& o) {
    check_rank(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }

  LaurentPoly& operator*=(const Rational& s) {
    if (s.is_zero()) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }

  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    a.check_rank(b);
    LaurentPoly r(a.rank_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        ExpVec e(a.rank_);
        for (int j = 0; j < a.rank_; ++j) e[j] = ea[j] + eb[j];
        r.add_term(e, ca * cb);
      }
    return r;
  }

  // multiply by the monomial s * z^m
  void mul_monomial(const Rational& s, const ExpVec& m) {
    if (s.is_zero()) {
      terms_.clear();
      return;
    }
    std::map<ExpVec, Rational> out;
    for (const auto& [e, c] : terms_) {
      ExpVec k(rank_);
      for (int j = 0; j < rank_; ++j) k[j] = e[j] + m[j];
      out.emplace(std::move(k), c * s);
    }
    terms_ = std::move(out);
  }

  // multiply by the binomial (1 - c z^m)
  void mul_binomial(const Rational& c, const ExpVec& m) {
    if (c.is_zero()) return;
    LaurentPoly shifted = *this;
    shifted.mul_monomial(c, m);
    *this -= shifted;
  }

  // substitute z_j -> q^{shift_j} z_j: coefficient at z^e picks up q^{<shift,e>}
  void scale_exponents(const Rational& q, const std::vector<int>& shift) {
    if (static_cast<int>(shift.size()) != rank_) throw Error("LaurentPoly: shift rank mismatch");
    for (auto it = terms_.begin(); it != terms_.end();) {
      long dot = 0;
      for (int j = 0; j < rank_; ++j) dot += static_cast<long>(shift[j]) * it->first[j];
      it->second *= q.pow(dot);
      if (it->second.is_zero())
        it = terms_.erase(it);
      else
        ++it;
    }
  }

  // exact division by (1 - c z^m); throws when the division leaves a remainder.
  // Exponents are shifted into the ordinary polynomial ring, where lex order is
  // a well-order and single-divisor reduction must consume every leading term.
  void divide_binomial_exact(const Rational& c, const ExpVec& m) {
    if (is_zero() || c.is_zero()) return;
    if (std::all_of(m.begin(), m.end(), [](int v) { return v == 0; })) {
      if (c.is_one()) throw Error("divide_binomial_exact: divisor is identically zero");
      *this *= (Rational(1) - c).inv();
      return;
    }
    ExpVec dmin(rank_), pmin(rank_);
    for (int j = 0; j < rank_; ++j) dmin[j] = std::min(0, m[j]);
    {
      bool first = true;
      for (const auto& [e, cc] : terms_) {
        for (int j = 0; j < rank_; ++j) pmin[j] = first ? e[j] : std::min(pmin[j], e[j]);
        first = false;
      }
    }
    // shifted divisor c1 z^{e1} + c0 z^{e0}, ordered so that e1 is the lex lead
    ExpVec e1(rank_), e0(rank_);
    for (int j = 0; j < rank_; ++j) {
      e1[j] = m[j] - dmin[j];
      e0[j] = -dmin[j];
    }
    Rational c1 = -c, c0(1);
    if (e1 < e0) {
      std::swap(e1, e0);
      std::swap(c1, c0);
    }
    std::map<ExpVec, Rational> work;
    for (const auto& [e, cc] : terms_) {
      ExpVec k(rank_);
      for (int j = 0; j < rank_; ++j) k[j] = e[j] - pmin[j];
      work.emplace(std::move(k), cc);
    }
    std::map<ExpVec, Rational> quot;
    while (!work.empty()) {
      auto lead = std::prev(work.end());  // lex max; strictly decreases each pass
      ExpVec qe(rank_);
      for (int j = 0; j < rank_; ++j) {
        qe[j] = lead->first[j] - e1[j];
        if (qe[j] < 0) throw Error("divide_binomial_exact: nonzero remainder");
      }
      const Rational qc = lead->second / c1;
      work.erase(lead);
      ExpVec other(rank_);
      for (int j = 0; j < rank_; ++j) other[j] = qe[j] + e0[j];
      auto [it, inserted] = work.emplace(other, -(qc * c0));
      if (!inserted) {
        it->second -= qc * c0;
        if (it->second.is_zero()) work.erase(it);
      }
      quot.emplace(std::move(qe), qc);
    }
    terms_.clear();
    for (auto& [e, cc] : quot) {
      ExpVec k(rank_);
      for (int j = 0; j < rank_; ++j) k[j] = e[j] + pmin[j] - dmin[j];
      terms_.emplace(std::move(k), std::move(cc));
    }
  }

  std::complex<double> eval(std::span<const std::complex<double>> z) const {
    if (static_cast<int>(z.size()) != rank_) throw Error("LaurentPoly: eval rank mismatch");
    std::complex<double> acc(0);
    for (const auto& [e, c] : terms_) {
      std::complex<double> t(c.to_double());
      for (int j = 0; j < rank_; ++j) t *= std::pow(z[j], e[j]);
      acc += t;
    }
    return acc;
  }

  // evaluation at z_j = e^{i xi_j}
  std::complex<double> eval_angles(std::span<const double> xi) const {
    if (static_cast<int>(xi.size()) != rank_) throw Error("LaurentPoly: eval rank mismatch");
    std::complex<double> acc(0);
    for (const auto& [e, c] : terms_) {
      double phase = 0;
      for (int j = 0; j < rank_; ++j) phase += e[j] * xi[j];
      acc += c.to_double() * std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return acc;
  }

  Rational eval_rational(std::span<const Rational> z) const {
    if (static_cast<int>(z.size()) != rank_) throw Error("LaurentPoly: eval rank mismatch");
    Rational acc(0);
    for (const auto& [e, c] : terms_) {
      Rational t = c;
      for (int j = 0; j < rank_; ++j) t *= z[j].pow(e[j]);
      acc += t;
    }
    return acc;
  }

 private:
  void check_rank(const LaurentPoly& o) const {
    if (o.rank_ != rank_) throw Error("LaurentPoly: rank mismatch");
  }
  int rank_;
  std::map<ExpVec, Rational> terms_;
};

// Hyperoctahedral-invariant polynomial in the monomial basis m_lambda
// (orbit sums without multiplicity).  Invariant: no zero coefficients stored.
class InvariantPoly {
 public:
  explicit InvariantPoly(int rank) : rank_(rank) {
    if (rank <= 0) throw Error("InvariantPoly: rank must be positive");
  }
  static InvariantPoly monomial(const Partition& lambda) {
    InvariantPoly p(lambda.rank());
    p.coeffs_.emplace(lambda, Rational(1));
    return p;
  }
  static InvariantPoly constant(int rank, const Rational& c) {
    InvariantPoly p(rank);
    p.set_coeff(Partition::zero(rank), c);
    return p;
  }

  int rank() const { return rank_; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::map<Partition, Rational>& coeffs() const { return coeffs_; }

  Rational coeff(const Partition& lambda) const {
    auto it = coeffs_.find(lambda);
    return it == coeffs_.end() ? Rational(0) : it->second;
  }
  void set_coeff(const Partition& lambda, const Rational& c) {
    if (lambda.rank() != rank_) throw Error("InvariantPoly: rank mismatch");
    if (c.is_zero())
      coeffs_.erase(lambda);
    else
      coeffs_[lambda] = c;
  }
  void add_coeff(const Partition& lambda, const Rational& c) {
    if (lambda.rank() != rank_) throw Error("InvariantPoly: rank mismatch");
    if (c.is_zero()) return;
    auto [it, inserted] = coeffs_.emplace(lambda, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) coeffs_.erase(it);
    }
  }

  InvariantPoly& operator+=(const InvariantPoly& o) {
    for (const auto& [l, c] : o.coeffs_) add_coeff(l, c);
    return *this;
  }
  InvariantPoly& operator-=(const InvariantPoly& o) {
    for (const auto& [l, c] : o.coeffs_) add_coeff(l, -c);
    return *this;
  }
  InvariantPoly& operator*=(const Rational& s) {
    if (s.is_zero()) {
      coeffs_.clear();
      return *this;
    }
    for (auto& [l, c] : coeffs_) c *= s;
    return *this;
  }
  friend InvariantPoly operator+(InvariantPoly a, const InvariantPoly& b) { return a += b; }
  friend InvariantPoly operator-(InvariantPoly a, const InvariantPoly& b) { return a -= b; }
  friend InvariantPoly operator*(InvariantPoly a, const Rational& s) { return a *= s; }
  friend bool operator==(const InvariantPoly& a, const InvariantPoly& b) {
    return a.rank_ == b.rank_ && a.coeffs_ == b.coeffs_;
  }

 private:
  int rank_;
  std::map<Partition, Rational> coeffs_;
};

inline LaurentPoly expand(const InvariantPoly& p) {
  LaurentPoly out(p.rank());
  for (const auto& [lambda, c] : p.coeffs())
    for (const auto& e : orbit(lambda)) out.add_term(e, c);
  return out;
}

// Inverse of expand.  Checks full invariance: every orbit member must carry the
// coefficient of its dominant representative.
inline InvariantPoly symmetrize(const LaurentPoly& f) {
  InvariantPoly out(f.rank());
  for (const auto& [e, c] : f.terms()) {
    std::vector<int> rep(e.size());
    for (std::size_t j = 0; j < e.size(); ++j) rep[j] = std::abs(e[j]);
    std::sort(rep.begin(), rep.end(), std::greater<int>());
    if (rep == e) out.set_coeff(Partition(rep), c);
  }
  // completeness + consistency over each orbit
  std::size_t expected = 0;
  for (const auto& [lambda, c] : out.coeffs()) {
    for (const auto& e : orbit(lambda)) {
      if (f.coeff(e) != c)
        throw Error("symmetrize: input not invariant near orbit of " + lambda.to_string());
      ++expected;
    }
  }
  if (expected != f.term_count())
    throw Error("symmetrize: input not invariant (orbit without dominant term)");
  return out;
}

inline InvariantPoly invariant_mul(const InvariantPoly& a, const InvariantPoly& b) {
  return symmetrize(expand(a) * expand(b));
}

inline std::complex<double> eval(const InvariantPoly& p, std::span<const double> xi) {
  return expand(p).eval_angles(xi);
}

}  // namespace qtoda
