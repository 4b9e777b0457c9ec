#pragma once

#include <map>
#include <vector>

#include "qtoda/polynomial.hpp"

namespace qtoda {

// Binomial (1 - coeff z^exp) used as a denominator factor.  Canonical: exp is
// nonzero with positive first nonzero component, coeff nonzero, so equal
// factors always collide as map keys.
struct BinomFactor {
  ExpVec exp;
  Rational coeff;
  friend bool operator<(const BinomFactor& a, const BinomFactor& b) {
    if (a.exp != b.exp) return a.exp < b.exp;
    return a.coeff < b.coeff;
  }
  friend bool operator==(const BinomFactor& a, const BinomFactor& b) {
    return a.exp == b.exp && a.coeff == b.coeff;
  }
};

// Rational function kept as numerator polynomial over a multiset of binomial
// denominator factors.  Addition goes through the factored common denominator;
// the quotient only materializes in finalize(), where exactness is asserted.
class RationalCoeff {
 public:
  explicit RationalCoeff(int rank) : num_(rank) {}

  static RationalCoeff one(int rank) {
    RationalCoeff r(rank);
    r.num_.add_term(ExpVec(rank, 0), Rational(1));
    return r;
  }

  int rank() const { return num_.rank(); }
  bool is_zero() const { return num_.is_zero(); }
  const LaurentPoly& num() const { return num_; }
  const std::map<BinomFactor, int>& den() const { return den_; }

  void mul_scalar(const Rational& s) { num_ *= s; }
  void mul_monomial(const Rational& s, const ExpVec& m) { num_.mul_monomial(s, m); }
  void mul_poly(const LaurentPoly& p) { num_ = num_ * p; }
  void mul_binom_num(const Rational& c, const ExpVec& m) { num_.mul_binomial(c, m); }

  // divide by (1 - c z^m); canonicalizes via (1-cz^m) = -cz^m (1-c^{-1}z^{-m})
  void mul_binom_den(const Rational& c, const ExpVec& m) {
    if (c.is_zero()) return;
    int lead = 0;
    for (int v : m)
      if (v != 0) {
        lead = v;
        break;
      }
    if (lead == 0) {
      // constant factor (1 - c)
      if (c.is_one()) throw Error("RationalCoeff: denominator factor vanishes identically");
      num_ *= (Rational(1) - c).inv();
      return;
    }
    if (lead > 0) {
      ++den_[BinomFactor{m, c}];
      return;
    }
    ExpVec flipped(m.size());
    for (std::size_t j = 0; j < m.size(); ++j) flipped[j] = -m[j];
    ++den_[BinomFactor{flipped, c.inv()}];
    num_.mul_monomial(-c.inv(), flipped);
  }

  void mul(const RationalCoeff& o) {
    num_ = num_ * o.num_;
    for (const auto& [f, k] : o.den_) den_[f] += k;
  }

  void add(const RationalCoeff& o) {
    if (o.is_zero()) return;
    if (is_zero()) {
      *this = o;
      return;
    }
    // common denominator: componentwise max of multiplicities
    std::map<BinomFactor, int> lcm = den_;
    for (const auto& [f, k] : o.den_) {
      auto [it, inserted] = lcm.emplace(f, k);
      if (!inserted && it->second < k) it->second = k;
    }
    LaurentPoly a = num_, b = o.num_;
    for (const auto& [f, k] : lcm) {
      auto ita = den_.find(f);
      auto itb = o.den_.find(f);
      const int ka = ita == den_.end() ? 0 : ita->second;
      const int kb = itb == o.den_.end() ? 0 : itb->second;
      for (int i = ka; i < k; ++i) a.mul_binomial(f.coeff, f.exp);
      for (int i = kb; i < k; ++i) b.mul_binomial(f.coeff, f.exp);
    }
    a += b;
    num_ = std::move(a);
    den_ = std::move(lcm);
  }

  // exact quotient; factor order is irrelevant in the UFD of Laurent polynomials
  LaurentPoly finalize() const {
    LaurentPoly r = num_;
    for (const auto& [f, k] : den_)
      for (int i = 0; i < k; ++i) r.divide_binomial_exact(f.coeff, f.exp);
    return r;
  }

 private:
  LaurentPoly num_;
  std::map<BinomFactor, int> den_;
};

// q-difference operator: finite sum of rational coefficients times q-shifts
// z_j -> q^{s_j} z_j.  Application is exact; the combined result must clear all
// denominators (the defining property of the operators built here).
class DifferenceOp {
 public:
  DifferenceOp(int rank, Rational q) : rank_(rank), q_(std::move(q)) {}

  int rank() const { return rank_; }
  std::size_t term_count() const { return terms_.size(); }

  void add_term(RationalCoeff coeff, std::vector<int> shift) {
    if (static_cast<int>(shift.size()) != rank_) throw Error("DifferenceOp: shift rank mismatch");
    if (coeff.rank() != rank_) throw Error("DifferenceOp: coefficient rank mismatch");
    if (coeff.is_zero()) return;
    terms_.push_back({std::move(coeff), std::move(shift)});
  }

  LaurentPoly apply(const LaurentPoly& f) const {
    if (f.rank() != rank_) throw Error("DifferenceOp: argument rank mismatch");
    RationalCoeff acc(rank_);
    for (const auto& term : terms_) {
      if (f.is_zero()) break;
      LaurentPoly g = f;
      g.scale_exponents(q_, term.shift);
      RationalCoeff piece = term.coeff;
      piece.mul_poly(g);
      acc.add(piece);
    }
    return acc.finalize();
  }

  InvariantPoly apply(const InvariantPoly& p) const { return symmetrize(apply(expand(p))); }

 private:
  struct Term {
    RationalCoeff coeff;
    std::vector<int> shift;
  };
  int rank_;
  Rational q_;
  std::vector<Term> terms_;
};

}  // namespace qtoda
