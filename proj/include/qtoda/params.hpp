#pragma once

#include <array>
#include <optional>
#include <string>

#include "qtoda/rational.hpp"

namespace qtoda {

// Parameter regimes. generic_t keeps the full two-parameter family; t_zero is
// the Whittaker degeneration; that0_zero additionally kills the 0th deformation
// parameter (reduced boundary); extended_boundary is t_zero with the open
// parameter intervals closed, admitting endpoint specializations.
enum class Mode { generic_t, t_zero, that0_zero, extended_boundary };

inline std::string mode_to_string(Mode m) {
  switch (m) {
    case Mode::generic_t: return "generic-t";
    case Mode::t_zero: return "t-zero";
    case Mode::that0_zero: return "that0-zero";
    case Mode::extended_boundary: return "extended-boundary";
  }
  throw Error("mode_to_string: unknown mode");
}

inline Mode mode_from_string(const std::string& s) {
  if (s == "generic-t") return Mode::generic_t;
  if (s == "t-zero") return Mode::t_zero;
  if (s == "that0-zero") return Mode::that0_zero;
  if (s == "extended-boundary") return Mode::extended_boundary;
  throw Error("unknown mode \"" + s +
              "\" (expected generic-t, t-zero, that0-zero or extended-boundary)");
}

// Validated parameter set.  Boundary couplings are derived from the deformation
// parameters: t0 = sqrt(q^{-1} that0 that1 that2 that3), t_r = that_r that0 / t0.
// Square roots are taken lazily and must be exact rationals where required;
// even combinations (t0^2, t0 t_r) never need them.
class ParamSet {
 public:
  ParamSet(int n, Rational q, Rational t, std::array<Rational, 4> that, Mode mode)
      : n_(n), q_(std::move(q)), t_(std::move(t)), that_(std::move(that)), mode_(mode) {
    validate();
  }

  int n() const { return n_; }
  const Rational& q() const { return q_; }
  const Rational& t() const { return t_; }
  const Rational& that(int r) const { return that_.at(r); }
  Mode mode() const { return mode_; }

  // q^{-1} that0 that1 that2 that3; rational for any parameters.
  Rational t0_sq() const {
    return that_[0] * that_[1] * that_[2] * that_[3] / q_;
  }

  const Rational& sqrt_q() const {
    if (!sqrt_q_) {
      auto r = q_.sqrt_exact();
      if (!r)
        throw Error("scale parameter " + q_.to_string() +
                    " has no rational square root; half-integer powers unavailable");
      sqrt_q_ = *r;
    }
    return *sqrt_q_;
  }

  // Positive root; boundary coupling shared by all lattice formulas.
  const Rational& t0() const {
    if (!t0_) {
      auto r = t0_sq().sqrt_exact();
      if (!r)
        throw Error("boundary coupling product " + t0_sq().to_string() +
                    " has no rational square root; exact lattice formulas unavailable");
      t0_ = *r;
    }
    return *t0_;
  }

  // t_r for r = 1..3 (r = 0 is t0() itself).
  Rational t_unhat(int r) const {
    if (r < 1 || r > 3) throw Error("t_unhat: index out of range");
    return that_[r] * that_[0] / t0();
  }

  // t0 * t_r, rational without any square root.
  Rational t0_t(int r) const {
    if (r == 0) return t0_sq();
    if (r < 0 || r > 3) throw Error("t0_t: index out of range");
    return that_[0] * that_[r];
  }

  // tau_j = t^{n-j} t0, tau-hat_j = t^{n-j} that0 (j = 1..n).
  Rational tau(int j) const { return t_.pow(check_j(j)) * t0(); }
  Rational tau_hat(int j) const { return t_.pow(check_j(j)) * that_[0]; }

 private:
  long check_j(int j) const {
    if (j < 1 || j > n_) throw Error("variable index out of range");
    return n_ - j;
  }

  void validate() const {
    if (n_ < 1) throw Error("rank must be at least 1");
    if (!(Rational(0) < q_ && q_ < Rational(1)))
      throw Error("scale parameter must lie strictly between 0 and 1");
    const bool closed = mode_ == Mode::extended_boundary;
    auto in_range = [&](const Rational& v) {
      return closed ? (v.abs() <= Rational(1)) : (v.abs() < Rational(1));
    };
    switch (mode_) {
      case Mode::generic_t:
        if (t_.is_zero() || !in_range(t_))
          throw Error("interpolation parameter must be nonzero in (-1,1) at generic t");
        break;
      case Mode::t_zero:
      case Mode::that0_zero:
      case Mode::extended_boundary:
        if (!t_.is_zero())
          throw Error("interpolation parameter must vanish in mode " + mode_to_string(mode_));
        break;
    }
    if (mode_ == Mode::that0_zero) {
      if (!that_[0].is_zero())
        throw Error("0th deformation parameter must vanish in that0-zero mode");
      for (int r = 1; r < 4; ++r)
        if (that_[r].abs() >= Rational(1))
          throw Error("deformation parameters must lie in (-1,1)");
      return;
    }
    for (int r = 0; r < 4; ++r)
      if (that_[r].is_zero() || !in_range(that_[r]))
        throw Error("deformation parameters must be nonzero in " +
                    std::string(closed ? "[-1,1]" : "(-1,1)"));
    if (that_[0].sign() <= 0)
      throw Error("0th deformation parameter must be positive");
    if ((that_[0] * that_[1] * that_[2] * that_[3]).sign() <= 0)
      throw Error("product of deformation parameters must be positive");
  }

  int n_;
  Rational q_, t_;
  std::array<Rational, 4> that_;
  Mode mode_;
  mutable std::optional<Rational> sqrt_q_, t0_;
};

// Named presets; the generic interpolation parameter is dropped (and the 0th
// deformation parameter, where required) according to the requested mode.
inline ParamSet preset(const std::string& name, Mode mode = Mode::t_zero) {
  auto build = [&](int n, Rational q, Rational t_generic, std::array<Rational, 4> that) {
    Rational t = mode == Mode::generic_t ? t_generic : Rational(0);
    if (mode == Mode::that0_zero) that[0] = Rational(0);
    return ParamSet(n, std::move(q), std::move(t), std::move(that), mode);
  };
  if (name == "P1")
    return build(2, Rational(1, 4), Rational(1, 3),
                 {Rational(1, 2), Rational(1, 2), Rational(1, 2), Rational(1, 2)});
  if (name == "P2")
    return build(3, Rational(1, 9), Rational(1, 4),
                 {Rational(2, 3), Rational(1, 6), Rational(1, 2), Rational(1, 2)});
  throw Error("unknown preset \"" + name + "\" (expected P1 or P2)");
}

}  // namespace qtoda
