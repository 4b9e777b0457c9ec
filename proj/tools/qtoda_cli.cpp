#include <chrono>
#include <complex>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qtoda/io.hpp"
#include "qtoda/quadrature.hpp"
#include "qtoda/scattering.hpp"
#include "qtoda/toda.hpp"

namespace {

using namespace qtoda;

Rational parse_rational(const std::string& s) {
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(std::stol(s));
    return Rational(std::stol(s.substr(0, slash)), std::stol(s.substr(slash + 1)));
  } catch (const std::exception&) {
    throw Error("cannot parse '" + s + "': expected an integer or a num/den fraction");
  }
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

Partition parse_partition(const std::string& s) {
  std::vector<int> v;
  for (const auto& item : split_csv(s)) v.push_back(static_cast<int>(std::stol(item)));
  if (v.empty()) throw Error("empty lattice point");
  return Partition(v);
}

// Raw parameter tuple resolved from flags; the mode is chosen per subcommand
// (several verification suites exist only at a specific degeneration).
struct RawParams {
  int n = 0;
  Rational q;
  Rational t_gen;  // generic interpolation value; dropped outside generic mode
  std::array<Rational, 4> that;
  std::optional<Mode> mode_flag;
  bool have_t_gen = false;   // a generic value is available (flag or preset)
  bool t_flag_given = false;  // --t was passed explicitly

  ParamSet make(Mode m) const {
    Rational t = m == Mode::generic_t ? t_gen : Rational(0);
    if (m == Mode::generic_t && !have_t_gen)
      throw Error("this operation needs a generic interpolation parameter: pass --t");
    auto th = that;
    if (m == Mode::that0_zero) th[0] = Rational(0);
    return ParamSet(n, q, t, th, m);
  }

  // Mode for table-building commands: the explicit flag, else generic when a
  // nonzero --t was passed explicitly, else the vanishing-interpolation chain.
  Mode default_mode() const {
    if (mode_flag) return *mode_flag;
    if (t_flag_given && !t_gen.is_zero()) return Mode::generic_t;
    return Mode::t_zero;
  }

  // Mode for a suite that requires `want`: honor it unless the user pinned a
  // contradictory --mode.
  Mode suite_mode(Mode want, const std::string& suite) const {
    if (mode_flag && *mode_flag != want)
      throw Error("suite '" + suite + "' runs in mode " + mode_to_string(want) +
                  ", contradicting --mode " + mode_to_string(*mode_flag));
    return want;
  }
};

struct Options {
  std::string preset_name, q_str, t_str, that_str, mode_str, xi_str, lambda_str;
  std::string out, format = "json", op = "toda", suite;
  int n = 0, max_weight = -1, grid = -1, trials = 100;
  double tol = -1;
  bool timing = false, roundtrip = false;

  RawParams resolve() const {
    RawParams r;
    if (!preset_name.empty()) {
      if (preset_name == "P1") {
        r.n = 2;
        r.q = Rational(1, 4);
        r.t_gen = Rational(1, 3);
        r.that = {Rational(1, 2), Rational(1, 2), Rational(1, 2), Rational(1, 2)};
      } else if (preset_name == "P2") {
        r.n = 3;
        r.q = Rational(1, 9);
        r.t_gen = Rational(1, 4);
        r.that = {Rational(2, 3), Rational(1, 6), Rational(1, 2), Rational(1, 2)};
      } else {
        throw Error("unknown preset '" + preset_name + "' (expected P1 or P2)");
      }
      r.have_t_gen = true;
    }
    if (n > 0) r.n = n;
    if (!q_str.empty()) r.q = parse_rational(q_str);
    if (!t_str.empty()) {
      r.t_gen = parse_rational(t_str);
      r.have_t_gen = true;
      r.t_flag_given = true;
    }
    if (!that_str.empty()) {
      const auto parts = split_csv(that_str);
      if (parts.size() != 4) throw Error("--that needs four comma-separated values");
      for (int i = 0; i < 4; ++i) r.that[i] = parse_rational(parts[i]);
    }
    if (!mode_str.empty()) r.mode_flag = mode_from_string(mode_str);
    if (r.n == 0) throw Error("no parameters: pass --preset or --n/--q/--that");
    if (r.q.is_zero()) throw Error("scale parameter required: pass --q or --preset");
    return r;
  }

  int weight_or(int dflt) const { return max_weight >= 0 ? max_weight : dflt; }
  int grid_or(int dflt) const { return grid > 0 ? grid : dflt; }
  double tol_or(double dflt) const { return tol > 0 ? tol : dflt; }
};

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw Error("cannot open output file '" + out + "'");
  f << text;
}

double elapsed(bool timing, std::chrono::steady_clock::time_point start) {
  if (!timing) return 0.0;
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// --- verification suites ----------------------------------------------------

// Exact check: residual is "0" or the exact value (first offender for lists).
CheckResult exact_check(const std::string& name, bool pass, const std::string& residual) {
  return {name, pass, pass ? "0" : residual, "0", 0.0, ""};
}

CheckResult numeric_check(const std::string& name, double residual, double tolerance) {
  return {name, residual <= tolerance, double_str(residual), double_str(tolerance), 0.0, ""};
}

Report suite_eigen(const Options& opt) {
  const RawParams raw = opt.resolve();
  const ParamSet P = raw.make(raw.mode_flag.value_or(Mode::t_zero));
  const int w = opt.weight_or(P.n() == 2 ? 4 : 3);
  Report rep;
  rep.params = params_json(P);
  const auto start = std::chrono::steady_clock::now();
  // The hop reaches one shell out, the integral up to n shells.
  const int wi = std::min(w, 3);
  const bool with_integral = P.mode() != Mode::that0_zero;
  const DualTable tab = dual_table(P, std::max(w + 1, with_integral ? wi + P.n() : 0));
  for (const auto& lambda : partitions_up_to_weight(P.n(), w)) {
    auto c = exact_check("hop-eigen " + partition_key(lambda),
                         toda_eigen_residual(P, tab, lambda).is_zero(), "nonzero polynomial");
    c.seconds = elapsed(opt.timing, start);
    rep.checks.push_back(c);
  }
  if (with_integral) {
    for (const auto& lambda : partitions_up_to_weight(P.n(), wi)) {
      auto c = exact_check("integral-eigen " + partition_key(lambda),
                           integral_eigen_residual(P, tab, lambda).is_zero(), "nonzero polynomial");
      c.seconds = elapsed(opt.timing, start);
      rep.checks.push_back(c);
    }
  }
  return rep;
}

Report suite_dual(const Options& opt) {
  const RawParams raw = opt.resolve();
  const ParamSet P = raw.make(raw.mode_flag.value_or(Mode::t_zero));
  if (P.mode() == Mode::generic_t) throw Error("suite 'dual' runs at vanishing interpolation");
  const int w = opt.weight_or(4);
  Report rep;
  rep.params = params_json(P);
  const auto start = std::chrono::steady_clock::now();
  const DualTable tab = dual_table(P, w);
  for (int l = 1; l <= P.n(); ++l) {
    for (const auto& lambda : tab.basis) {
      InvariantPoly lhs(P.n());
      for (const auto& [nu, c] : tab.polys.at(lambda).coeffs())
        lhs += tab.columns[l - 1].at(nu) * c;
      lhs -= tab.polys.at(lambda) * dual_eigenvalue(P, lambda, l);
      auto c = exact_check("dual-eigen l=" + std::to_string(l) + " " + partition_key(lambda),
                           lhs.is_zero(), "nonzero polynomial");
      c.seconds = elapsed(opt.timing, start);
      rep.checks.push_back(c);
    }
  }
  const int wc = std::min(w, 3);
  for (int l1 = 1; l1 <= P.n(); ++l1)
    for (int l2 = l1 + 1; l2 <= P.n(); ++l2) {
      const DifferenceOp h1 = dual_op(P, l1), h2 = dual_op(P, l2);
      bool ok = true;
      std::string offender;
      for (const auto& nu : partitions_up_to_weight(P.n(), wc)) {
        const InvariantPoly m = InvariantPoly::monomial(nu);
        InvariantPoly comm = h1.apply(h2.apply(m));
        comm -= h2.apply(h1.apply(m));
        if (!comm.is_zero()) {
          ok = false;
          offender = "nonzero on " + partition_key(nu);
          break;
        }
      }
      auto c = exact_check(
          "dual-commute l=" + std::to_string(l1) + "," + std::to_string(l2), ok, offender);
      c.seconds = elapsed(opt.timing, start);
      rep.checks.push_back(c);
    }
  return rep;
}

Report suite_pieri(const Options& opt) {
  const RawParams raw = opt.resolve();
  const ParamSet P = raw.make(raw.suite_mode(Mode::generic_t, "pieri"));
  const int w = opt.weight_or(3);
  Report rep;
  rep.params = params_json(P);
  const auto start = std::chrono::steady_clock::now();
  const OperatorTable tab = mk_table(P, w + 1);
  for (const auto& lambda : partitions_up_to_weight(P.n(), w)) {
    InvariantPoly lhs(P.n());
    for (const auto& [nu, c] : tab.polys.at(lambda).coeffs()) lhs += tab.columns.at(nu) * c;
    lhs -= tab.polys.at(lambda) * mk_eigenvalue(P, lambda);
    auto c = exact_check("qde " + partition_key(lambda), lhs.is_zero(), "nonzero polynomial");
    c.seconds = elapsed(opt.timing, start);
    rep.checks.push_back(c);
    auto cp = exact_check("pieri " + partition_key(lambda),
                          pieri_residual(P, tab, lambda).is_zero(), "nonzero polynomial");
    cp.seconds = elapsed(opt.timing, start);
    rep.checks.push_back(cp);
  }
  return rep;
}

Report suite_ortho(const Options& opt) {
  const RawParams raw = opt.resolve();
  const ParamSet P = raw.make(raw.mode_flag.value_or(Mode::t_zero));
  if (P.mode() == Mode::generic_t)
    throw Error("suite 'ortho' runs at vanishing interpolation (see 'pieri' for generic t)");
  const int w = opt.weight_or(3);
  const int N = opt.grid_or(P.n() <= 2 ? 256 : 96);
  const double tol_diag = opt.tol_or(P.n() <= 2 ? 1e-6 : 1e-4);
  const double tol_off = opt.tol_or(P.n() <= 2 ? 1e-8 : 1e-4);
  const WeightVariant variant =
      P.mode() == Mode::that0_zero ? WeightVariant::reduced : WeightVariant::whittaker;
  Report rep;
  rep.params = params_json(P);
  const auto start = std::chrono::steady_clock::now();
  const DualTable tab = dual_table(P, w);
  std::vector<InvariantPoly> fam;
  std::vector<Partition> index;
  fam.push_back(InvariantPoly::constant(P.n(), Rational(1)));  // row 0: total mass
  for (const auto& lambda : tab.basis) {
    fam.push_back(wave_fn(P, tab, lambda));
    index.push_back(lambda);
  }
  const TorusGrid grid(N, P.n());
  const auto G = gram_matrix(fam, grid, P, variant);
  const double d0 = lattice_delta0(P);
  double mass_err = std::abs(G[0][0] * d0 - 1.0);
  double diag_err = 0, off_err = 0;
  for (std::size_t i = 1; i < fam.size(); ++i) {
    const double want = 1.0 / (d0 * lattice_delta_ratio(P, index[i - 1]).to_double());
    diag_err = std::max(diag_err, std::abs(G[i][i] / want - 1.0));
    for (std::size_t j = 1; j < i; ++j)
      off_err = std::max(off_err, std::abs(G[i][j]) / std::sqrt(G[i][i] * G[j][j]));
  }
  auto c0 = numeric_check("total-mass", mass_err, tol_diag);
  auto c1 = numeric_check("gram-diagonal", diag_err, tol_diag);
  auto c2 = numeric_check("gram-offdiagonal", off_err, tol_off);
  c0.seconds = c1.seconds = c2.seconds = elapsed(opt.timing, start);
  c0.note = "grid " + std::to_string(N) + ", members up to weight " + std::to_string(w);
  rep.checks.push_back(c0);
  rep.checks.push_back(c1);
  rep.checks.push_back(c2);
  return rep;
}

Report suite_selfadjoint(const Options& opt) {
  const RawParams raw = opt.resolve();
  const ParamSet P = raw.make(raw.mode_flag.value_or(Mode::t_zero));
  if (P.mode() == Mode::generic_t) throw Error("suite 'selfadjoint' runs at vanishing interpolation");
  const int w = opt.weight_or(6);
  Report rep;
  rep.params = params_json(P);
  const auto start = std::chrono::steady_clock::now();
  bool ok = true;
  std::string offender;
  for (const auto& lambda : partitions_up_to_weight(P.n(), w)) {
    for (int j = 1; j <= P.n() && ok; ++j) {
      const Rational r = balance_residual(P, lambda, j);
      if (!r.is_zero()) {
        ok = false;
        offender = r.to_string() + " at " + partition_key(lambda) + " j=" + std::to_string(j);
      }
    }
    if (!ok) break;
  }
  auto c = exact_check("detailed-balance", ok, offender);
  c.seconds = elapsed(opt.timing, start);
  c.note = "all moves up to weight " + std::to_string(w);
  rep.checks.push_back(c);
  if (P.mode() != Mode::that0_zero) {
    bool oki = true;
    std::string offi;
    for (const auto& lambda : partitions_up_to_weight(P.n(), std::min(w, 4))) {
      for (const auto& [mu, r] : integral_balance_residuals(P, lambda))
        if (!r.is_zero()) {
          oki = false;
          offi = r.to_string() + " at " + partition_key(lambda) + " -> " + partition_key(mu);
          break;
        }
      if (!oki) break;
    }
    auto ci = exact_check("integral-detailed-balance", oki, offi);
    ci.seconds = elapsed(opt.timing, start);
    rep.checks.push_back(ci);
  }
  return rep;
}

Report suite_commute(const Options& opt) {
  const RawParams raw = opt.resolve();
  const ParamSet P = raw.make(raw.mode_flag.value_or(Mode::t_zero));
  if (P.mode() != Mode::t_zero && P.mode() != Mode::extended_boundary)
    throw Error("suite 'commute' needs the integral's four-parameter chain");
  const int w = opt.weight_or(6);
  Report rep;
  rep.params = params_json(P);
  const auto start = std::chrono::steady_clock::now();
  bool ok = true;
  std::string offender;
  for (const auto& nu : partitions_up_to_weight(P.n(), w))
    if (!commutator_column(P, nu).empty()) {
      ok = false;
      offender = "nonzero column at " + partition_key(nu);
      break;
    }
  auto c = exact_check("hop-integral-commutator", ok, offender);
  c.seconds = elapsed(opt.timing, start);
  c.note = "indicator columns up to weight " + std::to_string(w);
  rep.checks.push_back(c);
  return rep;
}

Report suite_identity(const Options& opt) {
  const RawParams raw = opt.resolve();
  const ParamSet P = raw.make(raw.suite_mode(Mode::generic_t, "identity"));
  Report rep;
  rep.params = params_json(P);
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240817u);
  std::uniform_int_distribution<long> num(-60, 60), den(1, 60);
  bool ok = true;
  std::string offender;
  int done = 0;
  while (done < opt.trials) {
    std::vector<Rational> X;
    bool drawn = true;
    for (int j = 0; j < P.n(); ++j) {
      const long a = num(rng);
      if (a == 0) {
        drawn = false;
        break;
      }
      X.emplace_back(a, den(rng));
    }
    if (!drawn) continue;
    try {
      if (boundary_identity_lhs(P, X) != boundary_identity_rhs(P, X)) {
        ok = false;
        offender = "mismatch at trial " + std::to_string(done);
        break;
      }
    } catch (const Error&) {
      continue;  // pole at the sample point: resample
    }
    ++done;
  }
  auto c = exact_check("boundary-rational-identity", ok, offender);
  c.seconds = elapsed(opt.timing, start);
  c.note = std::to_string(opt.trials) + " rational sample points, fixed seed";
  rep.checks.push_back(c);
  return rep;
}

Report suite_scatter(const Options& opt) {
  const RawParams raw = opt.resolve();
  const ParamSet P = raw.make(raw.mode_flag.value_or(Mode::t_zero));
  Report rep;
  rep.params = params_json(P);
  const auto start = std::chrono::steady_clock::now();
  std::mt19937 rng(20240517u);
  std::uniform_real_distribution<double> dist(-3.5, 3.5);
  double uni = 0, br = 0;
  for (int trial = 0; trial < opt.trials; ++trial) {
    const double x = dist(rng);
    const auto sp = s_pair(x, P);
    const auto sb = s_boundary(x, P);
    uni = std::max({uni, std::abs(std::abs(sp) - 1.0), std::abs(std::abs(sb) - 1.0)});
    const auto rp = sqrt_branch(x, SFactor::pair, P);
    const auto rb = sqrt_branch(x, SFactor::boundary, P);
    br = std::max({br, std::abs(rp * rp - sp), std::abs(rb * rb - sb)});
    std::vector<double> xi(P.n());
    for (auto& v : xi) v = std::abs(dist(rng)) + 0.05;
    uni = std::max(uni, std::abs(std::abs(s_matrix(xi, P).value) - 1.0));
  }
  auto c0 = numeric_check("factor-unimodularity", uni, opt.tol_or(1e-12));
  auto c1 = numeric_check("branch-squares", br, opt.tol_or(1e-12));
  c0.note = std::to_string(opt.trials) + " random inputs, fixed seed";

  // Free-kernel orthonormality, rank one.
  const TorusGrid grid(opt.grid_or(512), 1);
  double orth = 0;
  for (int l = 0; l <= 4; ++l) {
    LatticeFn f;
    f[Partition(std::vector<int>{l})] = Rational(1);
    const auto fhat = free_transform(f, grid);
    for (int m = 0; m <= 4; ++m) {
      const double want = l == m ? 1.0 : 0.0;
      orth = std::max(orth,
                      std::abs(free_inverse(fhat, grid, Partition(std::vector<int>{m})) - want));
    }
  }
  auto c2 = numeric_check("free-kernel-orthonormality", orth, opt.tol_or(1e-6));
  c0.seconds = c1.seconds = c2.seconds = elapsed(opt.timing, start);
  rep.checks.push_back(c0);
  rep.checks.push_back(c1);
  rep.checks.push_back(c2);
  return rep;
}

Report suite_reduced(const Options& opt) {
  RawParams raw = opt.resolve();
  const ParamSet P = raw.make(Mode::that0_zero);
  const int w = opt.weight_or(3);
  Report rep;
  rep.params = params_json(P);
  const auto start = std::chrono::steady_clock::now();
  const DualTable tab = dual_table(P, w + 1);
  for (const auto& lambda : partitions_up_to_weight(P.n(), w)) {
    auto c = exact_check("reduced-eigen " + partition_key(lambda),
                         toda_eigen_residual(P, tab, lambda).is_zero(), "nonzero polynomial");
    c.seconds = elapsed(opt.timing, start);
    rep.checks.push_back(c);
  }
  const int N = opt.grid_or(P.n() <= 2 ? 128 : 96);
  const double tol_diag = opt.tol_or(P.n() <= 2 ? 1e-6 : 1e-4);
  const double tol_off = opt.tol_or(P.n() <= 2 ? 1e-8 : 1e-4);
  const int wg = std::min(w, 2);
  std::vector<InvariantPoly> fam;
  std::vector<Partition> index;
  for (const auto& lambda : partitions_up_to_weight(P.n(), wg)) {
    fam.push_back(tab.polys.at(lambda));  // prefactor is 1 in the reduced chain
    index.push_back(lambda);
  }
  const TorusGrid grid(N, P.n());
  const auto G = gram_matrix(fam, grid, P, WeightVariant::reduced);
  const double d0 = lattice_delta0(P);
  double diag_err = 0, off_err = 0;
  for (std::size_t i = 0; i < fam.size(); ++i) {
    const double want = 1.0 / (d0 * lattice_delta_ratio(P, index[i]).to_double());
    diag_err = std::max(diag_err, std::abs(G[i][i] / want - 1.0));
    for (std::size_t j = 0; j < i; ++j)
      off_err = std::max(off_err, std::abs(G[i][j]) / std::sqrt(G[i][i] * G[j][j]));
  }
  auto c1 = numeric_check("reduced-gram-diagonal", diag_err, tol_diag);
  auto c2 = numeric_check("reduced-gram-offdiagonal", off_err, tol_off);
  c1.seconds = c2.seconds = elapsed(opt.timing, start);
  c1.note = "grid " + std::to_string(N) + ", members up to weight " + std::to_string(wg);
  rep.checks.push_back(c1);
  rep.checks.push_back(c2);
  return rep;
}

// --- subcommands ------------------------------------------------------------

int cmd_polys(const Options& opt) {
  const RawParams raw = opt.resolve();
  const Mode m = raw.default_mode();
  const ParamSet P = raw.make(m);
  const int w = opt.weight_or(3);
  json o;
  if (m == Mode::generic_t)
    o = mk_table_json(P, mk_table(P, w));
  else
    o = whittaker_table_json(P, dual_table(P, w));
  emit(o.dump(2) + "\n", opt.out);
  return 0;
}

int cmd_verify(const Options& opt) {
  static const std::map<std::string, Report (*)(const Options&)> suites = {
      {"eigen", suite_eigen},       {"dual", suite_dual},
      {"pieri", suite_pieri},       {"ortho", suite_ortho},
      {"selfadjoint", suite_selfadjoint}, {"commute", suite_commute},
      {"identity", suite_identity}, {"scatter", suite_scatter},
      {"reduced", suite_reduced},
  };
  const auto it = suites.find(opt.suite);
  if (it == suites.end())
    throw Error("unknown suite '" + opt.suite +
                "' (expected eigen|dual|pieri|ortho|selfadjoint|commute|identity|scatter|reduced)");
  const Report rep = it->second(opt);
  if (opt.format == "csv") {
    std::string text = "name,status,residual,tolerance,seconds\n";
    for (const auto& c : rep.checks)
      text += "\"" + c.name + "\"," + (c.pass ? "pass" : "fail") + "," + c.residual + "," +
              c.tolerance + "," + double_str(c.seconds) + "\n";
    emit(text, opt.out);
  } else {
    emit(rep.to_json().dump(2) + "\n", opt.out);
  }
  return rep.all_pass() ? 0 : 1;
}

int cmd_scatter(const Options& opt) {
  RawParams raw;
  try {
    raw = opt.resolve();
  } catch (const Error&) {
    // Bare usage: rank from the point, two-parameter preset values.
    if (opt.xi_str.empty() && opt.grid <= 0) throw;
    raw.n = opt.xi_str.empty() ? 1 : static_cast<int>(split_csv(opt.xi_str).size());
    if (opt.n > 0) raw.n = opt.n;
    raw.q = Rational(1, 4);
    raw.that = {Rational(1, 2), Rational(1, 2), Rational(1, 2), Rational(1, 2)};
  }
  const ParamSet P = raw.make(raw.mode_flag.value_or(Mode::t_zero));
  std::string text;
  text = "";
  for (int j = 1; j <= P.n(); ++j) text += "xi_" + std::to_string(j) + ",";
  text += "re_s,im_s,abs_s,re_branch,im_branch\n";
  auto row = [&](const std::vector<double>& xi) {
    const SMatrixValue S = s_matrix(xi, P);
    for (double x : xi) text += double_str(x) + ",";
    text += double_str(S.value.real()) + "," + double_str(S.value.imag()) + "," +
            double_str(std::abs(S.value)) + "," + double_str(S.branch_root.real()) + "," +
            double_str(S.branch_root.imag()) + "\n";
  };
  if (!opt.xi_str.empty()) {
    std::vector<double> xi;
    for (const auto& s : split_csv(opt.xi_str)) xi.push_back(std::stod(s));
    if (static_cast<int>(xi.size()) != P.n()) throw Error("--xi length must match the rank");
    row(xi);
  } else if (opt.grid > 0) {
    const TorusGrid grid(opt.grid, P.n());
    std::vector<double> xi(P.n());
    for (long node = 0; node < grid.size(); ++node) {
      grid.node(node, xi);
      bool inside = xi[P.n() - 1] > 0.0 && xi[0] < std::numbers::pi;
      for (int j = 0; j + 1 < P.n() && inside; ++j) inside = xi[j] > xi[j + 1];
      if (inside) row(xi);
    }
  } else {
    throw Error("scatter needs --xi a,b,... or --grid N");
  }
  emit(text, opt.out);
  return 0;
}

int cmd_transform(const Options& opt) {
  if (opt.lambda_str.empty()) throw Error("transform needs --lambda l1,l2,...");
  const Partition lambda = parse_partition(opt.lambda_str);
  const int n = lambda.rank();
  const int N = opt.grid_or(n == 1 ? 512 : 128);
  const double tol = opt.tol_or(n == 1 ? 1e-5 : 1e-4);
  Report rep;
  rep.params = {{"n", n}, {"grid", N}};
  const auto start = std::chrono::steady_clock::now();
  const TorusGrid grid(N, n);
  LatticeFn f;
  f[lambda] = Rational(1);
  const auto fhat = free_transform(f, grid);
  double err = 0;
  for (const auto& mu : partitions_up_to_weight(n, lambda.weight() + 2)) {
    const double want = mu == lambda ? 1.0 : 0.0;
    err = std::max(err, std::abs(free_inverse(fhat, grid, mu) - want));
  }
  auto c = numeric_check("free-roundtrip " + partition_key(lambda), err, tol);
  c.seconds = elapsed(opt.timing, start);
  rep.checks.push_back(c);
  emit(rep.to_json().dump(2) + "\n", opt.out);
  return rep.all_pass() ? 0 : 1;
}

int cmd_stencil(const Options& opt) {
  const RawParams raw = opt.resolve();
  const ParamSet P = raw.make(raw.mode_flag.value_or(Mode::t_zero));
  const int w = opt.weight_or(3);
  std::string text = "lambda,move,coefficient\n";
  if (opt.op == "toda") {
    for (const auto& lambda : partitions_up_to_weight(P.n(), w)) {
      const TodaStencil s = toda_stencil(P, lambda);
      const std::string key = "\"" + partition_key(lambda) + "\"";
      for (int j = 1; j <= P.n(); ++j) {
        if (shift_part(lambda, j - 1, +1))
          text += key + ",+e" + std::to_string(j) + "," + s.up[j - 1].to_string() + "\n";
        if (shift_part(lambda, j - 1, -1))
          text += key + ",-e" + std::to_string(j) + "," + s.down[j - 1].to_string() + "\n";
      }
      text += key + ",diag," + s.diag.to_string() + "\n";
    }
  } else if (opt.op == "integral") {
    for (const auto& lambda : partitions_up_to_weight(P.n(), w)) {
      const std::string key = "\"" + partition_key(lambda) + "\"";
      for (const auto& [mu, c] : integral_stencil(P, lambda)) {
        if (mu == lambda) {
          text += key + ",diag," + c.to_string() + "\n";
          continue;
        }
        std::string move = "\"[";
        for (int j = 0; j < P.n(); ++j) {
          if (j) move += ',';
          move += std::to_string(mu[j] - lambda[j]);
        }
        text += key + "," + move + "]\"," + c.to_string() + "\n";
      }
    }
  } else {
    throw Error("unknown --op '" + opt.op + "' (expected toda or integral)");
  }
  emit(text, opt.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact and numerical workbench for a q-deformed open Toda chain with\n"
               "Askey-Wilson boundary interactions and its polynomial eigenfunctions."};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--n", opt.n, "rank (number of variables)");
    sub->add_option("--q", opt.q_str, "scale parameter, num/den");
    sub->add_option("--t", opt.t_str, "generic interpolation parameter, num/den");
    sub->add_option("--that", opt.that_str, "four deformation parameters a,b,c,d");
    sub->add_option("--preset", opt.preset_name, "named parameter set P1 (n=2) or P2 (n=3)");
    sub->add_option("--mode", opt.mode_str,
                    "generic_t | t_zero | that0_zero | extended_boundary");
    sub->add_option("--max-weight", opt.max_weight, "largest member weight");
    sub->add_option("--grid", opt.grid, "quadrature nodes per axis (even)");
    sub->add_option("--tol", opt.tol, "numeric tolerance override");
    sub->add_option("--trials", opt.trials, "random trials for sampled checks");
    sub->add_option("--out", opt.out, "output file (default stdout)");
    sub->add_option("--format", opt.format, "json | csv (verification reports)");
    sub->add_flag("--timing", opt.timing, "report wall times instead of 0.0");
  };

  auto* polys = app.add_subcommand("polys", "build the polynomial family and write its table");
  add_common(polys);

  auto* verify = app.add_subcommand("verify", "run a verification suite, exit 0 iff all pass");
  verify->add_option("suite", opt.suite,
                     "eigen | dual | pieri | ortho | selfadjoint | commute | identity | "
                     "scatter | reduced")
      ->required();
  add_common(verify);

  auto* scatter = app.add_subcommand("scatter", "evaluate the factorized scattering matrix");
  scatter->add_option("--xi", opt.xi_str, "evaluation point a,b,...");
  add_common(scatter);

  auto* transform = app.add_subcommand("transform", "free-transform round trips");
  transform->add_flag("--roundtrip", opt.roundtrip, "round-trip an indicator (default action)");
  transform->add_option("--lambda", opt.lambda_str, "lattice point l1,l2,...");
  add_common(transform);

  auto* stencil = app.add_subcommand("stencil", "dump difference-operator stencils as CSV");
  stencil->add_option("--op", opt.op, "toda | integral");
  add_common(stencil);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (polys->parsed()) return cmd_polys(opt);
    if (verify->parsed()) return cmd_verify(opt);
    if (scatter->parsed()) return cmd_scatter(opt);
    if (transform->parsed()) return cmd_transform(opt);
    if (stencil->parsed()) return cmd_stencil(opt);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
