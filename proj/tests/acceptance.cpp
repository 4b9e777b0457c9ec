// End-to-end acceptance gate: one pass/fail line per criterion, exit 0 iff all
// pass.  Exact criteria demand identically-zero residuals; quadrature criteria
// carry pinned tolerances and wall-clock budgets.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qtoda/io.hpp"
#include "qtoda/quadrature.hpp"
#include "qtoda/scattering.hpp"
#include "qtoda/toda.hpp"

using namespace qtoda;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string secs(double s) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1fs", s);
  return buf;
}

ParamSet rank1(Mode mode) {
  std::array<Rational, 4> that = {Rational(1, 2), Rational(1, 2), Rational(1, 2), Rational(1, 2)};
  if (mode == Mode::that0_zero) that[0] = Rational(0);
  return ParamSet(1, Rational(1, 4), Rational(0), that, mode);
}

// Shared tables: weight 5 covers shifted members for the hop at weight 4 and
// the integral's n-shell reach at weight 3; weight 4 covers the rank-3 runs.
const ParamSet P1 = preset("P1", Mode::t_zero);
const ParamSet P2 = preset("P2", Mode::t_zero);

Outcome hop_eigen(const DualTable& tab1, const DualTable& tab2, double budget) {
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& lambda : partitions_up_to_weight(2, 4))
    if (!toda_eigen_residual(P1, tab1, lambda).is_zero())
      return {false, "nonzero residual at n=2 " + partition_key(lambda)};
  for (const auto& lambda : partitions_up_to_weight(3, 3))
    if (!toda_eigen_residual(P2, tab2, lambda).is_zero())
      return {false, "nonzero residual at n=3 " + partition_key(lambda)};
  const double s = seconds_since(t0);
  if (s > budget) return {false, "exceeded budget: " + secs(s)};
  return {true, "exact, " + secs(s)};
}

Outcome integral_eigen(const DualTable& tab1) {
  for (const auto& lambda : partitions_up_to_weight(2, 3))
    if (!integral_eigen_residual(P1, tab1, lambda).is_zero())
      return {false, "nonzero residual at " + partition_key(lambda)};
  return {true, "exact"};
}

Outcome dual_eigen(const DualTable& tab1, const DualTable& tab2) {
  for (const auto* pr : {&P1, &P2}) {
    const ParamSet& P = *pr;
    const DualTable& tab = P.n() == 2 ? tab1 : tab2;
    for (int l = 1; l <= P.n(); ++l)
      for (const auto& lambda : partitions_up_to_weight(P.n(), 4)) {
        InvariantPoly lhs(P.n());
        for (const auto& [nu, c] : tab.polys.at(lambda).coeffs())
          lhs += tab.columns[l - 1].at(nu) * c;
        lhs -= tab.polys.at(lambda) * dual_eigenvalue(P, lambda, l);
        if (!lhs.is_zero())
          return {false, "nonzero at n=" + std::to_string(P.n()) + " l=" + std::to_string(l) +
                             " " + partition_key(lambda)};
      }
    for (int l1 = 1; l1 <= P.n(); ++l1)
      for (int l2 = l1 + 1; l2 <= P.n(); ++l2) {
        const DifferenceOp h1 = dual_op(P, l1), h2 = dual_op(P, l2);
        for (const auto& nu : partitions_up_to_weight(P.n(), 3)) {
          const InvariantPoly m = InvariantPoly::monomial(nu);
          InvariantPoly comm = h1.apply(h2.apply(m));
          comm -= h2.apply(h1.apply(m));
          if (!comm.is_zero())
            return {false, "commutator nonzero at n=" + std::to_string(P.n()) + " (" +
                               std::to_string(l1) + "," + std::to_string(l2) + ") on " +
                               partition_key(nu)};
        }
      }
  }
  return {true, "exact"};
}

Outcome generic_family() {
  const ParamSet P = preset("P1", Mode::generic_t);
  const OperatorTable tab = mk_table(P, 4);
  const DifferenceOp op = mk_operator(P);
  for (const auto& lambda : partitions_up_to_weight(2, 3)) {
    InvariantPoly residual = op.apply(tab.polys.at(lambda));
    residual -= tab.polys.at(lambda) * mk_eigenvalue(P, lambda);
    if (!residual.is_zero())
      return {false, "difference equation fails at " + partition_key(lambda)};
    if (!pieri_residual(P, tab, lambda).is_zero())
      return {false, "one-step expansion fails at " + partition_key(lambda)};
  }
  return {true, "exact"};
}

Outcome quadrature_norms(const DualTable& tab1, const DualTable& tab2, double budget) {
  const auto t0 = std::chrono::steady_clock::now();
  struct Run {
    const ParamSet& P;
    const DualTable& tab;
    int grid;
    double tol_diag, tol_off;
  };
  const Run runs[] = {{P1, tab1, 256, 1e-6, 1e-8}, {P2, tab2, 96, 1e-4, 1e-4}};
  std::string detail;
  for (const auto& run : runs) {
    std::vector<InvariantPoly> fam;
    std::vector<Partition> index;
    fam.push_back(InvariantPoly::constant(run.P.n(), Rational(1)));
    for (const auto& lambda : partitions_up_to_weight(run.P.n(), 3)) {
      fam.push_back(wave_fn(run.P, run.tab, lambda));
      index.push_back(lambda);
    }
    const TorusGrid grid(run.grid, run.P.n());
    const auto G = gram_matrix(fam, grid, run.P, WeightVariant::whittaker);
    const double d0 = lattice_delta0(run.P);
    double diag = std::abs(G[0][0] * d0 - 1.0);  // total mass = 1/Delta_0
    double off = 0;
    for (std::size_t i = 1; i < fam.size(); ++i) {
      const double want = 1.0 / (d0 * lattice_delta_ratio(run.P, index[i - 1]).to_double());
      diag = std::max(diag, std::abs(G[i][i] / want - 1.0));
      for (std::size_t j = 1; j < i; ++j)
        off = std::max(off, std::abs(G[i][j]) / std::sqrt(G[i][i] * G[j][j]));
    }
    if (diag > run.tol_diag || off > run.tol_off)
      return {false, "n=" + std::to_string(run.P.n()) + " diag " + double_str(diag) + " off " +
                         double_str(off)};
    detail += (detail.empty() ? "" : ", ") + std::string("n=") + std::to_string(run.P.n()) +
              " diag " + double_str(diag) + " off " + double_str(off);
  }
  const double s = seconds_since(t0);
  if (s > budget) return {false, "exceeded budget: " + secs(s)};
  return {true, detail + ", " + secs(s)};
}

Outcome detailed_balance() {
  for (const auto* pr : {&P1, &P2}) {
    const ParamSet& P = *pr;
    for (const auto& lambda : partitions_up_to_weight(P.n(), 6))
      for (int j = 1; j <= P.n(); ++j)
        if (!balance_residual(P, lambda, j).is_zero())
          return {false, "nonzero at n=" + std::to_string(P.n()) + " " + partition_key(lambda) +
                             " j=" + std::to_string(j)};
  }
  return {true, "exact"};
}

Outcome rank_one_oracles() {
  {
    const ParamSet P = rank1(Mode::t_zero);
    const DualTable tab = dual_table(P, 5);
    const auto aw = oracle::monic_askey_wilson(P.q(), P.that(0), P.that(1), P.that(2), P.that(3), 5);
    for (int l = 0; l <= 5; ++l) {
      const auto ours = oracle::to_power_basis(tab.polys.at(Partition({l})));
      const auto ref = oracle::scale_poly(aw[l], Rational(2).pow(l));
      if (ours != ref) return {false, "Askey-Wilson mismatch at degree " + std::to_string(l)};
    }
  }
  {
    const ParamSet P = rank1(Mode::that0_zero);
    const DualTable tab = dual_table(P, 5);
    const auto ref3 = oracle::monic_cdqh(P.q(), P.that(1), P.that(2), P.that(3), 5);
    for (int l = 0; l <= 5; ++l) {
      const auto ours = oracle::to_power_basis(tab.polys.at(Partition({l})));
      const auto ref = oracle::scale_poly(ref3[l], Rational(2).pow(l));
      if (ours != ref)
        return {false, "continuous dual q-Hahn mismatch at degree " + std::to_string(l)};
    }
  }
  return {true, "exact coefficients, degrees 0..5"};
}

// Max absolute coefficient difference between two coefficient tables over the
// shared weight-3 basis.
template <class TabA, class TabB>
double table_distance(const TabA& a, const TabB& b, int rank) {
  double err = 0;
  for (const auto& lambda : partitions_up_to_weight(rank, 3)) {
    const InvariantPoly &pa = a.polys.at(lambda), &pb = b.polys.at(lambda);
    for (const auto& nu : partitions_up_to_weight(rank, 3)) {
      const double d = (pa.coeff(nu) - pb.coeff(nu)).to_double();
      err = std::max(err, std::abs(d));
    }
  }
  return err;
}

Outcome limit_continuity(const DualTable& tab1) {
  const long dens[] = {1000, 10000, 100000};
  // Generic interpolation parameter descending to the degenerate engine.
  std::vector<double> errs;
  for (long d : dens) {
    const ParamSet P(2, Rational(1, 4), Rational(1, d),
                     {Rational(1, 2), Rational(1, 2), Rational(1, 2), Rational(1, 2)},
                     Mode::generic_t);
    errs.push_back(table_distance(mk_table(P, 3), tab1, 2));
  }
  std::string detail;
  for (std::size_t i = 0; i + 1 < errs.size(); ++i) {
    const double ratio = errs[i] / errs[i + 1];
    if (!(ratio >= 8.0 && ratio <= 12.0))
      return {false, "interpolation ratio " + double_str(ratio) + " outside [8,12]"};
    detail += (i ? "," : "ratios ") + double_str(ratio);
  }
  // 0th deformation parameter descending to the reduced engine.
  const ParamSet P0(2, Rational(1, 4), Rational(0),
                    {Rational(0), Rational(1, 2), Rational(1, 2), Rational(1, 2)},
                    Mode::that0_zero);
  const DualTable red = dual_table(P0, 3);
  errs.clear();
  for (long d : dens) {
    const ParamSet P(2, Rational(1, 4), Rational(0),
                     {Rational(1, d), Rational(1, 2), Rational(1, 2), Rational(1, 2)},
                     Mode::t_zero);
    errs.push_back(table_distance(dual_table(P, 3), red, 2));
  }
  detail += "; ";
  for (std::size_t i = 0; i + 1 < errs.size(); ++i) {
    const double ratio = errs[i] / errs[i + 1];
    if (!(ratio >= 8.0 && ratio <= 12.0))
      return {false, "reduced ratio " + double_str(ratio) + " outside [8,12]"};
    detail += (i ? "," : "") + double_str(ratio);
  }
  return {true, detail};
}

Outcome scattering_checks() {
  std::mt19937 rng(20240517u);
  std::uniform_real_distribution<double> dist(-3.5, 3.5);
  double uni = 0, br = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const double x = dist(rng);
    const auto sp = s_pair(x, P1);
    const auto sb = s_boundary(x, P1);
    uni = std::max({uni, std::abs(std::abs(sp) - 1.0), std::abs(std::abs(sb) - 1.0)});
    const auto rp = sqrt_branch(x, SFactor::pair, P1);
    const auto rb = sqrt_branch(x, SFactor::boundary, P1);
    br = std::max({br, std::abs(rp * rp - sp), std::abs(rb * rb - sb)});
    std::vector<double> xi(2);
    for (auto& v : xi) v = std::abs(dist(rng)) + 0.05;
    uni = std::max(uni, std::abs(std::abs(s_matrix(xi, P1).value) - 1.0));
  }
  if (uni > 1e-12) return {false, "unimodularity residual " + double_str(uni)};
  if (br > 1e-12) return {false, "branch-square residual " + double_str(br)};
  const TorusGrid grid(512, 1);
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
  if (orth > 1e-6) return {false, "orthonormality residual " + double_str(orth)};
  return {true, "unimodularity " + double_str(uni) + ", branches " + double_str(br) +
                    ", kernel " + double_str(orth)};
}

Outcome rational_identity() {
  std::mt19937_64 rng(20240817u);
  std::uniform_int_distribution<long> num(-60, 60), den(1, 60);
  for (const char* name : {"P1", "P2"}) {
    const ParamSet P = preset(name, Mode::generic_t);
    int done = 0;
    while (done < 100) {
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
        if (boundary_identity_lhs(P, X) != boundary_identity_rhs(P, X))
          return {false, std::string("mismatch at n=") + std::to_string(P.n()) + " trial " +
                             std::to_string(done)};
      } catch (const Error&) {
        continue;  // pole at the sample point: resample
      }
      ++done;
    }
  }
  return {true, "exact at 100 points each, n=2 and n=3"};
}

Outcome commutator_vanishes() {
  for (const auto& nu : partitions_up_to_weight(2, 6))
    if (!commutator_column(P1, nu).empty())
      return {false, "nonzero column at " + partition_key(nu)};
  return {true, "exact"};
}

Outcome closed_chain_potential() {
  const ParamSet P(2, Rational(1, 4), Rational(0),
                   {Rational(3, 4), Rational(-3, 4), Rational(1, 2), Rational(-1, 2)},
                   Mode::extended_boundary);
  for (const auto& lambda : partitions_up_to_weight(2, 4))
    if (!toda_u(P, lambda).is_zero())
      return {false, "nonzero potential at " + partition_key(lambda)};
  return {true, "exact"};
}

}  // namespace

int main() {
  const auto t_all = std::chrono::steady_clock::now();
  // Shared table builds dominate the runtime; they count toward the first
  // criterion's budget since that identity is what they exist for.
  const auto t_tab = std::chrono::steady_clock::now();
  const DualTable tab1 = dual_table(P1, 5);
  const DualTable tab2 = dual_table(P2, 4);
  const double table_seconds = seconds_since(t_tab);

  std::vector<std::pair<std::string, Outcome>> results;
  auto add = [&](const std::string& label, Outcome o) { results.emplace_back(label, o); };

  {
    Outcome o = hop_eigen(tab1, tab2, 120.0 - table_seconds);
    if (o.pass) o.detail += " (+" + secs(table_seconds) + " shared tables)";
    add("hop eigen-identity exact (n=2 weight<=4, n=3 weight<=3, under 2min)", o);
  }
  add("integral eigen-identity exact against its boundary symbol (n=2 weight<=3)",
      integral_eigen(tab1));
  add("dual-family eigen-identities exact and pairwise commuting (weight<=4, both ranks)",
      dual_eigen(tab1, tab2));
  add("generic-parameter difference equation and one-step expansion exact (weight<=3)",
      generic_family());
  add("quadrature orthogonality and norms (n=2 grid 256, n=3 grid 96, under 5min)",
      quadrature_norms(tab1, tab2, 300.0));
  add("detailed balance exact on every move (weight<=6, both ranks)", detailed_balance());
  add("rank-one members match Askey-Wilson and continuous dual q-Hahn recurrences",
      rank_one_oracles());
  add("coefficient tables approach both degenerate engines linearly", limit_continuity(tab1));
  add("scattering factors unimodular, branch roots square, free kernel orthonormal",
      scattering_checks());
  add("boundary weight identity exact at random rational points (n=2 and n=3)",
      rational_identity());
  add("hop and integral commute exactly on indicator columns (weight<=6)", commutator_vanishes());
  add("boundary potential vanishes identically at the closed-chain point (weight<=4)",
      closed_chain_potential());

  bool all = true;
  for (const auto& [label, o] : results) {
    all = all && o.pass;
    std::printf("%s — %s%s%s\n", o.pass ? "PASS" : "FAIL", label.c_str(),
                o.detail.empty() ? "" : ": ", o.detail.c_str());
  }
  std::printf("%d/%zu criteria pass in %s\n", static_cast<int>(std::count_if(
                  results.begin(), results.end(), [](const auto& r) { return r.second.pass; })),
              results.size(), secs(seconds_since(t_all)).c_str());
  return all ? 0 : 1;
}
