#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "qtoda/koornwinder.hpp"
#include "qtoda/params.hpp"
#include "qtoda/partition.hpp"
#include "qtoda/polynomial.hpp"
#include "qtoda/qseries.hpp"

namespace qtoda {

// Spectral-weight variants: the full two-parameter family, its degeneration at
// vanishing interpolation parameter, and the three-parameter family left when
// the 0th deformation parameter vanishes as well (the per-variable product
// then drops r = 0).
enum class WeightVariant { mk, whittaker, reduced };

inline std::string weight_variant_to_string(WeightVariant v) {
  switch (v) {
    case WeightVariant::mk: return "mk";
    case WeightVariant::whittaker: return "whittaker";
    case WeightVariant::reduced: return "reduced";
  }
  throw Error("weight_variant_to_string: unknown variant");
}

inline WeightVariant weight_variant_from_string(const std::string& s) {
  if (s == "mk") return WeightVariant::mk;
  if (s == "whittaker") return WeightVariant::whittaker;
  if (s == "reduced") return WeightVariant::reduced;
  throw Error("unknown weight variant \"" + s + "\" (expected mk, whittaker or reduced)");
}

// Uniform product grid on the torus [0,2pi)^n.  Every integrand of interest is
// invariant under signed coordinate permutations, so integrals over the open
// fundamental alcove pi > xi_1 > ... > xi_n > 0 equal torus integrals divided
// by the group order 2^n n!.  Nodes are ordered lexicographically in the index
// tuple (k_1,...,k_n); every reduction follows that order.
struct TorusGrid {
  int npoints;  // per dimension
  int rank;

  TorusGrid(int N, int n) : npoints(N), rank(n) {
    if (n < 1) throw Error("TorusGrid: rank must be positive");
    if (N < 8 || N % 2 != 0)
      throw Error("TorusGrid: node count must be even and at least 8");
  }

  long size() const {
    long s = 1;
    for (int j = 0; j < rank; ++j) s *= npoints;
    return s;
  }
  long weyl_order() const {
    long w = 1;
    for (int j = 1; j <= rank; ++j) w *= 2L * j;
    return w;
  }
  double cell() const { return std::pow(2.0 * std::numbers::pi / npoints, rank); }
  void node(long flat, std::span<double> xi) const {
    const double step = 2.0 * std::numbers::pi / npoints;
    for (int j = rank - 1; j >= 0; --j) {
      xi[j] = step * static_cast<double>(flat % npoints);
      flat /= npoints;
    }
  }
};

// Orthogonality weight, nonnegative by construction (squared moduli of
// truncated infinite products) and vanishing on the alcove walls.  Valid for
// interior parameter points, where no denominator factor can reach zero.
inline double weight_eval(std::span<const double> xi, const ParamSet& P, WeightVariant variant,
                          double tol = 1e-17) {
  const int n = P.n();
  if (static_cast<int>(xi.size()) != n) throw Error("weight_eval: rank mismatch");
  const double q = P.q().to_double();
  auto unit = [](double x) { return std::complex<double>(std::cos(x), std::sin(x)); };
  double acc = std::pow(2.0 * std::numbers::pi, -n);
  const int r_first = variant == WeightVariant::reduced ? 1 : 0;
  for (int j = 0; j < n; ++j) {
    acc *= std::norm(qpoch_infinite(unit(2.0 * xi[j]), q, tol));
    for (int r = r_first; r < 4; ++r)
      acc /= std::norm(qpoch_infinite(P.that(r).to_double() * unit(xi[j]), q, tol));
  }
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) {
      const std::complex<double> zs = unit(xi[j] + xi[k]), zd = unit(xi[j] - xi[k]);
      acc *= std::norm(qpoch_infinite(zs, q, tol)) * std::norm(qpoch_infinite(zd, q, tol));
      if (variant == WeightVariant::mk) {
        const double t = P.t().to_double();
        acc /= std::norm(qpoch_infinite(t * zs, q, tol)) * std::norm(qpoch_infinite(t * zd, q, tol));
      }
    }
  return acc;
}

// Inner products <f_i, f_j> over the alcove for a whole family at once, by
// torus quadrature divided through the group order.  One pass over the nodes
// in flat order, one partial sum per pair; the values of invariant
// polynomials at real angles are real, so the sums are accumulated as such.
inline std::vector<std::vector<double>> gram_matrix(const std::vector<InvariantPoly>& fam,
                                                    const TorusGrid& grid, const ParamSet& P,
                                                    WeightVariant variant, double tol = 1e-17) {
  const std::size_t m = fam.size();
  std::vector<LaurentPoly> ex;
  ex.reserve(m);
  for (const auto& f : fam) {
    if (f.rank() != grid.rank) throw Error("gram_matrix: rank mismatch");
    ex.push_back(expand(f));
  }
  std::vector<std::vector<double>> g(m, std::vector<double>(m, 0.0));
  std::vector<std::complex<double>> v(m);
  std::vector<double> xi(grid.rank);
  for (long node = 0, sz = grid.size(); node < sz; ++node) {
    grid.node(node, xi);
    const double w = weight_eval(xi, P, variant, tol);
    if (w == 0.0) continue;
    for (std::size_t i = 0; i < m; ++i) v[i] = ex[i].eval_angles(xi);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i; j < m; ++j) g[i][j] += (v[i] * std::conj(v[j])).real() * w;
  }
  const double scale = grid.cell() / static_cast<double>(grid.weyl_order());
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) {
      g[i][j] *= scale;
      g[j][i] = g[i][j];
    }
  return g;
}

inline double inner_product(const InvariantPoly& f, const InvariantPoly& g, const TorusGrid& grid,
                            const ParamSet& P, WeightVariant variant, double tol = 1e-17) {
  return gram_matrix({f, g}, grid, P, variant, tol)[0][1];
}

// Reachability by unit moves: componentwise steps of at most one, in at most
// l coordinates.  Both arguments live in the cone, so componentwise
// comparison of the sorted tuples captures exactly the admissible moves.
inline bool within_moves(const Partition& from, const Partition& to, int l) {
  if (from.rank() != to.rank()) throw Error("within_moves: rank mismatch");
  int changed = 0;
  for (int j = 0; j < from.rank(); ++j) {
    const long d = to[j] - from[j];
    if (d > 1 || d < -1) return false;
    if (d != 0) ++changed;
  }
  return changed <= l;
}

// Expansion coefficients of (elementary invariant of the given level, times
// the normalized eigenpolynomial of lambda) over the normalized family, by
// quadrature against every candidate in the reachable weight window.  Keyed
// by target; entries on targets farther than l unit moves from lambda vanish
// up to quadrature error, which realizes the orthogonality of the family.
inline std::map<Partition, double> pieri_coefficients_numeric(const ParamSet& P,
                                                              const Partition& lambda, int l,
                                                              const TorusGrid& grid,
                                                              double tol = 1e-17) {
  if (P.mode() != Mode::generic_t)
    throw Error("pieri_coefficients_numeric: generic interpolation parameter required");
  const int n = P.n();
  if (lambda.rank() != n || grid.rank != n)
    throw Error("pieri_coefficients_numeric: rank mismatch");
  if (l < 1 || l > n) throw Error("pieri_coefficients_numeric: level out of range");
  const int window = static_cast<int>(lambda.weight()) + l;
  const OperatorTable tab = mk_table(P, window);
  auto normalized = [&](const Partition& nu) {
    InvariantPoly p = tab.polys.at(nu);
    p *= mk_c_lambda(P, nu);
    return p;
  };
  std::vector<int> om(n, 0);
  for (int j = 0; j < l; ++j) om[j] = 1;
  const LaurentPoly lhs =
      expand(invariant_mul(InvariantPoly::monomial(Partition(om)), normalized(lambda)));
  const std::vector<Partition> targets = partitions_up_to_weight(n, window);
  std::vector<LaurentPoly> tex;
  tex.reserve(targets.size());
  for (const auto& nu : targets) tex.push_back(expand(normalized(nu)));
  std::vector<double> acc(targets.size(), 0.0);
  std::vector<double> xi(n);
  for (long node = 0, sz = grid.size(); node < sz; ++node) {
    grid.node(node, xi);
    const double w = weight_eval(xi, P, WeightVariant::mk, tol);
    if (w == 0.0) continue;
    const std::complex<double> lv = lhs.eval_angles(xi);
    for (std::size_t i = 0; i < targets.size(); ++i)
      acc[i] += (lv * std::conj(tex[i].eval_angles(xi))).real() * w;
  }
  const double scale = grid.cell() / static_cast<double>(grid.weyl_order());
  const double d0 = mk_delta0(P, tol);
  std::map<Partition, double> out;
  for (std::size_t i = 0; i < targets.size(); ++i)
    out.emplace(targets[i], acc[i] * scale * d0 * mk_delta_ratio(P, targets[i]).to_double());
  return out;
}

}  // namespace qtoda
