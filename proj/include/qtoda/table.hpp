#pragma once

#include <functional>
#include <map>
#include <vector>

#include "qtoda/difference_op.hpp"
#include "qtoda/partition.hpp"
#include "qtoda/polynomial.hpp"

namespace qtoda {

// Eigenpolynomial family built from a triangular operator: basis in linear
// extension order, operator columns on the monomial basis, the diagonal, and
// the monic eigenpolynomials themselves.
struct OperatorTable {
  std::vector<Partition> basis;
  std::map<Partition, InvariantPoly> columns;   // column nu: operator applied to m_nu
  std::map<Partition, Rational> diagonal;
  std::map<Partition, InvariantPoly> polys;     // monic eigenpolynomials
};

// Asserts dominance triangularity of a column and returns its diagonal entry.
inline Rational check_column(const Partition& nu, const InvariantPoly& col) {
  for (const auto& [mu, c] : col.coeffs())
    if (!dominance_leq(mu, nu))
      throw Error("operator not triangular: " + nu.to_string() + " produced " + mu.to_string());
  return col.coeff(nu);
}

// Back-substitution for the monic eigenpolynomial of lambda given triangular
// columns.  Fails when the diagonal is degenerate below lambda.
inline InvariantPoly solve_eigenpoly(const Partition& lambda,
                                     const std::map<Partition, InvariantPoly>& columns,
                                     const std::map<Partition, Rational>& diagonal) {
  std::vector<Partition> down = down_set(lambda);
  std::sort(down.begin(), down.end(), LinExtLess{});
  const Rational d_top = diagonal.at(lambda);
  std::map<Partition, Rational> x;
  x[lambda] = Rational(1);
  for (auto it = down.rbegin(); it != down.rend(); ++it) {
    const Partition& nu = *it;
    if (nu == lambda) continue;
    Rational rhs(0);
    for (const auto& [mu, xmu] : x) rhs += columns.at(mu).coeff(nu) * xmu;
    const Rational gap = d_top - diagonal.at(nu);
    if (gap.is_zero())
      throw Error("degenerate diagonal below " + lambda.to_string() + " at " + nu.to_string());
    x[nu] = rhs / gap;
  }
  InvariantPoly p(lambda.rank());
  for (const auto& [nu, c] : x) p.add_coeff(nu, c);
  return p;
}

// Builds the full table for an operator whose diagonal is known in closed form;
// the computed diagonal is checked against it entry by entry.
inline OperatorTable build_table(
    int rank, int max_weight, const std::function<InvariantPoly(const InvariantPoly&)>& op,
    const std::function<Rational(const Partition&)>& eigenvalue) {
  OperatorTable t;
  t.basis = partitions_up_to_weight(rank, max_weight);
  for (const auto& nu : t.basis) {
    InvariantPoly col = op(InvariantPoly::monomial(nu));
    const Rational d = check_column(nu, col);
    const Rational expect = eigenvalue(nu);
    if (d != expect)
      throw Error("diagonal mismatch at " + nu.to_string() + ": operator gives " + d.to_string() +
                  ", closed form gives " + expect.to_string());
    t.columns.emplace(nu, std::move(col));
    t.diagonal.emplace(nu, d);
  }
  for (const auto& lambda : t.basis)
    t.polys.emplace(lambda, solve_eigenpoly(lambda, t.columns, t.diagonal));
  return t;
}

}  // namespace qtoda
