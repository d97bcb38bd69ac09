#pragma once

#include <vector>

#include "qwire/expr.hpp"
#include "qwire/types.hpp"

namespace qwire {

/// One link [a, b] with metric weight eta(x) > 0 and potential V(x).
struct Interval {
  double a = 0.0;
  double b = 1.0;
  Expr metric = Expr::literal(1.0);
  Expr potential = Expr::literal(0.0);

  double length() const { return b - a; }
};

/// Disjoint union of intervals. Boundary vectors have 2n entries ordered as
/// (a_1..a_n, b_1..b_n).
struct QuantumDomain {
  std::vector<Interval> intervals;

  int size() const { return static_cast<int>(intervals.size()); }
  int boundary_dim() const { return 2 * size(); }
};

/// Boundary data of one function. The normal derivatives are outward and carry
/// the eta^{-1/2} factor:  dpsi_l = -eta(a)^{-1/2} u'(a),  dpsi_r = eta(b)^{-1/2} u'(b).
struct BoundaryTrace {
  CVector psi_l, psi_r, dpsi_l, dpsi_r;

  /// (psi_l; psi_r)
  CVector psi() const;
  /// (dpsi_l; dpsi_r)
  CVector dpsi() const;
};

struct ValidationReport {
  bool valid = true;
  double min_metric = 0.0;
  double max_abs_potential = 0.0;
};

/// Samples eta and V on `grid_points` uniform points per interval.
/// Throws InvalidArgument when eta <= 0, a coefficient is not finite, or a >= b.
ValidationReport validate_domain(const QuantumDomain& d, int grid_points = 64);

/// <psi1, dpsi2> - <dpsi1, psi2>, conjugate-linear in the first slot.
Complex lagrange_form(const CVector& psi1, const CVector& dpsi1, const CVector& psi2,
                      const CVector& dpsi2);

/// Same form with each pair packed as a 4n-vector (psi; dpsi).
Complex lagrange_form(const CVector& t1, const CVector& t2);

}  // namespace qwire
