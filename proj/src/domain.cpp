#include "qwire/domain.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qwire/error.hpp"

namespace qwire {

CVector BoundaryTrace::psi() const {
  CVector v(psi_l.size() + psi_r.size());
  v << psi_l, psi_r;
  return v;
}

CVector BoundaryTrace::dpsi() const {
  CVector v(dpsi_l.size() + dpsi_r.size());
  v << dpsi_l, dpsi_r;
  return v;
}

ValidationReport validate_domain(const QuantumDomain& d, int grid_points) {
  if (grid_points < 2) throw InvalidArgument("validate_domain needs at least 2 grid points");
  if (d.intervals.empty()) throw InvalidArgument("domain has no intervals");
  ValidationReport report;
  report.min_metric = INFINITY;
  for (std::size_t k = 0; k < d.intervals.size(); ++k) {
    const Interval& iv = d.intervals[k];
    const std::string where = "interval " + std::to_string(k + 1);
    if (!(iv.a < iv.b)) throw InvalidArgument(where + ": need a < b");
    for (int j = 0; j < grid_points; ++j) {
      const double x = iv.a + (iv.b - iv.a) * j / (grid_points - 1);
      double eta = 0.0;
      double v = 0.0;
      try {
        eta = iv.metric.eval(x);
        v = iv.potential.eval(x);
      } catch (const DomainError& e) {
        throw InvalidArgument(where + ": non-finite coefficient at x=" + std::to_string(x) + " (" +
                              e.what() + ")");
      }
      if (!(eta > 0.0))
        throw InvalidArgument(where + ": non-positive metric at x=" + std::to_string(x));
      report.min_metric = std::min(report.min_metric, eta);
      report.max_abs_potential = std::max(report.max_abs_potential, std::fabs(v));
    }
  }
  return report;
}

Complex lagrange_form(const CVector& psi1, const CVector& dpsi1, const CVector& psi2,
                      const CVector& dpsi2) {
  const auto m = psi1.size();
  if (dpsi1.size() != m || psi2.size() != m || dpsi2.size() != m)
    throw DimensionError("lagrange_form: boundary vectors differ in length");
  return psi1.dot(dpsi2) - dpsi1.dot(psi2);
}

Complex lagrange_form(const CVector& t1, const CVector& t2) {
  if (t1.size() != t2.size() || t1.size() % 2 != 0)
    throw DimensionError("lagrange_form: packed traces must have equal even length");
  const auto h = t1.size() / 2;
  return lagrange_form(t1.head(h), t1.tail(h), t2.head(h), t2.tail(h));
}

}  // namespace qwire
