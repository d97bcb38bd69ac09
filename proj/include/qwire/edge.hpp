#pragma once

#include <optional>
#include <vector>

#include "qwire/bc.hpp"
#include "qwire/domain.hpp"
#include "qwire/spectral.hpp"

namespace qwire {

/// e^{it} U.
UnitaryBC rotate_bc(const UnitaryBC& u, double t);

struct EdgeScanEntry {
  double t = 0.0;
  double lambda_min = 0.0;
  /// Probability of the ground state within 5% of the interval length of
  /// either endpoint (10% of each interval in total).
  double collar_mass = 0.0;
  Eigenpair ground_state;
};

struct EdgeScan {
  UnitaryBC base;
  std::vector<EdgeScanEntry> entries;  // same order as the input t list
  bool all_negative = false;
  /// lambda_min strictly decreases along the (descending) t list.
  bool decreasing = false;
};

struct EdgeScanOptions {
  /// Lower end of the eigenvalue search; default -10 cot^2(t / 2) - 1 for each t.
  std::optional<double> search_floor;
  double search_cap = 1.0;
  SearchOptions search{1000, 1e-7, 4, {1e-10, 1e-12, 0}, 0};
  EigenOptions eigen;
  double collar_fraction = 0.1;
};

/// Lowest eigenvalue of rotate_bc(U, t) for each t in a descending list in (0, pi/2)
/// (any positive list is accepted). Requires cayley_degeneracy(U, -1) >= 1.
/// Throws NumericError when the lowest root lies on the search floor.
EdgeScan edge_scan(const UnitaryBC& u, const QuantumDomain& d, const std::vector<double>& t_list,
                   const EdgeScanOptions& opts = {});

/// Fraction of |psi|^2 sqrt(eta) dx lying within `fraction/2` of an interval
/// length from either endpoint of its interval.
double collar_mass(const QuantumDomain& d, const Eigenpair& e, double fraction);

}  // namespace qwire
