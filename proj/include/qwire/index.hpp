#pragma once

#include <functional>
#include <vector>

#include "qwire/types.hpp"

namespace qwire {

/// Closed sampled loop theta -> U(theta) in U(2n), theta_0 = 0, theta_m = 2 pi.
struct UnitaryCurve {
  std::vector<double> theta;
  std::vector<CMatrix> u;

  /// Throws InvalidArgument when the curve is empty, not closed, or not unitary.
  void validate() const;
};

/// Samples f at m + 1 uniform points 0, 2pi/m, ..., 2pi.
UnitaryCurve sample_curve(const std::function<CMatrix(double)>& f, int m);

/// tracks[k][j]: lifted eigenangle of track k at sample j.
struct EigenangleFlow {
  std::vector<std::vector<double>> tracks;
};

/// Greedy nearest-angle matching across samples; throws ResolutionError when a
/// matched step exceeds pi/4.
EigenangleFlow eigenangle_flow(const UnitaryCurve& curve);

/// Signed number of eigenvalue crossings through -1 (counter-clockwise +1).
/// Throws ResolutionError when an eigenvalue sits on -1 at a sample.
int cayley_index(const UnitaryCurve& curve);

/// Winding number of theta -> det U(theta).
int det_winding(const UnitaryCurve& curve);

}  // namespace qwire
