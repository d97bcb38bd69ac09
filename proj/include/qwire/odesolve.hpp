#pragma once

#include <array>
#include <vector>

#include "qwire/domain.hpp"
#include "qwire/types.hpp"

namespace qwire {

struct OdeOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  /// Dense output points (uniform, endpoints included); 0 disables sampling.
  int samples = 257;
};

/// Values and plain x-derivatives of one basis solution at both endpoints.
struct EndpointData {
  Complex value_a, deriv_a, value_b, deriv_b;
};

/// Basis {Psi^1, Psi^2} of solutions of H Psi = lambda Psi on one interval.
///
/// All stored values are the true solutions times exp(-scale_exponent); the
/// factor is shared by both basis functions.
struct FundamentalPair {
  double lambda = 0.0;
  double a = 0.0, b = 1.0;
  /// eta^{-1/2} at a and b, the factor in the normal-derivative trace.
  double weight_a = 1.0, weight_b = 1.0;
  std::array<EndpointData, 2> basis;
  std::vector<double> sample_x;
  std::array<CVector, 2> samples;
  double scale_exponent = 0.0;

  // Boundary traces of basis function s (0 or 1) with outward normal derivatives.
  Complex psi_l(int s) const { return basis[s].value_a; }
  Complex psi_r(int s) const { return basis[s].value_b; }
  Complex dpsi_l(int s) const { return -weight_a * basis[s].deriv_a; }
  Complex dpsi_r(int s) const { return weight_b * basis[s].deriv_b; }
  Complex psi_l_plus(int s) const { return psi_l(s) + kI * dpsi_l(s); }
  Complex psi_l_minus(int s) const { return psi_l(s) - kI * dpsi_l(s); }
  Complex psi_r_plus(int s) const { return psi_r(s) + kI * dpsi_r(s); }
  Complex psi_r_minus(int s) const { return psi_r(s) - kI * dpsi_r(s); }

  /// p (Psi1 Psi2' - Psi1' Psi2) with p = eta^{-1/2}, at a and at b.
  Complex wronskian_a() const;
  Complex wronskian_b() const;
};

/// eta, eta' and V of one interval, with eta' from a central difference of
/// step 1e-6 (b - a), one-sided at the endpoints.
class Coefficients {
 public:
  explicit Coefficients(const Interval& iv);
  double metric(double x) const { return const_metric_ ? eta0_ : iv_.metric.eval(x); }
  double metric_derivative(double x) const;
  double potential(double x) const { return const_potential_ ? v0_ : iv_.potential.eval(x); }

 private:
  Interval iv_;
  bool const_metric_, const_potential_;
  double eta0_ = 1.0, v0_ = 0.0;
  double step_;
};

/// Canonical basis Psi^1(a)=1, Psi^1'(a)=0, Psi^2(a)=0, Psi^2'(a)=1 of
///   u'' = 2 eta (V - lambda) u + eta'/(2 eta) u'.
FundamentalPair fundamental_solutions(const Interval& iv, double lambda,
                                      const OdeOptions& opts = {});

/// Closed-form pair e^{+i k x}, e^{-i k x} with k = sqrt(2 lambda) for a free
/// interval (eta = 1, V = 0, lambda > 0).
/// A real basis of the same solution space whose endpoint data
/// (u(a), u'(a), u(b), u'(b)) are orthonormal in R^4. Built from the canonical
/// pairs at both ends, so it stays well conditioned when solutions grow or
/// decay exponentially across the interval. scale_exponent is 0.
FundamentalPair conditioned_solutions(const Interval& iv, double lambda,
                                      const OdeOptions& opts = {});

FundamentalPair free_exponential_basis(const Interval& iv, double lambda, int samples = 257);

}  // namespace qwire
