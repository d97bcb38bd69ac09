#pragma once

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "qwire/bc.hpp"
#include "qwire/domain.hpp"
#include "qwire/types.hpp"

namespace qwire::test {

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20260101);
  return gen;
}

inline double uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline Complex gaussian_complex() {
  std::normal_distribution<double> n(0.0, 1.0);
  return {n(rng()), n(rng())};
}

// Haar measure: QR of a Ginibre matrix with the phases of diag(R) divided out
inline CMatrix haar_unitary(int dim) {
  CMatrix z(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) z(i, j) = gaussian_complex();
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR();
  for (int j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    q.col(j) *= d / std::abs(d);
  }
  return q;
}

inline CMatrix random_hermitian(int dim, double scale = 1.0) {
  CMatrix z(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) z(i, j) = gaussian_complex();
  return scale * 0.5 * (z + z.adjoint());
}

// unitary with prescribed eigenangles
inline CMatrix unitary_with_angles(const std::vector<double>& angles) {
  const int dim = static_cast<int>(angles.size());
  const CMatrix v = haar_unitary(dim);
  CVector d(dim);
  for (int k = 0; k < dim; ++k) d[k] = std::polar(1.0, angles[k]);
  return v * d.asDiagonal() * v.adjoint();
}

// random U in U(2) whose eigenvalues stay at least `gap` away from -1
inline CMatrix generic_u2(double gap = 0.5) {
  for (;;) {
    CMatrix u = haar_unitary(2);
    Eigen::ComplexEigenSolver<CMatrix> es(u);
    bool ok = true;
    for (int k = 0; k < 2; ++k) ok = ok && std::abs(es.eigenvalues()[k] + 1.0) >= gap;
    if (ok) return u;
  }
}

inline QuantumDomain free_interval(double a, double b, const char* potential = "0") {
  QuantumDomain d;
  d.intervals.push_back(Interval{a, b, Expr::literal(1.0), Expr::parse(potential)});
  return d;
}

// c tanh(cL/2) = kappa by plain bisection, independent of the library routine
inline double robin_c(double length, double kappa) {
  double lo = 1e-12, hi = kappa + 1.0;
  while (hi * std::tanh(hi * length / 2) < kappa) hi *= 2;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (mid * std::tanh(mid * length / 2) < kappa ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace qwire::test
