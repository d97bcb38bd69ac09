#pragma once

#include <utility>
#include <vector>

#include "qwire/bc.hpp"
#include "qwire/domain.hpp"
#include "qwire/odesolve.hpp"
#include "qwire/types.hpp"

namespace qwire {

/// (X o Y)_k = X_k Y_k.
CVector hadamard_vec(const CVector& x, const CVector& y);

/// T o X: the matrix with (T o X) Y = T (X o Y); column j is T_j X_j.
CMatrix hadamard_mat(const CMatrix& t, const CVector& x);

/// M(U, lambda) with rows (left block; right block) and columns (A_1; A_2):
///   [ I o psi_{l-}^s - U11 o psi_{l+}^s - U12 o psi_{r+}^s ]
///   [ I o psi_{r-}^s - U21 o psi_{l+}^s - U22 o psi_{r+}^s ]   s = 1, 2.
struct SpectralMatrix {
  double lambda = 0.0;
  CMatrix m;
  /// Singular values of M with every row scaled to unit length (descending).
  /// Row scaling leaves the zero set and the null space unchanged.
  RVector singular_values;
  /// Right singular vectors matching `singular_values`.
  CMatrix right_vectors;
  double sigma_min = 0.0;
  /// Sum over intervals of the overflow rescaling exponents.
  double scale_exponent = 0.0;
};

SpectralMatrix spectral_matrix(const UnitaryBC& u, const std::vector<FundamentalPair>& fps);

/// Fundamental pairs of every interval at lambda.
std::vector<FundamentalPair> fundamental_system(const QuantumDomain& d, double lambda,
                                                const OdeOptions& opts);

/// Well-conditioned pairs (conditioned_solutions) of every interval; used for root
/// finding and eigenfunctions.
std::vector<FundamentalPair> conditioned_system(const QuantumDomain& d, double lambda,
                                                const OdeOptions& opts);

/// det M(U, lambda) from the canonical basis; its zeros are the eigenvalues of H_U.
/// Overflow rescaling multiplies the value by a positive constant.
Complex spectral_function(const UnitaryBC& u, const QuantumDomain& d, double lambda,
                          const OdeOptions& opts = {});

/// Smallest singular value of the row-normalized M(U, lambda).
double spectral_sigma_min(const UnitaryBC& u, const QuantumDomain& d, double lambda,
                          const OdeOptions& opts = {});

struct SearchOptions {
  int grid = 400;
  double sigma_tol = 1e-7;
  int max_eigs = 1000;
  OdeOptions ode{1e-10, 1e-12, 0};
  /// Worker threads for the grid scan; 0 picks hardware concurrency.
  int threads = 0;
};

struct Level {
  double lambda = 0.0;
  int multiplicity = 1;
  double residual = 0.0;
};

struct Spectrum {
  std::vector<Level> levels;  // strictly ascending
  double lambda_min = 0.0, lambda_max = 0.0;
  SearchOptions options;

  int total_multiplicity() const;
};

/// Scans sigma_min(M) on a uniform grid, refines each local minimum by golden
/// section to width 1e-10 max(1, |lambda|) and keeps those with residual <= sigma_tol.
/// Throws UnresolvedCluster when two minima refine to the same root.
Spectrum find_eigenvalues(const UnitaryBC& u, const QuantumDomain& d, double lambda_min,
                          double lambda_max, const SearchOptions& opts = {});

struct Eigenpair {
  double lambda = 0.0;
  int multiplicity = 1;
  /// n x 2 coefficients A_{k,s} on the canonical basis (u1(a)=1, u1'(a)=0; u2(a)=0, u2'(a)=1).
  CMatrix coeffs;
  /// Per interval: sample abscissae and values, normalized in L^2(sqrt(eta) dx).
  std::vector<std::vector<double>> x;
  std::vector<CVector> samples;
  BoundaryTrace trace;
};

struct EigenOptions {
  double sigma_tol = 1e-7;
  OdeOptions ode{1e-11, 1e-13, 257};
};

/// Orthonormal eigenfunctions at an eigenvalue (one per null vector of M).
/// Throws NumericError when M has no numerical null space at lambda.
std::vector<Eigenpair> eigenfunctions(const UnitaryBC& u, const QuantumDomain& d, double lambda,
                                      const EigenOptions& opts = {});

/// Boundary data of an eigenfunction packed against U's Asorey equation,
/// relative to the size of the data.
double eigen_boundary_residual(const UnitaryBC& u, const Eigenpair& e);

/// Composite Simpson inner product <f, g> in L^2(sqrt(eta) dx) over all intervals.
Complex l2_inner(const QuantumDomain& d, const std::vector<std::vector<double>>& x,
                 const std::vector<CVector>& f, const std::vector<CVector>& g);
double l2_norm(const QuantumDomain& d, const std::vector<std::vector<double>>& x,
               const std::vector<CVector>& f);

struct EvolveOptions {
  int max_modes = 64;
  EigenOptions eigen;
};

struct EvolveResult {
  std::vector<double> times;
  std::vector<std::vector<double>> x;
  /// states[t][interval] sampled on x[interval]
  std::vector<std::vector<CVector>> states;
  std::vector<double> lambdas;  // one per mode used
  std::vector<Complex> coefficients;
  double truncation_residual = 0.0;
  double projected_norm = 0.0;
  double norm_drift = 0.0;
  /// max |<Psi_i, Psi_j> - delta_ij| of the modes before symmetric orthonormalization.
  double orthonormality_defect = 0.0;
};

/// Phi(t) = sum_k exp(-i t lambda_k) <Psi_k, Phi> Psi_k over the lowest modes.
/// `initial` is sampled on the eigenfunction grid (ode.samples points per interval).
EvolveResult evolve(const UnitaryBC& u, const QuantumDomain& d, const Spectrum& spectrum,
                    const std::vector<CVector>& initial, const std::vector<double>& times,
                    const EvolveOptions& opts = {});

/// Uniform sample abscissae used by `evolve` for each interval.
std::vector<std::vector<double>> sample_grid(const QuantumDomain& d, int samples);

struct DeficiencyReport {
  int n_plus = 0, n_minus = 0;
  bool verified = false;
};

/// (2n, 2n). With `verify`, integrates H Psi = +-i Psi on every interval and
/// counts independent finite-norm solutions.
DeficiencyReport deficiency_indices(const QuantumDomain& d, bool verify = false);

}  // namespace qwire
