#pragma once

#include <vector>

#include "qwire/bc.hpp"
#include "qwire/domain.hpp"
#include "qwire/types.hpp"

namespace qwire {

/// Grid eigenproblem K u = lambda B u for H_U on N cells per interval, from the
/// quadratic form 1/2 int eta^{-1/2}|u'|^2 + int V sqrt(eta)|u|^2 - 1/2 <psi, A psi>
/// with midpoint coefficients and lumped (diagonal) mass. Robin data use the
/// Cayley operator A of U; U = -I eliminates the boundary nodes instead.
struct FDProblem {
  int cells = 0;
  bool dirichlet = false;
  CMatrix stiffness;
  RVector mass;
};

/// Dense assembly (for inspection and small cross-checks).
FDProblem fd_assemble(const UnitaryBC& u, const QuantumDomain& d, int cells);

/// k smallest eigenvalues at one resolution, by bisection on the Sylvester
/// inertia of K - mu B (tridiagonal interior plus boundary Schur complement).
std::vector<double> fd_eigenvalues(const UnitaryBC& u, const QuantumDomain& d, int cells, int k);

/// Same eigenvalues from a dense Hermitian eigensolve of the assembled problem.
std::vector<double> fd_eigenvalues_dense(const UnitaryBC& u, const QuantumDomain& d, int cells,
                                         int k);

struct FDSpectrum {
  int cells = 0;
  std::vector<double> coarse;          // N cells
  std::vector<double> fine;            // 2N cells
  std::vector<double> values;          // Richardson extrapolation (4 fine - coarse) / 3
  std::vector<double> error_estimate;  // |coarse - fine| / 3 plus a roundoff floor
};

/// Requires cayley_degeneracy(U, -1) == 0 or U == -I exactly; 200 <= N <= 4000.
FDSpectrum fd_spectrum(const UnitaryBC& u, const QuantumDomain& d, int cells, int k);

/// Ground state -c^2/2 of the symmetric double-Robin well on [0, L] with
/// u'(0) = -kappa u(0), u'(L) = kappa u(L): c tanh(c L / 2) = kappa, kappa L > 2.
double robin_edge_groundstate(double length, double kappa);

}  // namespace qwire
