#pragma once

#include <vector>

#include "qwire/types.hpp"

namespace qwire {

/// A self-adjoint boundary condition: a unitary 2n x 2n matrix U acting on
/// boundary vectors ordered (left endpoints; right endpoints). Admissible
/// boundary data satisfy psi - i dpsi = U (psi + i dpsi).
class UnitaryBC {
 public:
  /// Throws InvalidArgument unless ||U^dagger U - I||_F <= tol and U is 2n x 2n.
  explicit UnitaryBC(CMatrix u, double tol = 1e-10);

  const CMatrix& matrix() const { return u_; }
  int n() const { return static_cast<int>(u_.rows() / 2); }
  int dim() const { return static_cast<int>(u_.rows()); }

  /// Block (i, j) with i, j in {1, 2}; each block is n x n.
  CMatrix block(int i, int j) const;

  double unitarity_defect() const;

 private:
  CMatrix u_;
};

/// Hermitian boundary operator A of the Robin relation dpsi = A psi.
class CayleyOperator {
 public:
  explicit CayleyOperator(CMatrix a, double tol = 1e-10);
  const CMatrix& matrix() const { return a_; }

 private:
  CMatrix a_;
};

/// Endpoint identification for a quantum wire. Endpoints are numbered
/// 0..2n-1 with 0..n-1 the left ends a_k and n..2n-1 the right ends b_k; the
/// admissible values satisfy psi(x_k) = exp(i beta_k) psi(x_{sigma(k)}).
struct WireSpec {
  std::vector<int> sigma;
  std::vector<double> beta;
};

struct WireReport {
  bool constraints_hold = false;
  /// Some identified endpoint has psi forced to zero, so its constraint holds vacuously.
  bool degenerate = false;
  double max_residual = 0.0;

  bool is_wire() const { return constraints_hold && !degenerate; }
};

UnitaryBC make_dirichlet(int n);
UnitaryBC make_neumann(int n);

/// U = (I - iA)(I + iA)^{-1}.
UnitaryBC cayley_to_unitary(const CayleyOperator& a);

/// A = -i (I - U)(I + U)^{-1}. Throws CayleySingular when min|eig(U) + 1| <= 1e-8.
CayleyOperator unitary_to_cayley(const UnitaryBC& u);

/// Number of eigenvalues of U within angular distance `angle_tol` of -1 (sign = -1)
/// or +1 (sign = +1).
int cayley_degeneracy(const UnitaryBC& u, int sign, double angle_tol = 1e-8);

/// Orthonormal basis (4n x 2n, columns packed as (psi; dpsi)) of the admissible
/// boundary data of U.
CMatrix admissible_subspace(const UnitaryBC& u);

/// || (I - U) psi - i (I + U) dpsi || for one boundary vector pair.
double asorey_residual(const UnitaryBC& u, const CVector& psi, const CVector& dpsi);

/// Single interval with psi_r = e^{i theta} psi_l and u'(b) = e^{i theta} u'(a).
UnitaryBC make_quasiperiodic(double theta);

/// Throws InvalidArgument for a non-bijective sigma or phases that are
/// inconsistent around a cycle of sigma.
void validate_wire(const WireSpec& spec);

/// Each cycle of sigma becomes a Kirchhoff vertex with the given phases; fixed
/// points become Neumann ends.
UnitaryBC make_wire(const WireSpec& spec);

WireReport verify_wire(const UnitaryBC& u, const WireSpec& spec, double tol = 1e-10);

/// U = e^{i theta/2} [[alpha, beta], [-conj(beta), conj(alpha)]].
UnitaryBC make_u2(double theta, Complex alpha, Complex beta);

UnitaryBC compose(const UnitaryBC& u1, const UnitaryBC& u2);

}  // namespace qwire
