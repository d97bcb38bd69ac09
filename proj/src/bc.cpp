#include "qwire/bc.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "qwire/error.hpp"

namespace qwire {

namespace {

CMatrix identity(Eigen::Index m) { return CMatrix::Identity(m, m); }

double wrap_angle(double a) { return std::remainder(a, 2.0 * kPi); }

}  // namespace

UnitaryBC::UnitaryBC(CMatrix u, double tol) : u_(std::move(u)) {
  if (u_.rows() != u_.cols() || u_.rows() == 0 || u_.rows() % 2 != 0)
    throw DimensionError("boundary matrix must be square with even dimension 2n");
  const double defect = unitarity_defect();
  if (!(defect <= tol))
    throw InvalidArgument("boundary matrix is not unitary (defect " + std::to_string(defect) + ")");
}

CMatrix UnitaryBC::block(int i, int j) const {
  const int m = n();
  return u_.block((i - 1) * m, (j - 1) * m, m, m);
}

double UnitaryBC::unitarity_defect() const {
  return (u_.adjoint() * u_ - identity(u_.rows())).norm();
}

CayleyOperator::CayleyOperator(CMatrix a, double tol) : a_(std::move(a)) {
  if (a_.rows() != a_.cols() || a_.rows() == 0)
    throw InvalidArgument("Cayley operator must be a non-empty square matrix");
  if (!((a_ - a_.adjoint()).norm() <= tol))
    throw InvalidArgument("Cayley operator is not Hermitian");
}

UnitaryBC make_dirichlet(int n) {
  if (n < 1) throw InvalidArgument("need at least one interval");
  return UnitaryBC(-identity(2 * n));
}

UnitaryBC make_neumann(int n) {
  if (n < 1) throw InvalidArgument("need at least one interval");
  return UnitaryBC(identity(2 * n));
}

UnitaryBC cayley_to_unitary(const CayleyOperator& a) {
  const CMatrix& m = a.matrix();
  const CMatrix id = identity(m.rows());
  const CMatrix plus = id + kI * m;
  // (I - iA) and (I + iA)^{-1} commute; solve from the right via the adjoint.
  const CMatrix u = plus.adjoint().partialPivLu().solve((id - kI * m).adjoint()).adjoint();
  return UnitaryBC(u, 1e-8);
}

CayleyOperator unitary_to_cayley(const UnitaryBC& u) {
  const CMatrix& m = u.matrix();
  const Eigen::ComplexEigenSolver<CMatrix> es(m, false);
  const double gap = (es.eigenvalues().array() + 1.0).abs().minCoeff();
  if (gap <= 1e-8)
    throw CayleySingular("-1 is an eigenvalue of U; the boundary condition has no Robin form");
  const CMatrix id = identity(m.rows());
  const CMatrix a = -kI * (id + m).partialPivLu().solve(id - m);
  // Exact Hermitian up to rounding; symmetrize so the invariant holds at 1e-10.
  return CayleyOperator(0.5 * (a + a.adjoint()), 1e-6 * std::max(1.0, a.norm()));
}

int cayley_degeneracy(const UnitaryBC& u, int sign, double angle_tol) {
  if (sign != 1 && sign != -1) throw InvalidArgument("cayley_degeneracy: sign must be +1 or -1");
  const Eigen::ComplexEigenSolver<CMatrix> es(u.matrix(), false);
  const double target = sign == -1 ? kPi : 0.0;
  int count = 0;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const double angle = std::arg(es.eigenvalues()[k]);
    if (std::fabs(wrap_angle(angle - target)) <= angle_tol) ++count;
  }
  return count;
}

CMatrix admissible_subspace(const UnitaryBC& u) {
  // psi + i dpsi = w, psi - i dpsi = U w  =>  psi = (I+U)w/2, dpsi = -i(I-U)w/2.
  // The columns are orthonormal because (I+U)^*(I+U) + (I-U)^*(I-U) = 4I.
  const CMatrix& m = u.matrix();
  const CMatrix id = identity(m.rows());
  CMatrix basis(2 * m.rows(), m.cols());
  basis.topRows(m.rows()) = 0.5 * (id + m);
  basis.bottomRows(m.rows()) = -0.5 * kI * (id - m);
  return basis;
}

double asorey_residual(const UnitaryBC& u, const CVector& psi, const CVector& dpsi) {
  if (psi.size() != u.dim() || dpsi.size() != u.dim())
    throw DimensionError("asorey_residual: boundary vectors must have length 2n");
  return ((psi - kI * dpsi) - u.matrix() * (psi + kI * dpsi)).norm();
}

UnitaryBC make_quasiperiodic(double theta) {
  CMatrix u = CMatrix::Zero(2, 2);
  u(0, 1) = std::polar(1.0, -theta);
  u(1, 0) = std::polar(1.0, theta);
  return UnitaryBC(u);
}

void validate_wire(const WireSpec& spec) {
  const std::size_t m = spec.sigma.size();
  if (m == 0 || m % 2 != 0) throw DimensionError("wire permutation must have length 2n");
  if (spec.beta.size() != m) throw DimensionError("wire phases must have the same length as sigma");
  std::vector<bool> seen(m, false);
  for (int s : spec.sigma) {
    if (s < 0 || static_cast<std::size_t>(s) >= m || seen[s])
      throw InvalidArgument("wire permutation is not a bijection");
    seen[s] = true;
  }
  std::vector<bool> visited(m, false);
  for (std::size_t start = 0; start < m; ++start) {
    if (visited[start]) continue;
    double total = 0.0;
    std::size_t k = start;
    do {
      visited[k] = true;
      total += spec.beta[k];
      k = static_cast<std::size_t>(spec.sigma[k]);
    } while (k != start);
    if (std::fabs(wrap_angle(total)) > 1e-10)
      throw InvalidArgument("wire phases are inconsistent around cycle starting at endpoint " +
                            std::to_string(start + 1));
  }
}

UnitaryBC make_wire(const WireSpec& spec) {
  validate_wire(spec);
  const auto m = static_cast<Eigen::Index>(spec.sigma.size());
  CMatrix u = CMatrix::Zero(m, m);
  std::vector<bool> visited(m, false);
  for (Eigen::Index start = 0; start < m; ++start) {
    if (visited[start]) continue;
    // Walk the cycle; psi_{p_j} = g_j phi with g_{j+1} = e^{-i beta_{p_j}} g_j.
    std::vector<Eigen::Index> members;
    std::vector<Complex> g;
    Complex phase = 1.0;
    Eigen::Index k = start;
    do {
      visited[k] = true;
      members.push_back(k);
      g.push_back(phase);
      phase *= std::polar(1.0, -spec.beta[k]);
      k = spec.sigma[k];
    } while (k != start);
    // Kirchhoff vertex: U = (2/deg) g g^* - I on the cycle's endpoints.
    const double deg = static_cast<double>(members.size());
    for (std::size_t i = 0; i < members.size(); ++i)
      for (std::size_t j = 0; j < members.size(); ++j)
        u(members[i], members[j]) = 2.0 / deg * g[i] * std::conj(g[j]) - (i == j ? 1.0 : 0.0);
  }
  return UnitaryBC(u);
}

WireReport verify_wire(const UnitaryBC& u, const WireSpec& spec, double tol) {
  validate_wire(spec);
  if (static_cast<int>(spec.sigma.size()) != u.dim())
    throw DimensionError("wire spec and boundary matrix differ in dimension");
  const CMatrix basis = admissible_subspace(u);
  const auto m = u.dim();
  WireReport report;
  for (Eigen::Index col = 0; col < basis.cols(); ++col) {
    for (Eigen::Index k = 0; k < m; ++k) {
      const Complex r = basis(k, col) - std::polar(1.0, spec.beta[k]) * basis(spec.sigma[k], col);
      report.max_residual = std::max(report.max_residual, std::abs(r));
    }
  }
  report.constraints_hold = report.max_residual <= tol;
  for (Eigen::Index k = 0; k < m; ++k) {
    if (spec.sigma[k] == k) continue;
    if (basis.row(k).head(basis.cols()).norm() <= tol) report.degenerate = true;
  }
  return report;
}

UnitaryBC make_u2(double theta, Complex alpha, Complex beta) {
  if (std::fabs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-12)
    throw InvalidArgument("make_u2 requires |alpha|^2 + |beta|^2 = 1");
  CMatrix u(2, 2);
  u << alpha, beta, -std::conj(beta), std::conj(alpha);
  return UnitaryBC(std::polar(1.0, theta / 2.0) * u);
}

UnitaryBC compose(const UnitaryBC& u1, const UnitaryBC& u2) {
  if (u1.dim() != u2.dim()) throw DimensionError("compose: boundary matrices differ in dimension");
  return UnitaryBC(u1.matrix() * u2.matrix());
}

}  // namespace qwire
