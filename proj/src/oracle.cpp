#include "qwire/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qwire/error.hpp"

namespace qwire {

namespace {

// Per-interval discretization data.
struct Link {
  double h = 0.0;
  std::vector<double> diag;  // stiffness + potential, nodes 0..N
  std::vector<double> off;   // off[j] couples node j and j+1
  std::vector<double> mass;  // lumped mass, nodes 0..N
};

struct Discretization {
  int cells = 0;
  bool dirichlet = false;
  std::vector<Link> links;
  CMatrix robin;  // A (2n x 2n), empty for Dirichlet
};

Discretization discretize(const UnitaryBC& u, const QuantumDomain& d, int cells) {
  if (cells < 200 || cells > 8000) throw InvalidArgument("finite-difference grids need 200 <= N <= 8000 cells");
  if (u.n() != d.size()) throw DimensionError("boundary condition and domain sizes differ");
  Discretization disc;
  disc.cells = cells;
  const int dim = u.dim();
  if ((u.matrix() + CMatrix::Identity(dim, dim)).norm() <= 1e-14) {
    disc.dirichlet = true;
  } else if (cayley_degeneracy(u, -1) == 0) {
    disc.robin = unitary_to_cayley(u).matrix();
  } else {
    throw InvalidArgument("oracle supports only U = -I or U without eigenvalue -1");
  }
  for (const Interval& iv : d.intervals) {
    Link link;
    link.h = iv.length() / cells;
    link.diag.assign(cells + 1, 0.0);
    link.mass.assign(cells + 1, 0.0);
    link.off.assign(cells, 0.0);
    for (int j = 0; j < cells; ++j) {
      const double xm = iv.a + (j + 0.5) * link.h;
      const double c = 0.5 / std::sqrt(iv.metric.eval(xm)) / link.h;
      link.diag[j] += c;
      link.diag[j + 1] += c;
      link.off[j] = -c;
    }
    for (int j = 0; j <= cells; ++j) {
      const double x = j == cells ? iv.b : iv.a + j * link.h;
      const double w = (j == 0 || j == cells ? 0.5 : 1.0) * link.h * std::sqrt(iv.metric.eval(x));
      link.mass[j] = w;
      link.diag[j] += w * iv.potential.eval(x);
    }
    disc.links.push_back(std::move(link));
  }
  return disc;
}

// Number of eigenvalues of (K, B) below mu.
int count_below(const Discretization& disc, double mu) {
  const int n = static_cast<int>(disc.links.size());
  const int interior = disc.cells - 1;  // nodes 1..N-1
  int negatives = 0;
  CMatrix schur;
  if (!disc.dirichlet) schur = CMatrix::Zero(2 * n, 2 * n);
  std::vector<double> dvals(interior), lvals(interior), z(interior);

  for (int k = 0; k < n; ++k) {
    const Link& link = disc.links[k];
    // LDL^T of the interior tridiagonal block.
    for (int i = 0; i < interior; ++i) {
      const int node = i + 1;
      double t = link.diag[node] - mu * link.mass[node];
      if (i > 0) {
        lvals[i] = link.off[node - 1] / dvals[i - 1];
        t -= lvals[i] * link.off[node - 1];
      }
      if (t == 0.0) t = -1e-300;
      dvals[i] = t;
      if (t < 0.0) ++negatives;
    }
    if (disc.dirichlet) continue;

    auto solve_unit = [&](int at) {
      std::vector<double> x(interior, 0.0);
      std::fill(z.begin(), z.end(), 0.0);
      z[at] = 1.0;
      for (int i = 1; i < interior; ++i) z[i] -= lvals[i] * z[i - 1];
      for (int i = 0; i < interior; ++i) x[i] = z[i] / dvals[i];
      for (int i = interior - 2; i >= 0; --i) x[i] -= lvals[i + 1] * x[i + 1];
      return x;
    };
    const std::vector<double> g_first = solve_unit(0);
    const std::vector<double> g_last = solve_unit(interior - 1);
    const double cl = link.off[0];
    const double cr = link.off[disc.cells - 1];
    const int l = k, r = n + k;
    schur(l, l) += link.diag[0] - mu * link.mass[0] - cl * cl * g_first[0];
    schur(r, r) += link.diag[disc.cells] - mu * link.mass[disc.cells] -
                   cr * cr * g_last[interior - 1];
    schur(l, r) -= cl * cr * g_first[interior - 1];
    schur(r, l) -= cl * cr * g_last[0];
  }
  if (disc.dirichlet) return negatives;
  schur -= 0.5 * disc.robin;
  schur = 0.5 * (schur + schur.adjoint()).eval();
  const Eigen::SelfAdjointEigenSolver<CMatrix> es(schur, Eigen::EigenvaluesOnly);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()[i] < 0.0) ++negatives;
  return negatives;
}

// Gershgorin bound on the spectral radius of M^{-1} H; bisection on the inertia
// count cannot resolve eigenvalues much below eps times this.
double radius_bound(const Discretization& disc) {
  double rho = 0.0;
  for (const Link& link : disc.links)
    for (int j = 0; j <= disc.cells; ++j) {
      double row = std::fabs(link.diag[j]);
      if (j > 0) row += std::fabs(link.off[j - 1]);
      if (j < disc.cells) row += std::fabs(link.off[j]);
      rho = std::max(rho, row / link.mass[j]);
    }
  if (!disc.dirichlet) rho += disc.robin.cwiseAbs().rowwise().sum().maxCoeff() /
                              (0.5 * disc.links.front().h);
  return rho;
}

}  // namespace

FDProblem fd_assemble(const UnitaryBC& u, const QuantumDomain& d, int cells) {
  const Discretization disc = discretize(u, d, cells);
  const int n = d.size();
  const int per = disc.dirichlet ? cells - 1 : cells + 1;
  const int first = disc.dirichlet ? 1 : 0;
  FDProblem p;
  p.cells = cells;
  p.dirichlet = disc.dirichlet;
  p.stiffness = CMatrix::Zero(n * per, n * per);
  p.mass = RVector::Zero(n * per);
  for (int k = 0; k < n; ++k) {
    const Link& link = disc.links[k];
    for (int i = 0; i < per; ++i) {
      const int node = first + i;
      p.stiffness(k * per + i, k * per + i) = link.diag[node];
      p.mass[k * per + i] = link.mass[node];
      if (i + 1 < per) {
        p.stiffness(k * per + i, k * per + i + 1) = link.off[node];
        p.stiffness(k * per + i + 1, k * per + i) = link.off[node];
      }
    }
  }
  if (!disc.dirichlet) {
    auto boundary_node = [&](int b) { return b < n ? b * per : (b - n) * per + cells; };
    for (int i = 0; i < 2 * n; ++i)
      for (int j = 0; j < 2 * n; ++j)
        p.stiffness(boundary_node(i), boundary_node(j)) -= 0.5 * disc.robin(i, j);
  }
  return p;
}

std::vector<double> fd_eigenvalues_dense(const UnitaryBC& u, const QuantumDomain& d, int cells,
                                         int k) {
  const FDProblem p = fd_assemble(u, d, cells);
  const RVector s = p.mass.cwiseSqrt().cwiseInverse();
  const CMatrix h = s.asDiagonal() * p.stiffness * s.asDiagonal();
  const Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  const int count = std::min<int>(k, static_cast<int>(es.eigenvalues().size()));
  return {es.eigenvalues().data(), es.eigenvalues().data() + count};
}

std::vector<double> fd_eigenvalues(const UnitaryBC& u, const QuantumDomain& d, int cells, int k) {
  if (k < 1) throw InvalidArgument("fd_eigenvalues: need k >= 1");
  const Discretization disc = discretize(u, d, cells);
  double lo = -1.0, hi = 1.0;
  while (count_below(disc, lo) > 0) lo = 2.0 * lo - 1.0;
  while (count_below(disc, hi) < k) hi = 2.0 * hi + 1.0;
  std::vector<double> out;
  for (int i = 0; i < k; ++i) {
    double a = lo, b = hi;
    for (int it = 0; it < 200 && b - a > 1e-14 * std::max(1.0, std::fabs(a)); ++it) {
      const double mid = 0.5 * (a + b);
      if (count_below(disc, mid) > i) b = mid;
      else a = mid;
    }
    out.push_back(0.5 * (a + b));
  }
  return out;
}

FDSpectrum fd_spectrum(const UnitaryBC& u, const QuantumDomain& d, int cells, int k) {
  if (cells < 200 || cells > 4000) throw InvalidArgument("fd_spectrum needs 200 <= N <= 4000");
  FDSpectrum s;
  s.cells = cells;
  s.coarse = fd_eigenvalues(u, d, cells, k);
  s.fine = fd_eigenvalues(u, d, 2 * cells, k);
  // roundoff floor of the fine level, amplified by the extrapolation weights (4 + 1) / 3
  const double floor = 10.0 * 5.0 / 3.0 * std::numeric_limits<double>::epsilon() *
                       radius_bound(discretize(u, d, 2 * cells));
  for (int i = 0; i < k; ++i) {
    s.values.push_back((4.0 * s.fine[i] - s.coarse[i]) / 3.0);
    s.error_estimate.push_back(std::fabs(s.coarse[i] - s.fine[i]) / 3.0 + floor);
  }
  return s;
}

double robin_edge_groundstate(double length, double kappa) {
  if (!(kappa > 0.0) || !(kappa * length > 2.0))
    throw InvalidArgument("robin_edge_groundstate needs kappa > 0 and kappa L > 2");
  auto f = [&](double c) { return c * std::tanh(0.5 * c * length) - kappa; };
  double lo = 0.5 * kappa, hi = 2.0 * kappa;
  if (!(f(lo) < 0.0 && f(hi) > 0.0)) throw NumericError("robin_edge_groundstate: no root in bracket");
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  const double c = 0.5 * (lo + hi);
  return -0.5 * c * c;
}

}  // namespace qwire
