#include "qwire/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "qwire/detail/rk45.hpp"
#include "qwire/error.hpp"

namespace qwire {

namespace {

constexpr double kInvPhi = 0.6180339887498949;

/// Simpson weights for m (odd) uniform points with spacing h.
std::vector<double> simpson_weights(int m, double h) {
  if (m < 3 || m % 2 == 0) throw InvalidArgument("Simpson quadrature needs an odd sample count >= 3");
  std::vector<double> w(m);
  for (int j = 0; j < m; ++j) w[j] = (j == 0 || j == m - 1) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
  for (double& v : w) v *= h / 3.0;
  return w;
}

/// Runs fn(i) for i in [0, count) on `threads` workers; the first exception is rethrown.
template <class Fn>
void parallel_for(int count, int threads, Fn&& fn) {
  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, std::max(1, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int i = w; i < count; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

CVector hadamard_vec(const CVector& x, const CVector& y) {
  if (x.size() != y.size()) throw DimensionError("hadamard_vec: length mismatch");
  return x.cwiseProduct(y);
}

CMatrix hadamard_mat(const CMatrix& t, const CVector& x) {
  if (t.cols() != x.size()) throw DimensionError("hadamard_mat: size mismatch");
  return t * x.asDiagonal();
}

std::vector<FundamentalPair> fundamental_system(const QuantumDomain& d, double lambda,
                                                const OdeOptions& opts) {
  std::vector<FundamentalPair> fps;
  fps.reserve(d.intervals.size());
  for (const Interval& iv : d.intervals) fps.push_back(fundamental_solutions(iv, lambda, opts));
  return fps;
}

std::vector<FundamentalPair> conditioned_system(const QuantumDomain& d, double lambda,
                                                const OdeOptions& opts) {
  std::vector<FundamentalPair> fps;
  fps.reserve(d.intervals.size());
  for (const Interval& iv : d.intervals) fps.push_back(conditioned_solutions(iv, lambda, opts));
  return fps;
}

SpectralMatrix spectral_matrix(const UnitaryBC& u, const std::vector<FundamentalPair>& fps) {
  const int n = u.n();
  if (static_cast<int>(fps.size()) != n)
    throw DimensionError("spectral_matrix: need one fundamental pair per interval");
  for (const auto& fp : fps)
    if (fp.lambda != fps.front().lambda)
      throw InvalidArgument("spectral_matrix: fundamental pairs at different lambda");

  const CMatrix id = CMatrix::Identity(n, n);
  const CMatrix u11 = u.block(1, 1), u12 = u.block(1, 2), u21 = u.block(2, 1),
                u22 = u.block(2, 2);
  SpectralMatrix sm;
  sm.lambda = fps.front().lambda;
  sm.m.resize(2 * n, 2 * n);
  // row scale from term magnitudes, so rows that cancel at a root are not blown up
  Eigen::MatrixXd mag = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int s = 0; s < 2; ++s) {
    CVector lp(n), lm(n), rp(n), rm(n);
    for (int k = 0; k < n; ++k) {
      lp[k] = fps[k].psi_l_plus(s);
      lm[k] = fps[k].psi_l_minus(s);
      rp[k] = fps[k].psi_r_plus(s);
      rm[k] = fps[k].psi_r_minus(s);
    }
    sm.m.block(0, s * n, n, n) = hadamard_mat(id, lm) - hadamard_mat(u11, lp) - hadamard_mat(u12, rp);
    sm.m.block(n, s * n, n, n) = hadamard_mat(id, rm) - hadamard_mat(u21, lp) - hadamard_mat(u22, rp);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        mag(i, s * n + j) = (i == j ? std::abs(lm[j]) : 0.0) + std::abs(u11(i, j) * lp[j]) +
                            std::abs(u12(i, j) * rp[j]);
        mag(n + i, s * n + j) = (i == j ? std::abs(rm[j]) : 0.0) + std::abs(u21(i, j) * lp[j]) +
                                std::abs(u22(i, j) * rp[j]);
      }
  }
  for (const auto& fp : fps) sm.scale_exponent += fp.scale_exponent;

  CMatrix scaled = sm.m;
  for (Eigen::Index r = 0; r < scaled.rows(); ++r) {
    const double norm = mag.row(r).norm();
    if (norm > 0.0) scaled.row(r) /= norm;
  }
  const Eigen::JacobiSVD<CMatrix> svd(scaled, Eigen::ComputeFullV);
  sm.singular_values = svd.singularValues();
  sm.right_vectors = svd.matrixV();
  sm.sigma_min = sm.singular_values[sm.singular_values.size() - 1];
  return sm;
}

Complex spectral_function(const UnitaryBC& u, const QuantumDomain& d, double lambda,
                          const OdeOptions& opts) {
  OdeOptions o = opts;
  o.samples = 0;
  return spectral_matrix(u, fundamental_system(d, lambda, o)).m.determinant();
}

double spectral_sigma_min(const UnitaryBC& u, const QuantumDomain& d, double lambda,
                          const OdeOptions& opts) {
  OdeOptions o = opts;
  o.samples = 0;
  return spectral_matrix(u, conditioned_system(d, lambda, o)).sigma_min;
}

int Spectrum::total_multiplicity() const {
  int total = 0;
  for (const Level& l : levels) total += l.multiplicity;
  return total;
}

Spectrum find_eigenvalues(const UnitaryBC& u, const QuantumDomain& d, double lambda_min,
                          double lambda_max, const SearchOptions& opts) {
  if (!(lambda_min < lambda_max)) throw InvalidArgument("find_eigenvalues: need lambda_min < lambda_max");
  if (opts.grid < 100) throw InvalidArgument("find_eigenvalues: grid must have at least 100 points");
  if (u.n() != d.size()) throw DimensionError("boundary condition and domain sizes differ");

  const int g = opts.grid;
  std::vector<double> lam(g), sig(g);
  for (int j = 0; j < g; ++j) lam[j] = lambda_min + (lambda_max - lambda_min) * j / (g - 1);
  lam.back() = lambda_max;
  auto sigma = [&](double l) { return spectral_sigma_min(u, d, l, opts.ode); };
  parallel_for(g, opts.threads, [&](int j) { sig[j] = sigma(lam[j]); });

  std::vector<int> minima;
  for (int j = 0; j < g; ++j) {
    const bool left = j == 0 || sig[j] < sig[j - 1];
    const bool right = j == g - 1 || sig[j] <= sig[j + 1];
    if (left && right) minima.push_back(j);
  }

  struct Candidate {
    double lambda, residual;
  };
  std::vector<Candidate> found(minima.size(), {0.0, INFINITY});
  parallel_for(static_cast<int>(minima.size()), opts.threads, [&](int i) {
    const int j = minima[i];
    double lo = lam[std::max(j - 1, 0)];
    double hi = lam[std::min(j + 1, g - 1)];
    double best_x = lam[j], best_f = sig[j];
    double x1 = hi - kInvPhi * (hi - lo), x2 = lo + kInvPhi * (hi - lo);
    double f1 = sigma(x1), f2 = sigma(x2);
    const double width = 1e-10 * std::max(1.0, std::fabs(lam[j]));
    while (hi - lo > width) {
      if (f1 < f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - kInvPhi * (hi - lo);
        f1 = sigma(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + kInvPhi * (hi - lo);
        f2 = sigma(x2);
      }
      if (f1 < best_f) best_x = x1, best_f = f1;
      if (f2 < best_f) best_x = x2, best_f = f2;
    }
    found[i] = {best_x, best_f};
  });

  Spectrum spec;
  spec.lambda_min = lambda_min;
  spec.lambda_max = lambda_max;
  spec.options = opts;
  std::vector<Candidate> accepted;
  for (const Candidate& c : found)
    if (c.residual <= opts.sigma_tol) accepted.push_back(c);
  std::sort(accepted.begin(), accepted.end(),
            [](const Candidate& a, const Candidate& b) { return a.lambda < b.lambda; });
  for (std::size_t i = 1; i < accepted.size(); ++i) {
    const double width = 1e-10 * std::max(1.0, std::fabs(accepted[i].lambda));
    if (accepted[i].lambda - accepted[i - 1].lambda <= 10.0 * width)
      throw UnresolvedCluster("two grid minima refine to the same root near lambda=" +
                              std::to_string(accepted[i].lambda) + "; refine the grid");
  }

  for (const Candidate& c : accepted) {
    if (static_cast<int>(spec.levels.size()) >= opts.max_eigs) break;
    OdeOptions o = opts.ode;
    o.samples = 0;
    const SpectralMatrix sm = spectral_matrix(u, conditioned_system(d, c.lambda, o));
    const double cutoff = opts.sigma_tol * std::max(1.0, sm.singular_values[0]);
    int mult = 0;
    for (Eigen::Index k = 0; k < sm.singular_values.size(); ++k)
      if (sm.singular_values[k] <= cutoff) ++mult;
    spec.levels.push_back({c.lambda, std::max(mult, 1), c.residual});
  }
  return spec;
}

Complex l2_inner(const QuantumDomain& d, const std::vector<std::vector<double>>& x,
                 const std::vector<CVector>& f, const std::vector<CVector>& g) {
  Complex total = 0.0;
  for (std::size_t k = 0; k < d.intervals.size(); ++k) {
    const int m = static_cast<int>(x[k].size());
    const auto w = simpson_weights(m, (x[k].back() - x[k].front()) / (m - 1));
    const Interval& iv = d.intervals[k];
    const bool flat = iv.metric.is_constant();
    const double eta0 = flat ? iv.metric.eval(iv.a) : 1.0;
    for (int j = 0; j < m; ++j) {
      const double eta = flat ? eta0 : iv.metric.eval(x[k][j]);
      total += w[j] * std::sqrt(eta) * std::conj(f[k][j]) * g[k][j];
    }
  }
  return total;
}

double l2_norm(const QuantumDomain& d, const std::vector<std::vector<double>>& x,
               const std::vector<CVector>& f) {
  return std::sqrt(std::max(0.0, l2_inner(d, x, f, f).real()));
}

std::vector<Eigenpair> eigenfunctions(const UnitaryBC& u, const QuantumDomain& d, double lambda,
                                      const EigenOptions& opts) {
  const int n = d.size();
  if (u.n() != n) throw DimensionError("boundary condition and domain sizes differ");
  const auto fps = conditioned_system(d, lambda, opts.ode);
  const SpectralMatrix sm = spectral_matrix(u, fps);
  const double cutoff = opts.sigma_tol * std::max(1.0, sm.singular_values[0]);
  std::vector<Eigen::Index> null_cols;
  for (Eigen::Index k = 0; k < sm.singular_values.size(); ++k)
    if (sm.singular_values[k] <= cutoff) null_cols.push_back(k);
  if (null_cols.empty())
    throw NumericError("no null space of M(U, lambda) at lambda=" + std::to_string(lambda));

  std::vector<Eigenpair> out;
  for (Eigen::Index col : null_cols) {
    const CVector v = sm.right_vectors.col(col);
    Eigenpair e;
    e.lambda = lambda;
    e.multiplicity = static_cast<int>(null_cols.size());
    e.coeffs.resize(n, 2);
    e.trace = {CVector(n), CVector(n), CVector(n), CVector(n)};
    for (int k = 0; k < n; ++k) {
      const Complex a1 = v[k], a2 = v[n + k];
      const FundamentalPair& fp = fps[k];
      // canonical coefficients are the value and slope at the left end
      e.coeffs(k, 0) = a1 * fp.basis[0].value_a + a2 * fp.basis[1].value_a;
      e.coeffs(k, 1) = a1 * fp.basis[0].deriv_a + a2 * fp.basis[1].deriv_a;
      e.x.push_back(fp.sample_x);
      e.samples.push_back(a1 * fp.samples[0] + a2 * fp.samples[1]);
      e.trace.psi_l[k] = a1 * fp.psi_l(0) + a2 * fp.psi_l(1);
      e.trace.psi_r[k] = a1 * fp.psi_r(0) + a2 * fp.psi_r(1);
      e.trace.dpsi_l[k] = a1 * fp.dpsi_l(0) + a2 * fp.dpsi_l(1);
      e.trace.dpsi_r[k] = a1 * fp.dpsi_r(0) + a2 * fp.dpsi_r(1);
    }
    out.push_back(std::move(e));
  }

  // Gram-Schmidt within the cluster; coefficients and traces follow the samples.
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const Complex p = l2_inner(d, out[j].x, out[j].samples, out[i].samples);
      for (int k = 0; k < n; ++k) out[i].samples[k] -= p * out[j].samples[k];
      out[i].coeffs -= p * out[j].coeffs;
      out[i].trace.psi_l -= p * out[j].trace.psi_l;
      out[i].trace.psi_r -= p * out[j].trace.psi_r;
      out[i].trace.dpsi_l -= p * out[j].trace.dpsi_l;
      out[i].trace.dpsi_r -= p * out[j].trace.dpsi_r;
    }
    const double norm = l2_norm(d, out[i].x, out[i].samples);
    if (!(norm > 0.0)) throw NumericError("eigenfunction with zero norm");
    // Fix the phase: the largest-magnitude sample becomes real positive.
    Complex peak = 0.0;
    for (const CVector& s : out[i].samples)
      for (Eigen::Index j = 0; j < s.size(); ++j)
        if (std::abs(s[j]) > std::abs(peak)) peak = s[j];
    const Complex factor = std::abs(peak) > 0.0 ? std::conj(peak) / std::abs(peak) / norm
                                                : Complex(1.0 / norm);
    for (CVector& s : out[i].samples) s *= factor;
    out[i].coeffs *= factor;
    out[i].trace.psi_l *= factor;
    out[i].trace.psi_r *= factor;
    out[i].trace.dpsi_l *= factor;
    out[i].trace.dpsi_r *= factor;
  }
  return out;
}

double eigen_boundary_residual(const UnitaryBC& u, const Eigenpair& e) {
  const CVector psi = e.trace.psi();
  const CVector dpsi = e.trace.dpsi();
  const double size = std::sqrt(psi.squaredNorm() + dpsi.squaredNorm());
  return asorey_residual(u, psi, dpsi) / std::max(size, 1e-300);
}

std::vector<std::vector<double>> sample_grid(const QuantumDomain& d, int samples) {
  if (samples < 3 || samples % 2 == 0)
    throw InvalidArgument("sample grid needs an odd number of points, at least 3");
  std::vector<std::vector<double>> x;
  for (const Interval& iv : d.intervals) {
    std::vector<double> xs(samples);
    for (int j = 0; j < samples; ++j) xs[j] = iv.a + (iv.b - iv.a) * j / (samples - 1);
    xs.back() = iv.b;
    x.push_back(std::move(xs));
  }
  return x;
}

EvolveResult evolve(const UnitaryBC& u, const QuantumDomain& d, const Spectrum& spectrum,
                    const std::vector<CVector>& initial, const std::vector<double>& times,
                    const EvolveOptions& opts) {
  const int m = opts.eigen.ode.samples;
  if (static_cast<int>(initial.size()) != d.size())
    throw DimensionError("evolve: need initial samples for every interval");
  for (const CVector& s : initial)
    if (s.size() != m) throw DimensionError("evolve: initial samples must match the eigenfunction grid");

  std::vector<Eigenpair> modes;
  for (const Level& level : spectrum.levels) {
    if (static_cast<int>(modes.size()) >= opts.max_modes) break;
    for (Eigenpair& e : eigenfunctions(u, d, level.lambda, opts.eigen)) {
      if (static_cast<int>(modes.size()) >= opts.max_modes) break;
      modes.push_back(std::move(e));
    }
  }

  EvolveResult r;
  r.times = times;
  r.x = sample_grid(d, m);

  // Symmetric (Lowdin) orthonormalization of the modes in the quadrature inner
  // product, so the discrete propagator is exactly unitary.
  const auto count = static_cast<Eigen::Index>(modes.size());
  CMatrix gram(count, count);
  for (Eigen::Index i = 0; i < count; ++i)
    for (Eigen::Index j = i; j < count; ++j) {
      gram(i, j) = l2_inner(d, r.x, modes[i].samples, modes[j].samples);
      gram(j, i) = std::conj(gram(i, j));
    }
  if (count > 0) {
    r.orthonormality_defect = (gram - CMatrix::Identity(count, count)).cwiseAbs().maxCoeff();
    const Eigen::SelfAdjointEigenSolver<CMatrix> es(gram);
    if (es.eigenvalues().minCoeff() < 0.5)
      throw NumericError("evolve: eigenfunctions are far from orthonormal");
    const CMatrix inv_sqrt = es.eigenvectors() *
                             es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                             es.eigenvectors().adjoint();
    std::vector<std::vector<CVector>> fixed(modes.size());
    for (Eigen::Index j = 0; j < count; ++j) {
      fixed[j].assign(d.size(), CVector::Zero(m));
      for (Eigen::Index i = 0; i < count; ++i)
        for (int k = 0; k < d.size(); ++k) fixed[j][k] += inv_sqrt(i, j) * modes[i].samples[k];
    }
    for (Eigen::Index j = 0; j < count; ++j) modes[j].samples = std::move(fixed[j]);
  }

  for (const Eigenpair& e : modes) {
    r.lambdas.push_back(e.lambda);
    r.coefficients.push_back(l2_inner(d, r.x, e.samples, initial));
  }

  auto synthesize = [&](double t) {
    std::vector<CVector> state(d.size());
    for (int k = 0; k < d.size(); ++k) state[k] = CVector::Zero(m);
    for (std::size_t i = 0; i < modes.size(); ++i) {
      const Complex c = std::polar(1.0, -t * modes[i].lambda) * r.coefficients[i];
      for (int k = 0; k < d.size(); ++k) state[k] += c * modes[i].samples[k];
    }
    return state;
  };

  const std::vector<CVector> projected = synthesize(0.0);
  std::vector<CVector> diff(d.size());
  for (int k = 0; k < d.size(); ++k) diff[k] = initial[k] - projected[k];
  r.truncation_residual = l2_norm(d, r.x, diff);
  r.projected_norm = l2_norm(d, r.x, projected);
  for (double t : times) {
    auto state = synthesize(t);
    r.norm_drift = std::max(r.norm_drift, std::fabs(l2_norm(d, r.x, state) - r.projected_norm));
    r.states.push_back(std::move(state));
  }
  return r;
}

DeficiencyReport deficiency_indices(const QuantumDomain& d, bool verify) {
  if (d.intervals.empty()) throw InvalidArgument("domain has no intervals");
  DeficiencyReport report;
  report.n_plus = report.n_minus = 2 * d.size();
  if (!verify) return report;

  int plus = 0, minus = 0;
  for (const Interval& iv : d.intervals) {
    const Coefficients coef(iv);
    for (double sign : {1.0, -1.0}) {
      // Psi = u + i w for two canonical solutions of H Psi = (sign i) Psi:
      //   Psi'' = 2 eta (V - sign i) Psi + eta'/(2 eta) Psi'.
      using S = detail::State<8>;
      auto rhs = [&](double x, const S& y) {
        const double eta = coef.metric(x);
        const Complex q = 2.0 * eta * (coef.potential(x) - sign * kI);
        const double drift = coef.metric_derivative(x) / (2.0 * eta);
        S out{};
        for (int s = 0; s < 2; ++s) {
          const Complex psi(y[4 * s], y[4 * s + 1]);
          const Complex dpsi(y[4 * s + 2], y[4 * s + 3]);
          const Complex ddpsi = q * psi + drift * dpsi;
          out[4 * s] = dpsi.real();
          out[4 * s + 1] = dpsi.imag();
          out[4 * s + 2] = ddpsi.real();
          out[4 * s + 3] = ddpsi.imag();
        }
        return out;
      };
      std::array<double, 2> norm2{0.0, 0.0};
      auto on_step = [&](double x0, const S& y0, const S&, double x1, S& y1, S&) {
        const double w0 = std::sqrt(coef.metric(x0)), w1 = std::sqrt(coef.metric(x1));
        for (int s = 0; s < 2; ++s) {
          const double a0 = y0[4 * s] * y0[4 * s] + y0[4 * s + 1] * y0[4 * s + 1];
          const double a1 = y1[4 * s] * y1[4 * s] + y1[4 * s + 1] * y1[4 * s + 1];
          norm2[s] += 0.5 * (x1 - x0) * (w0 * a0 + w1 * a1);
        }
      };
      detail::Rk45Options ro;
      ro.rel_tol = 1e-9;
      ro.abs_tol = 1e-12;
      ro.initial_step = 1e-3 * iv.length();
      const S end = detail::integrate_rk45<8>(rhs, iv.a, iv.b, S{1, 0, 0, 0, 0, 0, 1, 0}, ro, on_step);
      // Independence: the Wronskian is constant and equals 1 at a.
      const Complex p1(end[0], end[1]), dp1(end[2], end[3]), p2(end[4], end[5]), dp2(end[6], end[7]);
      const Complex wr = (p1 * dp2 - dp1 * p2) / std::sqrt(coef.metric(iv.b));
      int count = 0;
      if (std::abs(wr) > 0.0 && std::isfinite(std::abs(wr)))
        for (double v : norm2)
          if (std::isfinite(v) && v > 0.0) ++count;
      (sign > 0 ? plus : minus) += count;
    }
  }
  report.verified = plus == report.n_plus && minus == report.n_minus;
  return report;
}

}  // namespace qwire
