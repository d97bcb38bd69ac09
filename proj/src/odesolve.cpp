#include "qwire/odesolve.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "qwire/detail/rk45.hpp"
#include "qwire/error.hpp"

namespace qwire {

namespace {

constexpr double kOverflowGuard = 1e100;

bool is_literal(const Expr& e, double value) {
  return e.is_constant() && e.eval(0.0) == value;
}

}  // namespace

Complex FundamentalPair::wronskian_a() const {
  return weight_a * (basis[0].value_a * basis[1].deriv_a - basis[0].deriv_a * basis[1].value_a);
}

Complex FundamentalPair::wronskian_b() const {
  return weight_b * (basis[0].value_b * basis[1].deriv_b - basis[0].deriv_b * basis[1].value_b);
}

Coefficients::Coefficients(const Interval& iv)
    : iv_(iv),
      const_metric_(iv.metric.is_constant()),
      const_potential_(iv.potential.is_constant()),
      step_(1e-6 * (iv.b - iv.a)) {
  if (const_metric_) eta0_ = iv.metric.eval(iv.a);
  if (const_potential_) v0_ = iv.potential.eval(iv.a);
}

double Coefficients::metric_derivative(double x) const {
  if (const_metric_) return 0.0;
  const double lo = std::max(iv_.a, x - step_);
  const double hi = std::min(iv_.b, x + step_);
  return (iv_.metric.eval(hi) - iv_.metric.eval(lo)) / (hi - lo);
}

namespace {

// One canonical pair integrated across the interval. With `reversed` the pair is
// canonical at b and integrated towards a (through y = a + b - x); samples and end
// values are then reported in x order.
struct PairRun {
  std::array<double, 4> end{};  // data at the far end: (u1, u1', u2, u2')
  std::array<std::vector<double>, 2> vals;
  double scale = 1.0;
  double scale_exponent = 0.0;
};

PairRun run_pair(const Interval& iv, const Coefficients& coef, double lambda, bool reversed,
                 const std::vector<double>& sample_x, const OdeOptions& opts) {
  using S = detail::State<4>;
  const double a = iv.a, b = iv.b;
  const double sign = reversed ? -1.0 : 1.0;
  auto at = [&](double y) { return reversed ? std::clamp(a + b - y, a, b) : y; };
  auto rhs = [&](double y, const S& st) {
    const double x = at(y);
    const double eta = coef.metric(x);
    const double q = 2.0 * eta * (coef.potential(x) - lambda);
    const double drift = sign * coef.metric_derivative(x) / (2.0 * eta);
    return S{st[1], q * st[0] + drift * st[1], st[3], q * st[2] + drift * st[3]};
  };

  const int m = static_cast<int>(sample_x.size());
  PairRun run;
  if (m > 0) {
    run.vals[0].assign(m, 0.0);
    run.vals[1].assign(m, 0.0);
    run.vals[0][0] = 1.0;
  }
  // samples in y order; sample j in y sits at x index m-1-j when reversed
  auto y_sample = [&](int j) { return reversed ? a + b - sample_x[m - 1 - j] : sample_x[j]; };
  int next = m > 0 ? 1 : 0;

  auto on_step = [&](double x0, const S& y0, const S& f0, double x1, S& y1, S& f1) {
    while (next < m && y_sample(next) <= x1) {
      const double ys = y_sample(next);
      run.vals[0][next] = detail::hermite(x0, y0[0], f0[0], x1, y1[0], f1[0], ys);
      run.vals[1][next] = detail::hermite(x0, y0[2], f0[2], x1, y1[2], f1[2], ys);
      ++next;
    }
    double big = 0.0;
    for (double v : y1) big = std::max(big, std::fabs(v));
    if (big > kOverflowGuard) {
      const double s = 1.0 / kOverflowGuard;
      for (double& v : y1) v *= s;
      for (double& v : f1) v *= s;
      for (auto& column : run.vals)
        for (int j = 0; j < next; ++j) column[j] *= s;
      run.scale *= s;
      run.scale_exponent += std::log(kOverflowGuard);
    }
  };

  detail::Rk45Options ro;
  ro.rel_tol = opts.rel_tol;
  ro.abs_tol = opts.abs_tol;
  // A first step resolving the local wavelength / decay length.
  const double x_start = reversed ? b : a;
  const double rate = std::sqrt(2.0 * coef.metric(x_start) *
                                std::fabs(coef.potential(x_start) - lambda)) + 1.0;
  ro.initial_step = std::min(b - a, 0.05 / rate);
  const S end = detail::integrate_rk45<4>(rhs, a, b, S{1.0, 0.0, 0.0, 1.0}, ro, on_step);
  for (double v : end)
    if (!std::isfinite(v)) throw NumericError("fundamental_solutions: non-finite solution");
  run.end = {end[0], end[1], end[2], end[3]};
  if (m > 0) {
    run.vals[0][m - 1] = end[0];
    run.vals[1][m - 1] = end[2];
    if (reversed)
      for (auto& column : run.vals) std::reverse(column.begin(), column.end());
  }
  return run;
}

std::vector<double> uniform_samples(const Interval& iv, int m) {
  if (m == 0) return {};
  if (m < 2) throw InvalidArgument("fundamental_solutions: need 0 or at least 2 samples");
  std::vector<double> x(m);
  for (int j = 0; j < m; ++j) x[j] = iv.a + (iv.b - iv.a) * j / (m - 1);
  x.back() = iv.b;
  return x;
}

}  // namespace

FundamentalPair fundamental_solutions(const Interval& iv, double lambda, const OdeOptions& opts) {
  if (!(iv.a < iv.b)) throw InvalidArgument("fundamental_solutions: need a < b");
  const Coefficients coef(iv);

  FundamentalPair fp;
  fp.lambda = lambda;
  fp.a = iv.a;
  fp.b = iv.b;
  fp.weight_a = 1.0 / std::sqrt(coef.metric(iv.a));
  fp.weight_b = 1.0 / std::sqrt(coef.metric(iv.b));
  fp.sample_x = uniform_samples(iv, opts.samples);

  const PairRun run = run_pair(iv, coef, lambda, false, fp.sample_x, opts);
  fp.scale_exponent = run.scale_exponent;
  fp.basis[0] = {run.scale, 0.0, run.end[0], run.end[1]};
  fp.basis[1] = {0.0, run.scale, run.end[2], run.end[3]};
  for (int s = 0; s < 2; ++s) {
    fp.samples[s].resize(static_cast<Eigen::Index>(fp.sample_x.size()));
    for (std::size_t j = 0; j < fp.sample_x.size(); ++j) fp.samples[s][j] = run.vals[s][j];
  }
  return fp;
}

FundamentalPair conditioned_solutions(const Interval& iv, double lambda, const OdeOptions& opts) {
  if (!(iv.a < iv.b)) throw InvalidArgument("fundamental_solutions: need a < b");
  const Coefficients coef(iv);

  FundamentalPair fp;
  fp.lambda = lambda;
  fp.a = iv.a;
  fp.b = iv.b;
  fp.weight_a = 1.0 / std::sqrt(coef.metric(iv.a));
  fp.weight_b = 1.0 / std::sqrt(coef.metric(iv.b));
  fp.sample_x = uniform_samples(iv, opts.samples);
  const auto m = static_cast<Eigen::Index>(fp.sample_x.size());

  const PairRun fwd = run_pair(iv, coef, lambda, false, fp.sample_x, opts);
  const PairRun bwd = run_pair(iv, coef, lambda, true, fp.sample_x, opts);

  // Columns: endpoint data (u(a), u'(a), u(b), u'(b)) of all four solutions.
  // Backward derivatives flip sign since w(y) = u(a + b - y).
  Eigen::Matrix4d t;
  t.col(0) << fwd.scale, 0.0, fwd.end[0], fwd.end[1];
  t.col(1) << 0.0, fwd.scale, fwd.end[2], fwd.end[3];
  t.col(2) << bwd.end[0], -bwd.end[1], bwd.scale, 0.0;
  t.col(3) << bwd.end[2], -bwd.end[3], 0.0, -bwd.scale;
  Eigen::Vector4d norms;
  for (int c = 0; c < 4; ++c) {
    norms[c] = t.col(c).norm();
    t.col(c) /= norms[c];
  }
  const Eigen::JacobiSVD<Eigen::Matrix4d> svd(t, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto sv = svd.singularValues();
  if (!(sv[1] > 1e-6 * sv[0]))
    throw NumericError("conditioned_solutions: solution traces do not span two dimensions");
  // basis s = t * coef.col(s) = U.col(s)
  Eigen::Matrix<double, 4, 2> coef_mat;
  for (int s = 0; s < 2; ++s) coef_mat.col(s) = svd.matrixV().col(s) / sv[s];

  for (int s = 0; s < 2; ++s) {
    const Eigen::Vector4d q = svd.matrixU().col(s);
    fp.basis[s] = {q[0], q[1], q[2], q[3]};
    fp.samples[s] = CVector::Zero(m);
    for (Eigen::Index j = 0; j < m; ++j) {
      const double v = coef_mat(0, s) / norms[0] * fwd.vals[0][j] +
                       coef_mat(1, s) / norms[1] * fwd.vals[1][j] +
                       coef_mat(2, s) / norms[2] * bwd.vals[0][j] +
                       coef_mat(3, s) / norms[3] * bwd.vals[1][j];
      fp.samples[s][j] = v;
    }
    if (m > 0) {
      fp.samples[s][0] = q[0];
      fp.samples[s][m - 1] = q[2];
    }
  }
  return fp;
}

FundamentalPair free_exponential_basis(const Interval& iv, double lambda, int samples) {
  if (!is_literal(iv.metric, 1.0) || !is_literal(iv.potential, 0.0))
    throw InvalidArgument("free_exponential_basis needs metric 1 and potential 0");
  if (!(lambda > 0.0)) throw InvalidArgument("free_exponential_basis needs lambda > 0");
  const double k = std::sqrt(2.0 * lambda);
  FundamentalPair fp;
  fp.lambda = lambda;
  fp.a = iv.a;
  fp.b = iv.b;
  for (int s = 0; s < 2; ++s) {
    const double sign = s == 0 ? 1.0 : -1.0;
    const Complex ea = std::polar(1.0, sign * k * iv.a);
    const Complex eb = std::polar(1.0, sign * k * iv.b);
    fp.basis[s] = {ea, sign * kI * k * ea, eb, sign * kI * k * eb};
  }
  if (samples > 0) {
    fp.sample_x.resize(samples);
    for (int s = 0; s < 2; ++s) fp.samples[s].resize(samples);
    for (int j = 0; j < samples; ++j) {
      const double x = samples == 1 ? iv.a : iv.a + (iv.b - iv.a) * j / (samples - 1);
      fp.sample_x[j] = x;
      fp.samples[0][j] = std::polar(1.0, k * x);
      fp.samples[1][j] = std::polar(1.0, -k * x);
    }
  }
  return fp;
}

}  // namespace qwire
