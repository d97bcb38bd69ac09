#include "qwire/index.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qwire/error.hpp"

namespace qwire {

namespace {

constexpr double kMaxStep = kPi / 4.0;

double wrap(double a) { return std::remainder(a, 2.0 * kPi); }

std::vector<double> eigenangles(const CMatrix& u) {
  const Eigen::ComplexEigenSolver<CMatrix> es(u, false);
  std::vector<double> out(es.eigenvalues().size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::arg(es.eigenvalues()[k]);
  return out;
}

}  // namespace

void UnitaryCurve::validate() const {
  if (theta.size() < 2 || theta.size() != u.size())
    throw InvalidArgument("curve needs at least two samples with matching angles");
  if (std::fabs(theta.front()) > 1e-12 || std::fabs(theta.back() - 2.0 * kPi) > 1e-9)
    throw InvalidArgument("curve parameter must run from 0 to 2 pi");
  for (std::size_t j = 1; j < theta.size(); ++j)
    if (!(theta[j] > theta[j - 1])) throw InvalidArgument("curve parameter must increase");
  const auto dim = u.front().rows();
  for (const CMatrix& m : u) {
    if (m.rows() != dim || m.cols() != dim) throw DimensionError("curve samples differ in size");
    if ((m.adjoint() * m - CMatrix::Identity(dim, dim)).norm() > 1e-10)
      throw InvalidArgument("curve sample is not unitary");
  }
  if ((u.back() - u.front()).norm() > 1e-10) throw InvalidArgument("curve is not closed");
}

UnitaryCurve sample_curve(const std::function<CMatrix(double)>& f, int m) {
  if (m < 1) throw InvalidArgument("sample_curve needs m >= 1");
  UnitaryCurve c;
  for (int j = 0; j <= m; ++j) {
    const double t = j == m ? 2.0 * kPi : 2.0 * kPi * j / m;
    c.theta.push_back(t);
    c.u.push_back(f(t));
  }
  c.u.back() = c.u.front();
  return c;
}

EigenangleFlow eigenangle_flow(const UnitaryCurve& curve) {
  curve.validate();
  const std::size_t samples = curve.u.size();
  std::vector<double> current = eigenangles(curve.u.front());
  const std::size_t dim = current.size();
  EigenangleFlow flow;
  flow.tracks.assign(dim, std::vector<double>(samples));
  for (std::size_t k = 0; k < dim; ++k) flow.tracks[k][0] = current[k];

  for (std::size_t j = 1; j < samples; ++j) {
    const std::vector<double> next = eigenangles(curve.u[j]);
    struct Pair {
      double dist;
      std::size_t track, eig;
    };
    std::vector<Pair> pairs;
    pairs.reserve(dim * dim);
    for (std::size_t k = 0; k < dim; ++k)
      for (std::size_t e = 0; e < dim; ++e)
        pairs.push_back({std::fabs(wrap(next[e] - flow.tracks[k][j - 1])), k, e});
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
      if (a.dist != b.dist) return a.dist < b.dist;
      return a.track != b.track ? a.track < b.track : a.eig < b.eig;
    });
    std::vector<bool> track_done(dim, false), eig_done(dim, false);
    std::size_t assigned = 0;
    for (const Pair& p : pairs) {
      if (track_done[p.track] || eig_done[p.eig]) continue;
      if (p.dist > kMaxStep)
        throw ResolutionError("eigenangle moved more than pi/4 between samples " +
                              std::to_string(j - 1) + " and " + std::to_string(j) +
                              "; refine the curve sampling");
      const double prev = flow.tracks[p.track][j - 1];
      flow.tracks[p.track][j] = prev + wrap(next[p.eig] - prev);
      track_done[p.track] = eig_done[p.eig] = true;
      if (++assigned == dim) break;
    }
  }
  return flow;
}

int cayley_index(const UnitaryCurve& curve) {
  const EigenangleFlow flow = eigenangle_flow(curve);
  int index = 0;
  for (const auto& track : flow.tracks) {
    for (double a : track)
      if (std::fabs(wrap(a - kPi)) <= 1e-10)
        throw ResolutionError("an eigenvalue sits on -1 at a sample; perturb the theta grid");
    // Number of odd multiples of pi passed upward minus downward.
    const auto sheet = [](double a) { return std::floor((a - kPi) / (2.0 * kPi)); };
    index += static_cast<int>(sheet(track.back()) - sheet(track.front()));
  }
  return index;
}

int det_winding(const UnitaryCurve& curve) {
  curve.validate();
  double total = 0.0;
  Complex prev = curve.u.front().determinant();
  for (std::size_t j = 1; j < curve.u.size(); ++j) {
    const Complex cur = curve.u[j].determinant();
    const double step = std::arg(cur / prev);
    if (std::fabs(step) >= kPi - 1e-12)
      throw ResolutionError("det U changes argument by pi or more between samples " +
                            std::to_string(j - 1) + " and " + std::to_string(j));
    total += step;
    prev = cur;
  }
  return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

}  // namespace qwire
