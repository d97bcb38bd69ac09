#include <doctest.h>

#include "qwire/error.hpp"
#include "qwire/index.hpp"
#include "support.hpp"

using namespace qwire;

namespace {

CMatrix diag_phase(const std::vector<int>& k, double theta) {
  CVector d(static_cast<Eigen::Index>(k.size()));
  for (std::size_t j = 0; j < k.size(); ++j) d[j] = std::polar(1.0, k[j] * theta);
  return d.asDiagonal();
}

// V diag(e^{i(k_j theta + phi_j)}) V*, offsets phi_j keep eigenvalues off -1 at samples
UnitaryCurve loop_with_windings(const std::vector<int>& k, const std::vector<double>& offset,
                                const CMatrix& v, int samples) {
  return sample_curve(
      [&](double theta) {
        CVector d(static_cast<Eigen::Index>(k.size()));
        for (std::size_t j = 0; j < k.size(); ++j) d[j] = std::polar(1.0, k[j] * theta + offset[j]);
        return CMatrix(v * d.asDiagonal() * v.adjoint());
      },
      samples);
}

}  // namespace

TEST_CASE("index: elementary curves") {
  const UnitaryCurve constant = sample_curve([](double) { return CMatrix(CMatrix::Identity(2, 2)); }, 16);
  const EigenangleFlow cf = eigenangle_flow(constant);
  for (const auto& track : cf.tracks) CHECK(track.back() - track.front() == doctest::Approx(0.0));
  CHECK(cayley_index(constant) == 0);
  CHECK(det_winding(constant) == 0);

  // slightly offset so no sample lands exactly on -1
  const UnitaryCurve scalar = sample_curve(
      [](double t) { return CMatrix(std::polar(1.0, t + 0.01) * CMatrix::Identity(2, 2)); }, 64);
  const EigenangleFlow sf = eigenangle_flow(scalar);
  REQUIRE(sf.tracks.size() == 2);
  for (const auto& track : sf.tracks) CHECK(track.back() - track.front() == doctest::Approx(2 * kPi));
  CHECK(cayley_index(scalar) == 2);
  CHECK(det_winding(scalar) == 2);

  const UnitaryCurve big = sample_curve(
      [](double t) { return CMatrix(std::polar(1.0, t + 0.01) * CMatrix::Identity(6, 6)); }, 64);
  CHECK(cayley_index(big) == 6);

  // odd sample count keeps theta = pi off the grid
  const UnitaryCurve one = sample_curve([](double t) { return diag_phase({1, 0}, t); }, 63);
  const EigenangleFlow of = eigenangle_flow(one);
  std::vector<double> winds;
  for (const auto& track : of.tracks) winds.push_back((track.back() - track.front()) / (2 * kPi));
  std::sort(winds.begin(), winds.end());
  CHECK(winds[0] == doctest::Approx(0.0));
  CHECK(winds[1] == doctest::Approx(1.0));
  CHECK(cayley_index(one) == 1);
  CHECK(det_winding(one) == 1);
}

TEST_CASE("index: tracks reproduce the eigenvalues") {
  const CMatrix v = test::haar_unitary(4);
  const UnitaryCurve c = loop_with_windings({2, -1, 0, 1}, {0.1, 0.7, 2.0, -1.2}, v, 200);
  const EigenangleFlow f = eigenangle_flow(c);
  for (std::size_t j = 0; j < c.u.size(); j += 17) {
    for (const auto& track : f.tracks) {
      const Complex z = std::polar(1.0, track[j]);
      const double smallest = (c.u[j] - z * CMatrix::Identity(4, 4)).jacobiSvd().singularValues().minCoeff();
      CHECK(smallest < 1e-8);
    }
  }
}

TEST_CASE("index: resolution and degeneracy errors") {
  const UnitaryCurve coarse = sample_curve([](double t) { return diag_phase({3, 0}, t); }, 8);
  CHECK_THROWS_AS(eigenangle_flow(coarse), ResolutionError);
  // e^{i theta} hits -1 exactly at theta = pi, which is a sample for even m
  const UnitaryCurve hit = sample_curve([](double t) { return diag_phase({1, 1}, t); }, 64);
  CHECK_THROWS_AS(cayley_index(hit), NumericError);
}

TEST_CASE("index: curve validation") {
  UnitaryCurve open;
  open.theta = {0.0, kPi, 2 * kPi};
  open.u = {CMatrix::Identity(2, 2), CMatrix::Identity(2, 2), -CMatrix::Identity(2, 2)};
  CHECK_THROWS_AS(open.validate(), InvalidArgument);
  UnitaryCurve bad = open;
  bad.u.back() = CMatrix::Identity(2, 2);
  bad.u[1] = 2.0 * CMatrix::Identity(2, 2);
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("index: cayley index equals det winding on constructed loops") {
  for (int trial = 0; trial < 50; ++trial) {
    const int dim = trial % 2 == 0 ? 2 : 4;
    std::vector<int> k(dim);
    std::vector<double> offset(dim);
    int total = 0;
    for (int j = 0; j < dim; ++j) {
      k[j] = static_cast<int>(std::floor(test::uniform(-3, 4)));
      offset[j] = test::uniform(-kPi, kPi);
      total += k[j];
    }
    const UnitaryCurve c = loop_with_windings(k, offset, test::haar_unitary(dim), 301);
    CHECK(det_winding(c) == total);
    CHECK(cayley_index(c) == total);
  }
}

TEST_CASE("index: reparametrization and concatenation") {
  const CMatrix v = test::haar_unitary(2);
  const std::vector<int> k = {2, -1};
  const std::vector<double> off = {0.3, 1.1};
  auto f = [&](double theta) {
    CVector d(2);
    for (int j = 0; j < 2; ++j) d[j] = std::polar(1.0, k[j] * theta + off[j]);
    return CMatrix(v * d.asDiagonal() * v.adjoint());
  };
  const UnitaryCurve c = sample_curve(f, 200);
  // strictly monotone resampling theta -> theta + 0.4 sin(theta)
  const UnitaryCurve warped = sample_curve([&](double s) { return f(s + 0.4 * std::sin(s)); }, 173);
  CHECK(cayley_index(warped) == cayley_index(c));
  CHECK(det_winding(warped) == det_winding(c));

  // pointwise product of two loops based at I
  const CMatrix w = test::haar_unitary(2);
  auto g = [&](double theta) {
    return CMatrix(w * diag_phase({1, 3}, theta) * w.adjoint());
  };
  auto h = [&](double theta) { return CMatrix(v * diag_phase({-2, 1}, theta) * v.adjoint()); };
  const UnitaryCurve gc = sample_curve(g, 400), hc = sample_curve(h, 400);
  const UnitaryCurve prod = sample_curve([&](double t) { return CMatrix(g(t) * h(t)); }, 400);
  CHECK(det_winding(prod) == det_winding(gc) + det_winding(hc));
  CHECK(det_winding(prod) == 3);
}
