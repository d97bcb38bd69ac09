#include <doctest.h>

#include <cmath>

#include "qwire/error.hpp"
#include "qwire/oracle.hpp"
#include "qwire/spectral.hpp"
#include "support.hpp"

using namespace qwire;

TEST_CASE("oracle: assembled problem is Hermitian with positive mass") {
  const QuantumDomain d = test::free_interval(0, 2, "x^2");
  for (int trial = 0; trial < 3; ++trial) {
    const FDProblem p = fd_assemble(UnitaryBC(test::generic_u2()), d, 200);
    CHECK((p.stiffness - p.stiffness.adjoint()).norm() <= 1e-12 * p.stiffness.norm());
    CHECK(p.mass.minCoeff() > 0.0);
  }
  const FDProblem dp = fd_assemble(make_dirichlet(1), d, 200);
  CHECK(dp.dirichlet);
  CHECK(dp.stiffness.rows() == 199);
}

TEST_CASE("oracle: dirichlet and neumann closed forms") {
  const QuantumDomain d = test::free_interval(0, 2 * kPi);
  const std::vector<double> dir = fd_eigenvalues(make_dirichlet(1), d, 2000, 3);
  CHECK(std::fabs(dir[0] - 0.125) < 1e-5);
  CHECK(std::fabs(dir[2] - 1.125) < 1e-4);

  const FDSpectrum neu = fd_spectrum(make_neumann(1), d, 1000, 4);
  const double exact[] = {0.0, 0.125, 0.5, 1.125};
  for (int k = 0; k < 4; ++k) {
    CHECK(std::fabs(neu.values[k] - exact[k]) <= std::max(neu.error_estimate[k], 1e-12));
    CHECK(neu.error_estimate[k] < 1e-4);
  }
}

TEST_CASE("oracle: second-order convergence") {
  const QuantumDomain d = test::free_interval(0, 2 * kPi);
  for (const UnitaryBC& u : {make_dirichlet(1), make_neumann(1)}) {
    const int first = u.matrix()(0, 0).real() > 0 ? 1 : 0;  // skip the exact zero mode
    const auto c = fd_eigenvalues(u, d, 400, 4), f = fd_eigenvalues(u, d, 800, 4);
    const double exact[] = {0.0, 0.125, 0.5, 1.125};
    const double dexact[] = {0.125, 0.5, 1.125, 2.0};
    for (int k = first; k < 4; ++k) {
      const double e = first ? exact[k] : dexact[k];
      const double ratio = (c[k] - e) / (f[k] - e);
      CHECK(ratio >= 3.5);
      CHECK(ratio <= 4.5);
    }
  }
}

TEST_CASE("oracle: inertia bisection matches the dense eigensolver") {
  const QuantumDomain d = test::free_interval(0, 2 * kPi, "x^2/2");
  const UnitaryBC u(test::generic_u2());
  const auto a = fd_eigenvalues(u, d, 200, 5), b = fd_eigenvalues_dense(u, d, 200, 5);
  for (int k = 0; k < 5; ++k) CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-10));
}

TEST_CASE("oracle: agreement with the spectral solver on random generic U") {
  const QuantumDomain d = test::free_interval(0, 2 * kPi);
  for (int trial = 0; trial < 3; ++trial) {
    const UnitaryBC u(test::generic_u2());
    const FDSpectrum fd = fd_spectrum(u, d, 2000, 5);
    const Spectrum s = find_eigenvalues(u, d, fd.values[0] - 1.0, fd.values[4] + 0.5);
    std::vector<double> flat;
    for (const Level& l : s.levels)
      for (int m = 0; m < l.multiplicity; ++m) flat.push_back(l.lambda);
    REQUIRE(flat.size() >= 5);
    for (int k = 0; k < 5; ++k) {
      CHECK(std::fabs(flat[k] - fd.values[k]) <= fd.error_estimate[k]);
      CHECK(fd.error_estimate[k] <= 1e-3);
    }
  }
}

TEST_CASE("oracle: unsupported and invalid input") {
  const QuantumDomain d = test::free_interval(0, 1);
  CMatrix mixed = CMatrix::Identity(2, 2);
  mixed(0, 0) = -1.0;
  CHECK_THROWS_AS(fd_spectrum(UnitaryBC(mixed), d, 200, 2), InvalidArgument);
  CHECK_THROWS_AS(fd_spectrum(make_neumann(1), d, 100, 2), InvalidArgument);
  CHECK_THROWS_AS(fd_spectrum(make_neumann(1), d, 5000, 2), InvalidArgument);
}

TEST_CASE("oracle: robin edge ground state") {
  const double lam = robin_edge_groundstate(kPi, 1.0);
  const double c = std::sqrt(-2 * lam);
  CHECK(std::fabs(c * std::tanh(c * kPi / 2) - 1.0) <= 1e-10);
  CHECK(c == doctest::Approx(test::robin_c(kPi, 1.0)).epsilon(1e-11));
  const double big = robin_edge_groundstate(kPi, 200.0);
  CHECK(std::sqrt(-2 * big) / 200.0 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(robin_edge_groundstate(1.0, 1.0), InvalidArgument);
}
