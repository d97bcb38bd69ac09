#include <doctest.h>

#include <cmath>
#include <string>

#include "qwire/error.hpp"
#include "qwire/odesolve.hpp"
#include "qwire/spectral.hpp"
#include "support.hpp"

using namespace qwire;

namespace {

Interval free_iv(double a, double b) { return Interval{a, b, Expr::literal(1), Expr::literal(0)}; }

Complex modified_wronskian(const FundamentalPair& fp, bool at_b) {
  const auto& p = fp.basis;
  if (at_b) return fp.weight_b * (p[0].value_b * p[1].deriv_b - p[0].deriv_b * p[1].value_b);
  return fp.weight_a * (p[0].value_a * p[1].deriv_a - p[0].deriv_a * p[1].value_a);
}

}  // namespace

TEST_CASE("odesolve: trigonometric and hyperbolic closed forms") {
  const FundamentalPair c = fundamental_solutions(free_iv(0, 1), 0.5);
  CHECK(std::abs(c.basis[0].value_b - std::cos(1.0)) < 1e-9);
  CHECK(std::abs(c.basis[0].deriv_b + std::sin(1.0)) < 1e-9);
  CHECK(std::abs(c.basis[1].value_b - std::sin(1.0)) < 1e-9);
  CHECK(std::abs(c.basis[1].deriv_b - std::cos(1.0)) < 1e-9);
  for (std::size_t j = 0; j < c.sample_x.size(); ++j) {
    CHECK(std::abs(c.samples[0][j] - std::cos(c.sample_x[j])) < 1e-8);
    CHECK(std::abs(c.samples[1][j] - std::sin(c.sample_x[j])) < 1e-8);
  }

  const FundamentalPair h = fundamental_solutions(free_iv(0, 1), -0.5);
  CHECK(std::abs(h.basis[0].value_b - std::cosh(1.0)) < 1e-9);
  CHECK(std::abs(h.basis[1].value_b - std::sinh(1.0)) < 1e-9);
  CHECK(std::abs(h.basis[1].deriv_b - std::cosh(1.0)) < 1e-9);
}

TEST_CASE("odesolve: canonical basis at the left end") {
  const FundamentalPair fp = fundamental_solutions(free_iv(-2, 3), 1.3);
  CHECK(fp.basis[0].value_a == Complex(1.0));
  CHECK(fp.basis[0].deriv_a == Complex(0.0));
  CHECK(fp.basis[1].value_a == Complex(0.0));
  CHECK(fp.basis[1].deriv_a == Complex(1.0));
  CHECK(fp.sample_x.front() == -2.0);
  CHECK(fp.sample_x.back() == 3.0);
  CHECK(fp.sample_x.size() == 257);
}

TEST_CASE("odesolve: Abel identity with a metric and potential") {
  const char* metrics[] = {"1", "1+x^2", "2+sin(x)", "exp(x/3)"};
  const char* potentials[] = {"0", "x^2/2", "cos(3*x)", "1/(1+x^2)"};
  for (const char* m : metrics)
    for (const char* v : potentials)
      for (double lambda : {-3.0, 0.0, 0.7, 6.0}) {
        const Interval iv{0.2, 2.9, Expr::parse(m), Expr::parse(v)};
        const FundamentalPair fp = fundamental_solutions(iv, lambda);
        const Complex wa = modified_wronskian(fp, false), wb = modified_wronskian(fp, true);
        INFO(std::string(m) << " " << v << " " << lambda);
        // growing solutions: W is a difference of huge products, so compare on their scale
        const auto& p = fp.basis;
        const double scale = lambda < 0 ? fp.weight_b * (std::abs(p[0].value_b * p[1].deriv_b) +
                                                         std::abs(p[0].deriv_b * p[1].value_b))
                                        : std::abs(wa);
        CHECK(std::abs(wb - wa) <= 1e-6 * scale);
      }
}

TEST_CASE("odesolve: metric rescaling matches a change of variable") {
  // eta = c^2 constant: u'' = 2c^2(V - lambda)u, so with V = 0, u1 = cos(c k x), k = sqrt(2 lambda)
  const double c = 1.7, lambda = 0.9;
  const Interval iv{0, 1.5, Expr::literal(c * c), Expr::literal(0)};
  const FundamentalPair fp = fundamental_solutions(iv, lambda);
  const double w = c * std::sqrt(2 * lambda);
  CHECK(std::abs(fp.basis[0].value_b - std::cos(w * 1.5)) < 1e-9);
  CHECK(fp.weight_a == doctest::Approx(1 / c));
}

TEST_CASE("odesolve: agreement with the exponential basis") {
  for (double lambda : {0.05, 0.5, 1.3, 4.2}) {
    const Interval iv = free_iv(0, 2 * kPi);
    const FundamentalPair can = fundamental_solutions(iv, lambda, {1e-12, 1e-14, 65});
    const FundamentalPair ex = free_exponential_basis(iv, lambda, 65);
    const double k = std::sqrt(2 * lambda);
    const Complex t[2][2] = {{1.0, 1.0}, {kI * k, -kI * k}};
    for (int s = 0; s < 2; ++s) {
      const Complex vb = t[0][s] * can.basis[0].value_b + t[1][s] * can.basis[1].value_b;
      const Complex db = t[0][s] * can.basis[0].deriv_b + t[1][s] * can.basis[1].deriv_b;
      CHECK(std::abs(vb - ex.basis[s].value_b) <= 1e-8 * std::max(1.0, std::abs(ex.basis[s].value_b)));
      CHECK(std::abs(db - ex.basis[s].deriv_b) <= 1e-8 * std::max(1.0, std::abs(ex.basis[s].deriv_b)));
      for (std::size_t j = 0; j < can.sample_x.size(); ++j) {
        const Complex v = t[0][s] * can.samples[0][j] + t[1][s] * can.samples[1][j];
        CHECK(std::abs(v - ex.samples[s][j]) < 1e-8);
      }
    }
  }
}

TEST_CASE("odesolve: exponential basis traces") {
  const FundamentalPair ex = free_exponential_basis(free_iv(0, 2 * kPi), 0.5);
  CHECK(std::abs(ex.psi_l_plus(0) - 2.0) < 1e-15);
  CHECK(std::abs(ex.psi_l_minus(0)) < 1e-15);
  CHECK_THROWS_AS(free_exponential_basis(free_iv(0, 1), -0.5), InvalidArgument);
  CHECK_THROWS_AS(free_exponential_basis(Interval{0, 1, Expr::parse("1+x"), Expr::literal(0)}, 0.5),
                  InvalidArgument);
}

TEST_CASE("odesolve: tolerance convergence") {
  const Interval iv{0, 3, Expr::parse("1+x^2/4"), Expr::parse("x^2/2")};
  const FundamentalPair a = fundamental_solutions(iv, 2.5, {1e-8, 1e-12, 0});
  const FundamentalPair b = fundamental_solutions(iv, 2.5, {5e-9, 1e-12, 0});
  for (int s = 0; s < 2; ++s) {
    const double scale = std::max(1.0, std::abs(b.basis[s].value_b));
    CHECK(std::abs(a.basis[s].value_b - b.basis[s].value_b) < 10 * 1e-8 * scale);
  }
}

TEST_CASE("odesolve: overflow guard keeps traces finite") {
  const Interval iv{0, 40, Expr::literal(1), Expr::literal(50)};
  const FundamentalPair fp = fundamental_solutions(iv, -10.0, {1e-10, 1e-12, 33});
  CHECK(fp.scale_exponent > 0);
  for (int s = 0; s < 2; ++s) {
    CHECK(std::isfinite(std::abs(fp.basis[s].value_b)));
    CHECK(std::abs(fp.basis[s].value_b) < 1e101);
  }
  // log-magnitude grows like sqrt(2*60)*x
  const double logmag = std::log(std::abs(fp.basis[0].value_b)) + fp.scale_exponent;
  CHECK(logmag == doctest::Approx(std::sqrt(120.0) * 40 - std::log(2.0)).epsilon(1e-6));
}

TEST_CASE("odesolve: basis recombination leaves the zero set unchanged") {
  const QuantumDomain d = test::free_interval(0, 2 * kPi);
  const UnitaryBC u(test::generic_u2());
  OdeOptions o{1e-11, 1e-13, 0};
  for (int trial = 0; trial < 3; ++trial) {
    CMatrix t(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) t(i, j) = test::gaussian_complex();
    Complex ratio0 = 0.0;
    for (double lambda : {0.2, 0.9, 1.7}) {
      auto fps = fundamental_system(d, lambda, o);
      const Complex base = spectral_matrix(u, fps).m.determinant();
      FundamentalPair mixed = fps[0];
      for (int s = 0; s < 2; ++s) {
        auto combo = [&](auto get) { return t(0, s) * get(fps[0].basis[0]) + t(1, s) * get(fps[0].basis[1]); };
        mixed.basis[s].value_a = combo([](const EndpointData& e) { return e.value_a; });
        mixed.basis[s].deriv_a = combo([](const EndpointData& e) { return e.deriv_a; });
        mixed.basis[s].value_b = combo([](const EndpointData& e) { return e.value_b; });
        mixed.basis[s].deriv_b = combo([](const EndpointData& e) { return e.deriv_b; });
      }
      const Complex changed = spectral_matrix(u, {mixed}).m.determinant();
      const Complex ratio = changed / base;
      CHECK(std::abs(ratio - t.determinant()) < 1e-10 * std::abs(t.determinant()));
      if (ratio0 == 0.0) ratio0 = ratio;
    }
  }
}
