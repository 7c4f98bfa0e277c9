#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bma/numerics.hpp"

using namespace bma;

TEST_CASE("tanh-sinh quadrature on smooth integrands") {
  double v = integrate([](double x) { return x * x; }, 0.0, 1.0);
  CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-13));

  double w = integrate([](double x) { return std::exp(x); }, -1.0, 2.0);
  CHECK(w == doctest::Approx(std::exp(2.0) - std::exp(-1.0)).epsilon(1e-13));

  CHECK(integrate([](double) { return 1.0; }, 2.0, 2.0) == 0.0);
  CHECK(integrate([](double x) { return x; }, 1.0, 0.0) ==
        doctest::Approx(-0.5).epsilon(1e-13));
}

TEST_CASE("tanh-sinh handles endpoint singularities") {
  double v = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
  CHECK(v == doctest::Approx(2.0).epsilon(1e-11));

  // cube-root singularity like the exterior radial integrand
  double w = integrate([](double x) { return std::cbrt(x); }, 0.0, 1.0);
  CHECK(w == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("bisection finds the smallest root of a flat plateau") {
  // g(t) = max(1 - t, 0): roots are [1, inf); want t = 1
  auto g = [](double t) { return std::max(1.0 - t, 0.0); };
  double r = bisect_nonincreasing(g, 0.0, 10.0, 1e-14);
  CHECK(r == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("second-order IVP integration against cos") {
  // y'' = -y, y(0)=1, y'(0)=0
  auto tr = integrate_ivp2([](double y, double) { return -y; }, 1.0, 0.0, 3.0);
  CHECK_FALSE(tr.blew_up);
  CHECK(tr.eval(1.0) == doctest::Approx(std::cos(1.0)).epsilon(1e-8));
  CHECK(tr.eval(2.5) == doctest::Approx(std::cos(2.5)).epsilon(1e-8));
  CHECK(tr.eval_deriv(1.0) == doctest::Approx(-std::sin(1.0)).epsilon(1e-6));
}
