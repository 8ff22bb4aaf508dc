#include <cmath>

#include "doctest.h"
#include "hpq/jet.hpp"

using namespace hpq;

TEST_CASE("term counts") {
  CHECK(jet_term_count(1) == 4);
  CHECK(jet_term_count(2) == 10);
  CHECK(jet_term_count(3) == 20);
  CHECK(jet_term_count(5) == 56);
}

TEST_CASE("polynomial derivatives are exact") {
  const double x0 = 0.7, y0 = -1.3, z0 = 2.1;
  const Jet x = Jet::variable(3, 0, x0), y = Jet::variable(3, 1, y0), z = Jet::variable(3, 2, z0);
  // f = x^2 y + 3 x y z + z^3
  const Jet f = x * x * y + 3.0 * x * y * z + z * z * z;
  CHECK(f.value() == doctest::Approx(x0 * x0 * y0 + 3 * x0 * y0 * z0 + z0 * z0 * z0));
  CHECK(f.d1(0) == doctest::Approx(2 * x0 * y0 + 3 * y0 * z0));
  CHECK(f.d1(2) == doctest::Approx(3 * x0 * y0 + 3 * z0 * z0));
  CHECK(f.d2(0, 0) == doctest::Approx(2 * y0));
  CHECK(f.d2(0, 1) == doctest::Approx(2 * x0 + 3 * z0));
  CHECK(f.d2(1, 0) == doctest::Approx(2 * x0 + 3 * z0));
  CHECK(f.d2(2, 2) == doctest::Approx(6 * z0));
  CHECK(f.d3(0, 0, 1) == doctest::Approx(2.0));
  CHECK(f.d3(1, 0, 0) == doctest::Approx(2.0));
  CHECK(f.d3(0, 1, 2) == doctest::Approx(3.0));
  CHECK(f.d3(2, 2, 2) == doctest::Approx(6.0));
  CHECK(f.d3(1, 1, 1) == doctest::Approx(0.0));
}

TEST_CASE("univariate compositions match analytic derivatives") {
  const double a = 0.37;
  const Jet x = Jet::variable(1, 0, a);
  {
    const Jet f = exp(sin(x));
    const double s = std::sin(a), c = std::cos(a), e = std::exp(s);
    CHECK(f.d1(0) == doctest::Approx(c * e).epsilon(1e-13));
    CHECK(f.d2(0, 0) == doctest::Approx((c * c - s) * e).epsilon(1e-13));
    CHECK(f.d3(0, 0, 0) == doctest::Approx((c * c * c - 3 * s * c - c) * e).epsilon(1e-13));
  }
  {
    const Jet f = sqrt(1.0 + x * x);
    const double r = std::sqrt(1 + a * a);
    CHECK(f.d1(0) == doctest::Approx(a / r).epsilon(1e-13));
    CHECK(f.d2(0, 0) == doctest::Approx(1 / (r * r * r)).epsilon(1e-13));
    CHECK(f.d3(0, 0, 0) == doctest::Approx(-3 * a / std::pow(r, 5)).epsilon(1e-13));
  }
  {
    const Jet f = 1.0 / (2.0 + x) + log(x) + cosh(x) * sinh(x) + pow(x, 2.5);
    const double d3 = -6.0 / std::pow(2 + a, 4) + 2.0 / (a * a * a) + 4.0 * std::cosh(2 * a) +
                      2.5 * 1.5 * 0.5 * std::pow(a, -0.5);
    CHECK(f.d3(0, 0, 0) == doctest::Approx(d3).epsilon(1e-12));
  }
}

TEST_CASE("multivariate composition agrees with finite differences") {
  auto fd = [](double x, double y) { return std::exp(x * y) / std::sqrt(2.0 + std::cos(x + 2 * y)); };
  const double x0 = 0.3, y0 = -0.4, h = 1e-3;
  const Jet x = Jet::variable(2, 0, x0), y = Jet::variable(2, 1, y0);
  const Jet f = exp(x * y) / sqrt(2.0 + cos(x + 2.0 * y));
  const double fxy = (fd(x0 + h, y0 + h) - fd(x0 + h, y0 - h) - fd(x0 - h, y0 + h) + fd(x0 - h, y0 - h)) / (4 * h * h);
  CHECK(f.d2(0, 1) == doctest::Approx(fxy).epsilon(1e-5));
  const double fxxy = ((fd(x0 + h, y0 + h) - 2 * fd(x0, y0 + h) + fd(x0 - h, y0 + h)) -
                       (fd(x0 + h, y0 - h) - 2 * fd(x0, y0 - h) + fd(x0 - h, y0 - h))) /
                      (2 * h * h * h);
  CHECK(f.d3(0, 0, 1) == doctest::Approx(fxxy).epsilon(1e-4));
  CHECK(f.d3(1, 0, 0) == f.d3(0, 0, 1));
}

TEST_CASE("constants mix with variables") {
  Jet c;
  c += 2.0;
  const Jet x = Jet::variable(2, 1, 1.5);
  const Jet f = c * x + c;
  CHECK(f.nvar() == 2);
  CHECK(f.value() == doctest::Approx(5.0));
  CHECK(f.d1(1) == doctest::Approx(2.0));
}
