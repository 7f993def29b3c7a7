#include <cmath>

#include "doctest.h"
#include "odr/errors.hpp"
#include "odr/solvers.hpp"

using namespace odr::solvers;

TEST_CASE("bisect_root finds sqrt(2) to near machine precision") {
  const double r = bisect_root([](double x) { return x * x - 2.0; }, 0.0, 2.0);
  CHECK(std::abs(r - std::sqrt(2.0)) < 1e-14);
}

TEST_CASE("bisect_root requires a sign change") {
  CHECK_THROWS_AS(bisect_root([](double x) { return x * x + 1.0; }, -1.0, 1.0),
                  odr::NumericError);
}

TEST_CASE("golden_min locates a quadratic minimum") {
  const double x = golden_min(
      [](double t) { return (t - 1.3) * (t - 1.3) + 0.25; }, 0.0, 3.0, 1e-10);
  CHECK(std::abs(x - 1.3) < 1e-8);
  CHECK_THROWS_AS(golden_min([](double t) { return t; }, 1.0, 1.0),
                  odr::NumericError);
}

TEST_CASE("gauss_hermite(21) integrates exp(-x^2) moments exactly") {
  const auto nodes = gauss_hermite(21);
  REQUIRE(nodes.size() == 21);
  const double sqrt_pi = std::sqrt(M_PI);

  double m0 = 0.0, m1 = 0.0, m2 = 0.0, m3 = 0.0, m4 = 0.0, m20 = 0.0;
  for (const auto& n : nodes) {
    m0 += n.w;
    m1 += n.w * n.x;
    m2 += n.w * n.x * n.x;
    m3 += n.w * std::pow(n.x, 3);
    m4 += n.w * std::pow(n.x, 4);
    m20 += n.w * std::pow(n.x, 20);
  }
  CHECK(m0 == doctest::Approx(sqrt_pi).epsilon(1e-13));
  CHECK(std::abs(m1) < 1e-13);
  CHECK(m2 == doctest::Approx(0.5 * sqrt_pi).epsilon(1e-13));
  CHECK(std::abs(m3) < 1e-12);
  CHECK(m4 == doctest::Approx(0.75 * sqrt_pi).epsilon(1e-13));
  // integral x^20 e^(-x^2) = sqrt(pi) * 19!! / 2^10; rule is exact to
  // degree 41.
  CHECK(m20 == doctest::Approx(sqrt_pi * 654729075.0 / 1024.0).epsilon(1e-12));
}

TEST_CASE("normal_expectation reproduces E[cos] = exp(-sigma^2/2)") {
  const double sigma = 0.057;
  const double got =
      normal_expectation([](double t) { return std::cos(t); }, sigma);
  CHECK(got == doctest::Approx(std::exp(-0.5 * sigma * sigma)).epsilon(1e-13));

  // sigma = 0 evaluates the integrand at zero; odd integrands vanish.
  CHECK(normal_expectation([](double t) { return t + 2.0; }, 0.0) == 2.0);
  CHECK(std::abs(normal_expectation([](double t) { return t; }, 0.3)) < 1e-14);
}
