#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "magneto/quadrature.hpp"

using namespace magneto;

TEST_CASE("smooth integrands") {
    CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(integrate([](double x) { return std::sin(x); }, 0.0, pi) ==
          doctest::Approx(2.0).epsilon(1e-13));
    CHECK(integrate([](double) { return 1.0; }, 2.0, -1.0) ==
          doctest::Approx(-3.0));
    CHECK(integrate([](double x) { return x; }, 1.0, 1.0) == 0.0);
}

TEST_CASE("integrable endpoint singularities") {
    // 1/sqrt(x) on (0, 1]
    CHECK(integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0,
                    {1e-12, 1e-10, 60}) == doctest::Approx(2.0).epsilon(1e-9));
    // log singularity
    CHECK(integrate([](double x) { return std::log(x); }, 0.0, 1.0,
                    {1e-12, 1e-10, 60}) == doctest::Approx(-1.0).epsilon(1e-9));
    // ln^2(1-x), the escape-field profile
    CHECK(integrate([](double x) { double l = std::log(1.0 - x); return l * l; },
                    0.0, 1.0, {1e-12, 1e-10, 60}) ==
          doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("oscillatory integrand") {
    // integral of sin(50 x) over a full number of periods vanishes
    double v = integrate([](double x) { return std::sin(50.0 * x); }, 0.0,
                         2.0 * pi * 50.0 / 50.0);
    CHECK(std::fabs(v) < 1e-10);
}

TEST_CASE("non-integrable singularity reports failure") {
    CHECK_THROWS_AS(integrate([](double x) { return 1.0 / x; }, 0.0, 1.0,
                              {1e-12, 1e-10, 40}),
                    QuadratureError);
    try {
        integrate([](double x) { return 1.0 / x; }, 0.0, 1.0, {1e-12, 1e-10, 40});
    } catch (const QuadratureError& e) {
        CHECK(e.achieved_error > 0.0);  // reports what it managed
    }
}
