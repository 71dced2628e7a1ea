#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "magneto/chart.hpp"

using namespace magneto;

TEST_CASE("unit circle chart constants") {
    auto chart = build_chart(circle_curve(1.0), 0.5);
    CHECK(chart.length() == doctest::Approx(2.0 * pi).epsilon(1e-12));
    CHECK(chart.K() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(chart.delta() == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(chart.epsilon() == doctest::Approx(0.5));
    for (double s : {0.0, 1.0, 2.5, 6.0})
        CHECK(chart.kappa(s) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::fabs(chart.Kp()) < 1e-4);
}

TEST_CASE("radius-R circle has curvature 1/R") {
    auto chart = build_chart(circle_curve(2.5), 0.1);
    CHECK(chart.length() == doctest::Approx(5.0 * pi).epsilon(1e-12));
    CHECK(chart.K() == doctest::Approx(0.4).epsilon(1e-10));
    CHECK(chart.delta() == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("ellipse arc length matches the elliptic integral") {
    // (2 cos u, sin u): circumference 4*a*E(e) = 8*E(m = 3/4)
    const double E = 1.2110560275684594;  // complete elliptic integral, e^2 = 3/4
    auto chart = build_chart(ellipse_curve(2.0, 1.0), 0.3);
    CHECK(chart.length() == doctest::Approx(8.0 * E).epsilon(1e-8));
    // Curvature extremes: a/b^2 = 2 at the flat-axis ends, b/a^2 = 0.25 at the top
    CHECK(chart.K() == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("kappa matches finite differences of gamma") {
    auto chart = build_chart(ellipse_curve(2.0, 1.0), 0.3);
    const double h = 1e-5;
    for (double s : {0.3, 1.7, 4.2, 7.9}) {
        Vec2 gm = chart.gamma(s - h), g0 = chart.gamma(s), gp = chart.gamma(s + h);
        Vec2 d1{(gp.x - gm.x) / (2 * h), (gp.y - gm.y) / (2 * h)};
        Vec2 d2{(gp.x - 2 * g0.x + gm.x) / (h * h),
                (gp.y - 2 * g0.y + gm.y) / (h * h)};
        double fd_kappa = d1.x * d2.y - d1.y * d2.x;  // unit speed
        CHECK(chart.kappa(s) == doctest::Approx(fd_kappa).epsilon(1e-4));
        CHECK(d1.norm() == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("psi and inverse_psi round trip") {
    for (auto* spec : {"circle", "ellipse"}) {
        auto chart = std::string(spec) == "circle"
                         ? build_chart(circle_curve(1.0), 0.5)
                         : build_chart(ellipse_curve(2.0, 1.0), 0.3);
        for (double n : {0.1 * chart.delta(), 0.5 * chart.delta(),
                         0.8 * chart.delta()}) {
            for (double s : {0.1, 1.3, 3.9, chart.length() - 0.2}) {
                Vec2 q = chart.psi(n, s);
                auto [n2, s2] = chart.inverse_psi(q);
                CHECK(std::fabs(n2 - n) < 1e-10);
                double ds = std::remainder(s2 - s, chart.length());
                CHECK(std::fabs(ds) < 1e-9);
            }
        }
    }
}

TEST_CASE("inverse_psi rejects points outside the collar") {
    auto chart = build_chart(circle_curve(1.0), 0.5);
    CHECK_THROWS_AS(chart.inverse_psi({0.0, 0.0}), OutOfCollar);
    CHECK_THROWS_AS(chart.inverse_psi({1.5, 0.0}), OutOfCollar);
    CHECK_NOTHROW(chart.inverse_psi({0.8, 0.0}));
}

TEST_CASE("to_tubular splits velocity into chart components") {
    auto chart = build_chart(circle_curve(1.0), 0.5);
    // q on the positive x-axis at depth n: normal is -e1, tangent +-e2.
    double n = 0.3;
    Vec2 q{1.0 - n, 0.0};
    Vec2 v{-0.2, 0.5};
    auto ts = chart.to_tubular(q, v);
    CHECK(ts.n == doctest::Approx(n).epsilon(1e-9));
    CHECK(std::fabs(ts.ndot) == doctest::Approx(0.2).epsilon(1e-8));
    // v_s = (1 - n*kappa)*sdot recovers the tangential speed
    CHECK(std::fabs((1.0 - n) * ts.sdot) == doctest::Approx(0.5).epsilon(1e-8));
    // Kinetic energy is chart-independent
    double ke = 0.5 * (ts.ndot * ts.ndot +
                       std::pow((1.0 - ts.n * chart.kappa(ts.s)) * ts.sdot, 2));
    CHECK(ke == doctest::Approx(0.5 * v.norm2()).epsilon(1e-8));
}

TEST_CASE("field_trace on the unit circle") {
    auto chart = build_chart(circle_curve(1.0), 0.5);
    // b = 1/(1-r) pulled to the chart: n = 1 - r, so
    // B(n, s) = -b * (1 - n) = -(1 - n)/n.
    auto strong = FieldModel::from_expression(FieldKind::Radial, "1/(1-r)");
    for (double n : {0.05, 0.2, 0.45})
        CHECK(field_trace(chart, strong, n, 1.0) ==
              doctest::Approx(-(1.0 - n) / n).epsilon(1e-8));

    // Tubular-analytic models pass their trace through unchanged.
    auto t = FieldModel::tubular([](double n, double s) { return n + s; },
                                 chart.length());
    CHECK(field_trace(chart, t, 0.1, 2.0) == doctest::Approx(2.1));

    // Constant Cartesian field: B = -b0 * (1 - n).
    auto b0 = FieldModel::cartesian([](double, double) { return 3.0; });
    CHECK(field_trace(chart, b0, 0.25, 0.7) == doctest::Approx(-2.25).epsilon(1e-10));
}
