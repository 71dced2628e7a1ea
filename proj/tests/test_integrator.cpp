#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "magneto/ode.hpp"

using namespace magneto;

TEST_CASE("step_rhs follows the Lorentz force") {
    auto b = FieldModel::radial([](double) { return 2.0; });
    PhaseState s{{0.5, 0.0}, {0.3, -0.1}, 0.0};
    auto [dq, dv] = step_rhs(b, s);
    CHECK(dq.x == doctest::Approx(0.3));
    CHECK(dq.y == doctest::Approx(-0.1));
    CHECK(dv.x == doctest::Approx(2.0 * -0.1));  // b * v2
    CHECK(dv.y == doctest::Approx(2.0 * -0.3));  // -b * v1
}

TEST_CASE("zero field gives straight lines and an exact boundary hit") {
    auto zero = FieldModel::radial([](double) { return 0.0; });
    // q(t) = (-0.5 + t, 0), hits the unit circle at t = 1.5
    PhaseState init{{-0.5, 0.0}, {1.0, 0.0}, 0.0};
    auto res = integrate(zero, init, 10.0, disc_domain(1.0));
    REQUIRE(res.termination == Termination::BoundaryHit);
    CHECK(res.t_exit == doctest::Approx(1.5).epsilon(1e-10));
    CHECK(res.q_exit.x == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::fabs(res.q_exit.y) < 1e-10);
    CHECK(res.v_exit.x == doctest::Approx(1.0).epsilon(1e-12));

    // general line stays on the line
    PhaseState init2{{0.1, -0.2}, {0.2, 0.3}, 0.0};
    auto res2 = integrate(zero, init2, 1.0, disc_domain(1.0));
    REQUIRE(res2.termination == Termination::TimeLimit);
    for (const auto& s : res2.samples) {
        Vec2 expect{0.1 + 0.2 * s.t, -0.2 + 0.3 * s.t};
        CHECK(std::fabs(s.q.x - expect.x) < 1e-10);
        CHECK(std::fabs(s.q.y - expect.y) < 1e-10);
    }
}

TEST_CASE("constant field gives a circular orbit") {
    // For constant b = B0, v rotates clockwise at rate B0 and q traces a
    // circle of radius |v|/B0 around c = q0 + rot90(v0)/B0.
    const double B0 = 4.0;
    auto b = FieldModel::radial([B0](double) { return B0; });
    PhaseState init{{0.1, 0.05}, {0.2, 0.1}, 0.0};
    Vec2 center{init.q.x + init.v.y / B0, init.q.y - init.v.x / B0};
    double radius = init.v.norm() / B0;
    auto res = integrate(b, init, 50.0, disc_domain(1.0));
    REQUIRE(res.termination == Termination::TimeLimit);
    double worst = 0.0;
    for (const auto& s : res.samples) {
        double d = std::hypot(s.q.x - center.x, s.q.y - center.y);
        worst = std::max(worst, std::fabs(d - radius));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("energy and angular momentum are conserved over long runs") {
    auto b = FieldModel::from_expression(FieldKind::Radial, "exp(-r) + 1/2");
    PhaseState init{{0.2, -0.1}, {0.15, 0.2}, 0.0};
    double H0 = energy(init);
    double p0 = angular_momentum(b, init);
    auto res = integrate(b, init, 100.0, disc_domain(1.0));
    REQUIRE(res.termination == Termination::TimeLimit);
    CHECK(res.max_energy_drift < 1e-8);
    double worst_p = 0.0;
    for (const auto& s : res.samples)
        worst_p = std::max(worst_p, std::fabs(angular_momentum(b, s) - p0));
    CHECK(worst_p < 1e-8);
    CHECK(std::fabs(energy(res.samples.back()) - H0) < 1e-8);
}

TEST_CASE("time reversal returns to the start") {
    auto b = FieldModel::from_expression(FieldKind::Radial, "3 - r^2");
    PhaseState init{{0.3, 0.1}, {-0.2, 0.25}, 0.0};
    auto fwd = integrate(b, init, 5.0, disc_domain(1.0));
    REQUIRE(fwd.termination == Termination::TimeLimit);
    PhaseState end = fwd.samples.back();
    // Magnetic time reversal: (q, v, b) -> (q, -v, -b) retraces the orbit.
    auto b_rev = FieldModel::from_expression(FieldKind::Radial, "-(3 - r^2)");
    PhaseState rev{end.q, {-end.v.x, -end.v.y}, 0.0};
    auto bwd = integrate(b_rev, rev, 5.0, disc_domain(1.0));
    REQUIRE(bwd.termination == Termination::TimeLimit);
    PhaseState home = bwd.samples.back();
    CHECK(std::fabs(home.q.x - init.q.x) < 1e-6);
    CHECK(std::fabs(home.q.y - init.q.y) < 1e-6);
    CHECK(std::fabs(home.v.x + init.v.x) < 1e-6);
    CHECK(std::fabs(home.v.y + init.v.y) < 1e-6);
}

TEST_CASE("boundary-launched entries do not terminate immediately") {
    auto b = FieldModel::radial([](double) { return 1.0; });
    // Launched on the boundary moving inward; must travel before exiting.
    PhaseState init{{1.0, 0.0}, {-0.5, 0.3}, 0.0};
    auto res = integrate(b, init, 20.0, disc_domain(1.0));
    if (res.termination == Termination::BoundaryHit) CHECK(res.t_exit > 0.1);
}

TEST_CASE("singular field triggers StepFailure near the blow-up") {
    auto strong = FieldModel::from_expression(FieldKind::Radial, "1/(1-r)^3");
    // Radial launch straight at the singular ring with enough speed that
    // the step size collapses as r -> 1.
    PhaseState init{{0.0, 0.0}, {2.0, 0.0}, 0.0};
    auto res = integrate(strong, init, 10.0, disc_domain(1.0));
    // Either the integrator flags the failure or the orbit is turned before
    // the singularity; both keep the state inside the disc.
    for (const auto& s : res.samples) CHECK(s.q.norm() < 1.0 + 1e-9);
}
