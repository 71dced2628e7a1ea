// Acceptance gate: one test case and one printed PASS/FAIL line per
// criterion. Tolerances are fixed here on purpose; loosening them is not an
// acceptable way to make this binary green.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>
#include <tuple>
#include <vector>

#include "magneto/certificate.hpp"
#include "magneto/radial.hpp"
#include "magneto/scenario.hpp"

using namespace magneto;

namespace {

void report(int criterion, const char* label, bool ok) {
    std::printf("[ACCEPTANCE %d] %-42s %s\n", criterion, label,
                ok ? "PASS" : "FAIL");
    std::fflush(stdout);
}

struct OdeScatter {
    double omega;
    double t_exit;
    Vec2 v_exit;
    bool hit;
};

OdeScatter ode_scatter(const FieldModel& field, const EntryState& entry,
                       double t_max = 100.0) {
    auto init = entry_to_cartesian(entry);
    auto res = integrate(field, init, t_max, disc_domain(1.0));
    OdeScatter out;
    out.hit = res.termination == Termination::BoundaryHit;
    out.t_exit = res.t_exit;
    out.v_exit = res.v_exit;
    out.omega = wrap_angle(std::atan2(res.v_exit.y, res.v_exit.x) -
                           std::atan2(init.v.y, init.v.x));
    return out;
}

}  // namespace

TEST_CASE("criterion 1: zero-field scattering is the identity") {
    auto zero = FieldModel::radial([](double) { return 0.0; });
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> th(-pi, pi);
    std::uniform_real_distribution<double> vr(-2.0, -0.1);
    std::uniform_real_distribution<double> vt(-1.5, 1.5);
    bool ok = true;
    for (int i = 0; i < 24; ++i) {
        EntryState entry{th(rng), vr(rng), i < 2 ? 0.0 : vt(rng)};
        auto quad = scattering(zero, entry);
        bool a = std::fabs(wrap_angle(quad.omega)) < 1e-9;
        auto ode = ode_scatter(zero, entry);
        bool b = ode.hit && std::fabs(wrap_angle(ode.omega)) < 1e-6;
        CHECK(a);
        CHECK(b);
        ok = ok && a && b;
    }
    report(1, "zero-field omega identity", ok);
}

TEST_CASE("criterion 2: free-motion closed forms") {
    auto zero = FieldModel::radial([](double) { return 0.0; });
    bool ok = true;
    for (auto [vr, vt] : {std::pair{-std::sqrt(3.0), 1.0},
                          std::pair{-1.0, 0.6},
                          std::pair{-0.4, -1.1},
                          std::pair{-2.5, 0.2}}) {
        auto res = scattering(zero, {0.7, vr, vt});
        double speed = std::hypot(vr, vt);
        double rho = std::fabs(vt) / speed;  // impact parameter
        double r_star = rho;
        double t_star = std::sqrt(1.0 - rho * rho) / speed;
        double alpha = 2.0 * (vt >= 0.0 ? 1.0 : -1.0) * std::acos(rho);
        bool a = res.branch == ScatterBranch::TurningPoint &&
                 std::fabs(res.r_star - r_star) < 1e-10 &&
                 std::fabs(res.t_star - t_star) < 1e-10 &&
                 std::fabs(res.alpha - alpha) < 1e-10;
        CHECK(a);
        ok = ok && a;
    }
    // Through the origin: t* = 1/speed, alpha = 0.
    auto head_on = scattering(zero, {0.0, -1.7, 0.0});
    bool b = head_on.branch == ScatterBranch::ThroughOrigin &&
             std::fabs(head_on.t_star - 1.0 / 1.7) < 1e-10 &&
             std::fabs(head_on.alpha) < 1e-10;
    CHECK(b);
    report(2, "free-motion closed forms", ok && b);
}

TEST_CASE("criterion 3: quadrature vs direct integration") {
    // Entry states satisfying the scattering hypothesis over a spread of
    // radial profiles; both the angle and the transit time must agree.
    std::vector<std::pair<const char*, EntryState>> presets = {
        {"0", {0.0, -1.0, 0.4}},
        {"1/2", {0.3, -0.9, 0.5}},
        {"1", {1.1, -1.2, -0.4}},
        {"1 - r", {-0.8, -1.0, 0.5}},
        {"1 - r^2/2", {0.0, -0.8, -0.3}},
        {"exp(-r)", {2.2, -1.4, 0.6}},
        {"exp(-r) + 1/2", {0.5, -1.1, 0.2}},
        {"sin(3*r)/2", {-1.9, -0.7, 0.45}},
        {"r", {0.9, -1.3, -0.5}},
        {"1/2 + r^2/2", {0.0, -1.5, 0.9}},
        {"1 - r^3", {0.4, -0.85, 0.1}},
    };
    bool ok = true;
    int used = 0;
    for (const auto& [expr, entry] : presets) {
        auto field = FieldModel::from_expression(FieldKind::Radial, expr);
        auto quad = scattering(field, entry);
        REQUIRE(quad.branch == ScatterBranch::TurningPoint);
        auto ode = ode_scatter(field, entry);
        REQUIRE(ode.hit);
        bool a = std::fabs(wrap_angle(quad.omega - ode.omega)) < 1e-6;
        bool b = std::fabs(2.0 * quad.t_star - ode.t_exit) < 1e-6;
        CHECK(a);
        CHECK(b);
        ok = ok && a && b;
        ++used;
    }
    CHECK(used >= 10);
    report(3, "scattering cross-validation (11 presets)", ok && used >= 10);
}

TEST_CASE("criterion 4: invariants over long integrations") {
    auto field = FieldModel::from_expression(FieldKind::Radial, "exp(-r) + 1/2");
    PhaseState init{{0.2, -0.1}, {0.15, 0.2}, 0.0};
    double H0 = energy(init);
    double p0 = angular_momentum(field, init);
    auto res = integrate(field, init, 100.0, disc_domain(1.0));
    double drift_p = 0.0;
    for (const auto& s : res.samples)
        drift_p = std::max(drift_p, std::fabs(angular_momentum(field, s) - p0));
    bool ok = res.termination == Termination::TimeLimit &&
              res.max_energy_drift < 1e-8 && drift_p < 1e-8 &&
              std::fabs(energy(res.samples.back()) - H0) < 1e-8;
    CHECK(ok);
    report(4, "energy and p_theta conservation (t = 100)", ok);
}

TEST_CASE("criterion 5: collar bound for B = 1/n") {
    auto chart = build_chart(circle_curve(1.0), 0.5);
    auto field = FieldModel::tubular([](double n, double) { return 1.0 / n; },
                                     chart.length(), true);
    PhaseState init{{0.75, 0.0}, {0.0, 0.1}, 0.0};
    const double T = 1.0;
    auto cert = certify_lower_bound(chart, field, init, T);
    bool a = cert.verdict == CollarVerdict::LowerBound;
    double expect = chart.delta() * std::exp(-cert.C_of_T);
    bool b = a && std::fabs(cert.n_min - expect) < 1e-6 * expect;

    // The same dynamics in Cartesian form: b(q) = -1/(r (1 - r)).
    auto cart = FieldModel::from_expression(FieldKind::Radial, "-1/(r*(1-r))");
    auto res = integrate(cart, init, T, disc_domain(1.0));
    double n_seen = 1.0;
    for (const auto& s : res.samples) n_seen = std::min(n_seen, 1.0 - s.q.norm());
    bool c = res.termination == Termination::TimeLimit && n_seen > cert.n_min;
    CHECK(a);
    CHECK(b);
    CHECK(c);
    report(5, "collar lower bound matches delta*exp(-C)", a && b && c);
}

TEST_CASE("criterion 6: escape constructions reach the boundary in time") {
    auto zero = FieldModel::radial([](double) { return 0.0; });
    auto esc0 = escape_construct(zero, 0.5, 1.0);
    auto res0 = integrate(zero, esc0.init, 1.0, disc_domain(1.0));
    bool a = res0.termination == Termination::BoundaryHit &&
             std::fabs(res0.t_exit - 0.5) < 1e-9;

    auto logsq = FieldModel::from_expression(FieldKind::Radial, "(log(1-r))^2");
    auto escl = escape_construct(logsq, 0.5, 1.0);
    auto resl = integrate(logsq, escl.init, 1.0, disc_domain(1.0));
    bool b = resl.termination == Termination::BoundaryHit &&
             resl.t_exit <= escl.t_escape_bound * (1.0 + 1e-6);
    CHECK(a);
    CHECK(b);
    report(6, "escape within (1 - r0)/v", a && b);
}

TEST_CASE("criterion 7: H1 confinement for b = 2/(1-r)") {
    auto field = FieldModel::from_expression(FieldKind::Radial, "2/(1-r)");
    const double r0 = 0.7, p_theta = 1.0, pr0 = 0.3;
    const double vth0 = (p_theta - field.flux_primitive(r0)) / r0;
    ReducedSystem sys(field, p_theta, 0.5 * (pr0 * pr0 + vth0 * vth0));
    auto cert = radial_confinement(sys);
    bool a = cert.verdict == RadialVerdict::Bound && cert.hypothesis == "H1" &&
             cert.eta < 1.0;

    PhaseState init{{r0, 0.0}, {pr0, vth0}, 0.0};
    auto res = integrate(field, init, 50.0, disc_domain(1.0));
    double rmax = 0.0;
    for (const auto& s : res.samples) rmax = std::max(rmax, s.q.norm());
    bool b = res.termination == Termination::TimeLimit && a &&
             rmax <= cert.eta + 1e-8;
    CHECK(a);
    CHECK(b);
    report(7, "H1 certificate bounds the trajectory", a && b);
}

TEST_CASE("criterion 8: figure presets behave qualitatively") {
    bool ok = true;

    for (const char* name : {"fig1", "fig2"}) {
        Scenario sc = figure_preset(name);
        auto field = sc.make_field();
        auto init = sc.make_initial(field);
        auto res = integrate(field, init, sc.t_max, disc_domain(1.0),
                             sc.integrator_options());
        bool inside = res.termination == Termination::TimeLimit;
        for (const auto& s : res.samples) inside = inside && s.q.norm() < 1.0;
        CHECK(inside);
        ok = ok && inside;
    }

    {
        Scenario sc = figure_preset("fig3-limitcircle");
        auto field = sc.make_field();
        auto init = sc.make_initial(field);
        auto res = integrate(field, init, sc.t_max, disc_domain(1.0),
                             sc.integrator_options());
        bool mono = res.termination == Termination::TimeLimit;
        double prev = 0.0;
        for (const auto& s : res.samples) {
            double r = s.q.norm();
            mono = mono && r < 1.0 && r > prev - 1e-9;
            prev = std::max(prev, r);
        }
        mono = mono && prev > 0.9;  // approaches the limit circle
        CHECK(mono);
        ok = ok && mono;
    }

    {
        Scenario sc = figure_preset("fig4-escaping");
        auto field = sc.make_field();
        auto init = sc.make_initial(field);
        auto res = integrate(field, init, sc.t_max, disc_domain(1.0),
                             sc.integrator_options());
        bool escaped = res.termination == Termination::BoundaryHit;
        CHECK(escaped);
        ok = ok && escaped;
    }

    report(8, "figure presets (confined / limit / escape)", ok);
}

TEST_CASE("criterion 9: chart round trips and velocity bounds") {
    bool ok = true;
    for (int which = 0; which < 2; ++which) {
        auto chart = which == 0 ? build_chart(circle_curve(1.0), 0.5)
                                : build_chart(ellipse_curve(2.0, 1.0), 0.3);
        for (double fn : {0.1, 0.5, 0.9}) {
            for (double fs : {0.05, 0.35, 0.65, 0.95}) {
                double n = fn * chart.delta();
                double s = fs * chart.length();
                Vec2 q = chart.psi(n, s);
                auto [n2, s2] = chart.inverse_psi(q);
                bool a = std::fabs(n2 - n) < 1e-10 &&
                         std::fabs(std::remainder(s2 - s, chart.length())) < 1e-9;
                CHECK(a);
                ok = ok && a;
            }
        }
    }

    // |ndot| <= sqrt(2 H0) along a collar trajectory.
    auto chart = build_chart(circle_curve(1.0), 0.5);
    auto field = FieldModel::from_expression(FieldKind::Radial, "2 - r");
    PhaseState init{{0.8, 0.0}, {0.05, 0.1}, 0.0};
    double vmax = std::sqrt(2.0 * energy(init));
    auto res = integrate(field, init, 10.0, disc_domain(1.0));
    for (const auto& s : res.samples) {
        double n = 1.0 - s.q.norm();
        if (!(n > 1e-6 && n < chart.delta() - 1e-6)) continue;
        auto ts = chart.to_tubular(s.q, s.v);
        bool b = std::fabs(ts.ndot) <= vmax + 1e-10;
        CHECK(b);
        ok = ok && b;
    }
    report(9, "tubular chart round trips / velocity bound", ok);
}
