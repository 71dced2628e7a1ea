#include "magneto/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "magneto/certificate.hpp"
#include "magneto/svg.hpp"

namespace magneto {

namespace {

using nlohmann::json;

std::string kind_name(FieldKind k) {
    switch (k) {
        case FieldKind::Radial: return "radial";
        case FieldKind::Cartesian: return "cartesian";
        case FieldKind::TubularAnalytic: return "tubular";
    }
    return "radial";
}

FieldKind kind_from_name(const std::string& s) {
    if (s == "radial") return FieldKind::Radial;
    if (s == "cartesian") return FieldKind::Cartesian;
    if (s == "tubular") return FieldKind::TubularAnalytic;
    throw ConfigError("unknown field kind '" + s + "'");
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file " + path.string());
    out << content;
}

}  // namespace

Scenario Scenario::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    Scenario sc;
    sc.name = j.value("name", "");

    const auto& jf = j.at("field");
    sc.field_kind = kind_from_name(jf.at("kind").get<std::string>());
    sc.field_expr = jf.at("expr").get<std::string>();
    sc.domain_radius = jf.value("domain_radius", 1.0);

    if (j.contains("domain")) {
        const auto& jd = j.at("domain");
        sc.domain_type = jd.value("type", "disc");
        sc.disc_radius = jd.value("radius", 1.0);
        sc.ellipse_a = jd.value("a", 2.0);
        sc.ellipse_b = jd.value("b", 1.0);
        sc.epsilon = jd.value("epsilon", 0.5);
    }

    if (j.contains("initial")) {
        const auto& ji = j.at("initial");
        sc.initial_type = ji.value("type", "cartesian");
        if (ji.contains("q")) sc.q0 = {ji["q"][0].get<double>(), ji["q"][1].get<double>()};
        if (ji.contains("v")) sc.v0 = {ji["v"][0].get<double>(), ji["v"][1].get<double>()};
        sc.r0 = ji.value("r0", 0.5);
        sc.theta0 = ji.value("theta0", 0.0);
        sc.p_r = ji.value("p_r", 0.0);
        sc.p_theta = ji.value("p_theta", 0.0);
        sc.H0 = ji.value("H0", 0.0);
        sc.pr_sign = ji.value("pr_sign", 1);
        sc.theta1 = ji.value("theta1", 0.0);
        sc.v_r = ji.value("v_r", 0.0);
        sc.v_th = ji.value("v_theta", 0.0);
        sc.escape_r0 = ji.value("escape_r0", 0.5);
        sc.escape_v = ji.value("escape_v", 1.0);
    }

    const auto& jt = j.at("task");
    sc.task = jt.at("type").get<std::string>();
    sc.t_max = jt.value("t_max", 100.0);
    sc.horizon_T = jt.value("T", 10.0);
    sc.figure_name = jt.value("name", "");
    if (jt.contains("entries")) {
        for (const auto& e : jt["entries"])
            sc.sweep_entries.push_back({e[0].get<double>(), e[1].get<double>()});
    }
    sc.sweep_parallel = jt.value("parallel", true);

    if (j.contains("tolerances")) {
        const auto& jo = j.at("tolerances");
        sc.tol.rel_tol = jo.value("rel_tol", 1e-10);
        sc.tol.abs_tol = jo.value("abs_tol", 1e-12);
        sc.tol.event_tol = jo.value("event_tol", 1e-10);
        sc.tol.quad_abs_tol = jo.value("quad_abs_tol", 1e-12);
        sc.tol.quad_rel_tol = jo.value("quad_rel_tol", 1e-10);
    }
    return sc;
}

Scenario Scenario::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

std::string Scenario::to_json_text() const {
    json j;
    if (!name.empty()) j["name"] = name;
    j["field"] = {{"kind", kind_name(field_kind)},
                  {"expr", field_expr},
                  {"domain_radius", domain_radius}};
    j["domain"] = {{"type", domain_type}, {"radius", disc_radius},
                   {"a", ellipse_a},      {"b", ellipse_b},
                   {"epsilon", epsilon}};
    json ji;
    ji["type"] = initial_type;
    ji["q"] = {q0.x, q0.y};
    ji["v"] = {v0.x, v0.y};
    ji["r0"] = r0;
    ji["theta0"] = theta0;
    ji["p_r"] = p_r;
    ji["p_theta"] = p_theta;
    ji["H0"] = H0;
    ji["pr_sign"] = pr_sign;
    ji["theta1"] = theta1;
    ji["v_r"] = v_r;
    ji["v_theta"] = v_th;
    ji["escape_r0"] = escape_r0;
    ji["escape_v"] = escape_v;
    j["initial"] = ji;
    json jt;
    jt["type"] = task;
    jt["t_max"] = t_max;
    jt["T"] = horizon_T;
    if (!figure_name.empty()) jt["name"] = figure_name;
    if (!sweep_entries.empty()) {
        json entries = json::array();
        for (const auto& e : sweep_entries) entries.push_back({e.p_theta, e.H0});
        jt["entries"] = entries;
        jt["parallel"] = sweep_parallel;
    }
    j["task"] = jt;
    j["tolerances"] = {{"rel_tol", tol.rel_tol},
                       {"abs_tol", tol.abs_tol},
                       {"event_tol", tol.event_tol},
                       {"quad_abs_tol", tol.quad_abs_tol},
                       {"quad_rel_tol", tol.quad_rel_tol}};
    return j.dump(2);
}

FieldModel Scenario::make_field() const {
    return FieldModel::from_expression(field_kind, field_expr, domain_radius);
}

PhaseState Scenario::make_initial(const FieldModel& field) const {
    if (initial_type == "cartesian") return {q0, v0, 0.0};
    if (initial_type == "entry")
        return entry_to_cartesian({theta1, v_r, v_th});
    if (initial_type == "escape")
        return escape_construct(field, escape_r0, escape_v, quad_tol()).init;

    // Radial flavors need v_theta = (p_theta - G(r0))/r0.
    double G0 = field.flux_primitive(r0, quad_tol());
    double v_theta = (p_theta - G0) / r0;
    double pr = p_r;
    if (initial_type == "radial-energy") {
        ReducedSystem sys(field, p_theta, H0, quad_tol());
        double d = 2.0 * (H0 - sys.V(r0));
        if (d < 0.0)
            throw ConfigError("radial-energy initial data: V(r0) > H0");
        pr = pr_sign * std::sqrt(d);
    } else if (initial_type != "radial") {
        throw ConfigError("unknown initial type '" + initial_type + "'");
    }
    double c = std::cos(theta0), s = std::sin(theta0);
    return {{r0 * c, r0 * s},
            {pr * c - v_theta * s, pr * s + v_theta * c},
            0.0};
}

IntegratorOptions Scenario::integrator_options() const {
    IntegratorOptions o;
    o.rel_tol = tol.rel_tol;
    o.abs_tol = tol.abs_tol;
    o.event_tol = tol.event_tol;
    return o;
}

std::string trajectory_csv(const FieldModel& field,
                           const std::vector<PhaseState>& samples) {
    std::string out = "t,q1,q2,v1,v2,energy,ptheta\n";
    const bool radial = field.kind() == FieldKind::Radial;
    char line[256];
    for (const auto& s : samples) {
        if (radial) {
            std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                          s.t, s.q.x, s.q.y, s.v.x, s.v.y, energy(s),
                          angular_momentum(field, s));
        } else {
            std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,\n",
                          s.t, s.q.x, s.q.y, s.v.x, s.v.y, energy(s));
        }
        out += line;
    }
    return out;
}

Scenario figure_preset(const std::string& name) {
    Scenario sc;
    sc.name = name;
    if (name == "fig1") {
        // Strong boundary field with a non-integrable tangential derivative.
        sc.field_kind = FieldKind::Cartesian;
        sc.field_expr =
            "1/(1-sqrt(q1^2+q2^2)) + sin(arcsin(q2)/(1-sqrt(q1^2+q2^2)))"
            " + 5*q1^3 - 7*q2";
        sc.initial_type = "cartesian";
        sc.q0 = {0.2, 0.0};
        sc.v0 = {0.35, 0.25};
        sc.task = "simulate";
        sc.t_max = 200.0;
    } else if (name == "fig2") {
        // Sign-oscillating boundary field.
        sc.field_kind = FieldKind::Cartesian;
        sc.field_expr =
            "(1/2 - sin(1/(1-sqrt(q1^2+q2^2))))/(1-sqrt(q1^2+q2^2))^2"
            " + 10*q1 - 2*q1^2 - 10*q2^2";
        sc.initial_type = "cartesian";
        sc.q0 = {0.1, -0.2};
        sc.v0 = {0.3, 0.2};
        sc.task = "simulate";
        sc.t_max = 200.0;
    } else if (name == "fig3-limitcircle") {
        // Radial field with a critical point of the reduced Hamiltonian at
        // r = 1; the trajectory spirals toward the boundary without crossing.
        sc.field_kind = FieldKind::Radial;
        sc.field_expr = "exp(-r) - 2/r";
        sc.initial_type = "radial-energy";
        sc.r0 = 0.5;
        sc.theta0 = 0.0;
        sc.p_theta = 1.0 - 3.0 / std::exp(1.0);
        double vth1 = 2.0 - 1.0 / std::exp(1.0);  // p_theta - G(1)
        sc.H0 = 0.5 * vth1 * vth1;
        sc.pr_sign = 1;
        sc.task = "simulate";
        sc.t_max = 30.0;
    } else if (name == "fig4-confined") {
        sc.field_kind = FieldKind::Radial;
        sc.field_expr = "(log(1-r))^2";
        sc.initial_type = "radial";
        sc.r0 = 0.5;
        sc.theta0 = 0.0;
        sc.p_theta = -1.0;
        sc.p_r = 0.3;
        sc.task = "simulate";
        sc.t_max = 100.0;
    } else if (name == "fig4-escaping") {
        sc.field_kind = FieldKind::Radial;
        sc.field_expr = "(log(1-r))^2";
        sc.initial_type = "escape";
        sc.escape_r0 = 0.5;
        sc.escape_v = 1.0;
        sc.task = "simulate";
        sc.t_max = 2.0;
    } else if (name == "collar-1overn") {
        // Closed-form collar trace 1/n on the unit disc, delta = 0.5.
        sc.field_kind = FieldKind::TubularAnalytic;
        sc.field_expr = "1/n";
        sc.epsilon = 0.5;
        sc.initial_type = "cartesian";
        // n0 = 0.25, tangential velocity of modest energy.
        sc.q0 = {0.75, 0.0};
        sc.v0 = {0.0, 0.1};
        sc.task = "bound";
        sc.horizon_T = 1.0;
    } else {
        throw ConfigError("unknown figure preset '" + name + "'");
    }
    return sc;
}

namespace {

RunOutcome run_simulate(const Scenario& sc, const std::filesystem::path& out) {
    FieldModel field = sc.make_field();
    PhaseState init = sc.make_initial(field);
    IntegrationResult res = integrate(field, init, sc.t_max,
                                      disc_domain(sc.disc_radius),
                                      sc.integrator_options());
    write_file(out / "trajectory.csv", trajectory_csv(field, res.samples));
    write_file(out / "plot.svg", trajectory_svg(res.samples, sc.disc_radius));
    if (res.termination == Termination::StepFailure)
        return {3, "integration failed: minimum step reached"};
    if (res.termination == Termination::BoundaryHit)
        return {0, "boundary hit at t = " + std::to_string(res.t_exit)};
    return {0, "time limit reached"};
}

RunOutcome run_scatter(const Scenario& sc, const std::filesystem::path& out) {
    FieldModel field = sc.make_field();
    if (sc.initial_type != "entry")
        throw ConfigError("scatter task requires an 'entry' initial block");
    ScatteringResult res =
        scattering(field, {sc.theta1, sc.v_r, sc.v_th}, sc.quad_tol());
    write_file(out / "scattering.json", res.to_json(sc.name, sc.tol.quad_abs_tol));
    if (res.branch == ScatterBranch::TrappedAtCriticalPoint ||
        res.branch == ScatterBranch::NoEscape)
        return {2, "the entry state does not scatter (no finite-time escape)"};
    return {0, "omega = " + std::to_string(res.omega)};
}

RunOutcome run_confine_check(const Scenario& sc, const std::filesystem::path& out) {
    FieldModel field = sc.make_field();
    PhaseState init = sc.make_initial(field);
    double pth = angular_momentum(field, init);
    ReducedSystem sys(field, pth, energy(init), sc.quad_tol());
    RadialCertificate cert = radial_confinement(sys);
    write_file(out / "certificate.json", cert.to_json());
    return {0, cert.verdict == RadialVerdict::Bound
                   ? "bound: eta = " + std::to_string(cert.eta)
                   : "inconclusive"};
}

RunOutcome run_bound(const Scenario& sc, const std::filesystem::path& out) {
    FieldModel field = sc.make_field();
    BoundaryChart chart =
        sc.domain_type == "ellipse"
            ? build_chart(ellipse_curve(sc.ellipse_a, sc.ellipse_b), sc.epsilon)
            : build_chart(circle_curve(sc.disc_radius), sc.epsilon);
    PhaseState init{sc.q0, sc.v0, 0.0};
    CertifyOptions opts;
    opts.quad = sc.quad_tol();
    opts.parallel = true;
    ConfinementCertificate cert =
        certify_lower_bound(chart, field, init, sc.horizon_T, opts);
    write_file(out / "certificate.json", cert.to_json());
    return {0, cert.verdict == CollarVerdict::LowerBound
                   ? "lower bound: n_min = " + std::to_string(cert.n_min)
                   : (cert.verdict == CollarVerdict::CompleteDynamics
                          ? "complete dynamics (heuristic)"
                          : "inconclusive")};
}

RunOutcome run_sweep(const Scenario& sc, const std::filesystem::path& out) {
    FieldModel field = sc.make_field();
    if (sc.sweep_entries.empty())
        throw ConfigError("sweep task requires task.entries");
    auto results = sc.sweep_parallel
                       ? sweep_scatter_parallel(field, sc.sweep_entries, sc.quad_tol())
                       : sweep_scatter_serial(field, sc.sweep_entries, sc.quad_tol());
    write_file(out / "sweep.csv", sweep_csv(sc.sweep_entries, results));
    return {0, std::to_string(results.size()) + " entries"};
}

}  // namespace

RunOutcome run_scenario(const Scenario& sc, const std::string& out_dir) {
    std::filesystem::path out(out_dir);
    std::filesystem::create_directories(out);
    try {
        if (sc.task == "simulate") return run_simulate(sc, out);
        if (sc.task == "scatter") return run_scatter(sc, out);
        if (sc.task == "confine-check") return run_confine_check(sc, out);
        if (sc.task == "bound") return run_bound(sc, out);
        if (sc.task == "sweep") return run_sweep(sc, out);
        if (sc.task == "figure") {
            Scenario preset = figure_preset(sc.figure_name);
            preset.tol = sc.tol;
            return run_scenario(preset, out_dir);
        }
        throw ConfigError("unknown task '" + sc.task + "'");
    } catch (const HypothesisViolation& e) {
        return {2, e.what()};
    } catch (const QuadratureError& e) {
        return {3, e.what()};
    } catch (const UnboundedPotential& e) {
        return {3, e.what()};
    }
}

}  // namespace magneto
