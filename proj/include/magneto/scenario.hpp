#pragma once
#include <optional>
#include <string>
#include <vector>

#include "magneto/chart.hpp"
#include "magneto/field.hpp"
#include "magneto/ode.hpp"
#include "magneto/radial.hpp"
#include "magneto/sweep.hpp"

namespace magneto {

struct Tolerances {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double event_tol = 1e-10;
    double quad_abs_tol = 1e-12;
    double quad_rel_tol = 1e-10;
};

// One CLI invocation's worth of work: a field, a domain, initial data and a
// task. Serializes to/from the JSON config format bit-exactly for numeric
// fields.
struct Scenario {
    std::string name;

    // field block
    FieldKind field_kind = FieldKind::Radial;
    std::string field_expr = "0";
    double domain_radius = 1.0;

    // domain block
    std::string domain_type = "disc";  // "disc" | "ellipse"
    double disc_radius = 1.0;
    double ellipse_a = 2.0, ellipse_b = 1.0;
    double epsilon = 0.5;  // collar parameter for chart-based tasks

    // initial block; exactly one flavor is used
    std::string initial_type = "cartesian";  // cartesian|radial|radial-energy|entry|escape
    Vec2 q0, v0;                                   // cartesian
    double r0 = 0.5, theta0 = 0.0, p_r = 0.0, p_theta = 0.0;  // radial
    double H0 = 0.0;
    int pr_sign = 1;                               // radial-energy
    double theta1 = 0.0, v_r = 0.0, v_th = 0.0;    // entry
    double escape_r0 = 0.5, escape_v = 1.0;        // escape

    // task block
    std::string task = "simulate";  // simulate|scatter|confine-check|bound|figure|sweep
    double t_max = 100.0;
    double horizon_T = 10.0;
    std::string figure_name;
    std::vector<SweepEntry> sweep_entries;
    bool sweep_parallel = true;

    Tolerances tol;

    static Scenario from_json_text(const std::string& text);
    static Scenario load(const std::string& path);
    std::string to_json_text() const;

    FieldModel make_field() const;
    // Cartesian initial state for simulation tasks.
    PhaseState make_initial(const FieldModel& field) const;
    QuadTol quad_tol() const { return {tol.quad_abs_tol, tol.quad_rel_tol, 60}; }
    IntegratorOptions integrator_options() const;
};

// The paper-figure presets; initial conditions are our own choices that
// reproduce the qualitative behavior (the captions give only the fields).
// Names: fig1, fig2, fig3-limitcircle, fig4-confined, fig4-escaping,
// collar-1overn.
Scenario figure_preset(const std::string& name);

struct RunOutcome {
    int exit_code = 0;  // 0 ok, 2 hypothesis violation, 3 numerical failure
    std::string message;
};

// Dispatches the scenario and writes trajectory.csv / certificate.json /
// scattering.json / sweep.csv / plot.svg into out_dir as applicable.
RunOutcome run_scenario(const Scenario& sc, const std::string& out_dir);

// CSV trajectory block, 17 significant digits; p_theta column is blank for
// non-radial fields.
std::string trajectory_csv(const FieldModel& field,
                           const std::vector<PhaseState>& samples);

}  // namespace magneto
