#pragma once
#include <string>
#include <vector>

#include "magneto/core.hpp"
#include "magneto/field.hpp"
#include "magneto/ode.hpp"

namespace magneto {

// Reduced one-degree-of-freedom system for a radial field on the unit disc:
// H(r, p_r) = p_r^2/2 + V(r), V(r) = (p_theta - G(r))^2 / (2 r^2).
class ReducedSystem {
public:
    ReducedSystem(const FieldModel& field, double p_theta, double H0,
                  QuadTol quad = {});

    double p_theta() const { return p_theta_; }
    double H0() const { return H0_; }
    const FieldModel& field() const { return *field_; }

    double G(double r) const;
    double B(double r) const { return field_->profile(r); }
    // Effective potential; at r = 0 with p_theta = 0 the continuous
    // extension is evaluated as a sampled limit (DomainError if it does not
    // stabilize, or if p_theta != 0).
    double V(double r) const;
    // One-sided derivative from the left, step 1e-7 with one Richardson pass.
    double Vprime(double r) const;

    // Builds the reduced system from a boundary entry state (r = 1).
    static ReducedSystem from_entry(const FieldModel& field, double v_r0,
                                    double v_th0, QuadTol quad = {});

private:
    const FieldModel* field_;
    double p_theta_, H0_;
    QuadTol quad_;
};

enum class TurningStatus { Usable, TrappedAtCriticalPoint, NoSolution };

struct TurningPoint {
    TurningStatus status = TurningStatus::NoSolution;
    double r_star = 0.0;
    double slope = 0.0;  // V'(r_star)
};

// Rightmost solution of V(r) = H0 on (r_floor, 1), refined by bisection to
// 1e-12, with a slope-based classification. HypothesisViolation if
// V(1) > H0.
TurningPoint turning_point(const ReducedSystem& sys);

// Entry condition of the scattering theorem: v_r < 0, or v_r = 0 with
// B(1)/v_theta < -1.
bool entering_predicate(double v_r0, double v_th0, double B1);

enum class ScatterBranch { TurningPoint, ThroughOrigin, TrappedAtCriticalPoint, NoEscape };

struct ScatteringResult {
    ScatterBranch branch = ScatterBranch::TurningPoint;
    double r_star = 0.0;       // ThroughOrigin: 0
    double t_star = 0.0;       // half transit time; full transit is 2*t_star
    double alpha = 0.0;        // deflection integral
    double gamma_angle = 0.0;  // Arg(v_r(0) + i v_theta(0)), in (pi/2, 3pi/2)
    double omega = 0.0;        // scattering angle in (-pi, pi]
    double theta_accumulated = 0.0;  // theta(2 t*) - theta(0), unreduced
    double theta2 = 0.0;       // exit polar angle
    Vec2 v_exit;               // exit velocity in Cartesian coordinates
    double p_theta = 0.0, H0 = 0.0;

    std::string to_json(const std::string& preset_name = {},
                        double abs_tol = 1e-10) const;
};

// Deflection integral of the scattering theorem. The inverse-square-root
// singularity at r* is removed by the substitution r = r* + u^2.
double deflection_alpha(const ReducedSystem& sys, const TurningPoint& tp,
                        double abs_tol = 1e-10);
// Half transit time t*; same singularity treatment.
double transit_time(const ReducedSystem& sys, const TurningPoint& tp,
                    double abs_tol = 1e-10);

// Boundary entry state at radius 1, polar angle theta1, with radial and
// tangential velocity components (v_r0 < 0 to enter, or tangential entry).
struct EntryState {
    double theta1 = 0.0;
    double v_r0 = 0.0;
    double v_th0 = 0.0;
};

PhaseState entry_to_cartesian(const EntryState& entry);

// Full scattering composition: omega = alpha + pi - 2*gamma (turning point)
// or alpha - 2*gamma (through origin), reduced to (-pi, pi].
// Throws HypothesisViolation when the entry predicate fails or the particle
// sits at the fixed point r = 1.
ScatteringResult scattering(const FieldModel& field, const EntryState& entry,
                            QuadTol quad = {});

// ---- radial confinement (H1/H2) ------------------------------------------

enum class RadialVerdict { Bound, Inconclusive };

struct RadialCertificate {
    RadialVerdict verdict = RadialVerdict::Inconclusive;
    double eta = 1.0;          // Bound: max radius, sup{x : V(x) = H0}
    std::string hypothesis;    // "H1" or "H2"
    double liminf_V = 0.0;     // dyadic-grid estimate near r = 1
    std::vector<std::pair<double, double>> trace;  // (r_k, V(r_k)) evidence

    std::string to_json() const;
};

// Grid evaluation of H1 (liminf V > H0) and H2 (equality with negative
// difference quotient) on the dyadic grid r = 1 - 2^-k, k <= 40; on success
// returns eta by rightmost root search.
RadialCertificate radial_confinement(const ReducedSystem& sys);

// Escape construction: p_theta = 0, p_r(0) = sqrt(2(|V|_inf - V(r0)) + v^2).
// The returned trajectory hits the boundary no later than (1 - r0)/v.
struct EscapeData {
    PhaseState init;
    double t_escape_bound = 0.0;
    double V_sup = 0.0;
};

EscapeData escape_construct(const FieldModel& field, double r0, double v,
                            QuadTol quad = {});

}  // namespace magneto
