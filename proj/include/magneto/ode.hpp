#pragma once
#include <functional>
#include <vector>

#include "magneto/core.hpp"
#include "magneto/field.hpp"

namespace magneto {

struct PhaseState {
    Vec2 q;
    Vec2 v;
    double t = 0.0;
};

inline double energy(const PhaseState& state) { return 0.5 * state.v.norm2(); }

// p_theta = det(q, v) + G(||q||) for a radial field.
double angular_momentum(const FieldModel& field, const PhaseState& state);

enum class Termination { TimeLimit, BoundaryHit, StepFailure };

struct IntegrationResult {
    std::vector<PhaseState> samples;
    Termination termination = Termination::TimeLimit;
    double t_exit = 0.0;      // BoundaryHit only
    Vec2 q_exit, v_exit;      // BoundaryHit only
    double max_energy_drift = 0.0;  // max |H(t) - H0| / max(H0, 1)
};

struct IntegratorOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double event_tol = 1e-10;  // boundary location tolerance in distance
    double initial_step = 1e-4;
    std::size_t max_steps = 50'000'000;
};

// Signed distance to the domain boundary, negative inside.
using SignedDistance = std::function<double(const Vec2&)>;

inline SignedDistance disc_domain(double radius) {
    return [radius](const Vec2& q) { return q.norm() - radius; };
}

// Lorentz-force right-hand side: dq = v, dv = b(q) * (v2, -v1).
std::pair<Vec2, Vec2> step_rhs(const FieldModel& field, const PhaseState& state);

// Adaptive Dormand-Prince 5(4) with dense output. A sign change of the
// signed distance across a step is refined by bisection on the dense output
// to event_tol and reported as BoundaryHit. The run starts event detection
// only after the state has been strictly interior, so entries launched on
// the boundary itself work.
IntegrationResult integrate(const FieldModel& field, const PhaseState& init,
                            double t_max, const SignedDistance& domain,
                            const IntegratorOptions& opts = {});

}  // namespace magneto
