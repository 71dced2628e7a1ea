#pragma once
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "magneto/chart.hpp"
#include "magneto/field.hpp"
#include "magneto/ode.hpp"

namespace magneto {

enum class CollarVerdict { CompleteDynamics, LowerBound, Inconclusive };

struct ConfinementCertificate {
    CollarVerdict verdict = CollarVerdict::Inconclusive;
    double n_min = 0.0;     // LowerBound only: collar trajectories keep n(t) > n_min
    double horizon_T = 0.0;
    double C_of_T = 0.0;
    double M_estimate = 0.0;
    // Heuristic evidence that |f| diverges as n -> 0 (complete dynamics);
    // may accompany a LowerBound verdict.
    bool complete_dynamics_flag = false;
    // Grid points where the f-quadrature missed tolerance and a conservative
    // lower estimate was used instead.
    int unreliable_samples = 0;
    std::vector<std::pair<double, double>> f_samples;
    // Chart constants, for the serialized report.
    double L = 0.0, K = 0.0, Kp = 0.0, delta = 0.0, epsilon = 0.0;

    std::string to_json() const;
};

// f(n) = -(1/L) * integral over (n, delta) x (0, L) of B(eta, xi).
// The inner integral collapses when the trace is s-independent.
double f_of_n(const BoundaryChart& chart, const FieldModel& field, double n,
              const QuadTol& tol = {});

// The horizon constant: |sdot(0)*(1 - kappa(s0)*n0) - f(n0)|
// + sqrt(2*H0)*(1 + eps) + (M*sqrt(2*H0) + 2*H0*Kp*delta/(1 - eps)) * T.
double C_of_T(const BoundaryChart& chart, const FieldModel& field,
              const PhaseState& init, double T, double M,
              const QuadTol& tol = {});

struct CertifyOptions {
    int grid = 512;           // f-sampling points, log-spaced over (n_floor, delta)
    double n_floor = 1e-8;
    double tilt = 1e-9;       // strict-decrease tilt of g
    int oscillation_grid = 1024;
    bool parallel = false;    // OpenMP over the n-grid
    QuadTol quad{};
};

// Samples f on a decreasing n-grid, builds the maximal admissible strictly
// decreasing minorant g of |f| (running infimum minus a tilt), estimates the
// oscillation bound M, and solves g(n_min) = C(T). Escalates to a
// complete-dynamics flag when |f| keeps growing past 10*C(T) at the floor.
ConfinementCertificate certify_lower_bound(const BoundaryChart& chart,
                                           const FieldModel& field,
                                           const PhaseState& init, double T,
                                           const CertifyOptions& opts = {});

// H(n, s, p_n, p_s) with an explicit gauge (A_n, A_s) on the chart.
using GaugeComponent = std::function<double(double, double)>;
double hamiltonian_tubular(const BoundaryChart& chart, const GaugeComponent& A_n,
                           const GaugeComponent& A_s, double n, double s,
                           double p_n, double p_s);
// (v_n, v_s) = (p_n - A_n, (p_s - A_s)/(1 - n*kappa)).
std::pair<double, double> tubular_velocity(const BoundaryChart& chart,
                                           const GaugeComponent& A_n,
                                           const GaugeComponent& A_s, double n,
                                           double s, double p_n, double p_s);

// The proof gauge: A_n(n, s) = (s/L)*I(n) - integral of B(n, .) over (0, s),
// A_s(n) = f(n). With it, B = dA and trajectories are unchanged.
std::pair<GaugeComponent, GaugeComponent> proof_gauge(const BoundaryChart& chart,
                                                      const FieldModel& field,
                                                      const QuadTol& tol = {});

}  // namespace magneto
