#include "magneto/ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace magneto {

double angular_momentum(const FieldModel& field, const PhaseState& state) {
    return det(state.q, state.v) + field.flux_primitive(state.q.norm());
}

std::pair<Vec2, Vec2> step_rhs(const FieldModel& field, const PhaseState& state) {
    double b = field.eval(state.q);
    return {state.v, Vec2{b * state.v.y, -b * state.v.x}};
}

namespace {

using Y = std::array<double, 4>;  // (q1, q2, v1, v2)

Y axpy(const Y& y, double h, const Y& k) {
    return {y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2], y[3] + h * k[3]};
}

// Dormand-Prince 5(4) coefficients.
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                 a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                 a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// Dense-output extras.
constexpr double d1 = -12715105075.0 / 11282082432.0,
                 d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0,
                 d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0,
                 d7 = 69997945.0 / 29380423.0;

struct DenseSegment {
    double t0, h;
    Y c1, c2, c3, c4, c5;

    Y eval(double theta) const {
        Y out;
        double th1 = 1.0 - theta;
        for (int i = 0; i < 4; ++i) {
            out[i] = c1[i] + theta * (c2[i] + th1 * (c3[i] + theta * (c4[i] + th1 * c5[i])));
        }
        return out;
    }
};

struct Rhs {
    const FieldModel& field;
    bool ok = true;

    Y operator()(double, const Y& y) {
        ok = true;
        Vec2 q{y[0], y[1]};
        double b;
        try {
            b = field.eval(q);
        } catch (const DomainError&) {
            ok = false;
            return {0, 0, 0, 0};
        }
        return {y[2], y[3], b * y[3], -b * y[2]};
    }
};

}  // namespace

IntegrationResult integrate(const FieldModel& field, const PhaseState& init,
                            double t_max, const SignedDistance& domain,
                            const IntegratorOptions& opts) {
    IntegrationResult result;
    Rhs rhs{field};

    Y y = {init.q.x, init.q.y, init.v.x, init.v.y};
    double t = init.t;
    const double t_end = init.t + t_max;
    const double h_min = 1e-14 * t_max;
    double h = std::min(opts.initial_step, t_max);
    const double H0 = energy(init);

    result.samples.push_back(init);
    double d_prev = domain(init.q);
    bool was_interior = d_prev < -opts.event_tol;

    Y k1 = rhs(t, y);
    if (!rhs.ok) {
        result.termination = Termination::StepFailure;
        return result;
    }

    double err_old = 1e-4;
    std::size_t steps = 0;

    while (t < t_end) {
        if (++steps > opts.max_steps) {
            result.termination = Termination::StepFailure;
            return result;
        }
        h = std::min(h, t_end - t);

        Y k2 = rhs(t + h * a21, axpy(y, h, {a21 * k1[0], a21 * k1[1], a21 * k1[2], a21 * k1[3]}));
        bool ok = rhs.ok;
        Y ytmp;
        Y k3{}, k4{}, k5{}, k6{}, k7{};
        if (ok) {
            for (int i = 0; i < 4; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
            k3 = rhs(t + 0.3 * h, ytmp);
            ok = rhs.ok;
        }
        if (ok) {
            for (int i = 0; i < 4; ++i)
                ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
            k4 = rhs(t + 0.8 * h, ytmp);
            ok = rhs.ok;
        }
        if (ok) {
            for (int i = 0; i < 4; ++i)
                ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
            k5 = rhs(t + 8.0 / 9.0 * h, ytmp);
            ok = rhs.ok;
        }
        if (ok) {
            for (int i = 0; i < 4; ++i)
                ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                                      a64 * k4[i] + a65 * k5[i]);
            k6 = rhs(t + h, ytmp);
            ok = rhs.ok;
        }
        Y y_new{};
        if (ok) {
            for (int i = 0; i < 4; ++i)
                y_new[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] +
                                       a75 * k5[i] + a76 * k6[i]);
            k7 = rhs(t + h, y_new);
            ok = rhs.ok;
        }

        double err = std::numeric_limits<double>::infinity();
        if (ok) {
            double sum = 0.0;
            for (int i = 0; i < 4; ++i) {
                double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                 e6 * k6[i] + e7 * k7[i]);
                double sc = opts.abs_tol +
                            opts.rel_tol * std::max(std::fabs(y[i]), std::fabs(y_new[i]));
                sum += (ei / sc) * (ei / sc);
            }
            err = std::sqrt(sum / 4.0);
            if (!std::isfinite(err)) err = std::numeric_limits<double>::infinity();
        }

        if (err > 1.0) {
            double fac = std::isfinite(err)
                             ? std::max(0.2, 0.9 * std::pow(err, -0.2))
                             : 0.2;
            h *= fac;
            if (h < h_min) {
                // A field singularity sitting exactly on the boundary keeps
                // every stage from evaluating across it; if the state has
                // already reached the boundary to within the event tolerance
                // this is an exit, not a failure.
                if (was_interior && std::fabs(d_prev) <= opts.event_tol) {
                    result.termination = Termination::BoundaryHit;
                    result.t_exit = t;
                    result.q_exit = Vec2{y[0], y[1]};
                    result.v_exit = Vec2{y[2], y[3]};
                    result.samples.push_back({result.q_exit, result.v_exit, t});
                    return result;
                }
                result.termination = Termination::StepFailure;
                return result;
            }
            continue;
        }

        // Accepted step; build the dense-output segment.
        DenseSegment seg;
        seg.t0 = t;
        seg.h = h;
        for (int i = 0; i < 4; ++i) {
            double ydiff = y_new[i] - y[i];
            double bspl = h * k1[i] - ydiff;
            seg.c1[i] = y[i];
            seg.c2[i] = ydiff;
            seg.c3[i] = bspl;
            seg.c4[i] = ydiff - h * k7[i] - bspl;
            seg.c5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                             d6 * k6[i] + d7 * k7[i]);
        }

        double t_new = t + h;
        Vec2 q_new{y_new[0], y_new[1]};
        Vec2 v_new{y_new[2], y_new[3]};
        double d_new = domain(q_new);

        if (was_interior && d_prev < 0.0 && d_new >= 0.0) {
            // Bracketed boundary crossing; bisect the dense output.
            double lo = 0.0, hi = 1.0;
            Y yh = y_new;
            double dh = d_new;
            for (int it = 0; it < 200 && std::fabs(dh) > opts.event_tol; ++it) {
                double mid = 0.5 * (lo + hi);
                Y ym = seg.eval(mid);
                double dm = domain(Vec2{ym[0], ym[1]});
                if (dm < 0.0) {
                    lo = mid;
                } else {
                    hi = mid;
                    yh = ym;
                    dh = dm;
                }
                if (hi - lo < 1e-16) break;
            }
            result.termination = Termination::BoundaryHit;
            result.t_exit = t + hi * h;
            result.q_exit = Vec2{yh[0], yh[1]};
            result.v_exit = Vec2{yh[2], yh[3]};
            PhaseState exit_state{result.q_exit, result.v_exit, result.t_exit};
            result.samples.push_back(exit_state);
            return result;
        }

        t = t_new;
        y = y_new;
        k1 = k7;  // FSAL
        d_prev = d_new;
        if (d_new < -opts.event_tol) was_interior = true;

        PhaseState s{q_new, v_new, t};
        result.samples.push_back(s);
        double drift = std::fabs(energy(s) - H0);
        if (H0 > 0.0) drift /= H0;
        result.max_energy_drift = std::max(result.max_energy_drift, drift);

        // PI step-size controller.
        double err_clamped = std::max(err, 1e-32);
        double fac = 0.9 * std::pow(err_clamped, -0.7 / 5.0) * std::pow(err_old, 0.4 / 5.0);
        fac = std::clamp(fac, 0.2, 5.0);
        h *= fac;
        err_old = err_clamped;
        if (h < h_min && t < t_end) {
            result.termination = Termination::StepFailure;
            return result;
        }
    }

    result.termination = Termination::TimeLimit;
    return result;
}

}  // namespace magneto
