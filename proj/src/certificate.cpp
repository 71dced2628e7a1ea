#include "magneto/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include <nlohmann/json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace magneto {

double f_of_n(const BoundaryChart& chart, const FieldModel& field, double n,
              const QuadTol& tol) {
    const double delta = chart.delta();
    const double L = chart.length();
    if (!(n > 0.0 && n < delta))
        throw DomainError("f_of_n: n must lie in (0, delta)");
    if (field.kind() == FieldKind::TubularAnalytic && field.s_independent()) {
        return -integrate([&](double eta) { return field.trace(eta, 0.0); }, n,
                          delta, tol);
    }
    QuadTol inner_tol = tol;
    inner_tol.abs_tol *= 0.1;
    inner_tol.rel_tol *= 0.1;
    auto inner = [&](double eta) {
        return integrate([&](double xi) { return field_trace(chart, field, eta, xi); },
                         0.0, L, inner_tol);
    };
    return -integrate(inner, n, delta, tol) / L;
}

double C_of_T(const BoundaryChart& chart, const FieldModel& field,
              const PhaseState& init, double T, double M, const QuadTol& tol) {
    auto ts = chart.to_tubular(init.q, init.v);
    if (!(ts.n > 0.0 && ts.n < chart.delta()))
        throw OutOfCollar("C_of_T: initial state is not in the collar");
    const double H0 = energy(init);
    const double eps = chart.epsilon();
    const double kappa0 = chart.kappa(ts.s);
    // (1/L) * double integral over (n0, delta) x (0, L) of B equals -f(n0).
    double term1 = std::fabs(ts.sdot * (1.0 - kappa0 * ts.n) -
                             f_of_n(chart, field, ts.n, tol));
    double speed = std::sqrt(2.0 * H0);
    return term1 + speed * (1.0 + eps) +
           (M * speed + 2.0 * H0 * chart.Kp() * chart.delta() / (1.0 - eps)) * T;
}

ConfinementCertificate certify_lower_bound(const BoundaryChart& chart,
                                           const FieldModel& field,
                                           const PhaseState& init, double T,
                                           const CertifyOptions& opts) {
    ConfinementCertificate cert;
    cert.horizon_T = T;
    cert.L = chart.length();
    cert.K = chart.K();
    cert.Kp = chart.Kp();
    cert.delta = chart.delta();
    cert.epsilon = chart.epsilon();

    const int grid = std::max(opts.grid, 8);
    const double n_top = chart.delta() * (1.0 - 1e-9);
    const double ratio = std::log(n_top / opts.n_floor);

    std::vector<double> ns(grid), fs(grid);
    for (int k = 0; k < grid; ++k)
        ns[k] = opts.n_floor * std::exp(ratio * k / (grid - 1));

    // A failed quadrature at a grid point is replaced by the conservative
    // lower estimate max(0, |partial| - error); that only shrinks g, so the
    // resulting bound stays valid. Other exceptions are rethrown after the
    // loop (they must not escape a parallel region).
    int unreliable = 0;
    std::exception_ptr loop_error;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (opts.parallel)
#endif
    for (int k = 0; k < grid; ++k) {
        try {
            fs[k] = f_of_n(chart, field, ns[k], opts.quad);
        } catch (const QuadratureError& e) {
            double lo = std::max(0.0, std::fabs(e.partial_value) - e.achieved_error);
            fs[k] = std::copysign(lo, e.partial_value);
#ifdef _OPENMP
#pragma omp atomic
#endif
            ++unreliable;
        } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
            loop_error = std::current_exception();
        }
    }
    if (loop_error) std::rethrow_exception(loop_error);
    cert.unreliable_samples = unreliable;

    cert.f_samples.reserve(grid);
    for (int k = 0; k < grid; ++k) cert.f_samples.emplace_back(ns[k], fs[k]);

    // Oscillation bound, maximized over a subsample of the n-grid.
    FieldModel trace_model = FieldModel::tubular(
        [chart, field](double n, double s) { return field_trace(chart, field, n, s); },
        chart.length(),
        field.kind() == FieldKind::TubularAnalytic && field.s_independent());
    double M = 0.0;
    const int m_probe = 17;
    for (int j = 0; j < m_probe; ++j) {
        int k = static_cast<int>(static_cast<double>(j) * (grid - 1) / (m_probe - 1));
        double osc;
        try {
            osc = mean_and_oscillation(trace_model, ns[k], opts.oscillation_grid,
                                       opts.quad).second;
        } catch (const QuadratureError&) {
            // Roundoff-limited integrand (typically a near-boundary blow-up
            // evaluated in Cartesian form): fall back to a plain grid mean.
            // The noise only inflates the oscillation, which is conservative.
            const double L = chart.length();
            double sum = 0.0;
            std::vector<double> vals(opts.oscillation_grid);
            for (int i = 0; i < opts.oscillation_grid; ++i) {
                vals[i] = trace_model.trace(ns[k], L * i / opts.oscillation_grid);
                sum += vals[i];
            }
            double mean = sum / opts.oscillation_grid;
            osc = 0.0;
            for (double v : vals) osc = std::max(osc, std::fabs(v - mean));
        }
        M = std::max(M, osc);
    }
    cert.M_estimate = M;

    const double C = C_of_T(chart, field, init, T, M, opts.quad);
    cert.C_of_T = C;

    // g: running infimum of |f| over (0, n], tilted to be strictly decreasing.
    std::vector<double> g(grid);
    double runmin = std::numeric_limits<double>::infinity();
    for (int k = 0; k < grid; ++k) {
        runmin = std::min(runmin, std::fabs(fs[k]));
        g[k] = runmin - opts.tilt * ns[k];
    }

    // Divergence heuristic: |f| grows monotonically toward the floor and has
    // cleared 10*C there.
    bool diverging = std::fabs(fs[0]) > 10.0 * C && std::isfinite(M);
    for (int k = 0; diverging && k < grid / 8; ++k)
        if (std::fabs(fs[k]) < std::fabs(fs[k + 1])) diverging = false;
    cert.complete_dynamics_flag = diverging;

    if (g[0] <= C) {
        cert.verdict = diverging ? CollarVerdict::CompleteDynamics
                                 : CollarVerdict::Inconclusive;
        return cert;
    }

    // Find the bracket where the decreasing g crosses C, then bisect the
    // log-linear interpolant.
    int hi = -1;
    for (int k = 1; k < grid; ++k) {
        if (g[k] < C) {
            hi = k;
            break;
        }
    }
    if (hi < 0) {
        cert.verdict = CollarVerdict::Inconclusive;
        return cert;
    }
    double xa = std::log(ns[hi - 1]), xb = std::log(ns[hi]);
    double ga = g[hi - 1], gb = g[hi];
    auto g_interp = [&](double x) { return ga + (gb - ga) * (x - xa) / (xb - xa); };
    double lo_x = xa, hi_x = xb;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo_x + hi_x);
        double gm = g_interp(mid);
        if (std::fabs(gm - C) < 1e-14 * std::max(1.0, std::fabs(C)) ||
            hi_x - lo_x < 1e-15)
            break;
        if (gm > C)
            lo_x = mid;
        else
            hi_x = mid;
    }
    cert.n_min = std::exp(0.5 * (lo_x + hi_x));
    cert.verdict = CollarVerdict::LowerBound;
    return cert;
}

double hamiltonian_tubular(const BoundaryChart& chart, const GaugeComponent& A_n,
                           const GaugeComponent& A_s, double n, double s,
                           double p_n, double p_s) {
    double factor = 1.0 - chart.kappa(s) * n;
    if (std::fabs(factor) < 1e-12)
        throw DegenerateMetric("1 - kappa*n vanishes");
    double vn = p_n - A_n(n, s);
    double ws = p_s - A_s(n, s);
    return 0.5 * vn * vn + 0.5 * ws * ws / (factor * factor);
}

std::pair<double, double> tubular_velocity(const BoundaryChart& chart,
                                           const GaugeComponent& A_n,
                                           const GaugeComponent& A_s, double n,
                                           double s, double p_n, double p_s) {
    double factor = 1.0 - chart.kappa(s) * n;
    if (std::fabs(factor) < 1e-12)
        throw DegenerateMetric("1 - kappa*n vanishes");
    return {p_n - A_n(n, s), (p_s - A_s(n, s)) / factor};
}

std::pair<GaugeComponent, GaugeComponent> proof_gauge(const BoundaryChart& chart,
                                                      const FieldModel& field,
                                                      const QuadTol& tol) {
    const double L = chart.length();
    GaugeComponent An = [chart, field, tol, L](double n, double s) {
        double full = integrate(
            [&](double xi) { return field_trace(chart, field, n, xi); }, 0.0, L, tol);
        double part = integrate(
            [&](double xi) { return field_trace(chart, field, n, xi); }, 0.0, s, tol);
        return s / L * full - part;
    };
    GaugeComponent As = [chart, field, tol](double n, double) {
        return f_of_n(chart, field, n, tol);
    };
    return {An, As};
}

std::string ConfinementCertificate::to_json() const {
    nlohmann::json j;
    switch (verdict) {
        case CollarVerdict::CompleteDynamics: j["verdict"] = "complete_dynamics"; break;
        case CollarVerdict::LowerBound: j["verdict"] = "lower_bound"; break;
        case CollarVerdict::Inconclusive: j["verdict"] = "inconclusive"; break;
    }
    j["n_min"] = n_min;
    j["horizon_T"] = horizon_T;
    j["C_of_T"] = C_of_T;
    j["M_estimate"] = M_estimate;
    j["complete_dynamics_flag"] = complete_dynamics_flag;
    j["unreliable_samples"] = unreliable_samples;
    j["chart"] = {{"L", L}, {"K", K}, {"Kp", Kp}, {"delta", delta}, {"epsilon", epsilon}};
    nlohmann::json samples = nlohmann::json::array();
    for (const auto& [n, f] : f_samples) samples.push_back({n, f});
    j["f_samples"] = samples;
    return j.dump(2);
}

}  // namespace magneto
