#include "magneto/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "magneto/certificate.hpp"

namespace magneto {

EntryState sweep_entry_state(const FieldModel& field, const SweepEntry& e,
                             QuadTol quad) {
    double G1 = field.flux_primitive(1.0, quad);
    double v_th = e.p_theta - G1;
    double disc = 2.0 * e.H0 - v_th * v_th;
    if (disc <= 0.0)
        throw HypothesisViolation("sweep entry: V(1) >= H0, no radial entry velocity");
    EntryState entry;
    entry.theta1 = 0.0;
    entry.v_r0 = -std::sqrt(disc);
    entry.v_th0 = v_th;
    return entry;
}

std::vector<ScatteringResult> sweep_scatter_serial(const FieldModel& field,
                                                   const std::vector<SweepEntry>& entries,
                                                   QuadTol quad) {
    std::vector<ScatteringResult> out(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i)
        out[i] = scattering(field, sweep_entry_state(field, entries[i], quad), quad);
    return out;
}

std::vector<ScatteringResult> sweep_scatter_parallel(const FieldModel& field,
                                                     const std::vector<SweepEntry>& entries,
                                                     QuadTol quad) {
    std::vector<ScatteringResult> out(entries.size());
    const auto n = static_cast<std::ptrdiff_t>(entries.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (std::ptrdiff_t i = 0; i < n; ++i)
        out[i] = scattering(field, sweep_entry_state(field, entries[i], quad), quad);
    return out;
}

std::vector<double> sample_f_serial(const BoundaryChart& chart,
                                    const FieldModel& field,
                                    const std::vector<double>& n_grid,
                                    QuadTol quad) {
    std::vector<double> out(n_grid.size());
    for (std::size_t i = 0; i < n_grid.size(); ++i)
        out[i] = f_of_n(chart, field, n_grid[i], quad);
    return out;
}

std::vector<double> sample_f_parallel(const BoundaryChart& chart,
                                      const FieldModel& field,
                                      const std::vector<double>& n_grid,
                                      QuadTol quad) {
    std::vector<double> out(n_grid.size());
    const auto n = static_cast<std::ptrdiff_t>(n_grid.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (std::ptrdiff_t i = 0; i < n; ++i)
        out[i] = f_of_n(chart, field, n_grid[i], quad);
    return out;
}

std::string sweep_csv(const std::vector<SweepEntry>& entries,
                      const std::vector<ScatteringResult>& results) {
    std::string out = "ptheta,H0,r_star,t_star,alpha,gamma,omega\n";
    char line[256];
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& r = results[i];
        std::snprintf(line, sizeof line,
                      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      entries[i].p_theta, entries[i].H0, r.r_star, r.t_star,
                      r.alpha, r.gamma_angle, r.omega);
        out += line;
    }
    return out;
}

}  // namespace magneto
