#pragma once
#include <vector>

#include "magneto/chart.hpp"
#include "magneto/field.hpp"
#include "magneto/radial.hpp"

namespace magneto {

struct SweepEntry {
    double p_theta;
    double H0;
};

// Converts (p_theta, H0) into a boundary entry state at theta1 = 0 with
// v_r < 0. Requires v_theta^2 = (p_theta - G(1))^2 < 2*H0.
EntryState sweep_entry_state(const FieldModel& field, const SweepEntry& e,
                             QuadTol quad = {});

// Scattering over a batch of entries. The parallel kernel and the serial
// reference compute identical results; the serial path is kept as the
// testing baseline.
std::vector<ScatteringResult> sweep_scatter_serial(const FieldModel& field,
                                                   const std::vector<SweepEntry>& entries,
                                                   QuadTol quad = {});
std::vector<ScatteringResult> sweep_scatter_parallel(const FieldModel& field,
                                                     const std::vector<SweepEntry>& entries,
                                                     QuadTol quad = {});

// f(n) over an n-grid (certificate evidence sampling), serial and parallel.
std::vector<double> sample_f_serial(const BoundaryChart& chart,
                                    const FieldModel& field,
                                    const std::vector<double>& n_grid,
                                    QuadTol quad = {});
std::vector<double> sample_f_parallel(const BoundaryChart& chart,
                                      const FieldModel& field,
                                      const std::vector<double>& n_grid,
                                      QuadTol quad = {});

// CSV block `ptheta,H0,r_star,t_star,alpha,gamma,omega` for a sweep.
std::string sweep_csv(const std::vector<SweepEntry>& entries,
                      const std::vector<ScatteringResult>& results);

}  // namespace magneto
