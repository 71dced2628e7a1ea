// Compares the serial reference kernels against the OpenMP ones on a
// scattering sweep and on certificate f-sampling, checking that both paths
// produce identical numbers.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "magneto/chart.hpp"
#include "magneto/sweep.hpp"

using namespace magneto;
using clk = std::chrono::steady_clock;

static double seconds_since(clk::time_point t0) {
    return std::chrono::duration<double>(clk::now() - t0).count();
}

int main() {
    FieldModel field = FieldModel::radial([](double r) { return 1.0 + 0.5 * r * r; });

    std::vector<SweepEntry> entries;
    for (int i = 0; i < 96; ++i) {
        double pth = -0.8 + 1.6 * i / 95.0;
        entries.push_back({pth, 2.0 + 0.01 * i});
    }

    auto t0 = clk::now();
    auto serial = sweep_scatter_serial(field, entries);
    double ts = seconds_since(t0);
    t0 = clk::now();
    auto parallel = sweep_scatter_parallel(field, entries);
    double tp = seconds_since(t0);

    double max_diff = 0.0;
    for (size_t i = 0; i < serial.size(); ++i)
        max_diff = std::max(max_diff, std::fabs(serial[i].omega - parallel[i].omega));
    std::printf("scatter sweep (%zu entries): serial %.3fs, parallel %.3fs, speedup %.2fx, max |domega| = %.3g\n",
                entries.size(), ts, tp, ts / tp, max_diff);

    BoundaryChart chart = build_chart(circle_curve(1.0), 0.5);
    FieldModel trace = FieldModel::tubular(
        [](double n, double s) { return 1.0 / n + (1.0 + n) * std::sin(s); },
        chart.length());
    std::vector<double> grid;
    for (int k = 0; k < 160; ++k)
        grid.push_back(1e-4 * std::pow(0.5 / 1e-4, k / 160.0));  // stays below delta

    t0 = clk::now();
    auto fs = sample_f_serial(chart, trace, grid);
    ts = seconds_since(t0);
    t0 = clk::now();
    auto fp = sample_f_parallel(chart, trace, grid);
    tp = seconds_since(t0);

    max_diff = 0.0;
    for (size_t i = 0; i < fs.size(); ++i)
        max_diff = std::max(max_diff, std::fabs(fs[i] - fp[i]));
    std::printf("f-sampling (%zu nodes): serial %.3fs, parallel %.3fs, speedup %.2fx, max |df| = %.3g\n",
                grid.size(), ts, tp, ts / tp, max_diff);
    return 0;
}
