#include "magneto/svg.hpp"

#include <cstdio>

namespace magneto {

std::string trajectory_svg(const std::vector<PhaseState>& samples,
                           double domain_radius, std::size_t max_points) {
    const int size = 640;
    const double margin = 1.1 * domain_radius;
    const double scale = size / (2.0 * margin);
    auto px = [&](double x) { return (x + margin) * scale; };
    auto py = [&](double y) { return (margin - y) * scale; };

    char buf[160];
    std::string out;
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" "
                  "height=\"%d\" viewBox=\"0 0 %d %d\">\n",
                  size, size, size, size);
    out += buf;
    std::snprintf(buf, sizeof buf,
                  "<circle cx=\"%.6f\" cy=\"%.6f\" r=\"%.6f\" fill=\"none\" "
                  "stroke=\"#c62828\" stroke-width=\"1.5\"/>\n",
                  px(0.0), py(0.0), domain_radius * scale);
    out += buf;

    std::size_t stride = samples.size() > max_points ? samples.size() / max_points + 1 : 1;
    out += "<polyline fill=\"none\" stroke=\"#1565c0\" stroke-width=\"0.8\" points=\"";
    for (std::size_t i = 0; i < samples.size(); i += stride) {
        std::snprintf(buf, sizeof buf, "%.6f,%.6f ", px(samples[i].q.x),
                      py(samples[i].q.y));
        out += buf;
    }
    if (!samples.empty() && (samples.size() - 1) % stride != 0) {
        std::snprintf(buf, sizeof buf, "%.6f,%.6f ", px(samples.back().q.x),
                      py(samples.back().q.y));
        out += buf;
    }
    out += "\"/>\n</svg>\n";
    return out;
}

}  // namespace magneto
