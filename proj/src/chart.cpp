#include "magneto/chart.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "magneto/quadrature.hpp"

namespace magneto {

CurveSpec circle_curve(double radius) {
    CurveSpec c;
    c.c = [radius](double u) { return Vec2{radius * std::cos(u), radius * std::sin(u)}; };
    c.dc = [radius](double u) { return Vec2{-radius * std::sin(u), radius * std::cos(u)}; };
    c.ddc = [radius](double u) { return Vec2{-radius * std::cos(u), -radius * std::sin(u)}; };
    c.period = 2.0 * pi;
    return c;
}

CurveSpec ellipse_curve(double a, double b) {
    CurveSpec c;
    c.c = [a, b](double u) { return Vec2{a * std::cos(u), b * std::sin(u)}; };
    c.dc = [a, b](double u) { return Vec2{-a * std::sin(u), b * std::cos(u)}; };
    c.ddc = [a, b](double u) { return Vec2{-a * std::cos(u), -b * std::sin(u)}; };
    c.period = 2.0 * pi;
    return c;
}

namespace {
constexpr int kArcTableSize = 4096;
constexpr int kProjectionGrid = 1024;
}  // namespace

double BoundaryChart::u_of_s(double s) const {
    s = s - L_ * std::floor(s / L_);
    if (const_speed_) return s / speed0_;
    // Table lookup, then Newton on s(u) with s'(u) = |c'(u)|.
    auto it = std::upper_bound(s_grid_.begin(), s_grid_.end(), s);
    size_t idx = (it == s_grid_.begin()) ? 0 : (it - s_grid_.begin() - 1);
    idx = std::min(idx, u_grid_.size() - 2);
    double u = u_grid_[idx] + (u_grid_[idx + 1] - u_grid_[idx]) *
                                  (s - s_grid_[idx]) /
                                  std::max(s_grid_[idx + 1] - s_grid_[idx], 1e-300);
    for (int it2 = 0; it2 < 8; ++it2) {
        double speed = curve_.dc(u).norm();
        double s_here = s_grid_[idx] +
                        integrate([this](double t) { return curve_.dc(t).norm(); },
                                  u_grid_[idx], u, QuadTol{1e-14, 1e-13, 30});
        double step = (s - s_here) / speed;
        u += step;
        if (std::fabs(step) < 1e-14 * curve_.period) break;
    }
    return u;
}

Vec2 BoundaryChart::gamma(double s) const { return curve_.c(u_of_s(s)); }

Vec2 BoundaryChart::tangent(double s) const {
    Vec2 d = curve_.dc(u_of_s(s));
    return d / d.norm();
}

Vec2 BoundaryChart::normal(double s) const { return rot90(tangent(s)); }

double BoundaryChart::kappa(double s) const {
    double u = u_of_s(s);
    Vec2 d = curve_.dc(u), dd = curve_.ddc(u);
    double speed = d.norm();
    return det(d, dd) / (speed * speed * speed);
}

Vec2 BoundaryChart::psi(double n, double s) const {
    return gamma(s) + n * normal(s);
}

std::pair<double, double> BoundaryChart::project(const Vec2& q) const {
    // Coarse scan in the raw parameter u (uniform), then refine the
    // stationarity condition (q - c(u)) . c'(u) = 0 by bisection.
    double best_u = 0.0, best_d2 = std::numeric_limits<double>::infinity();
    const double P = curve_.period;
    for (int i = 0; i < kProjectionGrid; ++i) {
        double u = P * i / kProjectionGrid;
        double d2 = (q - curve_.c(u)).norm2();
        if (d2 < best_d2) {
            best_d2 = d2;
            best_u = u;
        }
    }
    double half = P / kProjectionGrid;
    double lo = best_u - half, hi = best_u + half;
    auto g = [&](double u) { return dot(q - curve_.c(u), curve_.dc(u)); };
    double glo = g(lo), ghi = g(hi);
    double u = best_u;
    if (glo * ghi <= 0.0) {
        for (int i = 0; i < 100; ++i) {
            u = 0.5 * (lo + hi);
            double gm = g(u);
            if (gm == 0.0 || hi - lo < 1e-15) break;
            if (glo * gm <= 0.0) {
                hi = u;
                ghi = gm;
            } else {
                lo = u;
                glo = gm;
            }
        }
    }
    u = u - P * std::floor(u / P);
    double s = const_speed_
                   ? u * speed0_
                   : integrate([this](double t) { return curve_.dc(t).norm(); },
                               0.0, u, QuadTol{1e-14, 1e-13, 30});
    Vec2 g0 = curve_.c(u);
    Vec2 tang = curve_.dc(u);
    tang = tang / tang.norm();
    double n = dot(q - g0, rot90(tang));
    return {n, s};
}

std::pair<double, double> BoundaryChart::inverse_psi(const Vec2& q) const {
    auto [n, s] = project(q);
    if (!(n > 0.0 && n < delta_))
        throw OutOfCollar("point outside the collar: n = " + std::to_string(n));
    return {n, s};
}

BoundaryChart::TubularState BoundaryChart::to_tubular(const Vec2& q, const Vec2& v) const {
    auto [n, s] = project(q);
    Vec2 tang = tangent(s);
    Vec2 norm = rot90(tang);
    double v_n = dot(v, norm);
    double v_s = dot(v, tang);
    double factor = 1.0 - n * kappa(s);
    if (std::fabs(factor) < 1e-12)
        throw DegenerateMetric("tubular chart degenerate: 1 - n*kappa ~ 0");
    return {n, s, v_n, v_s / factor};
}

BoundaryChart build_chart(const CurveSpec& curve, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw GeometryError("epsilon must lie in (0, 1)");
    BoundaryChart chart;
    chart.curve_ = curve;
    chart.eps_ = epsilon;

    // Cumulative arc length over a fine u-grid.
    chart.u_grid_.resize(kArcTableSize + 1);
    chart.s_grid_.resize(kArcTableSize + 1);
    double s_acc = 0.0;
    chart.u_grid_[0] = 0.0;
    chart.s_grid_[0] = 0.0;
    for (int i = 1; i <= kArcTableSize; ++i) {
        double u0 = curve.period * (i - 1) / kArcTableSize;
        double u1 = curve.period * i / kArcTableSize;
        s_acc += integrate([&](double t) { return curve.dc(t).norm(); }, u0, u1,
                           QuadTol{1e-14, 1e-13, 20});
        chart.u_grid_[i] = u1;
        chart.s_grid_[i] = s_acc;
    }
    chart.L_ = s_acc;

    // Constant-speed parametrizations (circles) get an exact linear s(u).
    double sp0 = curve.dc(0.0).norm();
    bool const_speed = true;
    for (int i = 0; i <= 64; ++i) {
        double u = curve.period * i / 64.0;
        if (std::fabs(curve.dc(u).norm() - sp0) > 1e-13 * std::max(1.0, sp0)) {
            const_speed = false;
            break;
        }
    }
    chart.const_speed_ = const_speed;
    chart.speed0_ = sp0;

    // Curvature bounds on a grid; kappa' by centered differences in s.
    double K = 0.0, Kp = 0.0;
    const int grid = 2048;
    const double hs = 1e-6 * chart.L_;
    std::vector<double> kappas(grid);
    for (int i = 0; i < grid; ++i) {
        double s = chart.L_ * i / grid;
        kappas[i] = chart.kappa(s);
        K = std::max(K, std::fabs(kappas[i]));
    }
    for (int i = 0; i < grid; ++i) {
        double s = chart.L_ * i / grid;
        double dk = (chart.kappa(s + hs) - chart.kappa(s - hs)) / (2.0 * hs);
        Kp = std::max(Kp, std::fabs(dk));
    }
    chart.K_ = K;
    chart.Kp_ = Kp;
    if (K <= 0.0) throw GeometryError("flat curve: K = 0 gives no collar width");
    chart.delta_ = epsilon / K;

    // Injectivity sampling: psi followed by projection must round-trip.
    for (int i = 0; i < 16; ++i) {
        double s = chart.L_ * (i + 0.3) / 16;
        for (double n : {0.1 * chart.delta_, 0.5 * chart.delta_, 0.9 * chart.delta_}) {
            Vec2 q = chart.psi(n, s);
            auto [n2, s2] = chart.project(q);
            double ds = std::fabs(s2 - s);
            ds = std::min(ds, chart.L_ - ds);
            if (std::fabs(n2 - n) > 1e-8 * std::max(1.0, chart.delta_) || ds > 1e-6 * chart.L_)
                throw GeometryError("tubular map fails injectivity sampling");
        }
    }
    return chart;
}

double field_trace(const BoundaryChart& chart, const FieldModel& field,
                   double n, double s) {
    if (field.kind() == FieldKind::TubularAnalytic) return field.trace(n, s);
    return -field.eval(chart.psi(n, s)) * (1.0 - n * chart.kappa(s));
}

}  // namespace magneto
