#pragma once
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "magneto/core.hpp"
#include "magneto/field.hpp"

namespace magneto {

// A closed C2 curve given in an arbitrary parameter u on [0, period),
// with first and second derivatives.
struct CurveSpec {
    std::function<Vec2(double)> c;
    std::function<Vec2(double)> dc;
    std::function<Vec2(double)> ddc;
    double period = 2.0 * pi;
};

CurveSpec circle_curve(double radius = 1.0);
CurveSpec ellipse_curve(double a, double b);

// Arc-length parametrized boundary with curvature data and the tubular
// diffeomorphism psi(n, s) = gamma(s) + n*N(s) on a collar of width delta.
// N is the inward unit normal (the curve must be oriented so that rot90 of
// the tangent points inward, i.e. counterclockwise for a convex domain).
class BoundaryChart {
public:
    double length() const { return L_; }
    double K() const { return K_; }
    double Kp() const { return Kp_; }
    double delta() const { return delta_; }
    double epsilon() const { return eps_; }

    Vec2 gamma(double s) const;
    Vec2 tangent(double s) const;   // gamma'(s), unit
    Vec2 normal(double s) const;    // inward unit normal
    double kappa(double s) const;   // signed curvature det(gamma', gamma'')

    Vec2 psi(double n, double s) const;
    // Nearest-boundary projection: coarse grid over s, then 1D root
    // refinement of (q - gamma(s)) . gamma'(s) = 0. Throws OutOfCollar when
    // the refined n falls outside (0, delta).
    std::pair<double, double> inverse_psi(const Vec2& q) const;
    // Same projection without the collar check; n may be any real value.
    std::pair<double, double> project(const Vec2& q) const;

    // Tubular velocity components of a Cartesian state at q = psi(n, s):
    // v_n = ndot, v_s = (1 - n*kappa)*sdot.
    struct TubularState {
        double n, s, ndot, sdot;
    };
    TubularState to_tubular(const Vec2& q, const Vec2& v) const;

    friend BoundaryChart build_chart(const CurveSpec& curve, double epsilon);

private:
    CurveSpec curve_;
    double L_ = 0.0, K_ = 0.0, Kp_ = 0.0, delta_ = 0.0, eps_ = 0.0;
    // Cumulative arc length over a fine parameter grid, for inverting s(u).
    std::vector<double> u_grid_, s_grid_;
    bool const_speed_ = false;  // |c'| constant: s(u) is linear
    double speed0_ = 1.0;

    double u_of_s(double s) const;
};

// Reparametrizes to unit speed, computes curvature bounds, sets
// delta = epsilon / K, and sanity-samples injectivity of psi.
BoundaryChart build_chart(const CurveSpec& curve, double epsilon);

// B(n, s) on the chart: -b(psi(n, s)) * (1 - n*kappa(s)) for Cartesian or
// radial models, or the model's own trace for TubularAnalytic ones.
double field_trace(const BoundaryChart& chart, const FieldModel& field,
                   double n, double s);

}  // namespace magneto
