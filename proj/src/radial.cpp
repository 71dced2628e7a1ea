#include "magneto/radial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "magneto/quadrature.hpp"

namespace magneto {

namespace {
constexpr double kSlopeTol = 1e-9;
// V' at the boundary comes from one-sided finite differences whose noise
// floor sits near 1e-8; boundary criticality uses a matching tolerance.
constexpr double kBoundarySlopeTol = 1e-7;
// The deflection integral sees a turning-point error of order sqrt(dr*), so
// the root must be resolved to near machine precision.
constexpr double kRootTol = 1e-15;
constexpr int kScanGrid = 4096;
}  // namespace

ReducedSystem::ReducedSystem(const FieldModel& field, double p_theta, double H0,
                             QuadTol quad)
    : field_(&field), p_theta_(p_theta), H0_(H0), quad_(quad) {
    if (field.kind() != FieldKind::Radial)
        throw DomainError("ReducedSystem requires a radial field");
    // G feeds the singular scattering integrand; keep its own budget tight.
    quad_.abs_tol = std::min(quad_.abs_tol, 1e-14);
    quad_.rel_tol = std::min(quad_.rel_tol, 1e-12);
}

double ReducedSystem::G(double r) const { return field_->flux_primitive(r, quad_); }

double ReducedSystem::V(double r) const {
    if (r < 0.0) throw DomainError("V: r must be nonnegative");
    if (r == 0.0) {
        if (p_theta_ != 0.0)
            throw DomainError("V is singular at r = 0 when p_theta != 0");
        // Continuous extension: limit of (G(r)/r)^2 / 2 over shrinking samples.
        double prev = std::numeric_limits<double>::quiet_NaN();
        for (double rr = 1e-3; rr >= 1e-7; rr *= 0.1) {
            double g = G(rr) / rr;
            double val = 0.5 * g * g;
            if (std::isfinite(prev) &&
                std::fabs(val - prev) < 1e-6 * std::max(1.0, std::fabs(val)))
                return val;
            prev = val;
        }
        throw DomainError("V(0): sampled limit does not stabilize");
    }
    double w = p_theta_ - G(r);
    return 0.5 * w * w / (r * r);
}

double ReducedSystem::Vprime(double r) const {
    const double h = 1e-7;
    double v0 = V(r);
    double d1 = (v0 - V(r - h)) / h;
    double d2 = (v0 - V(r - 0.5 * h)) / (0.5 * h);
    return 2.0 * d2 - d1;  // one Richardson pass on the one-sided difference
}

ReducedSystem ReducedSystem::from_entry(const FieldModel& field, double v_r0,
                                        double v_th0, QuadTol quad) {
    double G1 = field.flux_primitive(1.0, quad);
    double p_theta = v_th0 + G1;
    double H0 = 0.5 * (v_r0 * v_r0 + v_th0 * v_th0);
    return ReducedSystem(field, p_theta, H0, quad);
}

TurningPoint turning_point(const ReducedSystem& sys) {
    const double H0 = sys.H0();
    double V1 = sys.V(1.0);
    // Tangent root at the boundary: V(1) = H0 with V'(1) = 0 pins the radius
    // at 1 (no sign change for the scan below to find).
    if (std::fabs(V1 - H0) <= 1e-11 * std::max(1.0, std::fabs(H0)) &&
        std::fabs(sys.Vprime(1.0)) <= kBoundarySlopeTol) {
        TurningPoint tp;
        tp.status = TurningStatus::TrappedAtCriticalPoint;
        tp.r_star = 1.0;
        tp.slope = 0.0;
        return tp;
    }
    if (V1 > H0 + 1e-12)
        throw HypothesisViolation("turning_point: V(1) > H0, particle cannot sit on the boundary");

    const double r_floor = (sys.p_theta() != 0.0) ? 1e-6 : 0.0;
    auto phi = [&](double r) { return sys.V(r) - H0; };

    // Rightmost sign change on the scan grid; phi(1) <= 0.
    double hi_r = 1.0, hi_phi = std::min(V1 - H0, 0.0);
    double bracket_lo = 0.0, bracket_hi = 0.0;
    bool found = false;
    for (int i = kScanGrid - 1; i >= 1; --i) {
        double r = r_floor + (1.0 - r_floor) * i / kScanGrid;
        double p = phi(r);
        if (p > 0.0 && hi_phi <= 0.0) {
            bracket_lo = r;
            bracket_hi = hi_r;
            found = true;
            break;
        }
        hi_r = r;
        hi_phi = p;
    }

    TurningPoint tp;
    if (!found) {
        if (sys.p_theta() == 0.0) {
            tp.status = TurningStatus::NoSolution;
            return tp;
        }
        throw DomainError("turning_point: no crossing found although p_theta != 0");
    }

    double lo = bracket_lo, hi = bracket_hi;  // phi(lo) > 0 >= phi(hi)
    while (hi - lo > kRootTol) {
        double mid = 0.5 * (lo + hi);
        if (phi(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    tp.r_star = 0.5 * (lo + hi);
    tp.slope = sys.Vprime(tp.r_star);
    tp.status = (tp.slope < -kSlopeTol) ? TurningStatus::Usable
                                        : TurningStatus::TrappedAtCriticalPoint;
    return tp;
}

bool entering_predicate(double v_r0, double v_th0, double B1) {
    if (v_r0 < 0.0) return true;
    if (v_r0 == 0.0 && v_th0 != 0.0) return B1 / v_th0 < -1.0;
    return false;
}

namespace {

// Shared core of the deflection and transit integrals:
//   integral over (r_lo, 1) of num(r) / sqrt(2*(H0 - V(r))) dr,
// with inverse-square-root endpoints removed by r = r_lo + u^2 on the left
// (when singular_left) and r = 1 - w^2 on the right (when V(1) ~ H0).
double radial_integral(const ReducedSystem& sys,
                       const std::function<double(double)>& num, double r_lo,
                       bool singular_left, double slope_left, double abs_tol) {
    const double H0 = sys.H0();
    auto delta = [&](double r) { return H0 - sys.V(r); };

    double V1 = sys.V(1.0);
    bool singular_right = std::fabs(V1 - H0) < 1e-11;
    double slope_right = singular_right ? sys.Vprime(1.0) : 0.0;

    const double mid = 0.5 * (r_lo + 1.0);
    QuadTol tol;
    tol.abs_tol = 0.25 * abs_tol;
    tol.rel_tol = 1e-10;

    double total = 0.0;

    // Left part (r_lo, mid).
    if (singular_left) {
        double umax = std::sqrt(mid - r_lo);
        double limit_val = num(r_lo) * std::sqrt(2.0 / std::max(-slope_left, 1e-300));
        auto fu = [&](double u) {
            double r = r_lo + u * u;
            double d = delta(r);
            if (d <= 0.0) return limit_val;
            return 2.0 * u * num(r) / std::sqrt(2.0 * d);
        };
        total += integrate(fu, 0.0, umax, tol);
    } else {
        auto fr = [&](double r) {
            double d = std::max(delta(r), 0.0);
            return d > 0.0 ? num(r) / std::sqrt(2.0 * d) : 0.0;
        };
        total += integrate(fr, r_lo, mid, tol);
    }

    // Right part (mid, 1).
    if (singular_right) {
        double wmax = std::sqrt(1.0 - mid);
        double limit_val = num(1.0) * std::sqrt(2.0 / std::max(slope_right, 1e-300));
        auto fw = [&](double w) {
            double r = 1.0 - w * w;
            double d = delta(r);
            if (d <= 0.0) return limit_val;
            return 2.0 * w * num(r) / std::sqrt(2.0 * d);
        };
        total += integrate(fw, 0.0, wmax, tol);
    } else {
        auto fr = [&](double r) {
            double d = std::max(delta(r), 0.0);
            return d > 0.0 ? num(r) / std::sqrt(2.0 * d) : 0.0;
        };
        total += integrate(fr, mid, 1.0, tol);
    }
    return total;
}

}  // namespace

double deflection_alpha(const ReducedSystem& sys, const TurningPoint& tp,
                        double abs_tol) {
    if (tp.status == TurningStatus::TrappedAtCriticalPoint)
        throw SingularityError("deflection_alpha: V'(r*) >= 0, deflection integral diverges");
    auto num = [&](double r) {
        return (sys.p_theta() - sys.G(r)) / (r * r);
    };
    if (tp.status == TurningStatus::Usable)
        return 2.0 * radial_integral(sys, num, tp.r_star, true, tp.slope, abs_tol);
    // Through-origin branch: p_theta = 0, V < H0 on [0, 1); the integrand
    // -G(r)/r^2 extends continuously to r = 0.
    auto num0 = [&](double r) {
        if (r < 1e-7) r = 1e-7;
        return -sys.G(r) / (r * r);
    };
    return 2.0 * radial_integral(sys, num0, 0.0, false, 0.0, abs_tol);
}

double transit_time(const ReducedSystem& sys, const TurningPoint& tp,
                    double abs_tol) {
    if (tp.status == TurningStatus::TrappedAtCriticalPoint)
        throw SingularityError("transit_time: V'(r*) >= 0, the turning point is reached in infinite time");
    auto one = [](double) { return 1.0; };
    if (tp.status == TurningStatus::Usable)
        return radial_integral(sys, one, tp.r_star, true, tp.slope, abs_tol);
    return radial_integral(sys, one, 0.0, false, 0.0, abs_tol);
}

PhaseState entry_to_cartesian(const EntryState& entry) {
    double c = std::cos(entry.theta1), s = std::sin(entry.theta1);
    PhaseState st;
    st.q = {c, s};
    // v = (v_r + i v_theta) e^{i theta1}
    st.v = {entry.v_r0 * c - entry.v_th0 * s, entry.v_r0 * s + entry.v_th0 * c};
    st.t = 0.0;
    return st;
}

ScatteringResult scattering(const FieldModel& field, const EntryState& entry,
                            QuadTol quad) {
    double B1 = field.profile(1.0);
    if (!entering_predicate(entry.v_r0, entry.v_th0, B1))
        throw HypothesisViolation("scattering: the entry state does not enter the disc");

    ReducedSystem sys = ReducedSystem::from_entry(field, entry.v_r0, entry.v_th0, quad);

    ScatteringResult res;
    res.p_theta = sys.p_theta();
    res.H0 = sys.H0();

    // Tangential entry at a critical point of V pins the radius at 1.
    if (entry.v_r0 == 0.0 && std::fabs(sys.Vprime(1.0)) <= kBoundarySlopeTol) {
        res.branch = ScatterBranch::NoEscape;
        res.omega = res.alpha = res.t_star =
            std::numeric_limits<double>::quiet_NaN();
        return res;
    }

    TurningPoint tp = turning_point(sys);

    double gamma = std::atan2(entry.v_th0, entry.v_r0);
    if (gamma < 0.5 * pi - 1e-15) gamma += 2.0 * pi;
    res.gamma_angle = gamma;

    if (tp.status == TurningStatus::TrappedAtCriticalPoint) {
        res.branch = ScatterBranch::TrappedAtCriticalPoint;
        res.r_star = tp.r_star;
        res.omega = res.alpha = res.t_star =
            std::numeric_limits<double>::quiet_NaN();
        return res;
    }

    res.alpha = deflection_alpha(sys, tp);
    res.t_star = transit_time(sys, tp);
    if (tp.status == TurningStatus::Usable) {
        res.branch = ScatterBranch::TurningPoint;
        res.r_star = tp.r_star;
        res.theta_accumulated = res.alpha;
        res.omega = wrap_angle(res.alpha + pi - 2.0 * gamma);
    } else {
        res.branch = ScatterBranch::ThroughOrigin;
        res.r_star = 0.0;
        res.theta_accumulated = res.alpha + pi;
        res.omega = wrap_angle(res.alpha - 2.0 * gamma);
    }
    res.theta2 = entry.theta1 + res.theta_accumulated;
    // v2 = (-v_r(0) + i v_theta(0)) e^{i theta2}
    double c = std::cos(res.theta2), s = std::sin(res.theta2);
    res.v_exit = {-entry.v_r0 * c - entry.v_th0 * s,
                  -entry.v_r0 * s + entry.v_th0 * c};
    return res;
}

RadialCertificate radial_confinement(const ReducedSystem& sys) {
    RadialCertificate cert;
    const double H0 = sys.H0();

    std::vector<double> rs, Vs;
    for (int k = 1; k <= 40; ++k) {
        double r = 1.0 - std::ldexp(1.0, -k);
        double v;
        try {
            v = sys.V(r);
        } catch (const QuadratureError&) {
            break;  // field too singular to sample closer; use what we have
        }
        rs.push_back(r);
        Vs.push_back(v);
        cert.trace.emplace_back(r, v);
    }
    if (Vs.size() < 10) return cert;

    const size_t tail = 12;
    size_t start = Vs.size() > tail ? Vs.size() - tail : 0;
    double liminf = std::numeric_limits<double>::infinity();
    for (size_t k = start; k < Vs.size(); ++k) liminf = std::min(liminf, Vs[k]);
    cert.liminf_V = liminf;

    bool h1 = liminf > H0;
    bool h2 = false;
    if (!h1 && std::fabs(liminf - H0) <= 1e-9 * std::max(1.0, H0)) {
        double limsup_q = -std::numeric_limits<double>::infinity();
        for (size_t k = start; k < Vs.size(); ++k)
            limsup_q = std::max(limsup_q, (Vs[k] - H0) / (rs[k] - 1.0));
        h2 = limsup_q < 0.0;
    }
    if (!h1 && !h2) return cert;

    // eta = sup{x : V(x) = H0}: rightmost crossing on a fine grid.
    const double r_hi = rs.back();
    const double r_lo = 1e-6;
    const int grid = 8192;
    auto phi = [&](double r) { return sys.V(r) - H0; };
    double prev_r = r_hi, prev_phi = phi(r_hi);
    bool found = false;
    double lo = 0.0, hi = 0.0;
    for (int i = grid - 1; i >= 0; --i) {
        double r = r_lo + (r_hi - r_lo) * i / grid;
        double p = phi(r);
        if (p <= 0.0 && prev_phi > 0.0) {
            lo = r;
            hi = prev_r;
            found = true;
            break;
        }
        prev_r = r;
        prev_phi = p;
    }
    if (!found) return cert;  // no crossing located; stay inconclusive
    while (hi - lo > kRootTol) {
        double mid = 0.5 * (lo + hi);
        if (phi(mid) <= 0.0)
            lo = mid;
        else
            hi = mid;
    }
    cert.verdict = RadialVerdict::Bound;
    cert.eta = 0.5 * (lo + hi);
    cert.hypothesis = h1 ? "H1" : "H2";
    return cert;
}

EscapeData escape_construct(const FieldModel& field, double r0, double v,
                            QuadTol quad) {
    if (!(r0 > 0.0 && r0 < 1.0)) throw DomainError("escape_construct: r0 must be in (0, 1)");
    if (!(v > 0.0)) throw DomainError("escape_construct: v must be positive");

    ReducedSystem sys(field, 0.0, 0.0, quad);
    double Vsup = 0.0;
    const int grid = 4096;
    for (int i = 1; i <= grid; ++i) {
        double r = static_cast<double>(i) / (grid + 1);
        Vsup = std::max(Vsup, std::fabs(sys.V(r)));
    }
    for (int k = 1; k <= 30; ++k)
        Vsup = std::max(Vsup, std::fabs(sys.V(1.0 - std::ldexp(1.0, -k))));
    if (Vsup > 1e12)
        throw UnboundedPotential("escape_construct: |V| exceeds 1e12 on the grid");

    double pr0 = std::sqrt(2.0 * (Vsup - sys.V(r0)) + v * v);
    EscapeData out;
    out.V_sup = Vsup;
    out.t_escape_bound = (1.0 - r0) / v;
    out.init.q = {r0, 0.0};
    // p_theta = 0: tangential velocity is -G(r0)/r0.
    out.init.v = {pr0, -sys.G(r0) / r0};
    out.init.t = 0.0;
    return out;
}

std::string ScatteringResult::to_json(const std::string& preset_name,
                                      double abs_tol) const {
    nlohmann::json j;
    switch (branch) {
        case ScatterBranch::TurningPoint: j["branch"] = "turning_point"; break;
        case ScatterBranch::ThroughOrigin: j["branch"] = "through_origin"; break;
        case ScatterBranch::TrappedAtCriticalPoint:
            j["branch"] = "trapped_at_critical_point";
            break;
        case ScatterBranch::NoEscape: j["branch"] = "no_escape"; break;
    }
    j["r_star"] = r_star;
    j["t_star"] = t_star;
    j["alpha"] = alpha;
    j["gamma"] = gamma_angle;
    j["omega"] = omega;
    j["theta_accumulated"] = theta_accumulated;
    j["theta2"] = theta2;
    j["v_exit"] = {v_exit.x, v_exit.y};
    j["p_theta"] = p_theta;
    j["H0"] = H0;
    if (!preset_name.empty()) j["preset"] = preset_name;
    j["abs_tol"] = abs_tol;
    return j.dump(2);
}

std::string RadialCertificate::to_json() const {
    nlohmann::json j;
    j["verdict"] = verdict == RadialVerdict::Bound ? "bound" : "inconclusive";
    j["eta"] = eta;
    j["hypothesis"] = hypothesis;
    j["liminf_V"] = liminf_V;
    nlohmann::json tr = nlohmann::json::array();
    for (const auto& [r, v] : trace) tr.push_back({r, v});
    j["trace"] = tr;
    return j.dump(2);
}

}  // namespace magneto
