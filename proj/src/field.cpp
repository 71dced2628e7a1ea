#include "magneto/field.hpp"

#include <cmath>

namespace magneto {

FieldModel FieldModel::radial(std::function<double(double)> profile,
                              double domain_radius, std::string note) {
    FieldModel m;
    m.kind_ = FieldKind::Radial;
    m.radial_ = std::move(profile);
    m.domain_radius_ = domain_radius;
    m.regularity_note_ = std::move(note);
    return m;
}

FieldModel FieldModel::cartesian(std::function<double(double, double)> b,
                                 double domain_radius, std::string note) {
    FieldModel m;
    m.kind_ = FieldKind::Cartesian;
    m.cart_ = std::move(b);
    m.domain_radius_ = domain_radius;
    m.regularity_note_ = std::move(note);
    return m;
}

FieldModel FieldModel::tubular(std::function<double(double, double)> B,
                               double period_L, bool s_independent,
                               std::string note) {
    FieldModel m;
    m.kind_ = FieldKind::TubularAnalytic;
    m.tubular_ = std::move(B);
    m.period_L_ = period_L;
    m.s_independent_ = s_independent;
    m.regularity_note_ = std::move(note);
    return m;
}

FieldModel FieldModel::from_expression(FieldKind kind, const std::string& text,
                                       double domain_radius, double period_L) {
    Expression expr = Expression::parse(text);
    FieldModel m;
    switch (kind) {
        case FieldKind::Radial:
            if (expr.uses("q1") || expr.uses("q2") || expr.uses("n") || expr.uses("s"))
                throw ConfigError("radial field expression may only use r: " + text);
            m = radial([expr](double r) {
                ExprEnv env;
                env.r = r;
                return expr.eval(env);
            }, domain_radius);
            break;
        case FieldKind::Cartesian:
            if (expr.uses("n") || expr.uses("s"))
                throw ConfigError("cartesian field expression may only use q1, q2, r: " + text);
            m = cartesian([expr](double q1, double q2) {
                ExprEnv env;
                env.q1 = q1;
                env.q2 = q2;
                env.r = std::hypot(q1, q2);
                return expr.eval(env);
            }, domain_radius);
            break;
        case FieldKind::TubularAnalytic:
            if (expr.uses("q1") || expr.uses("q2") || expr.uses("r"))
                throw ConfigError("tubular field expression may only use n, s: " + text);
            m = tubular([expr](double n, double s) {
                ExprEnv env;
                env.n = n;
                env.s = s;
                return expr.eval(env);
            }, period_L, !expr.uses("s"));
            break;
    }
    m.expr_ = std::move(expr);
    m.domain_radius_ = domain_radius;
    return m;
}

double FieldModel::profile(double r) const {
    if (kind_ != FieldKind::Radial)
        throw DomainError("profile() requires a radial field model");
    double v = radial_(r);
    if (!std::isfinite(v))
        throw DomainError("field singular at r = " + std::to_string(r));
    return v;
}

double FieldModel::trace(double n, double s) const {
    if (kind_ != FieldKind::TubularAnalytic)
        throw DomainError("trace() requires a tubular field model");
    return tubular_(n, s);
}

double FieldModel::eval(const Vec2& q) const {
    double v;
    switch (kind_) {
        case FieldKind::Radial:
            v = radial_(q.norm());
            break;
        case FieldKind::Cartesian:
            v = cart_(q.x, q.y);
            break;
        default:
            throw DomainError("tubular field has no Cartesian evaluation");
    }
    if (!std::isfinite(v))
        throw DomainError("field singular at (" + std::to_string(q.x) + ", " +
                          std::to_string(q.y) + ")");
    return v;
}

double FieldModel::flux_primitive(double r, const QuadTol& tol) const {
    if (kind_ != FieldKind::Radial)
        throw DomainError("flux_primitive requires a radial field model");
    if (r < 0.0) throw DomainError("flux_primitive: r must be nonnegative");
    if (r == 0.0) return 0.0;
    if (closed_G_) return (*closed_G_)(r);
    auto integrand = [this](double tau) { return tau * radial_(tau); };
    return integrate(integrand, 0.0, r, tol);
}

double eval_field(const FieldModel& model, const Vec2& q) {
    return model.eval(q);
}

std::pair<double, double> mean_and_oscillation(const FieldModel& model,
                                               double n, int grid_size,
                                               const QuadTol& tol) {
    if (model.kind() != FieldKind::TubularAnalytic)
        throw DomainError("mean_and_oscillation requires a tubular field model");
    if (grid_size < 16)
        throw DomainError("mean_and_oscillation: grid_size must be >= 16");
    const double L = model.period();
    double mean;
    if (model.s_independent()) {
        mean = model.trace(n, 0.0);
        return {mean, 0.0};
    }
    mean = integrate([&](double s) { return model.trace(n, s); }, 0.0, L, tol) / L;
    double osc = 0.0;
    for (int i = 0; i < grid_size; ++i) {
        double s = L * (i + 0.5) / grid_size;
        osc = std::max(osc, std::fabs(model.trace(n, s) - mean));
    }
    return {mean, osc};
}

}  // namespace magneto
