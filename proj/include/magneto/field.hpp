#pragma once
#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "magneto/core.hpp"
#include "magneto/expr.hpp"
#include "magneto/quadrature.hpp"

namespace magneto {

enum class FieldKind { Radial, Cartesian, TubularAnalytic };

// A scalar magnetic field b(q). Radial models depend only on ||q||,
// Cartesian models on (q1, q2), TubularAnalytic models give the trace
// B(n, s) directly on a collar chart of period L.
class FieldModel {
public:
    static FieldModel radial(std::function<double(double)> profile,
                             double domain_radius = 1.0,
                             std::string regularity_note = {});
    static FieldModel cartesian(std::function<double(double, double)> b,
                                double domain_radius = 1.0,
                                std::string regularity_note = {});
    static FieldModel tubular(std::function<double(double, double)> B,
                              double period_L, bool s_independent = false,
                              std::string regularity_note = {});
    // Builds a model from a closed-form expression string; Radial expressions
    // use the variable r, Cartesian ones q1/q2, tubular traces n/s.
    static FieldModel from_expression(FieldKind kind, const std::string& expr,
                                      double domain_radius = 1.0,
                                      double period_L = 2.0 * pi);

    FieldKind kind() const { return kind_; }
    double domain_radius() const { return domain_radius_; }
    const std::string& regularity_note() const { return regularity_note_; }
    const std::optional<Expression>& expression() const { return expr_; }
    bool s_independent() const { return s_independent_; }
    double period() const { return period_L_; }

    // Radial profile value b(r); valid for Radial models only.
    double profile(double r) const;
    // Tubular trace B(n, s); valid for TubularAnalytic models only.
    double trace(double n, double s) const;
    // b at a Cartesian point (Radial or Cartesian models).
    double eval(const Vec2& q) const;

    // Closed-form flux primitive, when the model ships one.
    void set_closed_flux_primitive(std::function<double(double)> G) {
        closed_G_ = std::move(G);
    }
    bool has_closed_flux_primitive() const { return closed_G_.has_value(); }

    // G(r) = integral of tau*b(tau) over (0, r]; closed form when available,
    // adaptive quadrature otherwise. G(0) = 0 exactly.
    double flux_primitive(double r, const QuadTol& tol = {}) const;

private:
    FieldKind kind_ = FieldKind::Radial;
    std::function<double(double)> radial_;
    std::function<double(double, double)> cart_;
    std::function<double(double, double)> tubular_;
    std::optional<std::function<double(double)>> closed_G_;
    std::optional<Expression> expr_;
    double domain_radius_ = 1.0;
    double period_L_ = 2.0 * pi;
    bool s_independent_ = false;
    std::string regularity_note_;
};

// b at a Cartesian point. DomainError at a declared singularity (the value
// fails to be finite there).
double eval_field(const FieldModel& model, const Vec2& q);

// Mean (1/L) * integral of B(n, .) over one period, and the grid-resolved
// sup of |B(n, s) - mean|. The oscillation is a lower estimate of the true
// sup: it is resolved only to the given grid.
std::pair<double, double> mean_and_oscillation(const FieldModel& model,
                                               double n, int grid_size,
                                               const QuadTol& tol = {});

}  // namespace magneto
