#pragma once
#include <memory>
#include <set>
#include <string>

#include "magneto/core.hpp"

namespace magneto {

// Variables a field expression may reference. Radial profiles use r,
// Cartesian fields use q1/q2, tubular traces use n/s.
struct ExprEnv {
    double r = 0.0;
    double q1 = 0.0;
    double q2 = 0.0;
    double n = 0.0;
    double s = 0.0;
};

namespace detail {
struct ExprNode;
}

// A compiled closed-form scalar expression over {r, q1, q2, n, s}.
// Supported: + - * / ^, parentheses, numeric literals, pi/e, and the
// functions sin cos tan exp log sqrt abs asin acos atan arcsin arccos arctan.
class Expression {
public:
    static Expression parse(const std::string& text);

    double eval(const ExprEnv& env) const;
    const std::set<std::string>& variables() const { return vars_; }
    bool uses(const std::string& var) const { return vars_.count(var) > 0; }
    const std::string& text() const { return text_; }

private:
    std::shared_ptr<const detail::ExprNode> root_;
    std::set<std::string> vars_;
    std::string text_;
};

}  // namespace magneto
