#pragma once
#include <functional>

#include "magneto/core.hpp"

namespace magneto {

struct QuadTol {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_depth = 60;
};

// Adaptive Gauss(7)-Kronrod(15) over [a, b]. Nodes never touch the interval
// endpoints, so integrable endpoint singularities are handled by subdivision.
// Throws QuadratureError (carrying the achieved error and the partial value)
// when the requested tolerance cannot be met.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadTol& tol = {});

}  // namespace magneto
