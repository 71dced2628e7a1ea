#include "magneto/quadrature.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>

namespace magneto {
namespace {

// Kronrod-15 abscissae on [-1, 1] (positive half) and weights; the embedded
// Gauss-7 rule uses every other node.
constexpr std::array<double, 8> xk = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr std::array<double, 8> wk = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
    double integral;
    double error;
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    std::array<double, 15> fv{};
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * xk[i]);
        fv[14 - i] = f(c + h * xk[i]);
    }
    fv[7] = f(c);

    double resk = wk[7] * fv[7];
    double resg = wg[3] * fv[7];
    for (int i = 0; i < 7; ++i) {
        resk += wk[i] * (fv[i] + fv[14 - i]);
        if (i % 2 == 1) resg += wg[i / 2] * (fv[i] + fv[14 - i]);
    }
    Panel p;
    p.integral = resk * h;
    p.error = std::fabs((resk - resg) * h);
    if (!std::isfinite(p.integral)) p.error = std::numeric_limits<double>::infinity();
    return p;
}

struct Interval {
    double a, b, integral, error;
    int depth;
    bool operator<(const Interval& o) const { return error < o.error; }
};

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadTol& tol) {
    if (a == b) return 0.0;
    double sign = 1.0;
    if (b < a) {
        std::swap(a, b);
        sign = -1.0;
    }

    // Global adaptive: always split the interval with the largest error
    // estimate until the summed error meets the budget.
    Panel whole = gk15(f, a, b);
    std::priority_queue<Interval> queue;
    queue.push({a, b, whole.integral, whole.error, 0});
    double total = whole.integral;
    double total_err = whole.error;

    const std::size_t max_intervals = 20000;
    std::size_t n_intervals = 1;
    while (total_err > std::max(tol.abs_tol, tol.rel_tol * std::fabs(total))) {
        Interval worst = queue.top();
        if (worst.depth >= tol.max_depth || n_intervals >= max_intervals ||
            worst.b - worst.a < 1e-300)
            break;
        queue.pop();
        double c = 0.5 * (worst.a + worst.b);
        Panel left = gk15(f, worst.a, c);
        Panel right = gk15(f, c, worst.b);
        total += left.integral + right.integral - worst.integral;
        total_err += left.error + right.error - worst.error;
        queue.push({worst.a, c, left.integral, left.error, worst.depth + 1});
        queue.push({c, worst.b, right.integral, right.error, worst.depth + 1});
        ++n_intervals;
    }

    double target = std::max(tol.abs_tol, tol.rel_tol * std::fabs(total));
    if (!std::isfinite(total) || total_err > 10.0 * target) {
        throw QuadratureError("adaptive quadrature failed to meet tolerance",
                              total_err, sign * total);
    }
    return sign * total;
}

}  // namespace magneto
