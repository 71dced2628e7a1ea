#pragma once
#include <cmath>
#include <stdexcept>
#include <string>

namespace magneto {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double a) const { return {a * x, a * y}; }
    Vec2 operator/(double a) const { return {x / a, y / a}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }

    double norm() const { return std::hypot(x, y); }
    double norm2() const { return x * x + y * y; }
};

inline Vec2 operator*(double a, const Vec2& v) { return {a * v.x, a * v.y}; }
inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double det(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
// 90-degree counterclockwise rotation
inline Vec2 rot90(const Vec2& v) { return {-v.y, v.x}; }

constexpr double pi = 3.14159265358979323846;

// Reduce an angle to (-pi, pi].
inline double wrap_angle(double a) {
    a = std::remainder(a, 2.0 * pi);
    if (a <= -pi) a += 2.0 * pi;
    return a;
}

// ---- error types ----------------------------------------------------------

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct QuadratureError : std::runtime_error {
    double achieved_error;
    double partial_value;
    QuadratureError(const std::string& msg, double err, double partial)
        : std::runtime_error(msg), achieved_error(err), partial_value(partial) {}
};

struct GeometryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OutOfCollar : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateMetric : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct HypothesisViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SingularityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnboundedPotential : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace magneto
