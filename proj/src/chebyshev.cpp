#include "trinv/chebyshev.hpp"

#include <cmath>

namespace trinv::chebyshev {

namespace {

// Within this distance of |x| = 1 the trig/hyperbolic forms lose all digits,
// so the limiting value U_n(1) = n + 1 is returned instead.
constexpr double boundary_eps = 1e-12;

// U_n(x) for n >= 0, x >= 0.
double eval_nonneg(long long n, double x) {
    if (std::abs(x - 1.0) < boundary_eps) return double(n + 1);
    if (x < 1.0) {
        const double theta = std::acos(x);
        return std::sin(double(n + 1) * theta) / std::sin(theta);
    }
    // x > 1: sinh((n+1)t)/sinh(t) with t = acosh(x), arranged so the only
    // unbounded factor is the single exp(n*t).  expm1 keeps full precision
    // when t is tiny (x just above 1).
    const double t = std::log(x + std::sqrt((x - 1.0) * (x + 1.0)));
    return std::exp(double(n) * t) * std::expm1(-2.0 * double(n + 1) * t) / std::expm1(-2.0 * t);
}

} // namespace

double eval_U(long long n, double x) {
    if (n < 0) {
        if (n == -1) return 0.0;
        return -eval_U(-n - 2, x);
    }
    if (x < 0.0) {
        const double v = eval_nonneg(n, -x);
        return (n % 2 == 0) ? v : -v; // U_n(-x) = (-1)^n U_n(x)
    }
    return eval_nonneg(n, x);
}

std::pair<double, double> eval_U_pair(long long n, double x) {
    if (n < 1) return {eval_U(n, x), eval_U(n - 1, x)};
    const double ax = std::abs(x);
    double un, um;
    if (std::abs(ax - 1.0) < boundary_eps) {
        un = double(n + 1);
        um = double(n);
    } else if (ax < 1.0) {
        const double theta = std::acos(ax);
        const double s = std::sin(theta);
        un = std::sin(double(n + 1) * theta) / s;
        um = std::sin(double(n) * theta) / s;
    } else {
        const double t = std::log(ax + std::sqrt((ax - 1.0) * (ax + 1.0)));
        const double den = std::expm1(-2.0 * t);
        un = std::exp(double(n) * t) * std::expm1(-2.0 * double(n + 1) * t) / den;
        um = std::exp(double(n - 1) * t) * std::expm1(-2.0 * double(n) * t) / den;
    }
    if (x < 0.0) {
        if (n % 2 != 0) un = -un; else um = -um;
    }
    return {un, um};
}

} // namespace trinv::chebyshev
