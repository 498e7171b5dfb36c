#pragma once

// Independent reference computations used only by the tests.

#include <cmath>
#include <numbers>

namespace oracle {

/// Q1(a, b) by composite Simpson on the defining integral
/// int_b^inf x exp(-(x^2 + a^2) / 2) I0(a x) dx.
inline double marcum_q1_quadrature(double a, double b) {
    const double hi = std::max(a, b) + 40.0;
    const int n = 40000;
    const double h = (hi - b) / n;
    auto f = [a](double x) {
        // e^{-(x-a)^2/2} * e^{-ax} I0(ax) avoids overflow in I0.
        const double z = a * x;
        const double scaled = z < 600.0 ? std::exp(-z) * std::cyl_bessel_i(0.0, z)
                                        : 1.0 / std::sqrt(2.0 * std::numbers::pi * z) * (1.0 + 1.0 / (8.0 * z));
        return x * std::exp(-(x - a) * (x - a) / 2.0) * scaled;
    };
    double s = f(b) + f(hi);
    for (int i = 1; i < n; ++i) s += f(b + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

/// Craig-type single integral over theta (midpoint rule; the integrand is
/// periodic and smooth, so convergence is exponential).
inline double marcum_q1_craig(double a, double b) {
    const int n = 20000;
    const bool upper = b > a;
    const double z = upper ? a / b : b / a;
    const double r = upper ? b : a;
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        const double sn = std::sin(-std::numbers::pi + (i + 0.5) * 2.0 * std::numbers::pi / n);
        const double d = 1.0 + 2.0 * z * sn + z * z;
        const double num = upper ? 1.0 + z * sn : z * z + z * sn;
        s += num / d * std::exp(-r * r / 2.0 * d);
    }
    return (upper ? 0.0 : 1.0) + s / n;
}

}  // namespace oracle
