#include "qrtm/numerics/marcum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "qrtm/error.hpp"

namespace qrtm::numerics {

namespace {

// Terms of e^{-x} I_k(x) above ~1e-18 stop near k = sqrt(84 x).
int bessel_terms(double x) {
    return 32 + static_cast<int>(std::ceil(std::sqrt(84.0 * x)));
}

void require_finite_nonneg(double v, const char* name) {
    if (!std::isfinite(v) || v < 0.0) {
        throw DomainError(std::string("marcum_q1: ") + name + " must be finite and >= 0");
    }
}

// Large-argument form. With w = (u, y), Q1 = E_y[P(a + u > sqrt(b^2 - y^2))]
// up to terms of order Phi(-(a + b)). The integrand is Gaussian-weighted
// and smooth, so the trapezoid rule converges spectrally; step 0.2 over
// |y| <= 9 is accurate to ~1e-12 once a b exceeds 1e4.
double marcum_q1_large(double a, double b) {
    constexpr double h = 0.2;
    constexpr int nodes = 45;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    double s = 0.0;
    for (int i = 0; i <= nodes; ++i) {
        const double y = h * i;
        const double r = std::sqrt(std::max(b * b - y * y, 0.0));
        const double f = std::exp(-0.5 * y * y) * 0.5 * std::erfc((r - a) * inv_sqrt2);
        s += i == 0 ? f : 2.0 * f;
    }
    return std::clamp(h * s / std::sqrt(2.0 * std::numbers::pi), 0.0, 1.0);
}

}  // namespace

void scaled_bessel_i(double x, int count, double* out) {
    if (count <= 0) return;
    if (x == 0.0) {
        out[0] = 1.0;
        std::fill(out + 1, out + count, 0.0);
        return;
    }
    // Miller's backward recurrence I_{k-1} = I_{k+1} + (2k/x) I_k, normalized
    // through e^{-x}(I_0 + 2 sum_{k>=1} I_k) = 1.
    const int start = std::max(count, bessel_terms(x)) + 24;
    thread_local std::vector<double> v;
    v.assign(static_cast<std::size_t>(start) + 2, 0.0);
    v[start] = 1.0;
    for (int k = start; k >= 1; --k) {
        v[k - 1] = v[k + 1] + (2.0 * k / x) * v[k];
        if (v[k - 1] > 1e250) {
            for (int j = k - 1; j <= start; ++j) v[j] *= 1e-250;
        }
    }
    double sum = v[0];
    for (int k = 1; k <= start; ++k) sum += 2.0 * v[k];
    for (int k = 0; k < count; ++k) out[k] = v[k] / sum;
}

double marcum_q1(MarcumArgs args) {
    const double a = args.a;
    const double b = args.b;
    require_finite_nonneg(a, "a");
    require_finite_nonneg(b, "b");
    if (b == 0.0) return 1.0;
    if (a == 0.0) return std::exp(-0.5 * b * b);
    // Tail bounds: 1 - Q1 <= Phi(b - a) and Q1 <= exp(-(b - a)^2 / 2), both
    // below 1e-17 once the arguments are more than 9 apart.
    if (a - b > 9.0) return 1.0;
    if (b - a > 9.0) return 0.0;

    const double x = a * b;
    if (x > 1e4) return marcum_q1_large(a, b);
    const int n = bessel_terms(x);
    thread_local std::vector<double> ik;
    ik.resize(static_cast<std::size_t>(n));
    scaled_bessel_i(x, n, ik.data());
    const double envelope = std::exp(-0.5 * (a - b) * (a - b));

    if (a < b) {
        const double ratio = a / b;
        double r = 1.0;
        double s = 0.0;
        for (int k = 0; k < n; ++k) {
            s += r * ik[k];
            r *= ratio;
            if (r < 1e-300) break;
        }
        return std::clamp(envelope * s, 0.0, 1.0);
    }
    const double ratio = b / a;
    double r = ratio;
    double s = 0.0;
    for (int k = 1; k < n; ++k) {
        s += r * ik[k];
        r *= ratio;
        if (r < 1e-300) break;
    }
    return std::clamp(1.0 - envelope * s, 0.0, 1.0);
}

double threshold_from_pfa(double sigma_sq, double p_fa) {
    if (!(p_fa > 0.0 && p_fa < 1.0)) throw DomainError("threshold_from_pfa: p_fa must lie in (0,1)");
    if (!(sigma_sq > 0.0) || !std::isfinite(sigma_sq)) {
        throw DomainError("threshold_from_pfa: sigma_sq must be positive and finite");
    }
    return -sigma_sq * std::log(p_fa);
}

double normalized_threshold(double sigma_sq, double gamma) {
    if (!(sigma_sq > 0.0)) throw DomainError("normalized_threshold: sigma_sq must be positive");
    return std::sqrt(2.0 * std::max(gamma, 0.0) / sigma_sq);
}

double ca_cfar_scale(int reference_cells, double p_fa) {
    if (reference_cells < 1) throw DomainError("ca_cfar_scale: need at least one reference cell");
    if (!(p_fa > 0.0 && p_fa < 1.0)) throw DomainError("ca_cfar_scale: p_fa must lie in (0,1)");
    const double n = reference_cells;
    return n * std::expm1(-std::log(p_fa) / n);
}

}  // namespace qrtm::numerics
