#include "qrtm/numerics/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qrtm::numerics {

MeanStderr mean_stderr(std::span<const double> xs) {
    if (xs.empty()) return {};
    double sum = 0.0;
    for (double x : xs) sum += x;
    const double mean = sum / static_cast<double>(xs.size());
    if (xs.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    const double var = ss / static_cast<double>(xs.size() - 1);
    return {mean, std::sqrt(var / static_cast<double>(xs.size()))};
}

double binomial_stderr(double p, std::size_t n) {
    if (n == 0) return 0.0;
    return std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(n));
}

double upper_quantile(std::span<const double> samples, double tail) {
    if (samples.empty()) throw std::invalid_argument("upper_quantile: no samples");
    std::vector<double> v(samples.begin(), samples.end());
    const auto n = v.size();
    // Allow floor(tail * n) samples above the returned value.
    const auto above = static_cast<std::size_t>(std::floor(tail * static_cast<double>(n)));
    if (above >= n) return -INFINITY;
    const auto idx = n - 1 - above;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(idx), v.end());
    return v[idx];
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need >= 2 matched points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double empirical_auc(std::span<const double> authentic, std::span<const double> spoof) {
    if (authentic.empty() || spoof.empty()) throw std::invalid_argument("empirical_auc: empty sample");
    std::vector<double> s(spoof.begin(), spoof.end());
    std::sort(s.begin(), s.end());
    double wins = 0.0;
    for (double a : authentic) {
        const auto lo = std::lower_bound(s.begin(), s.end(), a);
        const auto hi = std::upper_bound(lo, s.end(), a);
        wins += static_cast<double>(lo - s.begin()) + 0.5 * static_cast<double>(hi - lo);
    }
    return wins / (static_cast<double>(authentic.size()) * static_cast<double>(s.size()));
}

}  // namespace qrtm::numerics
