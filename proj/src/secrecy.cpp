#include "qrtm/secrecy.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "qrtm/error.hpp"
#include "qrtm/numerics/stats.hpp"

namespace qrtm {

double secrecy_capacity(double tau, double bandwidth, double rho_u, double rho_e) {
    if (!(tau >= 0.0 && tau <= 1.0)) throw DomainError("secrecy_capacity: tau outside [0, 1]");
    if (rho_u < 0.0 || rho_e < 0.0 || !std::isfinite(rho_u) || !std::isfinite(rho_e))
        throw DomainError("secrecy_capacity: SNR must be finite and non-negative");
    // log1p keeps the difference accurate when both SNRs are tiny.
    return std::max(0.0, (1.0 - tau) * bandwidth * (std::log1p(rho_u) - std::log1p(rho_e)) / std::log(2.0));
}

double achievable_rate(double tau, double bandwidth, double rho_u) {
    if (!(tau >= 0.0 && tau <= 1.0)) throw DomainError("achievable_rate: tau outside [0, 1]");
    return (1.0 - tau) * bandwidth * std::log1p(rho_u) / std::log(2.0);
}

SecrecySample secrecy_sample(std::span<const std::complex<double>> u, std::span<const std::complex<double>> e,
                             double known_fraction) {
    if (!(known_fraction >= 0.0 && known_fraction <= 1.0)) throw DomainError("secrecy_sample: known fraction outside [0, 1]");
    if (u.empty() || u.size() != e.size()) throw DomainError("secrecy_sample: slot vectors must match");
    SecrecySample s;
    std::complex<double> em = 0;
    for (std::size_t p = 0; p < u.size(); ++p) {
        s.user_power += std::norm(u[p]);
        s.eve_matched_power += std::norm(e[p]);
        em += e[p];
    }
    const double n = static_cast<double>(u.size());
    s.user_power /= n;
    s.eve_matched_power /= n;
    em /= n;
    s.eve_mean_power = std::norm(em);
    for (const auto& x : e) s.eve_var_power += std::norm(x - em);
    s.eve_var_power /= n;
    s.eve_known_fraction = known_fraction;
    return s;
}

double user_snr(const SecrecySample& s, double scale) { return scale * s.user_power; }

double eve_snr(const SecrecySample& s, double scale) {
    const double f = s.eve_known_fraction;
    const double matched = scale * s.eve_matched_power;
    if (f >= 1.0) return matched;
    const double blind = scale * s.eve_mean_power / (1.0 + scale * s.eve_var_power);
    if (f <= 0.0) return blind;
    return std::exp(f * std::log1p(matched) + (1.0 - f) * std::log1p(blind)) - 1.0;
}

double median_scale(std::span<const SecrecySample> samples, double snr_linear) {
    if (samples.empty()) throw DomainError("median_scale: no samples");
    std::vector<double> p;
    p.reserve(samples.size());
    for (const auto& s : samples) p.push_back(s.user_power);
    const auto mid = p.begin() + static_cast<std::ptrdiff_t>(p.size() / 2);
    std::nth_element(p.begin(), mid, p.end());
    if (!(*mid > 0.0)) throw DomainError("median_scale: median user power is zero");
    return snr_linear / *mid;
}

std::vector<SecrecyPoint> secrecy_sweep(std::span<const SecrecySample> samples, std::span<const double> snr_db,
                                        double tau) {
    std::vector<SecrecyPoint> out;
    std::vector<double> cs(samples.size()), rate(samples.size());
    for (double db : snr_db) {
        const double scale = median_scale(samples, std::pow(10.0, db / 10.0));
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const double ru = user_snr(samples[i], scale);
            cs[i] = secrecy_capacity(tau, 1.0, ru, eve_snr(samples[i], scale));
            rate[i] = achievable_rate(tau, 1.0, ru);
        }
        const auto ms = numerics::mean_stderr(cs);
        SecrecyPoint pt;
        pt.snr_db = db;
        pt.mean_cs = ms.mean;
        pt.stderr_ = ms.stderr_;
        pt.mean_rate = numerics::mean_stderr(rate).mean;
        pt.trials = samples.size();
        out.push_back(pt);
    }
    return out;
}

double retention(double cs_attacked, double cs_reference) {
    if (cs_reference <= 0.0) return cs_attacked <= 0.0 ? 1.0 : INFINITY;
    return cs_attacked / cs_reference;
}

}  // namespace qrtm
