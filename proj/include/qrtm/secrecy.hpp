#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace qrtm {

/// Cs = max(0, (1 - tau) B [log2(1 + rho_u) - log2(1 + rho_e)]) in bit/s.
double secrecy_capacity(double tau, double bandwidth, double rho_u, double rho_e);

/// R = (1 - tau) B log2(1 + rho_u) in bit/s.
double achievable_rate(double tau, double bandwidth, double rho_u);

/// Link powers of one CPI in |h|^2 units, before SNR scaling.
struct SecrecySample {
    double user_power = 0.0;         // mean_p |h_u,p|^2
    double eve_matched_power = 0.0;  // mean_p |h_e,p|^2
    double eve_mean_power = 0.0;     // |mean_p h_e,p|^2
    double eve_var_power = 0.0;      // mean_p |h_e,p - mean|^2
    double eve_known_fraction = 1.0;  // share of slots whose profile Eve knows
};

SecrecySample secrecy_sample(std::span<const std::complex<double>> user_slots,
                             std::span<const std::complex<double>> eve_slots, double eve_known_fraction);

/// Eve's equivalent SNR at scale factor `scale` (SNR per unit |h|^2). On
/// slots whose profile she knows she combines matched; elsewhere she
/// decodes against the CPI mean and the slot-to-slot variation acts as
/// extra noise. The two rates are mixed by the known fraction.
double eve_snr(const SecrecySample& s, double scale);
double user_snr(const SecrecySample& s, double scale);

/// Scale making the median user SNR equal `snr_linear`.
double median_scale(std::span<const SecrecySample> samples, double snr_linear);

struct SecrecyPoint {
    double snr_db = 0.0;
    double mean_cs = 0.0;  // bps/Hz
    double stderr_ = 0.0;
    double mean_rate = 0.0;  // bps/Hz
    std::size_t trials = 0;
};

/// Mean Cs/B per SNR point, each point calibrated with median_scale().
std::vector<SecrecyPoint> secrecy_sweep(std::span<const SecrecySample> samples, std::span<const double> snr_db,
                                        double tau);

/// Ratio of mean secrecy under attack to mean secrecy under the reference
/// adversary; 1 when the reference is zero and attack is too.
double retention(double cs_attacked, double cs_reference);

}  // namespace qrtm
