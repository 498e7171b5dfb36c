#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "qrtm/numerics/rng.hpp"
#include "qrtm/ris_codebook.hpp"
#include "qrtm/scenario.hpp"

namespace qrtm {

using cd = std::complex<double>;

enum class Node { user, eve };

/// One draw of every link seen by a single UAV and the eavesdropper.
/// Gains are amplitude coefficients; |h|^2 is a power gain.
struct ChannelRealization {
    cd h_dir_u{};
    cd h_dir_e{};
    std::vector<cd> g_in;     // gNB -> element m
    std::vector<cd> g_out_u;  // element m -> UAV
    std::vector<cd> g_out_e;  // element m -> Eve
    /// Per-element cascade coefficients conj(g_out[m]) * g_in[m], including
    /// the element gain, so h_eff = h_dir + sum_m casc[m] * e^{j phi_m}.
    std::vector<cd> casc_u;
    std::vector<cd> casc_e;
    /// Flattened LOS-only cascade for the user; drives the static baseline.
    std::vector<cd> casc_u_los;
    cd h_dir_u_los{};

    // Ground clutter around the UAV's range gate.
    std::vector<cd> clutter_amp;   // E sum |a|^2 = 1
    std::vector<int> clutter_delay;  // offset from the UAV's delay bin
    std::vector<cd> clutter_step;  // per-slot micro-Doppler rotation

    double noise_power = 0.0;  // N_0 * B
    double pl_dir_u = 0.0;     // mean |h_dir_u|^2
};

/// Log-distance path loss (lambda / 4 pi)^2 d^{-n} as a power gain.
double path_loss(double d, double exponent, double wavelength);

/// Rician K-factor draw: unit mean power, LOS phase `los_phase`.
cd rician(double k_linear, double los_phase, numerics::RngStream& rng);

/// Deterministic per-UAV link terms (path losses, LOS phases and the
/// calibrated element gains), computed once and reused across draws.
struct LinkGeometry {
    double pl_dir_u = 0.0;
    double ph_dir_u = 0.0;
    double pl_dir_e = 0.0;
    std::vector<double> amp_in, ph_in, amp_out_u, ph_out_u, amp_out_e;
    double elem_u = 0.0;
    double elem_e = 0.0;
};

LinkGeometry prepare_links(const Geometry& geometry, const ScenarioConfig& config, int uav_index);

ChannelRealization sample_channels(const LinkGeometry& links, const ScenarioConfig& config, numerics::RngStream& rng);

ChannelRealization sample_channels(const Geometry& geometry, const ScenarioConfig& config, int uav_index,
                                   numerics::RngStream& rng);

cd effective_channel(const ChannelRealization& real, const RisProfile& profile, Node node);

/// Direct path only (RIS absent or absorbing).
cd direct_channel(const ChannelRealization& real, Node node);

/// rho = P |h_eff|^2 / (N_0 B) with P = P_c unless given.
double slot_snr(const ChannelRealization& real, const RisProfile& profile, const ScenarioConfig& config, Node node,
                double power = -1.0);

}  // namespace qrtm
