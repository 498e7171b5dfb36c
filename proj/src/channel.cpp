#include "qrtm/channel.hpp"

#include <cmath>
#include <numbers>

#include "qrtm/error.hpp"
#include "qrtm/kernels/kernels.hpp"

namespace qrtm {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

double path_loss(double d, double exponent, double wavelength) {
    if (!(d > 0.0)) throw DomainError("path_loss: distance must be positive");
    const double a = wavelength / (4.0 * std::numbers::pi);
    return a * a * std::pow(d, -exponent);
}

cd rician(double k, double los_phase, numerics::RngStream& rng) {
    const double los = std::sqrt(k / (k + 1.0));
    const double nlos_var = 1.0 / (k + 1.0);
    return std::polar(los, los_phase) + rng.complex_normal(nlos_var);
}

LinkGeometry prepare_links(const Geometry& g, const ScenarioConfig& c, int uav_index) {
    if (uav_index < 0 || uav_index >= static_cast<int>(g.uav_positions.size()))
        throw DomainError("prepare_links: uav_index out of range");
    const Vec3& u = g.uav_positions[uav_index];
    const double lam = c.wavelength();
    const int M = static_cast<int>(g.ris_positions.size());
    auto los_phase = [lam](double d) { return -two_pi * std::fmod(d / lam, 1.0); };

    LinkGeometry L;
    const double d_gu = distance(g.x_gnb, u);
    L.pl_dir_u = path_loss(d_gu, c.pathloss_exp_los, lam);
    L.ph_dir_u = los_phase(d_gu);
    // Eve's direct level is pinned relative to the user's.
    L.pl_dir_e = db_to_linear(c.eve_direct_rel_db) * L.pl_dir_u;
    L.amp_in.resize(M);
    L.ph_in.resize(M);
    L.amp_out_u.resize(M);
    L.ph_out_u.resize(M);
    L.amp_out_e.resize(M);
    double coherent = 0.0, eve_incoherent = 0.0;
    for (int m = 0; m < M; ++m) {
        const Vec3& x = g.ris_positions[m];
        const double d_in = distance(g.x_gnb, x);
        const double d_ou = distance(x, u);
        const double pl_in = path_loss(d_in, c.pathloss_exp_los, lam);
        const double pl_ou = path_loss(d_ou, c.pathloss_exp_los, lam);
        const double pl_oe = path_loss(distance(x, g.eve_position), c.pathloss_exp_nlos, lam);
        L.amp_in[m] = std::sqrt(pl_in);
        L.amp_out_u[m] = std::sqrt(pl_ou);
        L.amp_out_e[m] = std::sqrt(pl_oe);
        L.ph_in[m] = los_phase(d_in);
        L.ph_out_u[m] = los_phase(d_ou);
        coherent += std::sqrt(pl_in * pl_ou);
        eve_incoherent += pl_in * pl_oe;
    }
    // Element gain so the nominal coherent RIS path sits ris_boost_db above
    // the user's direct path; Eve's RIS leakage is pinned to her direct path.
    L.elem_u = std::sqrt(db_to_linear(c.ris_boost_db) * L.pl_dir_u) / coherent;
    L.elem_e = eve_incoherent > 0.0 ? std::sqrt(db_to_linear(c.eve_ris_rel_db) * L.pl_dir_e / eve_incoherent) : 0.0;
    return L;
}

ChannelRealization sample_channels(const LinkGeometry& L, const ScenarioConfig& c, numerics::RngStream& rng) {
    const double k = db_to_linear(c.rician_k_db);
    const double los = std::sqrt(k / (k + 1.0));
    const int M = static_cast<int>(L.amp_in.size());

    ChannelRealization r;
    r.noise_power = c.noise_power();
    r.pl_dir_u = L.pl_dir_u;
    r.h_dir_u = std::sqrt(L.pl_dir_u) * rician(k, L.ph_dir_u, rng);
    r.h_dir_u_los = std::polar(std::sqrt(L.pl_dir_u) * los, L.ph_dir_u);
    r.h_dir_e = rng.complex_normal(L.pl_dir_e);

    r.g_in.resize(M);
    r.g_out_u.resize(M);
    r.g_out_e.resize(M);
    r.casc_u.resize(M);
    r.casc_e.resize(M);
    r.casc_u_los.resize(M);
    for (int m = 0; m < M; ++m) {
        r.g_in[m] = L.amp_in[m] * rician(k, L.ph_in[m], rng);
        r.g_out_u[m] = L.amp_out_u[m] * rician(k, L.ph_out_u[m], rng);
        r.g_out_e[m] = rng.complex_normal(L.amp_out_e[m] * L.amp_out_e[m]);
        r.casc_u[m] = L.elem_u * std::conj(r.g_out_u[m]) * r.g_in[m];
        r.casc_e[m] = L.elem_e * std::conj(r.g_out_e[m]) * r.g_in[m];
        r.casc_u_los[m] = std::polar(L.elem_u * L.amp_in[m] * L.amp_out_u[m] * los * los, L.ph_in[m] - L.ph_out_u[m]);
    }

    // Ground clutter around the range gate: complex gains, delay offsets
    // inside the window, and a slow per-slot phase rotation.
    r.clutter_amp.resize(c.K);
    r.clutter_delay.resize(c.K);
    r.clutter_step.resize(c.K);
    const double amp_var = c.K > 0 ? 1.0 / c.K : 0.0;
    const int half = c.clutter_delay_window / 2;
    for (int s = 0; s < c.K; ++s) {
        r.clutter_amp[s] = rng.complex_normal(amp_var);
        r.clutter_delay[s] = static_cast<int>(rng.uniform_int(-half, c.clutter_delay_window - 1 - half));
        r.clutter_step[s] = rng.unit_phasor();
    }
    return r;
}

ChannelRealization sample_channels(const Geometry& g, const ScenarioConfig& c, int uav_index, numerics::RngStream& rng) {
    return sample_channels(prepare_links(g, c, uav_index), c, rng);
}

cd effective_channel(const ChannelRealization& r, const RisProfile& profile, Node node) {
    const auto& casc = node == Node::user ? r.casc_u : r.casc_e;
    if (static_cast<std::size_t>(profile.size()) != casc.size())
        throw DomainError("effective_channel: profile size does not match the RIS");
    const auto alphabet = phase_alphabet(profile.bits);
    return direct_channel(r, node) + kernels::indexed_phase_sum(casc, profile.idx, alphabet);
}

cd direct_channel(const ChannelRealization& r, Node node) { return node == Node::user ? r.h_dir_u : r.h_dir_e; }

double slot_snr(const ChannelRealization& r, const RisProfile& profile, const ScenarioConfig& c, Node node, double power) {
    const double p = power < 0.0 ? c.P_c : power;
    return p * std::norm(effective_channel(r, profile, node)) / r.noise_power;
}

}  // namespace qrtm
