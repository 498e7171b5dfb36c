#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "qrtm/numerics/rng.hpp"

namespace qrtm {

using Vec3 = std::array<double, 3>;

/// Complete experiment parameterization. Field names are the JSON keys.
/// Powers are watts except P_max, which is given in dBm and converted once
/// by P_max_w().
struct ScenarioConfig {
    // Radio and RIS.
    double carrier_freq = 10e9;
    double bandwidth_B = 100e6;
    int M = 256;
    int B_phi = 3;
    int M_code = 64;
    double T_cpi = 1e-3;
    int S_max = 64;
    int d_min = 2;
    double T_min = 1e-6;
    double eta = 0.5;
    double T_sw = 1e-6;
    double T_bus = 50e-9;
    int N_upd = 64;
    double P_max = 30.0;  // dBm
    double P_c = 0.5;
    double P_s = 0.5;
    double N_0 = 3.981071705534972e-21;  // -174 dBm/Hz
    double tau = 0.05;

    // Corridor and nodes.
    int n_uav = 8;
    std::array<double, 2> uav_altitude_range{80.0, 120.0};
    double corridor_length = 400.0;
    double corridor_half_width = 10.0;
    std::array<double, 2> eve_lateral_offset{3.0, 12.0};

    // Channel model.
    double rician_k_db = 8.0;
    double pathloss_exp_los = 2.2;
    double pathloss_exp_nlos = 3.0;
    double ris_boost_db = 10.0;
    double eve_direct_rel_db = 3.0;
    double eve_ris_rel_db = 3.0;
    int K = 400;
    double clutter_cnr_db = 0.0;
    int clutter_delay_window = 16;

    // Sensing and adversary.
    double echo_snr_db = 8.0;
    int spoofer_jitter = 2;
    int pulse_oversampling = 4;
    double mimicry_gain = 0.45;
    double b3_learned_fraction = 0.5;
    double a3_learned_fraction = 0.05;
    double a4_learned_fraction = 0.10;
    int codebook_size = 64;

    // Operating points and sweeps.
    double user_snr_db = 10.0;
    std::vector<double> snr_grid_db{-5.0, -2.5, 0.0, 2.5, 5.0, 7.5, 10.0, 12.5, 15.0, 17.5, 20.0, 22.5, 25.0};
    std::vector<double> p_fa_grid{1e-4, 1e-3, 1e-2, 1e-1};
    std::vector<double> tau_grid{0.01, 0.02, 0.03, 0.04, 0.05, 0.075, 0.1, 0.15, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    std::vector<int> runtime_n_grid{8, 16, 24, 32, 48, 64};
    std::vector<int> runtime_m_grid{64, 128, 256, 512, 1024};
    int runtime_options = 16;

    // Utility.
    double lambda1 = 0.34;
    double lambda2 = 0.33;
    double lambda3 = 0.33;
    double lambda4 = 0.0;
    double lambda5 = 0.0;
    double R0_bps_hz = 0.0;  // 0: log2(1 + user SNR)
    double C0_bps_hz = 1.0;
    double PD0 = 1.0;
    double E0 = 1e-3;
    double T0 = 1e-3;
    double siu_p_fa = 1e-3;
    double e_sw = 1e-9;
    double e_pqc = 1e-4;

    // Control plane (emulated suite sizes and timings).
    int kem_public_key_bytes = 1184;
    int kem_ciphertext_bytes = 1088;
    int signature_bytes = 666;
    double kem_encap_s = 60e-6;
    double kem_decap_s = 60e-6;
    double sign_s = 250e-6;
    double verify_s = 60e-6;
    double control_link_bps = 100e6;

    // Monte Carlo.
    int trials = 10000;
    int roc_trials = 20000;
    bool full_scale = false;
    bool robustness_sweep = false;
    std::uint64_t master_seed = 1;
    int workers = 0;
    std::vector<std::string> schemes{"B0", "STATIC", "B1", "B2", "B3", "QRTM"};
    std::string out_dir = "out";

    double P_max_w() const;
    double T_slot() const { return T_cpi / M_code; }
    double wavelength() const;
    double noise_power() const { return N_0 * bandwidth_B; }
    /// Trials per Monte Carlo setting after the full_scale switch.
    int effective_trials() const { return full_scale ? 100000 : trials; }
};

/// Every violated invariant, each prefixed with its constraint tag, e.g.
/// "(D2) d_min*T_slot = 5e-07 s < T_min = 1e-06 s". Empty when valid.
std::vector<std::string> config_violations(const ScenarioConfig& config);

/// Throws ValidationError listing config_violations() when non-empty.
void validate_config(const ScenarioConfig& config);

nlohmann::json to_json(const ScenarioConfig& config);
/// Strict: unknown keys and wrong types throw ValidationError.
ScenarioConfig config_from_json(const nlohmann::json& j);
ScenarioConfig load_config(const std::string& path);
/// Hex SHA-256 of the canonical JSON dump.
std::string config_hash(const ScenarioConfig& config);

struct Box {
    Vec3 lo{};
    Vec3 hi{};
    bool contains(const Vec3& p) const;
};

struct Geometry {
    Vec3 x_gnb{};
    Vec3 x_leo{};
    std::vector<Vec3> ris_positions;
    std::vector<Vec3> uav_positions;
    Vec3 eve_position{};
    Box corridor_bounds;
};

/// Deterministic placement: two rooftop facade panels of M/2 elements at
/// half-wavelength pitch, UAVs uniform in the corridor box, a single
/// street-level eavesdropper just outside the corridor edge.
Geometry build_scenario(const ScenarioConfig& config, numerics::RngStream& rng);

struct SlotTiming {
    double T_slot = 0.0;
    bool feasible = false;
    double budget_used = 0.0;  // T_sw + N_upd * T_bus
    double budget_available = 0.0;  // eta * T_slot
};

SlotTiming slot_timing(const ScenarioConfig& config);

double distance(const Vec3& a, const Vec3& b);
double db_to_linear(double db);
double dbm_to_watts(double dbm);

}  // namespace qrtm
