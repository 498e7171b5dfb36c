#include "qrtm/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <openssl/evp.h>

#include "qrtm/error.hpp"

namespace qrtm {

#define QRTM_CONFIG_FIELDS(X) \
    X(carrier_freq) X(bandwidth_B) X(M) X(B_phi) X(M_code) X(T_cpi) X(S_max) X(d_min) X(T_min) X(eta) \
    X(T_sw) X(T_bus) X(N_upd) X(P_max) X(P_c) X(P_s) X(N_0) X(tau) X(n_uav) X(uav_altitude_range) \
    X(corridor_length) X(corridor_half_width) X(eve_lateral_offset) X(rician_k_db) X(pathloss_exp_los) \
    X(pathloss_exp_nlos) X(ris_boost_db) X(eve_direct_rel_db) X(eve_ris_rel_db) X(K) X(clutter_cnr_db) \
    X(clutter_delay_window) X(echo_snr_db) X(spoofer_jitter) X(pulse_oversampling) X(mimicry_gain) \
    X(b3_learned_fraction) X(a3_learned_fraction) X(a4_learned_fraction) X(codebook_size) X(user_snr_db) \
    X(snr_grid_db) X(p_fa_grid) X(tau_grid) X(runtime_n_grid) X(runtime_m_grid) X(runtime_options) \
    X(lambda1) X(lambda2) X(lambda3) X(lambda4) X(lambda5) X(R0_bps_hz) X(C0_bps_hz) X(PD0) X(E0) X(T0) X(siu_p_fa) X(e_sw) X(e_pqc) X(kem_public_key_bytes) \
    X(kem_ciphertext_bytes) X(signature_bytes) X(kem_encap_s) X(kem_decap_s) X(sign_s) X(verify_s) \
    X(control_link_bps) X(trials) X(roc_trials) X(full_scale) X(robustness_sweep) X(master_seed) \
    X(workers) X(schemes) X(out_dir)

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double distance(const Vec3& a, const Vec3& b) {
    return std::hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]);
}

double ScenarioConfig::P_max_w() const { return dbm_to_watts(P_max); }
double ScenarioConfig::wavelength() const { return 299792458.0 / carrier_freq; }

SlotTiming slot_timing(const ScenarioConfig& c) {
    SlotTiming t;
    t.T_slot = c.M_code > 0 ? c.T_cpi / c.M_code : 0.0;
    t.budget_used = c.T_sw + c.N_upd * c.T_bus;
    t.budget_available = c.eta * t.T_slot;
    t.feasible = t.T_slot > 0.0 && t.budget_used <= t.budget_available;
    return t;
}

std::vector<std::string> config_violations(const ScenarioConfig& c) {
    std::vector<std::string> v;
    auto fail = [&v](std::string msg) { v.push_back(std::move(msg)); };
    auto num = [](double x) {
        std::ostringstream s;
        s << x;
        return s.str();
    };

    if (c.B_phi < 1 || c.B_phi > 4) fail("(Q) B_phi = " + std::to_string(c.B_phi) + " outside {1,...,4}");
    if (c.M < 1) fail("M = " + std::to_string(c.M) + " must be positive");
    if (c.M_code < 1) fail("M_code = " + std::to_string(c.M_code) + " must be positive");
    if (c.S_max < 1 || c.S_max > c.M)
        fail("(S) S_max = " + std::to_string(c.S_max) + " outside [1, M = " + std::to_string(c.M) + "]");
    if (c.d_min < 1 || c.d_min > c.M_code)
        fail("(D1) d_min = " + std::to_string(c.d_min) + " outside [1, M_code = " + std::to_string(c.M_code) + "]");
    if (c.M_code > 0 && c.d_min * c.T_slot() < c.T_min * (1.0 - 1e-12))
        fail("(D2) d_min*T_slot = " + num(c.d_min * c.T_slot()) + " s < T_min = " + num(c.T_min) + " s");
    if (!(c.tau > 0.0 && c.tau < 1.0)) fail("tau = " + num(c.tau) + " outside (0, 1)");
    if (!(c.eta > 0.0 && c.eta <= 1.0)) fail("eta = " + num(c.eta) + " outside (0, 1]");
    if (c.P_c < 0.0 || c.P_s < 0.0) fail("P_c and P_s must be non-negative");
    if (c.P_c + c.P_s > c.P_max_w() * (1.0 + 1e-9))
        fail("P_c + P_s = " + num(c.P_c + c.P_s) + " W exceeds P_max = " + num(c.P_max_w()) + " W");
    if (!(c.carrier_freq > 0.0) || !(c.bandwidth_B > 0.0) || !(c.N_0 > 0.0) || !(c.T_cpi > 0.0))
        fail("carrier_freq, bandwidth_B, N_0 and T_cpi must be positive");
    if (c.T_sw < 0.0 || c.T_bus < 0.0 || c.N_upd < 0) fail("T_sw, T_bus and N_upd must be non-negative");
    if (c.n_uav < 1) fail("n_uav must be at least 1");
    if (c.uav_altitude_range[0] > c.uav_altitude_range[1]) fail("uav_altitude_range is reversed");
    if (c.eve_lateral_offset[0] < 0.0 || c.eve_lateral_offset[0] > c.eve_lateral_offset[1])
        fail("eve_lateral_offset must be a non-negative increasing pair");
    if (c.K < 0) fail("K must be non-negative");
    if (c.clutter_delay_window < 1) fail("clutter_delay_window must be positive");
    if (c.spoofer_jitter < 0 || c.pulse_oversampling < 1) fail("spoofer_jitter >= 0 and pulse_oversampling >= 1");
    if (c.mimicry_gain < 0.0 || c.mimicry_gain > 1.0) fail("mimicry_gain outside [0, 1]");
    for (double f : {c.b3_learned_fraction, c.a3_learned_fraction, c.a4_learned_fraction})
        if (f < 0.0 || f > 1.0) fail("learned fractions must lie in [0, 1]");
    if (c.codebook_size < 2) fail("codebook_size must be at least 2");
    for (double p : c.p_fa_grid)
        if (!(p > 0.0 && p < 1.0)) fail("p_fa_grid entry " + num(p) + " outside (0, 1)");
    for (double t : c.tau_grid)
        if (!(t > 0.0 && t < 1.0)) fail("tau_grid entry " + num(t) + " outside (0, 1)");
    if (c.trials < 1 || c.roc_trials < 1) fail("trials and roc_trials must be positive");
    if (c.workers < 0) fail("workers must be non-negative");
    if (std::abs(c.lambda1 + c.lambda2 + c.lambda3 - 1.0) > 1e-9) fail("lambda1 + lambda2 + lambda3 must equal 1");
    if (c.lambda1 < 0 || c.lambda2 < 0 || c.lambda3 < 0 || c.lambda4 < 0 || c.lambda5 < 0) fail("SIU weights must be non-negative");
    if (c.R0_bps_hz < 0 || !(c.C0_bps_hz > 0) || !(c.PD0 > 0) || !(c.E0 > 0) || !(c.T0 > 0)) fail("SIU normalizers must be positive");
    if (!(c.siu_p_fa > 0.0 && c.siu_p_fa < 1.0)) fail("siu_p_fa outside (0, 1)");
    if (c.runtime_options < 1) fail("runtime_options must be positive");
    static const std::set<std::string> known{"B0", "STATIC", "B1", "B2", "B3", "QRTM"};
    for (const auto& s : c.schemes)
        if (!known.count(s)) fail("unknown scheme '" + s + "'");
    return v;
}

void validate_config(const ScenarioConfig& config) {
    auto v = config_violations(config);
    if (!v.empty()) throw ValidationError(std::move(v));
}

nlohmann::json to_json(const ScenarioConfig& c) {
    nlohmann::json j;
#define QRTM_PUT(name) j[#name] = c.name;
    QRTM_CONFIG_FIELDS(QRTM_PUT)
#undef QRTM_PUT
    return j;
}

ScenarioConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ValidationError({"configuration must be a JSON object"});
    ScenarioConfig c;
    std::vector<std::string> errors;
    std::set<std::string> seen;
#define QRTM_GET(name)                                                             \
    if (auto it = j.find(#name); it != j.end()) {                                  \
        seen.insert(#name);                                                        \
        try {                                                                      \
            it->get_to(c.name);                                                    \
        } catch (const nlohmann::json::exception&) {                               \
            errors.push_back(std::string("field '") + #name + "' has the wrong type"); \
        }                                                                          \
    }
    QRTM_CONFIG_FIELDS(QRTM_GET)
#undef QRTM_GET
    for (const auto& [key, _] : j.items())
        if (!seen.count(key)) errors.push_back("unknown field '" + key + "'");
    if (!errors.empty()) throw ValidationError(std::move(errors));
    return c;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError({"cannot open configuration file '" + path + "'"});
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError({std::string("configuration is not valid JSON: ") + e.what()});
    }
    return config_from_json(j);
}

std::string config_hash(const ScenarioConfig& config) {
    const std::string text = to_json(config).dump();
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

bool Box::contains(const Vec3& p) const {
    for (int i = 0; i < 3; ++i)
        if (p[i] < lo[i] || p[i] > hi[i]) return false;
    return true;
}

Geometry build_scenario(const ScenarioConfig& config, numerics::RngStream& rng) {
    validate_config(config);
    Geometry g;
    const double L = config.corridor_length;
    const double w = config.corridor_half_width;
    g.corridor_bounds = Box{{0.0, -w, config.uav_altitude_range[0]}, {L, w, config.uav_altitude_range[1]}};
    g.x_gnb = {-50.0, 40.0, 30.0};
    g.x_leo = {0.0, 0.0, 550e3};

    // Two panels on building facades flanking the corridor at rooftop height.
    const double pitch = config.wavelength() / 2.0;
    const int per_panel_first = (config.M + 1) / 2;
    const std::array<Vec3, 2> centers{Vec3{0.3 * L, w + 10.0, 40.0}, Vec3{0.7 * L, -(w + 10.0), 40.0}};
    const int cols = 16;
    g.ris_positions.reserve(config.M);
    for (int m = 0; m < config.M; ++m) {
        const int panel = m < per_panel_first ? 0 : 1;
        const int local = panel == 0 ? m : m - per_panel_first;
        const double u = (local % cols - (cols - 1) / 2.0) * pitch;
        const double v = (local / cols) * pitch;
        const Vec3& c = centers[panel];
        g.ris_positions.push_back({c[0] + u, c[1], c[2] + v});
    }

    g.uav_positions.reserve(config.n_uav);
    for (int i = 0; i < config.n_uav; ++i) {
        Vec3 p;
        for (int k = 0; k < 3; ++k) p[k] = g.corridor_bounds.lo[k] + rng.uniform() * (g.corridor_bounds.hi[k] - g.corridor_bounds.lo[k]);
        g.uav_positions.push_back(p);
    }

    const double off = config.eve_lateral_offset[0] + rng.uniform() * (config.eve_lateral_offset[1] - config.eve_lateral_offset[0]);
    g.eve_position = {rng.uniform() * L, -(w + off), 1.5};
    return g;
}

}  // namespace qrtm
