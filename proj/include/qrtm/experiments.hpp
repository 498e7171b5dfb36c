#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "qrtm/channel.hpp"
#include "qrtm/csv.hpp"
#include "qrtm/optimizer.hpp"
#include "qrtm/ris_codebook.hpp"
#include "qrtm/scenario.hpp"
#include "qrtm/scene_auth.hpp"
#include "qrtm/secrecy.hpp"

namespace qrtm {

enum class Scheme { B0, STATIC, B1, B2, B3, QRTM };

struct SchemeSpec {
    Scheme id = Scheme::QRTM;
    const char* name = "QRTM";
    bool ris_enabled = true;
    bool codes_secret = true;
    bool pqc_enabled = true;
    bool scene_auth_enabled = true;
    /// Time-varying sensing code drawn from the codebook each CPI.
    bool coded = true;
};

SchemeSpec scheme_spec(Scheme s);
Scheme parse_scheme(const std::string& name);
std::vector<Scheme> schemes_from_config(const ScenarioConfig& config);

/// Learned fraction for an adversary class against a secret, per-CPI
/// refreshed schedule (A1/A2: 0; A3/A4 from the configuration).
double class_knowledge(const ScenarioConfig& config, AdversaryClass cls);

/// Fraction of slot profiles the adversary knows for scheme `s`. Public
/// schedules are fully known; B3's schedule is secret but is not bound to a
/// per-CPI authenticated refresh, so an observer also learns
/// b3_learned_fraction of it.
double scheme_knowledge(const ScenarioConfig& config, Scheme s, AdversaryClass cls);

/// Scenario-level state shared by every trial of one experiment seed.
struct World {
    ScenarioConfig config;
    std::uint64_t seed = 0;
    Geometry geometry;
    std::vector<LinkGeometry> links;
    EchoModel echo;
};

/// Builds the geometry and per-UAV links, then fixes the echo amplitude so
/// the median code-dependent per-slot echo SNR equals echo_snr_db over a
/// pilot batch.
World make_world(const ScenarioConfig& config, std::uint64_t seed);

/// Everything drawn for one trial (CPI). All schemes consume the same draw.
struct TrialDraw {
    ChannelRealization real;
    RisProfile base;           // optimizer profile for this realization
    RisProfile static_profile; // aligned to the line-of-sight geometry only
    Codebook codebook;
    std::vector<cd> sig_u;
    std::vector<cd> sig_e;
    CodeSchedule schedule;
};

TrialDraw draw_trial(const World& world, std::uint64_t trial);

SensingCode sensing_code(const TrialDraw& t, Scheme s, int slots);
/// Per-slot user and Eve channels during data transmission under scheme
/// `s`. Secret-coded schemes keep cycling their schedule; public-coded
/// schemes gain nothing from that and transmit on the optimizer profile.
void slot_channels(const TrialDraw& t, Scheme s, int slots, std::vector<cd>& user, std::vector<cd>& eve);

/// Runs body(i) for i in [0, n) on `workers` threads (0: hardware
/// concurrency). Callers write results by index, so output is independent
/// of the worker count.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& body);

struct RocRow {
    std::string scheme;
    RocPoint point;
    double auc = 0.0;
    int trials = 0;
    std::uint64_t seed = 0;
};

struct RocResult {
    std::vector<RocRow> rows;
    std::map<std::string, double> auc;
    double wall_time_s = 0.0;
};

/// Per trial and scheme: one authentic echo, one spoof for evaluation and
/// an independent spoof draw for the Neyman-Pearson calibration batch.
RocResult run_roc_experiment(const ScenarioConfig& config, std::uint64_t seed, int trials);

struct SecrecyRow {
    std::string scheme;
    std::string adversary;
    SecrecyPoint point;
    std::uint64_t seed = 0;
};

struct SecrecyResult {
    std::vector<SecrecyRow> rows;
    std::map<std::string, double> retention;  // QRTM, keyed by class, at user_snr_db
    double wall_time_s = 0.0;
};

SecrecyResult run_secrecy_experiment(const ScenarioConfig& config, std::uint64_t seed, int trials);

struct SiuRow {
    std::string scheme;
    TauPoint point;
    bool is_peak = false;
    int trials = 0;
    std::uint64_t seed = 0;
};

struct SiuResult {
    std::vector<SiuRow> rows;
    std::map<std::string, double> tau_star;
    std::map<std::string, int> local_maxima;
    double wall_time_s = 0.0;
};

/// U(tau) at user_snr_db. Rates are computed with the (1 - tau) duty; the
/// echo energy scales with tau / config.tau, and P_D is averaged
/// semi-analytically from per-trial detection moments at the
/// Neyman-Pearson threshold for siu_p_fa.
SiuResult run_siu_experiment(const ScenarioConfig& config, std::uint64_t seed, int trials);

struct RuntimeResult {
    std::vector<RuntimeRow> rows;
    double greedy_slope = 0.0;
    double relax_slope = 0.0;
    std::map<int, double> exhaustive_ratio;  // keyed by M
    double wall_time_s = 0.0;
};

RuntimeResult run_runtime_experiment(const ScenarioConfig& config, std::uint64_t seed);

CsvRow roc_header();
CsvRow secrecy_header();
CsvRow siu_header();
CsvRow runtime_header();
void write_roc_csv(const RocResult& r, const std::string& path);
void write_secrecy_csv(const SecrecyResult& r, const std::string& path);
void write_siu_csv(const SiuResult& r, const std::string& path);
void write_runtime_csv(const RuntimeResult& r, std::uint64_t seed, const std::string& path);

/// Which experiments to run and where their outputs go.
struct RunRequest {
    bool roc = false, secrecy = false, siu = false, runtime = false;
    std::string out_dir;
};

/// Runs the requested experiments, writes their CSVs and manifest.json, and
/// returns the manifest. Progress lines go to `log` when non-null.
nlohmann::json run_experiments(const ScenarioConfig& config, const RunRequest& request,
                               const std::function<void(const std::string&)>& log = {});

/// Robustness grid (carrier 7/10/15 GHz, M_code, B_phi, K): one
/// sub-directory per variant, each with its own manifest.
nlohmann::json run_robustness_sweep(const ScenarioConfig& config, const RunRequest& request,
                                    const std::function<void(const std::string&)>& log = {});

}  // namespace qrtm
