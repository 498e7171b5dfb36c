#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "qrtm/channel.hpp"
#include "qrtm/ris_codebook.hpp"
#include "qrtm/scenario.hpp"

namespace qrtm {

/// Weights and normalizers of the sensing-integrated utility. R0 and C0
/// are in the same units as the R and C_s passed to siu().
struct SiuWeights {
    double lambda1 = 0.34;
    double lambda2 = 0.33;
    double lambda3 = 0.33;
    double lambda4 = 0.0;
    double lambda5 = 0.0;
    double R0 = 1.0;
    double C0 = 1.0;
    double PD0 = 1.0;
    double E0 = 1e-3;
    double T0 = 1e-3;

    /// Throws ValidationError on negative weights, lambda1..3 not summing
    /// to one, or non-positive normalizers.
    void validate() const;
};

/// Rates in bps/Hz; R0 defaults to log2(1 + user SNR).
SiuWeights weights_from_config(const ScenarioConfig& config);

struct EnergyLatency {
    double E = 0.0;      // J per CPI
    double T_lat = 0.0;  // s
};

/// Transmit energy over the CPI, element switching, and per-CPI PQC work.
EnergyLatency energy_latency(const ScenarioConfig& config, double tau, long element_switches, double control_latency_s);

double siu(double R, double Cs, double PD, const SiuWeights& w, const EnergyLatency* extras = nullptr);

enum class Objective { max_rho_u, max_siu_surrogate };

struct ProjectedProfile {
    RisProfile profile;
    bool degenerate = false;
    double continuous_gain = 0.0;  // |h| with the unquantized phases
};

/// Closed-form phase alignment of every cascade term with the direct path,
/// then nearest-index rounding (ties toward the smaller index).
ProjectedProfile relax_project(std::complex<double> h_dir, std::span<const std::complex<double>> casc, int bits);

/// max_siu_surrogate follows the alignment with one coordinate pass that
/// trades user gain against leakage to the eavesdropper link.
ProjectedProfile relax_project(const ChannelRealization& real, const ScenarioConfig& config,
                               Objective objective = Objective::max_rho_u);

/// Brute force over all 2^{bits M} profiles (requires bits * M <= 20).
RisProfile exhaustive_best_profile(std::complex<double> h_dir, std::span<const std::complex<double>> casc, int bits);

struct UavOption {
    double R = 0.0;
    double Cs = 0.0;
    double PD = 0.0;
    double power = 0.0;
    double tau = 0.0;
    int profile_id = 0;
    bool has_extras = false;
    EnergyLatency extras;
};

/// Options for one UAV with end-to-end gain |h|^2 (per watt, over noise):
/// a grid of about sqrt(count) sensing fractions by transmit power levels
/// around power_budget / n.
std::vector<UavOption> option_menu(double gain, const ScenarioConfig& config, int count, double power_budget, int n);

struct Assignment {
    int uav = 0;
    int option = 0;
    double utility = 0.0;
    double marginal_gain = 0.0;
};

struct ScheduleResult {
    std::vector<Assignment> assignments;  // by decreasing marginal_gain
    double total_utility = 0.0;
    double total_power = 0.0;
};

/// Better of two O(n^2) passes from every UAV's fallback (its cheapest
/// option): one UAV per round by largest gain, keeping budget for the
/// unassigned fallbacks; and repeated upgrades by gain per extra watt.
/// Assignments are ordered by gain over the fallback. Throws
/// InfeasibleError when even the fallbacks exceed the budget.
ScheduleResult greedy_schedule(const std::vector<std::vector<UavOption>>& uavs, const SiuWeights& weights,
                               double power_budget);

/// Exact optimum over all option tuples.
ScheduleResult exhaustive_schedule(const std::vector<std::vector<UavOption>>& uavs, const SiuWeights& weights,
                                   double power_budget);

struct TauPoint {
    double tau = 0.0;
    double utility = 0.0;
    double stderr_ = 0.0;
    double rate = 0.0;  // bps/Hz
    double cs = 0.0;    // bps/Hz
    double p_d = 0.0;
};

/// Index of the grid maximum (first on ties) and the number of strict
/// local maxima, counting endpoints.
struct Peak {
    std::size_t index = 0;
    int local_maxima = 0;
};
Peak find_peak(std::span<const TauPoint> curve);

struct RuntimeRow {
    std::string method;
    int n = 0;
    int M = 0;
    int B_phi = 0;
    double seconds = 0.0;
    int repeats = 0;
};

/// Measured wall times (best of several batches, per call):
/// "greedy" over runtime_n_grid, "relax_project" over runtime_m_grid, and
/// the "qrtm_pipeline" / "exhaustive_pipeline" pair at n = 4, B_phi = 1
/// for M in {4, 6, 8}.
std::vector<RuntimeRow> runtime_scaling(const ScenarioConfig& config, std::uint64_t seed);

}  // namespace qrtm
