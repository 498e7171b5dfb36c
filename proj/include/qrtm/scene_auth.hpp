#pragma once

#include <complex>
#include <span>
#include <vector>

#include "qrtm/channel.hpp"
#include "qrtm/numerics/rng.hpp"
#include "qrtm/ris_codebook.hpp"

namespace qrtm {

enum class Hypothesis { spoof, authentic };

enum class AdversaryClass { A1, A2, A3, A4 };

const char* to_string(AdversaryClass a);

/// What the echo spoofer knows and how well it can render it.
struct AdversaryModel {
    AdversaryClass cls = AdversaryClass::A1;
    /// Probability that a slot's active profile is known exactly.
    double knowledge_fraction = 0.0;
    /// Fraction of the code-dependent echo amplitude reproduced coherently
    /// when the delay is exact; the rest arrives with random phase.
    double mimicry_gain = 0.45;
    /// Range-delay error drawn uniformly from [-jitter, jitter] samples.
    int jitter = 2;
    int pulse_oversampling = 4;
    /// Replays a stale CPI; its per-slot profiles are then uncorrelated
    /// with the live schedule, which is handled like a blind guess.
    bool replay = false;
    /// Models Shor-type recovery of classical (non-PQC) control keys.
    bool key_recovery = false;
};

AdversaryModel adversary_from_config(const ScenarioConfig& config, AdversaryClass cls, double knowledge_fraction);

/// Per-slot echo signatures of one CPI. `table[k]` is the end-to-end gain
/// of a distinct profile; entries below `codebook_entries` are codebook
/// members the adversary can guess among.
struct SensingCode {
    std::vector<cd> table;
    int codebook_entries = 0;
    std::vector<int> slot_entry;

    int slots() const { return static_cast<int>(slot_entry.size()); }
    cd at(int p) const { return table[slot_entry[p]]; }
};

/// Signatures for `schedule` (labels refer to `codebook_signatures` when
/// non-negative; intermediates are evaluated on `real`).
SensingCode make_sensing_code(const ChannelRealization& real, std::span<const cd> codebook_signatures,
                              const CodeSchedule& schedule);
/// A constant signature over `slots` slots (static profile or no RIS).
SensingCode constant_sensing_code(cd signature, int slots);

struct EchoModel {
    double echo_gain = 1.0;      // amplitude applied to signatures
    double clutter_power = 1.0;  // per-slot clutter power over noise power
    double noise_var = 1.0;      // per-slot noise power
    int pulse_oversampling = 4;  // samples per range-pulse half-width
};

struct EchoObservation {
    std::vector<cd> r;
    std::vector<cd> w;
    cd z{};
    double sigma_sq = 0.0;        // variance of z under pure disturbance
    // Variance a uniformly guessed codebook sequence adds to z. The receiver
    // knows its codebook, so this is available for normalization.
    double residual_var = 0.0;
    cd mu_authentic{};            // mean of z for the authentic echo
    Hypothesis truth = Hypothesis::authentic;
    int known_slots = 0;
};

struct GlrtOutcome {
    double statistic = 0.0;   // T = |z|^2
    double threshold = 0.0;   // gamma = -sigma^2 ln p_fa
    bool authentic = false;   // T > gamma
    double predicted_p_d = 0.0;
};

/// Code-matched weights: zero-mean unit-modulus projection of the
/// code-dependent signature, or the constant phase for uncoded schemes.
/// Normalized so sum |w|^2 = slots.
std::vector<cd> code_weights(const SensingCode& code);

/// Per-slot clutter returns at the UAV's range gate, scaled so the realized
/// mean per-slot power equals clutter_power * noise_var.
std::vector<cd> clutter_returns(const ChannelRealization& real, int slots, const EchoModel& model);

EchoObservation embed_and_observe(const SensingCode& code, const ChannelRealization& real, const EchoModel& model,
                                  const AdversaryModel& adversary, Hypothesis truth, numerics::RngStream& rng);
/// Same, with the realization's clutter returns computed once by the caller.
EchoObservation embed_and_observe(const SensingCode& code, std::span<const cd> clutter, const EchoModel& model,
                                  const AdversaryModel& adversary, Hypothesis truth, numerics::RngStream& rng);

/// alpha^2 sum_p |w_p|^2 v / M_code^2, where v is the mean power of the
/// codebook entries' deviations from the slot mean. Zero for uncoded schemes.
double code_residual_var(const SensingCode& code, std::span<const cd> w, const EchoModel& model);

/// Interference-aware normalizer sigma^2 + residual_var used by the scene
/// authentication statistic, T = |z|^2 / normalizer.
double authentication_normalizer(const EchoObservation& obs);

/// lambda0 = 2 |mu|^2 / sigma^2 for the authentic echo.
double noncentrality(const EchoObservation& obs);

GlrtOutcome glrt_decide(const EchoObservation& obs, double p_fa);

/// Moments of z used by the semi-analytic detector: authentic mean, spoof
/// mean and the spoof's extra (random-phase) variance. Drawn with the same
/// knowledge, guess and jitter model as embed_and_observe.
struct DetectionMoments {
    cd mu_authentic{};
    cd mu_spoof{};
    double spoof_extra_var = 0.0;
    double sigma_sq = 0.0;
    double residual_var = 0.0;  // as in EchoObservation, at unit energy scale
};

DetectionMoments detection_moments(const SensingCode& code, const EchoModel& model, const AdversaryModel& adversary,
                                   numerics::RngStream& rng);

/// P(T > gamma) when z ~ CN(sqrt(scale) mu, sigma_sq + scale * extra_var).
double exceed_probability(cd mu, double extra_var, double sigma_sq, double gamma, double scale = 1.0);

struct RocPoint {
    double p_fa_target = 0.0;
    double threshold = 0.0;  // on T / authentication_normalizer()
    double p_fa_emp = 0.0;
    double p_d_emp = 0.0;
};

/// Neyman-Pearson ROC against the modeled spoofer. Thresholds are the
/// larger of the CFAR level -ln p and the (1-p) quantile of an independent
/// spoof calibration batch; rates are measured on separate evaluation
/// batches. Statistics are normalized by authentication_normalizer().
std::vector<RocPoint> roc_curve(std::span<const double> authentic, std::span<const double> spoof_eval,
                                std::span<const double> spoof_calibration, std::span<const double> p_fa_grid);

}  // namespace qrtm
