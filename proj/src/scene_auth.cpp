#include "qrtm/scene_auth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qrtm/error.hpp"
#include "qrtm/kernels/kernels.hpp"
#include "qrtm/numerics/marcum.hpp"
#include "qrtm/numerics/stats.hpp"

namespace qrtm {

const char* to_string(AdversaryClass a) {
    switch (a) {
        case AdversaryClass::A1: return "A1";
        case AdversaryClass::A2: return "A2";
        case AdversaryClass::A3: return "A3";
        case AdversaryClass::A4: return "A4";
    }
    return "?";
}

AdversaryModel adversary_from_config(const ScenarioConfig& c, AdversaryClass cls, double knowledge_fraction) {
    AdversaryModel a;
    a.cls = cls;
    a.knowledge_fraction = knowledge_fraction;
    a.mimicry_gain = c.mimicry_gain;
    a.jitter = c.spoofer_jitter;
    a.pulse_oversampling = c.pulse_oversampling;
    a.key_recovery = cls == AdversaryClass::A3 || cls == AdversaryClass::A4;
    return a;
}

SensingCode make_sensing_code(const ChannelRealization& real, std::span<const cd> cb_sig, const CodeSchedule& s) {
    SensingCode code;
    code.table.assign(cb_sig.begin(), cb_sig.end());
    code.codebook_entries = static_cast<int>(cb_sig.size());
    std::vector<int> entry_of(s.profiles.size());
    for (std::size_t k = 0; k < s.profiles.size(); ++k) {
        const int label = k < s.labels.size() ? s.labels[k] : -1;
        if (label >= 0 && label < code.codebook_entries) {
            entry_of[k] = label;
        } else {
            entry_of[k] = static_cast<int>(code.table.size());
            code.table.push_back(effective_channel(real, s.profiles[k], Node::user));
        }
    }
    code.slot_entry.resize(s.slots.size());
    for (std::size_t p = 0; p < s.slots.size(); ++p) code.slot_entry[p] = entry_of[s.slots[p]];
    return code;
}

SensingCode constant_sensing_code(cd signature, int slots) {
    SensingCode code;
    code.table = {signature};
    code.codebook_entries = 1;
    code.slot_entry.assign(slots, 0);
    return code;
}

namespace {

cd slot_mean(const SensingCode& code) {
    cd m = 0;
    for (int p = 0; p < code.slots(); ++p) m += code.at(p);
    return code.slots() ? m / static_cast<double>(code.slots()) : m;
}

// Per-slot spoof, split into the part the detector can correlate with and
// the amplitude that arrives with uniformly random phase.
struct SpoofDraw {
    std::vector<cd> coherent;
    std::vector<double> random_amp;
    int known = 0;
};

SpoofDraw draw_spoof(const SensingCode& code, const AdversaryModel& adv, numerics::RngStream& rng) {
    const int n = code.slots();
    const cd mean = slot_mean(code);
    const int jit = adv.jitter > 0 ? static_cast<int>(rng.uniform_int(-adv.jitter, adv.jitter)) : 0;
    const double rho = std::max(0.0, 1.0 - std::abs(jit) / static_cast<double>(std::max(adv.pulse_oversampling, 1)));
    const double kappa = std::clamp(adv.mimicry_gain * rho, 0.0, 1.0);
    const double spread = std::sqrt(std::max(0.0, 1.0 - kappa * kappa));
    const double f = adv.replay ? 0.0 : adv.knowledge_fraction;
    SpoofDraw d;
    d.coherent.resize(n);
    d.random_amp.resize(n);
    for (int p = 0; p < n; ++p) {
        // Both draws are always taken so adversaries differing only in f
        // stay coupled under common random numbers.
        const bool knows = rng.uniform() < f;
        const int g = code.codebook_entries > 0 ? static_cast<int>(rng.uniform_int(0, code.codebook_entries - 1)) : -1;
        cd believed = mean;
        if (knows) {
            believed = code.at(p);
            ++d.known;
        } else if (g >= 0) {
            believed = code.table[g];
            if (g == code.slot_entry[p]) ++d.known;
        }
        const cd dev = believed - mean;
        d.coherent[p] = mean + kappa * dev;
        d.random_amp[p] = spread * std::abs(dev);
    }
    return d;
}

double disturbance_var(const EchoModel& m, int slots) {
    return (m.noise_var * (1.0 + m.clutter_power)) / static_cast<double>(slots);
}

cd correlate(std::span<const cd> w, std::span<const cd> r) {
    return kernels::conj_dot(w, r) / static_cast<double>(w.size());
}

}  // namespace

std::vector<cd> code_weights(const SensingCode& code) {
    const int n = code.slots();
    if (n == 0) throw DomainError("code_weights: empty code");
    const cd mean = slot_mean(code);
    std::vector<cd> w(n);
    double dev_power = 0.0;
    for (int p = 0; p < n; ++p) dev_power += std::norm(code.at(p) - mean);
    const double ref = std::norm(mean) + 1e-300;
    if (dev_power / n > 1e-20 * ref) {
        cd wm = 0;
        for (int p = 0; p < n; ++p) {
            const cd d = code.at(p) - mean;
            const double a = std::abs(d);
            w[p] = a > 0.0 ? d / a : cd{};
            wm += w[p];
        }
        wm /= static_cast<double>(n);
        for (auto& x : w) x -= wm;
    } else {
        const double a = std::abs(mean);
        w.assign(n, a > 0.0 ? mean / a : cd{1.0, 0.0});
    }
    double e = 0.0;
    for (const auto& x : w) e += std::norm(x);
    if (!(e > 0.0)) w.assign(n, cd{1.0, 0.0});
    else
        for (auto& x : w) x *= std::sqrt(n / e);
    return w;
}

std::vector<cd> clutter_returns(const ChannelRealization& real, int slots, const EchoModel& m) {
    std::vector<cd> out(slots);
    if (real.clutter_amp.empty() || m.clutter_power <= 0.0) return out;
    // Triangular range-pulse response around the gate.
    std::vector<cd> amp, step;
    double power = 0.0;
    const double os = std::max(m.pulse_oversampling, 1);
    for (std::size_t k = 0; k < real.clutter_amp.size(); ++k) {
        const double rho = 1.0 - std::abs(real.clutter_delay[k]) / os;
        if (rho <= 0.0) continue;
        amp.push_back(rho * real.clutter_amp[k]);
        step.push_back(real.clutter_step[k]);
        power += std::norm(amp.back());
    }
    if (amp.empty() || !(power > 0.0)) return out;
    const double scale = std::sqrt(m.clutter_power * m.noise_var / power);
    for (auto& a : amp) a *= scale;
    kernels::rotating_sum(amp, step, out);
    return out;
}

EchoObservation embed_and_observe(const SensingCode& code, const ChannelRealization& real, const EchoModel& m,
                                  const AdversaryModel& adv, Hypothesis truth, numerics::RngStream& rng) {
    return embed_and_observe(code, clutter_returns(real, code.slots(), m), m, adv, truth, rng);
}

EchoObservation embed_and_observe(const SensingCode& code, std::span<const cd> clutter, const EchoModel& m,
                                  const AdversaryModel& adv, Hypothesis truth, numerics::RngStream& rng) {
    const int n = code.slots();
    if (static_cast<int>(clutter.size()) != n) throw DomainError("embed_and_observe: clutter length mismatch");
    EchoObservation obs;
    obs.truth = truth;
    obs.w = code_weights(code);
    obs.r.resize(n);
    if (truth == Hypothesis::authentic) {
        for (int p = 0; p < n; ++p) obs.r[p] = m.echo_gain * code.at(p);
        obs.known_slots = n;
    } else {
        const SpoofDraw s = draw_spoof(code, adv, rng);
        for (int p = 0; p < n; ++p) obs.r[p] = m.echo_gain * (s.coherent[p] + std::polar(s.random_amp[p], 2.0 * std::numbers::pi * rng.uniform()));
        obs.known_slots = s.known;
    }
    for (int p = 0; p < n; ++p) obs.r[p] += clutter[p] + rng.complex_normal(m.noise_var);

    std::vector<cd> clean(n);
    for (int p = 0; p < n; ++p) clean[p] = m.echo_gain * code.at(p);
    obs.mu_authentic = correlate(obs.w, clean);
    obs.z = correlate(obs.w, obs.r);
    obs.sigma_sq = disturbance_var(m, n);
    obs.residual_var = code_residual_var(code, obs.w, m);
    return obs;
}

double code_residual_var(const SensingCode& code, std::span<const cd> w, const EchoModel& m) {
    const int n = code.slots();
    if (code.codebook_entries < 2 || n == 0) return 0.0;
    const cd mean = slot_mean(code);
    cd dm = 0;
    for (int k = 0; k < code.codebook_entries; ++k) dm += code.table[k] - mean;
    dm /= static_cast<double>(code.codebook_entries);
    double v = 0.0;
    for (int k = 0; k < code.codebook_entries; ++k) v += std::norm(code.table[k] - mean - dm);
    v /= code.codebook_entries;
    double wp = 0.0;
    for (const auto& x : w) wp += std::norm(x);
    return m.echo_gain * m.echo_gain * wp * v / (static_cast<double>(n) * n);
}

double authentication_normalizer(const EchoObservation& obs) { return obs.sigma_sq + obs.residual_var; }

double noncentrality(const EchoObservation& obs) { return 2.0 * std::norm(obs.mu_authentic) / obs.sigma_sq; }

GlrtOutcome glrt_decide(const EchoObservation& obs, double p_fa) {
    GlrtOutcome g;
    g.statistic = std::norm(obs.z);
    g.threshold = numerics::threshold_from_pfa(obs.sigma_sq, p_fa);
    g.authentic = g.statistic > g.threshold;
    g.predicted_p_d = numerics::marcum_q1({std::sqrt(noncentrality(obs)), numerics::normalized_threshold(obs.sigma_sq, g.threshold)});
    return g;
}

DetectionMoments detection_moments(const SensingCode& code, const EchoModel& m, const AdversaryModel& adv,
                                   numerics::RngStream& rng) {
    const int n = code.slots();
    const auto w = code_weights(code);
    const SpoofDraw s = draw_spoof(code, adv, rng);
    DetectionMoments out;
    std::vector<cd> clean(n), coh(n);
    double extra = 0.0;
    for (int p = 0; p < n; ++p) {
        clean[p] = m.echo_gain * code.at(p);
        coh[p] = m.echo_gain * s.coherent[p];
        extra += std::norm(w[p]) * s.random_amp[p] * s.random_amp[p];
    }
    out.mu_authentic = correlate(w, clean);
    out.mu_spoof = correlate(w, coh);
    out.spoof_extra_var = m.echo_gain * m.echo_gain * extra / (static_cast<double>(n) * n);
    out.sigma_sq = disturbance_var(m, n);
    out.residual_var = code_residual_var(code, w, m);
    return out;
}

double exceed_probability(cd mu, double extra_var, double sigma_sq, double gamma, double scale) {
    const double var = sigma_sq + scale * extra_var;
    const double a = std::sqrt(2.0 * scale * std::norm(mu) / var);
    const double b = std::sqrt(2.0 * std::max(gamma, 0.0) / var);
    return numerics::marcum_q1({a, b});
}

std::vector<RocPoint> roc_curve(std::span<const double> authentic, std::span<const double> spoof_eval,
                                std::span<const double> spoof_cal, std::span<const double> grid) {
    if (authentic.empty() || spoof_eval.empty() || spoof_cal.empty()) throw DomainError("roc_curve: empty batch");
    std::vector<RocPoint> out;
    for (double p : grid) {
        if (!(p > 0.0 && p < 1.0)) throw DomainError("roc_curve: p_fa outside (0, 1)");
        RocPoint pt;
        pt.p_fa_target = p;
        pt.threshold = std::max(-std::log(p), numerics::upper_quantile(spoof_cal, p));
        auto rate = [&](std::span<const double> xs) {
            std::size_t k = 0;
            for (double x : xs) k += x > pt.threshold;
            return static_cast<double>(k) / static_cast<double>(xs.size());
        };
        pt.p_fa_emp = rate(spoof_eval);
        pt.p_d_emp = rate(authentic);
        out.push_back(pt);
    }
    return out;
}

}  // namespace qrtm
