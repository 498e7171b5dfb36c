#include "qrtm/ris_codebook.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <openssl/evp.h>

#include "qrtm/error.hpp"

namespace qrtm {

double RisProfile::phase(int m) const {
    return 2.0 * std::numbers::pi * idx.at(m) / static_cast<double>(1 << bits);
}

std::vector<std::complex<double>> phase_alphabet(int bits) {
    if (bits < 1 || bits > 8) throw DomainError("phase_alphabet: bits outside [1, 8]");
    const int q = 1 << bits;
    std::vector<std::complex<double>> out(q);
    for (int k = 0; k < q; ++k) out[k] = std::polar(1.0, 2.0 * std::numbers::pi * k / q);
    // Exact values at the quarter points keep sums free of 1e-17 residue.
    out[0] = {1.0, 0.0};
    if (q % 2 == 0) out[q / 2] = {-1.0, 0.0};
    if (q % 4 == 0) {
        out[q / 4] = {0.0, 1.0};
        out[3 * q / 4] = {0.0, -1.0};
    }
    return out;
}

int hamming_distance(const RisProfile& a, const RisProfile& b) {
    if (a.idx.size() != b.idx.size()) throw DomainError("hamming_distance: profile sizes differ");
    int d = 0;
    for (std::size_t m = 0; m < a.idx.size(); ++m) d += a.idx[m] != b.idx[m];
    return d;
}

Codebook make_codebook(const RisProfile& base, const ScenarioConfig& config, numerics::RngStream& rng) {
    const int q = 1 << base.bits;
    const int flips = std::min(config.S_max / 2, base.size());
    Codebook cb;
    cb.profiles.reserve(config.codebook_size);
    cb.profiles.push_back(base);
    std::vector<int> order(base.size());
    while (cb.size() < config.codebook_size) {
        RisProfile p = base;
        for (int m = 0; m < base.size(); ++m) order[m] = m;
        // Partial Fisher-Yates picks `flips` distinct elements.
        for (int k = 0; k < flips; ++k) {
            const int j = static_cast<int>(rng.uniform_int(k, base.size() - 1));
            std::swap(order[k], order[j]);
            const int m = order[k];
            const int shift = static_cast<int>(rng.uniform_int(1, q - 1));
            p.idx[m] = static_cast<std::uint8_t>((p.idx[m] + shift) % q);
        }
        if (std::find(cb.profiles.begin(), cb.profiles.end(), p) == cb.profiles.end()) cb.profiles.push_back(std::move(p));
    }
    return cb;
}

long CodeSchedule::total_switches() const {
    long n = 0;
    for (std::size_t p = 1; p < slots.size(); ++p)
        if (slots[p] != slots[p - 1]) n += hamming_distance(at_slot(p - 1), at_slot(p));
    return n;
}

std::vector<Violation> validate_schedule(const CodeSchedule& s, const ScenarioConfig& c) {
    std::vector<Violation> v;
    if (s.slot_count() != c.M_code)
        v.push_back({"len", -1, "schedule has " + std::to_string(s.slot_count()) + " slots, M_code = " + std::to_string(c.M_code)});
    for (std::size_t p = 0; p < s.slots.size(); ++p)
        if (s.slots[p] >= s.profiles.size()) {
            v.push_back({"len", static_cast<int>(p), "slot references a missing profile"});
            return v;
        }
    for (std::size_t k = 0; k < s.profiles.size(); ++k) {
        const auto& pr = s.profiles[k];
        if (pr.size() != c.M) v.push_back({"len", -1, "profile " + std::to_string(k) + " has " + std::to_string(pr.size()) + " elements"});
        const bool bad_bits = pr.bits != c.B_phi;
        const bool bad_idx = std::any_of(pr.idx.begin(), pr.idx.end(), [&](std::uint8_t i) { return i >= (1u << c.B_phi); });
        if (bad_bits || bad_idx) v.push_back({"Q", -1, "profile " + std::to_string(k) + " is not on the " + std::to_string(c.B_phi) + "-bit alphabet"});
    }
    if (!v.empty()) return v;

    const double t_slot = c.T_slot();
    int run_start = 0;
    auto close_run = [&](int end) {
        const int len = end - run_start;
        if (len < c.d_min)
            v.push_back({"D1", run_start, "dwell of " + std::to_string(len) + " slots < d_min = " + std::to_string(c.d_min)});
        if (len * t_slot < c.T_min * (1.0 - 1e-12))
            v.push_back({"D2", run_start, "dwell of " + std::to_string(len * t_slot) + " s < T_min"});
    };
    for (int p = 1; p < s.slot_count(); ++p) {
        const auto& a = s.at_slot(p - 1);
        const auto& b = s.at_slot(p);
        if (a == b) continue;
        const int d = hamming_distance(a, b);
        if (d > c.S_max)
            v.push_back({"S", p, std::to_string(d) + " elements switch, S_max = " + std::to_string(c.S_max)});
        close_run(p);
        run_start = p;
    }
    if (s.slot_count() > 0) close_run(s.slot_count());
    auto t = slot_timing(c);
    if (!t.feasible)
        v.push_back({"T", -1, "reconfiguration needs " + std::to_string(t.budget_used) + " s, budget is " + std::to_string(t.budget_available) + " s"});
    return v;
}

namespace {
InfeasibilityReport make_report(int required, int available, std::string reason) {
    InfeasibilityReport r;
    r.slots_required = required;
    r.slots_available = available;
    r.reasons.push_back(std::move(reason));
    r.recommendation = "raise S_max, lower d_min, or visit fewer profiles per CPI";
    return r;
}

std::string describe(const InfeasibilityReport& r) {
    std::string s = "infeasible schedule: needs " + std::to_string(r.slots_required) + " slots, " +
                    std::to_string(r.slots_available) + " available";
    for (const auto& x : r.reasons) s += "; " + x;
    return s;
}

int intermediates_between(const RisProfile& a, const RisProfile& b, int s_max) {
    const int d = hamming_distance(a, b);
    return d == 0 ? 0 : (d + s_max - 1) / s_max - 1;
}
}  // namespace

InfeasibleError::InfeasibleError(InfeasibilityReport report)
    : std::runtime_error(describe(report)), report_(std::move(report)) {}

SequencingResult min_change_sequencing(std::span<const RisProfile> visits, const ScenarioConfig& c,
                                       std::span<const int> labels) {
    if (visits.empty()) throw InfeasibleError(make_report(0, c.M_code, "no profiles to schedule"));
    if (!labels.empty() && labels.size() != visits.size()) throw DomainError("min_change_sequencing: label count mismatch");
    if (c.S_max < 1 || c.d_min < 1) throw InfeasibleError(make_report(0, c.M_code, "S_max and d_min must be positive"));
    int dwell = c.d_min;
    while (dwell * c.T_slot() < c.T_min * (1.0 - 1e-12)) ++dwell;

    SequencingResult out;
    auto push = [&](const RisProfile& p, int label) {
        out.schedule.profiles.push_back(p);
        out.schedule.labels.push_back(label);
    };
    push(visits[0], labels.empty() ? 0 : labels[0]);
    for (std::size_t k = 1; k < visits.size(); ++k) {
        RisProfile cur = out.schedule.profiles.back();
        const RisProfile& next = visits[k];
        std::vector<int> diff;
        for (int m = 0; m < next.size(); ++m)
            if (cur.idx.at(m) != next.idx[m]) diff.push_back(m);
        std::size_t done = 0;
        while (diff.size() - done > static_cast<std::size_t>(c.S_max)) {
            for (int j = 0; j < c.S_max; ++j, ++done) cur.idx[diff[done]] = next.idx[diff[done]];
            push(cur, -1);
            ++out.intermediates;
        }
        push(next, labels.empty() ? static_cast<int>(k) : labels[k]);
    }

    const int runs = static_cast<int>(out.schedule.profiles.size());
    const int required = runs * dwell;
    if (required > c.M_code) {
        throw InfeasibleError(make_report(required, c.M_code,
                                          std::to_string(runs) + " dwells (" + std::to_string(out.intermediates) +
                                              " intermediate) of " + std::to_string(dwell) + " slots"));
    }
    std::vector<int> len(runs, dwell);
    for (int extra = c.M_code - required, r = 0; extra > 0; --extra, r = (r + 1) % runs) ++len[r];
    for (int r = 0; r < runs; ++r) out.schedule.slots.insert(out.schedule.slots.end(), len[r], static_cast<std::uint32_t>(r));
    return out;
}

CodeSchedule schedule_from_seed(std::span<const std::uint8_t> seed, const Codebook& codebook,
                                const ScenarioConfig& c, std::uint64_t cpi_index) {
    if (seed.size() < 32) throw DomainError("schedule_from_seed: seed shorter than 32 bytes");
    if (codebook.size() < 1) throw DomainError("schedule_from_seed: empty codebook");
    int dwell = std::max(c.d_min, 1);
    while (dwell * c.T_slot() < c.T_min * (1.0 - 1e-12)) ++dwell;

    // One keyed expansion per CPI: word k of SHAKE256(seed || cpi_index)
    // picks the codebook entry of dwell k. A CPI has at most M_code dwells.
    std::vector<std::uint8_t> msg(seed.begin(), seed.end());
    for (int b = 7; b >= 0; --b) msg.push_back(static_cast<std::uint8_t>(cpi_index >> (8 * b)));
    std::vector<std::uint8_t> stream(8 * static_cast<std::size_t>(std::max(c.M_code, 1)));
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    const bool ok = ctx && EVP_DigestInit_ex(ctx, EVP_shake256(), nullptr) == 1 &&
                    EVP_DigestUpdate(ctx, msg.data(), msg.size()) == 1 &&
                    EVP_DigestFinalXOF(ctx, stream.data(), stream.size()) == 1;
    EVP_MD_CTX_free(ctx);
    if (!ok) throw std::runtime_error("schedule_from_seed: SHAKE256 unavailable");
    auto draw = [&](std::uint64_t k) {
        std::uint64_t v = 0;
        for (int b = 0; b < 8; ++b) v = (v << 8) | stream[8 * k + b];
        // Multiply-shift maps the 64-bit word onto [0, L).
        return static_cast<int>((static_cast<unsigned __int128>(v) * codebook.size()) >> 64);
    };

    std::vector<RisProfile> visits;
    std::vector<int> labels;
    int used = 0;
    for (std::uint64_t k = 0; k < static_cast<std::uint64_t>(std::max(c.M_code, 1)); ++k) {
        const int pick = draw(k);
        const auto& p = codebook.profiles[pick];
        const int cost = (visits.empty() ? 1 : intermediates_between(visits.back(), p, std::max(c.S_max, 1)) + 1) * dwell;
        if (used + cost > c.M_code) break;
        used += cost;
        visits.push_back(p);
        labels.push_back(pick);
    }
    if (visits.empty()) throw InfeasibleError(make_report(dwell, c.M_code, "one dwell does not fit the CPI"));
    return min_change_sequencing(visits, c, labels).schedule;
}

std::vector<std::uint8_t> serialize_schedule(const CodeSchedule& s) {
    std::vector<std::uint8_t> out;
    auto u32 = [&out](std::uint32_t x) {
        for (int b = 3; b >= 0; --b) out.push_back(static_cast<std::uint8_t>(x >> (8 * b)));
    };
    u32(static_cast<std::uint32_t>(s.profiles.size()));
    for (std::size_t k = 0; k < s.profiles.size(); ++k) {
        out.push_back(static_cast<std::uint8_t>(s.profiles[k].bits));
        u32(static_cast<std::uint32_t>(k < s.labels.size() ? s.labels[k] : -1));
        u32(static_cast<std::uint32_t>(s.profiles[k].idx.size()));
        out.insert(out.end(), s.profiles[k].idx.begin(), s.profiles[k].idx.end());
    }
    u32(static_cast<std::uint32_t>(s.slots.size()));
    for (auto x : s.slots) u32(x);
    return out;
}

std::string audit_text(const CodeSchedule& s) {
    static const char* hex = "0123456789abcdef";
    std::ostringstream os;
    for (int p = 0; p < s.slot_count(); ++p) {
        const auto& pr = s.at_slot(p);
        const int h = p == 0 ? 0 : hamming_distance(s.at_slot(p - 1), pr);
        const std::uint32_t k = s.slots[p];
        os << "slot=" << p << " label=" << (k < s.labels.size() ? s.labels[k] : -1) << " hamming=" << h << " idx=";
        for (auto i : pr.idx) os << hex[i & 15];
        os << '\n';
    }
    return os.str();
}

}  // namespace qrtm
