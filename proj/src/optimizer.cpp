#include "qrtm/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include "qrtm/error.hpp"
#include "qrtm/kernels/kernels.hpp"
#include "qrtm/numerics/marcum.hpp"
#include "qrtm/numerics/rng.hpp"

namespace qrtm {

using cd = std::complex<double>;

void SiuWeights::validate() const {
    std::vector<std::string> v;
    if (lambda1 < 0 || lambda2 < 0 || lambda3 < 0 || lambda4 < 0 || lambda5 < 0) v.push_back("SIU weights must be non-negative");
    if (std::abs(lambda1 + lambda2 + lambda3 - 1.0) > 1e-9) v.push_back("lambda1 + lambda2 + lambda3 must equal 1");
    if (!(R0 > 0) || !(C0 > 0) || !(PD0 > 0) || !(E0 > 0) || !(T0 > 0)) v.push_back("SIU normalizers must be positive");
    if (!v.empty()) throw ValidationError(std::move(v));
}

SiuWeights weights_from_config(const ScenarioConfig& c) {
    SiuWeights w;
    w.lambda1 = c.lambda1;
    w.lambda2 = c.lambda2;
    w.lambda3 = c.lambda3;
    w.lambda4 = c.lambda4;
    w.lambda5 = c.lambda5;
    w.R0 = c.R0_bps_hz > 0.0 ? c.R0_bps_hz : std::log2(1.0 + db_to_linear(c.user_snr_db));
    w.C0 = c.C0_bps_hz;
    w.PD0 = c.PD0;
    w.E0 = c.E0;
    w.T0 = c.T0;
    w.validate();
    return w;
}

EnergyLatency energy_latency(const ScenarioConfig& c, double tau, long switches, double control_latency_s) {
    EnergyLatency e;
    e.E = (tau * c.P_s + (1.0 - tau) * c.P_c) * c.T_cpi + c.e_sw * static_cast<double>(switches) + c.e_pqc;
    e.T_lat = control_latency_s + c.T_sw;
    return e;
}

double siu(double R, double Cs, double PD, const SiuWeights& w, const EnergyLatency* x) {
    if (R < 0.0 || Cs < 0.0 || PD < 0.0) throw DomainError("siu: R, C_s and P_D must be non-negative");
    double u = w.lambda1 * R / w.R0 + w.lambda2 * Cs / w.C0 + w.lambda3 * PD / w.PD0;
    if (x) u -= w.lambda4 * x->E / w.E0 + w.lambda5 * x->T_lat / w.T0;
    return u;
}

namespace {

std::uint8_t nearest_index(double phase, int q) {
    const double step = 2.0 * std::numbers::pi / q;
    double x = std::fmod(phase, 2.0 * std::numbers::pi);
    if (x < 0.0) x += 2.0 * std::numbers::pi;
    // ceil(x - 1/2) rounds to nearest with halves going down.
    const double k = std::ceil(x / step - 0.5);
    return static_cast<std::uint8_t>(static_cast<long>(k) % q);
}

}  // namespace

ProjectedProfile relax_project(cd h_dir, std::span<const cd> casc, int bits) {
    if (casc.empty()) throw DomainError("relax_project: M must be at least 1");
    if (bits < 1 || bits > 8) throw DomainError("relax_project: bits outside [1, 8]");
    const int q = 1 << bits;
    ProjectedProfile out;
    out.profile.bits = bits;
    out.profile.idx.assign(casc.size(), 0);
    const double cascade = kernels::abs_sum(casc);
    out.continuous_gain = std::abs(h_dir) + cascade;
    if (!(cascade > 0.0)) {
        out.degenerate = true;
        return out;
    }
    double ref = std::arg(h_dir);
    if (h_dir == cd{}) {
        for (const auto& c : casc)
            if (c != cd{}) {
                ref = std::arg(c);
                break;
            }
    }
    for (std::size_t m = 0; m < casc.size(); ++m)
        if (casc[m] != cd{}) out.profile.idx[m] = nearest_index(ref - std::arg(casc[m]), q);
    return out;
}

ProjectedProfile relax_project(const ChannelRealization& real, const ScenarioConfig& c, Objective objective) {
    auto out = relax_project(real.h_dir_u, real.casc_u, c.B_phi);
    if (objective == Objective::max_rho_u || out.degenerate) return out;

    const auto w = weights_from_config(c);
    const auto alpha = phase_alphabet(c.B_phi);
    const double scale = c.P_c / real.noise_power;
    cd hu = effective_channel(real, out.profile, Node::user);
    cd he = effective_channel(real, out.profile, Node::eve);
    auto score = [&](cd u, cd e) {
        const double ru = std::log2(1.0 + scale * std::norm(u));
        const double re = std::log2(1.0 + scale * std::norm(e));
        return w.lambda1 * ru / w.R0 + w.lambda2 * std::max(0.0, ru - re) / w.C0;
    };
    double best = score(hu, he);
    for (int m = 0; m < out.profile.size(); ++m) {
        const int cur = out.profile.idx[m];
        for (int k = 0; k < static_cast<int>(alpha.size()); ++k) {
            if (k == cur) continue;
            const cd du = real.casc_u[m] * (alpha[k] - alpha[cur]);
            const cd de = real.casc_e[m] * (alpha[k] - alpha[cur]);
            const double s = score(hu + du, he + de);
            if (s > best + 1e-15) {
                best = s;
                hu += du;
                he += de;
                out.profile.idx[m] = static_cast<std::uint8_t>(k);
                break;
            }
        }
    }
    return out;
}

RisProfile exhaustive_best_profile(cd h_dir, std::span<const cd> casc, int bits) {
    const int M = static_cast<int>(casc.size());
    if (M < 1 || bits * M > 20) throw DomainError("exhaustive_best_profile: needs 1 <= bits * M <= 20");
    const int q = 1 << bits;
    const auto alpha = phase_alphabet(bits);
    RisProfile p{std::vector<std::uint8_t>(M, 0), bits};
    RisProfile best = p;
    double best_gain = -1.0;
    const long total = 1L << (bits * M);
    for (long code = 0; code < total; ++code) {
        long x = code;
        for (int m = 0; m < M; ++m, x >>= bits) p.idx[m] = static_cast<std::uint8_t>(x & (q - 1));
        const double g = std::norm(h_dir + kernels::indexed_phase_sum(casc, p.idx, alpha));
        if (g > best_gain) {
            best_gain = g;
            best = p;
        }
    }
    return best;
}

namespace {

std::vector<std::vector<double>> utilities(const std::vector<std::vector<UavOption>>& uavs, const SiuWeights& w) {
    std::vector<std::vector<double>> u(uavs.size());
    for (std::size_t i = 0; i < uavs.size(); ++i) {
        if (uavs[i].empty()) throw DomainError("schedule: UAV " + std::to_string(i) + " has no options");
        for (const auto& o : uavs[i]) u[i].push_back(siu(o.R, o.Cs, o.PD, w, o.has_extras ? &o.extras : nullptr));
    }
    return u;
}

[[noreturn]] void budget_infeasible(double need, double budget) {
    InfeasibilityReport r;
    r.reasons.push_back("cheapest options need " + std::to_string(need) + " W, budget is " + std::to_string(budget) + " W");
    r.recommendation = "raise P_max or offer lower-power options";
    throw InfeasibleError(std::move(r));
}

}  // namespace

namespace {

struct GreedyState {
    std::vector<std::size_t> pick;
    double power = 0.0;
    double total = 0.0;
};

// One UAV per round, largest gain over its fallback that leaves room for
// every unassigned fallback.
GreedyState largest_gain_pass(const std::vector<std::vector<UavOption>>& uavs, const std::vector<std::vector<double>>& u,
                              const std::vector<std::size_t>& fallback, double budget) {
    const std::size_t n = uavs.size();
    double reserve = 0.0;
    for (std::size_t i = 0; i < n; ++i) reserve += uavs[i][fallback[i]].power;
    GreedyState s{fallback, 0.0, 0.0};
    std::vector<bool> done(n, false);
    for (std::size_t round = 0; round < n; ++round) {
        int bi = -1, bo = -1;
        double bg = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            if (done[i]) continue;
            const double others = reserve - uavs[i][fallback[i]].power;
            for (std::size_t o = 0; o < uavs[i].size(); ++o) {
                if (s.power + uavs[i][o].power + others > budget * (1.0 + 1e-12)) continue;
                const double gain = u[i][o] - u[i][fallback[i]];
                if (gain > bg) {
                    bg = gain;
                    bi = static_cast<int>(i);
                    bo = static_cast<int>(o);
                }
            }
        }
        // The reserve guarantees the fallback of some UAV always fits.
        done[bi] = true;
        reserve -= uavs[bi][fallback[bi]].power;
        s.power += uavs[bi][bo].power;
        s.pick[bi] = static_cast<std::size_t>(bo);
    }
    return s;
}

// Start from the fallbacks and repeatedly apply the affordable upgrade
// with the best utility gain per extra watt. Free upgrades go first.
GreedyState efficiency_pass(const std::vector<std::vector<UavOption>>& uavs, const std::vector<std::vector<double>>& u,
                            const std::vector<std::size_t>& fallback, double budget) {
    const std::size_t n = uavs.size();
    GreedyState s{fallback, 0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) s.power += uavs[i][fallback[i]].power;
    while (true) {
        int bi = -1, bo = -1;
        double be = 0.0, bg = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto& cur = uavs[i][s.pick[i]];
            for (std::size_t o = 0; o < uavs[i].size(); ++o) {
                const double gain = u[i][o] - u[i][s.pick[i]];
                const double extra = uavs[i][o].power - cur.power;
                if (!(gain > 1e-15) || s.power + extra > budget * (1.0 + 1e-12)) continue;
                const double eff = extra > 0.0 ? gain / extra : std::numeric_limits<double>::infinity();
                if (bi < 0 || eff > be || (eff == be && gain > bg)) {
                    be = eff;
                    bg = gain;
                    bi = static_cast<int>(i);
                    bo = static_cast<int>(o);
                }
            }
        }
        if (bi < 0) break;
        s.power += uavs[bi][bo].power - uavs[bi][s.pick[bi]].power;
        s.pick[bi] = static_cast<std::size_t>(bo);
    }
    return s;
}

// A fixed number of sweeps applying the best single or paired option
// change that fits the budget. Each sweep is O(n^2 K^2).
void exchange_pass(const std::vector<std::vector<UavOption>>& uavs, const std::vector<std::vector<double>>& u,
                   GreedyState& s, double budget, int sweeps) {
    const std::size_t n = uavs.size();
    const double cap = budget * (1.0 + 1e-12);
    for (int sweep = 0; sweep < sweeps; ++sweep) {
        double bg = 1e-12;
        int bi = -1, bo = -1, bj = -1, bq = -1;
        for (std::size_t i = 0; i < n; ++i) {
            const double pi = uavs[i][s.pick[i]].power;
            const double ui = u[i][s.pick[i]];
            for (std::size_t o = 0; o < uavs[i].size(); ++o) {
                const double di = uavs[i][o].power - pi;
                const double gi = u[i][o] - ui;
                if (o != s.pick[i] && s.power + di <= cap && gi > bg) {
                    bg = gi;
                    bi = static_cast<int>(i), bo = static_cast<int>(o), bj = -1;
                }
                for (std::size_t j = i + 1; j < n; ++j) {
                    const double pj = uavs[j][s.pick[j]].power;
                    const double uj = u[j][s.pick[j]];
                    for (std::size_t q = 0; q < uavs[j].size(); ++q) {
                        const double g = gi + u[j][q] - uj;
                        if (g > bg && s.power + di + uavs[j][q].power - pj <= cap) {
                            bg = g;
                            bi = static_cast<int>(i), bo = static_cast<int>(o);
                            bj = static_cast<int>(j), bq = static_cast<int>(q);
                        }
                    }
                }
            }
        }
        if (bi < 0) return;
        s.power += uavs[bi][bo].power - uavs[bi][s.pick[bi]].power;
        s.pick[bi] = static_cast<std::size_t>(bo);
        if (bj >= 0) {
            s.power += uavs[bj][bq].power - uavs[bj][s.pick[bj]].power;
            s.pick[bj] = static_cast<std::size_t>(bq);
        }
    }
}

}  // namespace

ScheduleResult greedy_schedule(const std::vector<std::vector<UavOption>>& uavs, const SiuWeights& w, double budget) {
    if (uavs.empty()) throw DomainError("greedy_schedule: no UAVs");
    const std::size_t n = uavs.size();
    const auto u = utilities(uavs, w);
    std::vector<std::size_t> fallback(n);
    double reserve = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t f = 0;
        for (std::size_t o = 1; o < uavs[i].size(); ++o)
            if (uavs[i][o].power < uavs[i][f].power || (uavs[i][o].power == uavs[i][f].power && u[i][o] > u[i][f])) f = o;
        fallback[i] = f;
        reserve += uavs[i][f].power;
    }
    if (reserve > budget * (1.0 + 1e-12)) budget_infeasible(reserve, budget);

    GreedyState best = largest_gain_pass(uavs, u, fallback, budget);
    GreedyState alt = efficiency_pass(uavs, u, fallback, budget);
    for (auto* s : {&best, &alt})
        for (std::size_t i = 0; i < n; ++i) s->total += u[i][s->pick[i]];
    if (alt.total > best.total) best = std::move(alt);
    exchange_pass(uavs, u, best, budget, 4);
    best.total = 0.0;
    for (std::size_t i = 0; i < n; ++i) best.total += u[i][best.pick[i]];

    ScheduleResult out;
    for (std::size_t i = 0; i < n; ++i)
        out.assignments.push_back({static_cast<int>(i), static_cast<int>(best.pick[i]), u[i][best.pick[i]],
                                   u[i][best.pick[i]] - u[i][fallback[i]]});
    std::stable_sort(out.assignments.begin(), out.assignments.end(),
                     [](const Assignment& a, const Assignment& b) { return a.marginal_gain > b.marginal_gain; });
    out.total_utility = best.total;
    out.total_power = best.power;
    return out;
}

ScheduleResult exhaustive_schedule(const std::vector<std::vector<UavOption>>& uavs, const SiuWeights& w, double budget) {
    if (uavs.empty()) throw DomainError("exhaustive_schedule: no UAVs");
    const auto u = utilities(uavs, w);
    const std::size_t n = uavs.size();
    std::vector<std::size_t> pick(n, 0), best;
    double best_u = -std::numeric_limits<double>::infinity(), best_p = 0.0;
    while (true) {
        double p = 0.0, total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            p += uavs[i][pick[i]].power;
            total += u[i][pick[i]];
        }
        if (p <= budget * (1.0 + 1e-12) && total > best_u) {
            best_u = total;
            best_p = p;
            best = pick;
        }
        std::size_t i = 0;
        while (i < n && ++pick[i] == uavs[i].size()) pick[i++] = 0;
        if (i == n) break;
    }
    if (best.empty()) {
        double need = 0.0;
        for (const auto& opts : uavs) {
            double m = opts[0].power;
            for (const auto& o : opts) m = std::min(m, o.power);
            need += m;
        }
        budget_infeasible(need, budget);
    }
    ScheduleResult out;
    for (std::size_t i = 0; i < n; ++i) out.assignments.push_back({static_cast<int>(i), static_cast<int>(best[i]), u[i][best[i]], 0.0});
    out.total_utility = best_u;
    out.total_power = best_p;
    return out;
}

Peak find_peak(std::span<const TauPoint> c) {
    Peak pk;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i].utility > c[pk.index].utility) pk.index = i;
        const bool left = i == 0 || c[i].utility >= c[i - 1].utility;
        const bool right = i + 1 == c.size() || c[i].utility > c[i + 1].utility;
        pk.local_maxima += left && right;
    }
    return pk;
}

namespace {

using clock_type = std::chrono::steady_clock;

// Best per-call time over several batches, each long enough to dwarf the
// clock resolution.
template <class F>
double best_time(F&& f, int& repeats) {
    int reps = 1;
    while (true) {
        const auto t0 = clock_type::now();
        for (int r = 0; r < reps; ++r) f();
        const double dt = std::chrono::duration<double>(clock_type::now() - t0).count();
        if (dt > 2e-3 || reps >= (1 << 20)) break;
        reps *= 2;
    }
    double best = std::numeric_limits<double>::infinity();
    for (int batch = 0; batch < 7; ++batch) {
        const auto t0 = clock_type::now();
        for (int r = 0; r < reps; ++r) f();
        best = std::min(best, std::chrono::duration<double>(clock_type::now() - t0).count() / reps);
    }
    repeats = reps * 7;
    return best;
}

volatile double sink = 0.0;

std::vector<cd> random_cascade(numerics::RngStream& rng, int M) {
    std::vector<cd> c(M);
    for (auto& x : c) x = rng.complex_normal(1.0 / M);
    return c;
}

}  // namespace

std::vector<UavOption> option_menu(double gain, const ScenarioConfig& c, int count, double power_budget, int n) {
    std::vector<UavOption> out;
    const int taus = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(count))));
    const int levels = std::max(1, count / taus);
    const double b = std::sqrt(-2.0 * std::log(c.siu_p_fa));
    for (int t = 0; t < taus; ++t)
        for (int l = 0; l < levels; ++l) {
            UavOption o;
            o.tau = 0.02 * (t + 1);
            o.power = power_budget / n * (0.5 + l * 1.0 / levels);
            const double rho = gain * o.power;
            o.R = (1.0 - o.tau) * std::log2(1.0 + rho);
            o.Cs = std::max(0.0, (1.0 - o.tau) * (std::log2(1.0 + rho) - std::log2(1.0 + 0.3 * rho)));
            o.PD = numerics::marcum_q1({std::sqrt(2.0 * 64.0 * rho * o.tau), b});
            out.push_back(o);
        }
    return out;
}

std::vector<RuntimeRow> runtime_scaling(const ScenarioConfig& c, std::uint64_t seed) {
    std::vector<RuntimeRow> rows;
    SiuWeights w;
    const double budget = 1.0;
    const int K = c.runtime_options;

    for (int n : c.runtime_n_grid) {
        numerics::RngStream rng(seed, {0x52554e, 1, static_cast<std::uint64_t>(n)});
        std::vector<std::vector<UavOption>> uavs(n);
        for (auto& opts : uavs)
            for (int k = 0; k < K; ++k) {
                UavOption o;
                o.R = rng.uniform() * 3.0;
                o.Cs = rng.uniform() * 2.0;
                o.PD = rng.uniform();
                o.power = budget / n * (0.2 + 1.6 * rng.uniform());
                opts.push_back(o);
            }
        RuntimeRow r{"greedy", n, c.M, c.B_phi, 0.0, 0};
        r.seconds = best_time([&] { sink = sink + greedy_schedule(uavs, w, budget).total_utility; }, r.repeats);
        rows.push_back(r);
    }

    for (int M : c.runtime_m_grid) {
        numerics::RngStream rng(seed, {0x52554e, 2, static_cast<std::uint64_t>(M)});
        const auto casc = random_cascade(rng, M);
        const cd h = rng.complex_normal(1.0);
        RuntimeRow r{"relax_project", 1, M, c.B_phi, 0.0, 0};
        r.seconds = best_time([&] { sink = sink + relax_project(h, casc, c.B_phi).continuous_gain; }, r.repeats);
        rows.push_back(r);
    }

    // Full pipelines on tiny instances where brute force is still possible.
    const int n = 4, bits = 1;
    for (int M : {4, 6, 8}) {
        numerics::RngStream rng(seed, {0x52554e, 3, static_cast<std::uint64_t>(M)});
        std::vector<std::vector<cd>> casc(n);
        std::vector<cd> hd(n);
        for (int i = 0; i < n; ++i) {
            casc[i] = random_cascade(rng, M);
            hd[i] = rng.complex_normal(0.1);
        }
        const auto alpha = phase_alphabet(bits);
        auto gain_of = [&](int i, const RisProfile& p) { return std::norm(hd[i] + kernels::indexed_phase_sum(casc[i], p.idx, alpha)); };

        RuntimeRow fast{"qrtm_pipeline", n, M, bits, 0.0, 0};
        fast.seconds = best_time(
            [&] {
                std::vector<std::vector<UavOption>> uavs(n);
                for (int i = 0; i < n; ++i)
                    uavs[i] = option_menu(gain_of(i, relax_project(hd[i], casc[i], bits).profile) * 10.0, c, K, budget, n);
                sink = sink + greedy_schedule(uavs, w, budget).total_utility;
            },
            fast.repeats);
        rows.push_back(fast);

        RuntimeRow slow{"exhaustive_pipeline", n, M, bits, 0.0, 0};
        slow.seconds = best_time(
            [&] {
                // Every profile's full option menu is scored; each (tau,
                // power) slot keeps its best profile, then all option tuples
                // are enumerated.
                std::vector<std::vector<UavOption>> uavs(n);
                RisProfile p{std::vector<std::uint8_t>(M, 0), bits};
                for (int i = 0; i < n; ++i) {
                    std::vector<double> best_u;
                    for (long code = 0; code < (1L << (bits * M)); ++code) {
                        for (int m = 0; m < M; ++m) p.idx[m] = static_cast<std::uint8_t>((code >> m) & 1);
                        auto menu = option_menu(gain_of(i, p) * 10.0, c, K, budget, n);
                        if (uavs[i].empty()) {
                            uavs[i] = menu;
                            for (auto& o : menu) best_u.push_back(siu(o.R, o.Cs, o.PD, w));
                            continue;
                        }
                        for (std::size_t k = 0; k < menu.size(); ++k) {
                            const double uu = siu(menu[k].R, menu[k].Cs, menu[k].PD, w);
                            if (uu > best_u[k]) {
                                best_u[k] = uu;
                                uavs[i][k] = menu[k];
                            }
                        }
                    }
                }
                sink = sink + exhaustive_schedule(uavs, w, budget).total_utility;
            },
            slow.repeats);
        rows.push_back(slow);
    }
    return rows;
}

}  // namespace qrtm
