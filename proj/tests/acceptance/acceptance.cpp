// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "qrtm/control_plane.hpp"
#include "qrtm/crypto.hpp"
#include "qrtm/error.hpp"
#include "qrtm/experiments.hpp"
#include "qrtm/numerics/marcum.hpp"
#include "qrtm/numerics/rng.hpp"
#include "qrtm/numerics/stats.hpp"
#include "qrtm/optimizer.hpp"

using namespace qrtm;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// Q1(a, b) = int_b^inf x exp(-(x^2 + a^2) / 2) I0(a x) dx by composite
// Simpson on a fine grid; independent of the library's series.
double marcum_oracle(double a, double b) {
    const double hi = std::max(a, b) + 40.0;
    const int n = 40000;
    const double h = (hi - b) / n;
    auto f = [a](double x) {
        const double ax = a * x;
        // I0(ax) e^{-ax} keeps the exponent bounded for large ax.
        const double i0e = ax < 700.0 ? std::cyl_bessel_i(0.0, ax) * std::exp(-ax) : 1.0 / std::sqrt(2.0 * std::numbers::pi * ax);
        return x * std::exp(-(x - a) * (x - a) / 2.0) * i0e;
    };
    double s = f(b) + f(hi);
    for (int i = 1; i < n; ++i) s += f(b + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

Outcome marcum_correctness() {
    double worst = 0.0, ident = 0.0;
    for (int i = 0; i < 20; ++i)
        for (int j = 0; j < 20; ++j) {
            const double a = 10.0 * i / 19.0, b = 10.0 * j / 19.0;
            worst = std::max(worst, std::abs(numerics::marcum_q1({a, b}) - marcum_oracle(a, b)));
        }
    for (int i = 0; i <= 100; ++i) {
        const double x = 0.1 * i;
        ident = std::max(ident, std::abs(numerics::marcum_q1({0.0, x}) - std::exp(-x * x / 2.0)));
        ident = std::max(ident, std::abs(numerics::marcum_q1({x, 0.0}) - 1.0));
    }
    return {worst <= 1e-6 && ident <= 1e-12, fmt("max |Q1 - quadrature| = %.2e on 20x20 grid, identity error %.2e", worst, ident)};
}

// A realistic coded signature: the QRTM code of one corridor trial.
SensingCode corridor_code(const World& w) {
    return sensing_code(draw_trial(w, 0), Scheme::QRTM, w.config.M_code);
}

EchoModel quiet(double gain) {
    EchoModel m;
    m.echo_gain = gain;
    m.clutter_power = 0.0;
    m.noise_var = 1.0;
    return m;
}

Outcome cfar_calibration(const World& w) {
    const SensingCode code = corridor_code(w);
    const std::vector<cd> clutter(code.slots());
    const std::vector<double> targets{1e-1, 1e-2, 1e-3};
    const int n = 100000;
    std::vector<int> hits(targets.size(), 0);
    for (int t = 0; t < n; ++t) {
        numerics::RngStream r(w.seed, {0xCFA, static_cast<std::uint64_t>(t)});
        const auto obs = embed_and_observe(code, clutter, quiet(0.0), AdversaryModel{}, Hypothesis::authentic, r);
        for (std::size_t k = 0; k < targets.size(); ++k) hits[k] += glrt_decide(obs, targets[k]).authentic;
    }
    bool ok = true;
    std::ostringstream d;
    for (std::size_t k = 0; k < targets.size(); ++k) {
        const double emp = static_cast<double>(hits[k]) / n;
        const double z = (emp - targets[k]) / numerics::binomial_stderr(targets[k], n);
        ok = ok && std::abs(z) <= 3.0;
        d << (k ? ", " : "") << fmt("P_FA %.0e -> %.5f (%+.2f se)", targets[k], emp, z);
    }
    return {ok, d.str() + " at 1e5 H0 trials"};
}

Outcome detection_agreement(const World& w) {
    const SensingCode code = corridor_code(w);
    const std::vector<cd> clutter(code.slots());
    numerics::RngStream probe(w.seed, 0xDE7);
    const double unit = noncentrality(embed_and_observe(code, clutter, quiet(1.0), AdversaryModel{}, Hypothesis::authentic, probe));
    const double p = 1e-2;
    const double b = std::sqrt(-2.0 * std::log(p));
    const int n = 20000;
    bool ok = true;
    std::ostringstream d;
    for (double lambda0 : {1.0, 4.0, 16.0, 64.0}) {
        const EchoModel m = quiet(std::sqrt(lambda0 / unit));
        int hits = 0;
        for (int t = 0; t < n; ++t) {
            numerics::RngStream r(w.seed, {0xDE7, static_cast<std::uint64_t>(lambda0), static_cast<std::uint64_t>(t)});
            hits += glrt_decide(embed_and_observe(code, clutter, m, AdversaryModel{}, Hypothesis::authentic, r), p).authentic;
        }
        const double emp = static_cast<double>(hits) / n;
        const double q = numerics::marcum_q1({std::sqrt(lambda0), b});
        ok = ok && std::abs(emp - q) <= 0.01;
        d << (lambda0 > 1.0 ? ", " : "") << fmt("lambda0 %g: %.4f vs %.4f", lambda0, emp, q);
    }
    return {ok, d.str() + " (P_FA 1e-2, 2e4 trials)"};
}

double pd_at(const RocResult& r, const std::string& scheme, double p_fa) {
    for (const auto& row : r.rows)
        if (row.scheme == scheme && row.point.p_fa_target == p_fa) return row.point.p_d_emp;
    throw DomainError("no ROC row for " + scheme);
}

Outcome fig2(const ScenarioConfig& base) {
    ScenarioConfig c = base;
    c.schemes = {"B0", "B1", "B2", "B3", "QRTM"};
    bool ordered = true;
    std::vector<double> qs;
    std::uint64_t worst_seed = 0;
    double q_min = 1.0, pub_min = 1.0, pub_max = 0.0, b0_max = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto r = run_roc_experiment(c, seed, 10000);
        const double q = pd_at(r, "QRTM", 1e-3), b3 = pd_at(r, "B3", 1e-3), b0 = pd_at(r, "B0", 1e-3);
        const double pub = std::min(pd_at(r, "B1", 1e-3), pd_at(r, "B2", 1e-3));
        const double pub_hi = std::max(pd_at(r, "B1", 1e-3), pd_at(r, "B2", 1e-3));
        ordered = ordered && q >= b3 && b3 >= pub_hi && pub >= b0;
        if (q < q_min) worst_seed = seed;
        q_min = std::min(q_min, q);
        qs.push_back(q);
        pub_min = std::min(pub_min, pub);
        pub_max = std::max(pub_max, pub_hi);
        b0_max = std::max(b0_max, b0);
    }
    const bool ok = ordered && q_min >= 0.95 && pub_min >= 0.6 && pub_max <= 0.9 && b0_max <= 0.2;
    const long below = std::count_if(qs.begin(), qs.end(), [](double q) { return q < 0.95; });
    std::nth_element(qs.begin(), qs.begin() + qs.size() / 2, qs.end());
    return {ok, fmt("20 seeds x 1e4 trials at P_FA 1e-3: QRTM min %.4f (seed %llu, %ld seeds below 0.95, median %.4f), "
                    "public [%.4f, %.4f], no-RIS max %.4f, ordering %s",
                    q_min, static_cast<unsigned long long>(worst_seed), below, qs[qs.size() / 2], pub_min, pub_max, b0_max,
                    ordered ? "holds" : "violated")};
}

Outcome fig3(const ScenarioConfig& base) {
    ScenarioConfig c = base;
    const auto r = run_secrecy_experiment(c, c.master_seed, c.effective_trials());
    std::map<std::string, double> cs;
    for (const auto& row : r.rows)
        if (row.adversary == "A1" && row.point.snr_db == 10.0) cs[row.scheme] = row.point.mean_cs;
    const double pub = std::min(cs.at("B1"), cs.at("B2"));
    const bool ordered = cs.at("QRTM") >= pub && pub >= cs.at("STATIC") && cs.at("STATIC") >= cs.at("B0");
    const double a2 = r.retention.at("A2"), a3 = r.retention.at("A3");
    const bool ok = ordered && cs.at("QRTM") >= 1.5 && a2 >= 0.9 && a3 >= 0.9;
    return {ok, fmt("C_s at 10 dB: QRTM %.3f, public %.3f, static %.3f, no-RIS %.3f bps/Hz; retention A2 %.3f, A3 %.3f",
                    cs.at("QRTM"), pub, cs.at("STATIC"), cs.at("B0"), a2, a3)};
}

Outcome fig4(const ScenarioConfig& base) {
    const auto r = run_siu_experiment(base, base.master_seed, base.effective_trials());
    std::map<std::string, std::map<double, double>> u;
    for (const auto& row : r.rows) u[row.scheme][row.point.tau] = row.point.utility;
    bool unimodal = true, dominant = true;
    for (const auto& [s, n] : r.local_maxima) unimodal = unimodal && n == 1;
    for (const auto& [tau, uq] : u.at("QRTM")) {
        if (tau < 0.05 - 1e-12 || tau > 0.9 + 1e-12) continue;
        for (const auto& [s, curve] : u)
            if (s != "QRTM") dominant = dominant && uq >= curve.at(tau);
    }
    const double ts = r.tau_star.at("QRTM");
    const bool ok = unimodal && dominant && ts >= 0.01 && ts <= 0.15;
    return {ok, fmt("unimodal %s, tau*(QRTM) = %.3f, QRTM dominates on [0.05, 0.9]: %s", unimodal ? "yes" : "no", ts,
                    dominant ? "yes" : "no")};
}

Outcome fig5(const ScenarioConfig& c) {
    const auto r = run_runtime_experiment(c, c.master_seed);
    bool growing = true;
    double prev = 0.0;
    std::ostringstream ratios;
    for (const auto& [m, x] : r.exhaustive_ratio) {
        growing = growing && x > prev;
        prev = x;
        ratios << (ratios.tellp() ? ", " : "") << fmt("M=%d %.0f", m, x);
    }
    const double at8 = r.exhaustive_ratio.count(8) ? r.exhaustive_ratio.at(8) : 0.0;
    const bool ok = std::abs(r.greedy_slope - 2.0) <= 0.3 && std::abs(r.relax_slope - 1.0) <= 0.2 && at8 >= 1e3 && growing;
    return {ok, fmt("greedy slope %.3f, relax-project slope %.3f, exhaustive/QRTM ratio %s (need >= 1e3 at M=8)",
                    r.greedy_slope, r.relax_slope, ratios.str().c_str())};
}

}  // namespace

namespace {

double rho(cd h_dir, const std::vector<cd>& casc, const RisProfile& p) {
    const auto a = phase_alphabet(p.bits);
    cd h = h_dir;
    for (std::size_t m = 0; m < casc.size(); ++m) h += casc[m] * a[p.idx[m]];
    return std::norm(h);
}

Outcome oracle_equivalence(const ScenarioConfig& base) {
    // Channel-model draws at M = 2..8 and i.i.d. Rayleigh draws where the
    // cascade is as strong as the direct path.
    double worst_model = 1.0, worst_iid = 1.0, sum_model = 0.0;
    int within_model = 0;
    numerics::RngStream rng(base.master_seed, 0x0AC1);
    for (int t = 0; t < 100; ++t) {
        ScenarioConfig c = base;
        c.M = 2 + t % 7;
        c.S_max = std::min(c.S_max, c.M);
        const Geometry g = build_scenario(c, rng);
        const auto real = sample_channels(g, c, t % c.n_uav, rng);
        const auto p = relax_project(real.h_dir_u, real.casc_u, 1).profile;
        const auto best = exhaustive_best_profile(real.h_dir_u, real.casc_u, 1);
        const double ratio = rho(real.h_dir_u, real.casc_u, p) / rho(real.h_dir_u, real.casc_u, best);
        worst_model = std::min(worst_model, ratio);
        sum_model += ratio;
        within_model += ratio >= 0.95;

        const int M = 1 + t % 8;
        const cd h = rng.complex_normal();
        std::vector<cd> casc(M);
        for (auto& x : casc) x = rng.complex_normal(1.0 / M);
        worst_iid = std::min(worst_iid, rho(h, casc, relax_project(h, casc, 1).profile) /
                                            rho(h, casc, exhaustive_best_profile(h, casc, 1)));
    }

    const SiuWeights w;
    double worst_greedy = 1.0;
    for (int t = 0; t < 100; ++t) {
        const int n = 1 + t % 5;
        std::vector<std::vector<UavOption>> menus(n);
        for (auto& m : menus) m = option_menu(20.0 * -std::log(1.0 - rng.uniform()), base, 9, 1.0, n);
        worst_greedy = std::min(worst_greedy, greedy_schedule(menus, w, 1.0).total_utility /
                                                  exhaustive_schedule(menus, w, 1.0).total_utility);
    }
    const bool ok = worst_model >= 0.95 && worst_iid >= 0.95 && worst_greedy >= 0.95;
    return {ok, fmt("rho_u ratio vs exhaustive (B_phi=1, M<=8, 100 draws): channel model worst %.4f, mean %.4f, "
                    "%d/100 within 5%%; iid Rayleigh worst %.4f; worst greedy/exhaustive SIU (n<=5, 100 instances) %.4f",
                    worst_model, sum_model / 100.0, within_model, worst_iid, worst_greedy)};
}

Outcome projection_floor(const World& w) {
    std::ostringstream d;
    bool ok = true;
    for (int bits : {1, 2, 3}) {
        const double floor = std::pow(std::cos(std::numbers::pi / (1 << bits)), 2);
        double worst = 1.0;
        numerics::RngStream rng(w.seed, {0xF1, static_cast<std::uint64_t>(bits)});
        for (int t = 0; t < 10000; ++t) {
            const auto real = sample_channels(w.links[t % w.links.size()], w.config, rng);
            const auto p = relax_project(real.h_dir_u, real.casc_u, bits);
            worst = std::min(worst, rho(real.h_dir_u, real.casc_u, p.profile) / (p.continuous_gain * p.continuous_gain));
        }
        ok = ok && worst >= floor;
        d << (bits > 1 ? ", " : "") << fmt("B=%d worst %.4f >= %.4f", bits, worst, floor);
    }
    return {ok, d.str() + " over 1e4 draws each"};
}

Outcome security_harness(const World& w) {
    const ScenarioConfig& c = w.config;
    const Codebook cb = draw_trial(w, 0).codebook;
    auto p = make_pqc_test_provider(c, w.seed);
    SessionState gnb = establish_session(*p, AdversaryModel{});
    SessionState uav = gnb;
    auto rogue_p = make_pqc_test_provider(c, w.seed + 1);
    SessionState rogue = establish_session(*rogue_p, AdversaryModel{});
    numerics::RngStream rng(w.seed, 0x5EC);

    long attacks = 0, accepted_attacks = 0, genuine = 0, genuine_ok = 0;
    auto attack = [&](const Bytes& wire) {
        ++attacks;
        try {
            accepted_attacks += verify_commitment(uav, parse_commitment(wire), *p, cb, c).accepted();
        } catch (const DomainError&) {
        }
    };

    // Adversary guess of each CPI's per-slot codebook label: the previous
    // CPI's schedule, and a uniform draw.
    const int L = cb.size();
    long hits_prev = 0, hits_uniform = 0, samples = 0;
    std::vector<int> prev_labels;

    while (attacks < 100000) {
        const Commit cm = commit_schedule(gnb, *p, cb, c);
        const Bytes wire = serialize_commitment(cm.commitment);

        Bytes flipped = wire;
        flipped[rng.uniform_int(0, static_cast<std::int64_t>(wire.size()) - 1)] ^=
            static_cast<std::uint8_t>(1u << rng.uniform_int(0, 7));
        attack(flipped);

        ScheduleCommitment forged = cm.commitment;
        for (auto& b : forged.signature) b = static_cast<std::uint8_t>(rng() & 0xff);
        attack(serialize_commitment(forged));

        ScheduleCommitment foreign = commit_schedule(rogue, *rogue_p, cb, c).commitment;
        foreign.cpi_index = cm.commitment.cpi_index;
        attack(serialize_commitment(foreign));

        ++genuine;
        const auto v = verify_commitment(uav, cm.commitment, *p, cb, c);
        genuine_ok += v.accepted();
        attack(wire);

        std::vector<int> labels(cm.schedule.slot_count());
        for (int s = 0; s < cm.schedule.slot_count(); ++s) labels[s] = cm.schedule.labels[cm.schedule.slots[s]];
        // One slot per CPI keeps the samples independent.
        const int s = static_cast<int>(rng.uniform_int(0, cm.schedule.slot_count() - 1));
        if (!prev_labels.empty() && labels[s] >= 0 && prev_labels[s] >= 0) {
            ++samples;
            hits_prev += labels[s] == prev_labels[s];
            hits_uniform += labels[s] == static_cast<int>(rng.uniform_int(0, L - 1));
        }
        prev_labels = std::move(labels);
    }

    const double target = 1.0 / L;
    const double se = numerics::binomial_stderr(target, static_cast<std::size_t>(samples));
    const double r_prev = static_cast<double>(hits_prev) / samples;
    const double r_uni = static_cast<double>(hits_uniform) / samples;

    // PQC on (B2) versus off (B1) on identical realizations.
    bool identical = true;
    for (std::uint64_t t = 0; t < 2000 && identical; ++t) {
        const auto d = draw_trial(w, t);
        std::vector<cd> u1, e1, u2, e2;
        slot_channels(d, Scheme::B1, c.M_code, u1, e1);
        slot_channels(d, Scheme::B2, c.M_code, u2, e2);
        identical = u1.size() == u2.size() && std::memcmp(u1.data(), u2.data(), u1.size() * sizeof(cd)) == 0 &&
                    std::memcmp(e1.data(), e2.data(), e1.size() * sizeof(cd)) == 0;
    }

    const bool ok = accepted_attacks == 0 && genuine_ok == genuine && std::abs(r_prev - target) <= 3.0 * se &&
                    std::abs(r_uni - target) <= 3.0 * se && identical;
    return {ok, fmt("%ld/%ld attacks accepted, %ld/%ld genuine accepted; hit rate %.5f (previous CPI) and %.5f (uniform) "
                    "vs 1/L = %.5f +- %.5f over %ld slots; PQC on/off rho bit-identical: %s",
                    accepted_attacks, attacks, genuine_ok, genuine, r_prev, r_uni, target, 3.0 * se, samples,
                    identical ? "yes" : "no")};
}

Outcome constraint_enforcement(const World& w) {
    const ScenarioConfig& c = w.config;
    numerics::RngStream rng(w.seed, 0xC0);
    std::vector<Codebook> books;
    for (std::uint64_t t = 0; t < 16; ++t) books.push_back(draw_trial(w, t).codebook);
    int bad = 0;
    for (int t = 0; t < 10000; ++t) {
        std::vector<std::uint8_t> seed(32);
        for (auto& b : seed) b = static_cast<std::uint8_t>(rng() & 0xff);
        const auto s = schedule_from_seed(seed, books[t % books.size()], c, static_cast<std::uint64_t>(t));
        bad += !validate_schedule(s, c).empty();
    }

    auto names = [](const ScenarioConfig& x, const std::string& tag) {
        for (const auto& v : config_violations(x))
            if (v.find(tag) != std::string::npos) return true;
        return false;
    };
    ScenarioConfig q = c, s = c, d1 = c, d2 = c;
    q.B_phi = 0;
    s.S_max = c.M + 1;
    d1.d_min = 0;
    d2.T_min = 1e-4;
    const bool named = names(q, "(Q)") && names(s, "(S)") && names(d1, "(D1)") && names(d2, "(D2)");
    bool thrown = true;
    for (const auto* x : {&q, &s, &d1, &d2}) {
        try {
            validate_config(*x);
            thrown = false;
        } catch (const ValidationError&) {
        }
    }
    return {bad == 0 && named && thrown,
            fmt("%d/10000 seeded schedules violate constraints; violating configs rejected naming (Q)(S)(D1)(D2): %s",
                bad, named && thrown ? "yes" : "no")};
}

}  // namespace

int main() {
    ScenarioConfig c;
    c.workers = 0;
    const World w = make_world(c, c.master_seed);

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"marcum_q_correctness", [] { return marcum_correctness(); }},
        {"cfar_calibration", [&] { return cfar_calibration(w); }},
        {"closed_form_detection", [&] { return detection_agreement(w); }},
        {"fig2_roc", [&] { return fig2(c); }},
        {"fig3_secrecy", [&] { return fig3(c); }},
        {"fig4_siu", [&] { return fig4(c); }},
        {"fig5_runtime", [&] { return fig5(c); }},
        {"oracle_equivalence", [&] { return oracle_equivalence(c); }},
        {"projection_floor", [&] { return projection_floor(w); }},
        {"control_plane_security", [&] { return security_harness(w); }},
        {"constraint_enforcement", [&] { return constraint_enforcement(w); }},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failed += !o.pass;
        std::printf("%s %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), dt);
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed ? 1 : 0;
}
