#include "qrtm/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "qrtm/control_plane.hpp"
#include "qrtm/crypto.hpp"
#include "qrtm/error.hpp"
#include "qrtm/kernels/kernels.hpp"
#include "qrtm/numerics/stats.hpp"

namespace qrtm {

namespace {

// Stream domains. Every random draw is keyed by (seed, domain, ...), so a
// trial's numbers depend only on its index.
enum : std::uint64_t {
    kGeom = 1,
    kChan = 2,
    kCodebook = 3,
    kSchedule = 4,
    kAuth = 5,
    kSpoofEval = 6,
    kSpoofCal = 7,
    kSiuEval = 8,
    kSiuCal = 9,
};

// Trial index space for the echo-gain pilot batch, disjoint from the
// experiment trials.
constexpr std::uint64_t kPilotDomain = 1;
constexpr int kPilotTrials = 256;
// Trials used for the semi-analytic Neyman-Pearson threshold in the SIU sweep.
constexpr int kSiuCalibrationTrials = 2000;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

TrialDraw draw_keyed(const World& w, std::uint64_t domain, std::uint64_t t) {
    const ScenarioConfig& c = w.config;
    TrialDraw d;
    const int uav = static_cast<int>(t % static_cast<std::uint64_t>(w.links.size()));
    numerics::RngStream chan(w.seed, {kChan, domain, t});
    d.real = sample_channels(w.links[uav], c, chan);
    d.base = relax_project(d.real, c).profile;
    d.static_profile = relax_project(d.real.h_dir_u_los, d.real.casc_u_los, c.B_phi).profile;
    numerics::RngStream cb(w.seed, {kCodebook, domain, t});
    d.codebook = make_codebook(d.base, c, cb);
    d.sig_u.reserve(d.codebook.profiles.size());
    d.sig_e.reserve(d.codebook.profiles.size());
    for (const auto& p : d.codebook.profiles) {
        d.sig_u.push_back(effective_channel(d.real, p, Node::user));
        d.sig_e.push_back(effective_channel(d.real, p, Node::eve));
    }
    numerics::RngStream sk(w.seed, {kSchedule, domain, t});
    std::vector<std::uint8_t> seed(32);
    for (std::size_t i = 0; i < seed.size(); i += 8) {
        const std::uint64_t v = sk();
        for (int b = 0; b < 8; ++b) seed[i + b] = static_cast<std::uint8_t>(v >> (8 * b));
    }
    d.schedule = schedule_from_seed(seed, d.codebook, c, t);
    return d;
}

int resolve_workers(int workers) {
    if (workers > 0) return workers;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

}  // namespace

SchemeSpec scheme_spec(Scheme s) {
    switch (s) {
        case Scheme::B0: return {Scheme::B0, "B0", false, false, false, false, false};
        case Scheme::STATIC: return {Scheme::STATIC, "STATIC", true, false, false, false, false};
        case Scheme::B1: return {Scheme::B1, "B1", true, false, false, false, true};
        case Scheme::B2: return {Scheme::B2, "B2", true, false, true, false, true};
        case Scheme::B3: return {Scheme::B3, "B3", true, true, true, false, true};
        case Scheme::QRTM: return {Scheme::QRTM, "QRTM", true, true, true, true, true};
    }
    throw DomainError("scheme_spec: unknown scheme");
}

Scheme parse_scheme(const std::string& name) {
    for (Scheme s : {Scheme::B0, Scheme::STATIC, Scheme::B1, Scheme::B2, Scheme::B3, Scheme::QRTM})
        if (name == scheme_spec(s).name) return s;
    throw DomainError("unknown scheme '" + name + "' (expected B0, STATIC, B1, B2, B3 or QRTM)");
}

std::vector<Scheme> schemes_from_config(const ScenarioConfig& config) {
    std::vector<Scheme> out;
    for (const auto& n : config.schemes) out.push_back(parse_scheme(n));
    if (out.empty()) throw DomainError("no schemes selected");
    return out;
}

double class_knowledge(const ScenarioConfig& c, AdversaryClass cls) {
    switch (cls) {
        case AdversaryClass::A1:
        case AdversaryClass::A2: return 0.0;
        case AdversaryClass::A3: return c.a3_learned_fraction;
        case AdversaryClass::A4: return c.a4_learned_fraction;
    }
    return 0.0;
}

double scheme_knowledge(const ScenarioConfig& c, Scheme s, AdversaryClass cls) {
    const SchemeSpec spec = scheme_spec(s);
    if (!spec.codes_secret) return 1.0;
    // A Shor-capable adversary recovers a legacy session key and with it the
    // whole schedule.
    const bool broken = !spec.pqc_enabled && (cls == AdversaryClass::A3 || cls == AdversaryClass::A4);
    if (broken) return 1.0;
    double f = class_knowledge(c, cls);
    if (s == Scheme::B3) f = std::max(f, c.b3_learned_fraction);
    return f;
}

World make_world(const ScenarioConfig& config, std::uint64_t seed) {
    validate_config(config);
    World w;
    w.config = config;
    w.seed = seed;
    numerics::RngStream g(seed, {kGeom});
    w.geometry = build_scenario(config, g);
    for (int u = 0; u < config.n_uav; ++u) w.links.push_back(prepare_links(w.geometry, config, u));

    w.echo.noise_var = 1.0;
    w.echo.clutter_power = db_to_linear(config.clutter_cnr_db);
    w.echo.pulse_oversampling = config.pulse_oversampling;
    std::vector<double> dev(kPilotTrials);
    for (int i = 0; i < kPilotTrials; ++i) {
        const TrialDraw d = draw_keyed(w, kPilotDomain, static_cast<std::uint64_t>(i));
        const SensingCode code = sensing_code(d, Scheme::QRTM, config.M_code);
        cd mean = 0;
        for (int p = 0; p < code.slots(); ++p) mean += code.at(p);
        mean /= static_cast<double>(code.slots());
        double acc = 0.0;
        for (int p = 0; p < code.slots(); ++p) acc += std::norm(code.at(p) - mean);
        dev[i] = acc / code.slots();
    }
    std::nth_element(dev.begin(), dev.begin() + kPilotTrials / 2, dev.end());
    const double med = dev[kPilotTrials / 2];
    if (!(med > 0.0)) throw DomainError("make_world: codebook produces no signature variation");
    w.echo.echo_gain = std::sqrt(db_to_linear(config.echo_snr_db) * w.echo.noise_var / med);
    return w;
}

TrialDraw draw_trial(const World& world, std::uint64_t trial) { return draw_keyed(world, 0, trial); }

SensingCode sensing_code(const TrialDraw& t, Scheme s, int slots) {
    switch (s) {
        case Scheme::B0: return constant_sensing_code(direct_channel(t.real, Node::user), slots);
        case Scheme::STATIC: return constant_sensing_code(effective_channel(t.real, t.static_profile, Node::user), slots);
        default: return make_sensing_code(t.real, t.sig_u, t.schedule);
    }
}

void slot_channels(const TrialDraw& t, Scheme s, int slots, std::vector<cd>& user, std::vector<cd>& eve) {
    user.assign(slots, cd{});
    eve.assign(slots, cd{});
    const SchemeSpec spec = scheme_spec(s);
    if (!spec.codes_secret) {
        const RisProfile* prof = s == Scheme::STATIC ? &t.static_profile : spec.ris_enabled ? &t.base : nullptr;
        const cd hu = prof ? effective_channel(t.real, *prof, Node::user) : direct_channel(t.real, Node::user);
        const cd he = prof ? effective_channel(t.real, *prof, Node::eve) : direct_channel(t.real, Node::eve);
        std::fill(user.begin(), user.end(), hu);
        std::fill(eve.begin(), eve.end(), he);
        return;
    }
    const CodeSchedule& sc = t.schedule;
    std::vector<cd> pu(sc.profiles.size()), pe(sc.profiles.size());
    for (std::size_t k = 0; k < sc.profiles.size(); ++k) {
        const int label = k < sc.labels.size() ? sc.labels[k] : -1;
        if (label >= 0) {
            pu[k] = t.sig_u[label];
            pe[k] = t.sig_e[label];
        } else {
            pu[k] = effective_channel(t.real, sc.profiles[k], Node::user);
            pe[k] = effective_channel(t.real, sc.profiles[k], Node::eve);
        }
    }
    for (int p = 0; p < slots; ++p) {
        user[p] = pu[sc.slots[p]];
        eve[p] = pe[sc.slots[p]];
    }
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& body) {
    const int wk = std::min<std::size_t>(resolve_workers(workers), std::max<std::size_t>(n, 1));
    if (wk <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    auto run = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mu);
                if (!error) error = std::current_exception();
                next.store(n);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int k = 0; k < wk; ++k) pool.emplace_back(run);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

RocResult run_roc_experiment(const ScenarioConfig& config, std::uint64_t seed, int trials) {
    if (trials < 1) throw DomainError("run_roc_experiment: trials must be positive");
    const auto t0 = Clock::now();
    const World w = make_world(config, seed);
    const auto schemes = schemes_from_config(config);
    const std::size_t ns = schemes.size(), n = static_cast<std::size_t>(trials);
    std::vector<std::vector<double>> auth(ns, std::vector<double>(n)), ev(ns, std::vector<double>(n)),
        cal(ns, std::vector<double>(n));
    const int slots = config.M_code;

    parallel_for(n, config.workers, [&](std::size_t t) {
        const TrialDraw d = draw_trial(w, t);
        const auto clutter = clutter_returns(d.real, slots, w.echo);
        for (std::size_t s = 0; s < ns; ++s) {
            const SensingCode code = sensing_code(d, schemes[s], slots);
            const auto adv =
                adversary_from_config(config, AdversaryClass::A1, scheme_knowledge(config, schemes[s], AdversaryClass::A1));
            auto stat = [&](Hypothesis h, std::uint64_t domain) {
                numerics::RngStream rng(seed, {domain, t});
                const auto obs = embed_and_observe(code, clutter, w.echo, adv, h, rng);
                return std::norm(obs.z) / authentication_normalizer(obs);
            };
            auth[s][t] = stat(Hypothesis::authentic, kAuth);
            ev[s][t] = stat(Hypothesis::spoof, kSpoofEval);
            cal[s][t] = stat(Hypothesis::spoof, kSpoofCal);
        }
    });

    RocResult out;
    for (std::size_t s = 0; s < ns; ++s) {
        const std::string name = scheme_spec(schemes[s]).name;
        const double auc = numerics::empirical_auc(auth[s], ev[s]);
        out.auc[name] = auc;
        for (const auto& pt : roc_curve(auth[s], ev[s], cal[s], config.p_fa_grid))
            out.rows.push_back({name, pt, auc, trials, seed});
    }
    out.wall_time_s = seconds_since(t0);
    return out;
}

namespace {

struct SchemeAdversary {
    Scheme scheme;
    AdversaryClass cls;
};

std::vector<SchemeAdversary> secrecy_cases(const std::vector<Scheme>& schemes) {
    std::vector<SchemeAdversary> cases;
    for (Scheme s : schemes) cases.push_back({s, AdversaryClass::A1});
    if (std::find(schemes.begin(), schemes.end(), Scheme::QRTM) != schemes.end())
        for (auto a : {AdversaryClass::A2, AdversaryClass::A3, AdversaryClass::A4}) cases.push_back({Scheme::QRTM, a});
    return cases;
}

}  // namespace

SecrecyResult run_secrecy_experiment(const ScenarioConfig& config, std::uint64_t seed, int trials) {
    if (trials < 1) throw DomainError("run_secrecy_experiment: trials must be positive");
    const auto t0 = Clock::now();
    const World w = make_world(config, seed);
    const auto cases = secrecy_cases(schemes_from_config(config));
    const std::size_t n = static_cast<std::size_t>(trials);
    std::vector<std::vector<SecrecySample>> samples(cases.size(), std::vector<SecrecySample>(n));

    parallel_for(n, config.workers, [&](std::size_t t) {
        const TrialDraw d = draw_trial(w, t);
        std::vector<cd> u, e;
        for (std::size_t k = 0; k < cases.size(); ++k) {
            slot_channels(d, cases[k].scheme, config.M_code, u, e);
            samples[k][t] = secrecy_sample(u, e, scheme_knowledge(config, cases[k].scheme, cases[k].cls));
        }
    });

    SecrecyResult out;
    double reference = 0.0;
    const double at[] = {config.user_snr_db};
    for (std::size_t k = 0; k < cases.size(); ++k) {
        const std::string name = scheme_spec(cases[k].scheme).name;
        const std::string cls = to_string(cases[k].cls);
        for (const auto& pt : secrecy_sweep(samples[k], config.snr_grid_db, config.tau))
            out.rows.push_back({name, cls, pt, seed});
        if (cases[k].scheme != Scheme::QRTM) continue;
        const double cs = secrecy_sweep(samples[k], at, config.tau).front().mean_cs;
        if (cases[k].cls == AdversaryClass::A1)
            reference = cs;
        else
            out.retention[cls] = retention(cs, reference);
    }
    out.wall_time_s = seconds_since(t0);
    return out;
}

namespace {

// Normalizer at echo-energy scale `scale`, matching authentication_normalizer().
double normalizer(const DetectionMoments& m, double scale) { return m.sigma_sq + scale * m.residual_var; }

// Normalized threshold g (on T / normalizer) at which the calibration spoofs'
// mean exceedance equals p_fa, floored at the CFAR level -ln p_fa.
double np_threshold(const std::vector<DetectionMoments>& cal, double p_fa, double scale) {
    auto exceed = [&](double g) {
        double acc = 0.0;
        for (const auto& m : cal) acc += exceed_probability(m.mu_spoof, m.spoof_extra_var, m.sigma_sq, g * normalizer(m, scale), scale);
        return acc / static_cast<double>(cal.size());
    };
    double lo = -std::log(p_fa);
    if (exceed(lo) <= p_fa) return lo;
    double hi = 2.0 * lo;
    while (exceed(hi) > p_fa) hi *= 2.0;
    for (int it = 0; it < 40; ++it) {
        const double mid = 0.5 * (lo + hi);
        (exceed(mid) > p_fa ? lo : hi) = mid;
    }
    return hi;
}

double control_latency(const SchemeSpec& spec, const ScenarioConfig& config, std::uint64_t seed) {
    if (!spec.ris_enabled) return 0.0;
    const auto provider = spec.pqc_enabled ? make_pqc_test_provider(config, seed) : make_legacy_provider(config, seed);
    return control_overhead(*provider, config).latency_s;
}

}  // namespace

SiuResult run_siu_experiment(const ScenarioConfig& config, std::uint64_t seed, int trials) {
    if (trials < 1) throw DomainError("run_siu_experiment: trials must be positive");
    const auto t0 = Clock::now();
    const World w = make_world(config, seed);
    const auto schemes = schemes_from_config(config);
    const std::size_t ns = schemes.size(), n = static_cast<std::size_t>(trials);
    const std::size_t ncal = std::min<std::size_t>(n, kSiuCalibrationTrials);
    std::vector<std::vector<SecrecySample>> sec(ns, std::vector<SecrecySample>(n));
    std::vector<std::vector<DetectionMoments>> ev(ns, std::vector<DetectionMoments>(n)),
        cal(ns, std::vector<DetectionMoments>(ncal));
    std::vector<std::vector<long>> switches(ns, std::vector<long>(n));

    parallel_for(n, config.workers, [&](std::size_t t) {
        const TrialDraw d = draw_trial(w, t);
        std::vector<cd> u, e;
        for (std::size_t s = 0; s < ns; ++s) {
            const double f = scheme_knowledge(config, schemes[s], AdversaryClass::A1);
            slot_channels(d, schemes[s], config.M_code, u, e);
            sec[s][t] = secrecy_sample(u, e, f);
            const SensingCode code = sensing_code(d, schemes[s], config.M_code);
            const auto adv = adversary_from_config(config, AdversaryClass::A1, f);
            numerics::RngStream re(seed, {kSiuEval, t});
            ev[s][t] = detection_moments(code, w.echo, adv, re);
            if (t < ncal) {
                numerics::RngStream rc(seed, {kSiuCal, t});
                cal[s][t] = detection_moments(code, w.echo, adv, rc);
            }
            switches[s][t] = scheme_spec(schemes[s]).coded ? d.schedule.total_switches() : 0;
        }
    });

    const SiuWeights weights = weights_from_config(config);
    const bool with_extras = weights.lambda4 > 0.0 || weights.lambda5 > 0.0;
    SiuResult out;
    for (std::size_t s = 0; s < ns; ++s) {
        const SchemeSpec spec = scheme_spec(schemes[s]);
        const double scale = median_scale(sec[s], db_to_linear(config.user_snr_db));
        const double latency = with_extras ? control_latency(spec, config, seed) : 0.0;
        std::vector<TauPoint> curve;
        std::vector<double> util(n), rate(n), cs(n), pd(n);
        for (double tau : config.tau_grid) {
            const double es = tau / config.tau;
            const double g = np_threshold(cal[s], config.siu_p_fa, es);
            parallel_for(n, config.workers, [&](std::size_t t) {
                const auto& m = ev[s][t];
                const double ru = user_snr(sec[s][t], scale);
                rate[t] = achievable_rate(tau, 1.0, ru);
                cs[t] = secrecy_capacity(tau, 1.0, ru, eve_snr(sec[s][t], scale));
                pd[t] = exceed_probability(m.mu_authentic, 0.0, m.sigma_sq, g * normalizer(m, es), es);
                EnergyLatency el;
                if (with_extras) el = energy_latency(config, tau, switches[s][t], latency);
                util[t] = siu(rate[t], cs[t], pd[t], weights, with_extras ? &el : nullptr);
            });
            const auto mu = numerics::mean_stderr(util);
            TauPoint pt;
            pt.tau = tau;
            pt.utility = mu.mean;
            pt.stderr_ = mu.stderr_;
            pt.rate = numerics::mean_stderr(rate).mean;
            pt.cs = numerics::mean_stderr(cs).mean;
            pt.p_d = numerics::mean_stderr(pd).mean;
            curve.push_back(pt);
        }
        const Peak peak = find_peak(curve);
        out.tau_star[spec.name] = curve[peak.index].tau;
        out.local_maxima[spec.name] = peak.local_maxima;
        for (std::size_t i = 0; i < curve.size(); ++i) out.rows.push_back({spec.name, curve[i], i == peak.index, trials, seed});
    }
    out.wall_time_s = seconds_since(t0);
    return out;
}

RuntimeResult run_runtime_experiment(const ScenarioConfig& config, std::uint64_t seed) {
    const auto t0 = Clock::now();
    RuntimeResult out;
    out.rows = runtime_scaling(config, seed);
    std::vector<double> gn, gt, rm, rt;
    std::map<int, double> fast, slow;
    for (const auto& r : out.rows) {
        if (r.method == "greedy") {
            gn.push_back(r.n);
            gt.push_back(r.seconds);
        } else if (r.method == "relax_project") {
            rm.push_back(r.M);
            rt.push_back(r.seconds);
        } else if (r.method == "qrtm_pipeline") {
            fast[r.M] = r.seconds;
        } else if (r.method == "exhaustive_pipeline") {
            slow[r.M] = r.seconds;
        }
    }
    if (gn.size() >= 2) out.greedy_slope = numerics::loglog_slope(gn, gt);
    if (rm.size() >= 2) out.relax_slope = numerics::loglog_slope(rm, rt);
    for (const auto& [m, s] : slow)
        if (fast.count(m) && fast[m] > 0.0) out.exhaustive_ratio[m] = s / fast[m];
    out.wall_time_s = seconds_since(t0);
    return out;
}

CsvRow roc_header() { return {"scheme", "p_fa_target", "threshold", "p_fa_emp", "p_d_emp", "auc", "trials", "seed"}; }
CsvRow secrecy_header() {
    return {"scheme", "adversary", "snr_db", "mean_cs_bps_hz", "stderr_cs", "mean_rate_bps_hz", "trials", "seed"};
}
CsvRow siu_header() {
    return {"scheme", "tau", "utility", "stderr_utility", "rate_bps_hz", "cs_bps_hz", "p_d", "is_peak", "trials", "seed"};
}
CsvRow runtime_header() { return {"method", "n", "M", "B_phi", "seconds", "repeats", "seed"}; }

namespace {

std::string num(double x) { return csv_number(x); }
std::string num(long long x) { return csv_number(x); }
std::string num(std::uint64_t x) { return std::to_string(x); }

}  // namespace

void write_roc_csv(const RocResult& r, const std::string& path) {
    std::vector<CsvRow> rows;
    for (const auto& x : r.rows)
        rows.push_back({x.scheme, num(x.point.p_fa_target), num(x.point.threshold), num(x.point.p_fa_emp),
                        num(x.point.p_d_emp), num(x.auc), num(static_cast<long long>(x.trials)), num(x.seed)});
    write_csv(path, roc_header(), rows);
}

void write_secrecy_csv(const SecrecyResult& r, const std::string& path) {
    std::vector<CsvRow> rows;
    for (const auto& x : r.rows)
        rows.push_back({x.scheme, x.adversary, num(x.point.snr_db), num(x.point.mean_cs), num(x.point.stderr_),
                        num(x.point.mean_rate), num(static_cast<long long>(x.point.trials)), num(x.seed)});
    write_csv(path, secrecy_header(), rows);
}

void write_siu_csv(const SiuResult& r, const std::string& path) {
    std::vector<CsvRow> rows;
    for (const auto& x : r.rows)
        rows.push_back({x.scheme, num(x.point.tau), num(x.point.utility), num(x.point.stderr_), num(x.point.rate),
                        num(x.point.cs), num(x.point.p_d), x.is_peak ? "1" : "0",
                        num(static_cast<long long>(x.trials)), num(x.seed)});
    write_csv(path, siu_header(), rows);
}

void write_runtime_csv(const RuntimeResult& r, std::uint64_t seed, const std::string& path) {
    std::vector<CsvRow> rows;
    for (const auto& x : r.rows)
        rows.push_back({x.method, num(static_cast<long long>(x.n)), num(static_cast<long long>(x.M)),
                        num(static_cast<long long>(x.B_phi)), num(x.seconds), num(static_cast<long long>(x.repeats)),
                        num(seed)});
    write_csv(path, runtime_header(), rows);
}

namespace {

constexpr const char* kVersion = "1.0.0";

nlohmann::json schema_entry(const CsvRow& header, std::size_t rows, const char* figure) {
    return {{"columns", header}, {"rows", rows}, {"figure", figure}};
}

}  // namespace

nlohmann::json run_experiments(const ScenarioConfig& config, const RunRequest& req,
                               const std::function<void(const std::string&)>& log) {
    validate_config(config);
    const std::filesystem::path dir(req.out_dir.empty() ? config.out_dir : req.out_dir);
    std::filesystem::create_directories(dir);
    auto say = [&](const std::string& s) {
        if (log) log(s);
    };
    const std::uint64_t seed = config.master_seed;
    const int trials = config.effective_trials();
    nlohmann::json m;
    m["tool"] = "qrtm";
    m["version"] = kVersion;
    m["config"] = to_json(config);
    m["config_hash"] = config_hash(config);
    m["master_seed"] = seed;
    m["kernel_isa"] = kernels::active().name;
    m["workers"] = resolve_workers(config.workers);
    m["outputs"] = nlohmann::json::object();
    m["summary"] = nlohmann::json::object();
    m["wall_time_s"] = nlohmann::json::object();

    if (req.roc) {
        say("roc: " + std::to_string(config.roc_trials) + " trials per scheme");
        const auto r = run_roc_experiment(config, seed, config.full_scale ? trials : config.roc_trials);
        write_roc_csv(r, (dir / "roc.csv").string());
        m["outputs"]["roc.csv"] = schema_entry(roc_header(), r.rows.size(), "fig2_roc");
        m["summary"]["roc"]["auc"] = r.auc;
        for (const auto& row : r.rows)
            if (row.point.p_fa_target == 1e-3) m["summary"]["roc"]["p_d_at_1e-3"][row.scheme] = row.point.p_d_emp;
        m["wall_time_s"]["roc"] = r.wall_time_s;
    }
    if (req.secrecy) {
        say("secrecy: " + std::to_string(trials) + " trials");
        const auto r = run_secrecy_experiment(config, seed, trials);
        write_secrecy_csv(r, (dir / "secrecy.csv").string());
        m["outputs"]["secrecy.csv"] = schema_entry(secrecy_header(), r.rows.size(), "fig3_secrecy");
        m["summary"]["secrecy"]["retention"] = r.retention;
        for (const auto& row : r.rows)
            if (row.adversary == "A1" && row.point.snr_db == config.user_snr_db)
                m["summary"]["secrecy"]["cs_at_user_snr"][row.scheme] = row.point.mean_cs;
        m["wall_time_s"]["secrecy"] = r.wall_time_s;
    }
    if (req.siu) {
        say("siu: " + std::to_string(trials) + " trials");
        const auto r = run_siu_experiment(config, seed, trials);
        write_siu_csv(r, (dir / "siu.csv").string());
        m["outputs"]["siu.csv"] = schema_entry(siu_header(), r.rows.size(), "fig4_siu");
        m["summary"]["siu"]["tau_star"] = r.tau_star;
        m["summary"]["siu"]["local_maxima"] = r.local_maxima;
        m["wall_time_s"]["siu"] = r.wall_time_s;
    }
    if (req.runtime) {
        say("runtime: timing greedy, relax_project and exhaustive pipelines");
        const auto r = run_runtime_experiment(config, seed);
        write_runtime_csv(r, seed, (dir / "runtime.csv").string());
        m["outputs"]["runtime.csv"] = schema_entry(runtime_header(), r.rows.size(), "fig5_runtime");
        m["summary"]["runtime"]["greedy_slope"] = r.greedy_slope;
        m["summary"]["runtime"]["relax_project_slope"] = r.relax_slope;
        nlohmann::json ratio = nlohmann::json::object();
        for (const auto& [mm, v] : r.exhaustive_ratio) ratio[std::to_string(mm)] = v;
        m["summary"]["runtime"]["exhaustive_over_qrtm"] = ratio;
        m["wall_time_s"]["runtime"] = r.wall_time_s;
    }
    // Timing fields are the only run-dependent content; CSVs are not affected.
    std::ofstream out(dir / "manifest.json", std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + (dir / "manifest.json").string());
    out << m.dump(2) << '\n';
    return m;
}

nlohmann::json run_robustness_sweep(const ScenarioConfig& config, const RunRequest& req,
                                    const std::function<void(const std::string&)>& log) {
    struct Variant {
        std::string name;
        std::function<void(ScenarioConfig&)> apply;
    };
    const std::vector<Variant> variants = {
        {"fc_7GHz", [](ScenarioConfig& c) { c.carrier_freq = 7e9; }},
        {"fc_15GHz", [](ScenarioConfig& c) { c.carrier_freq = 15e9; }},
        {"mcode_32", [](ScenarioConfig& c) { c.M_code = 32; c.S_max = std::min(c.S_max, c.M); }},
        {"mcode_128", [](ScenarioConfig& c) { c.M_code = 128; }},
        {"bphi_1", [](ScenarioConfig& c) { c.B_phi = 1; }},
        {"bphi_2", [](ScenarioConfig& c) { c.B_phi = 2; }},
        {"K_200", [](ScenarioConfig& c) { c.K = 200; }},
        {"K_800", [](ScenarioConfig& c) { c.K = 800; }},
    };
    const std::filesystem::path root = std::filesystem::path(req.out_dir.empty() ? config.out_dir : req.out_dir) / "robustness";
    nlohmann::json index = nlohmann::json::object();
    for (const auto& v : variants) {
        ScenarioConfig c = config;
        c.robustness_sweep = false;
        v.apply(c);
        const auto bad = config_violations(c);
        if (!bad.empty()) {
            index[v.name] = {{"skipped", bad}};
            continue;
        }
        RunRequest r = req;
        r.runtime = false;
        r.out_dir = (root / v.name).string();
        if (log) log("robustness variant " + v.name);
        index[v.name] = run_experiments(c, r, log)["summary"];
    }
    std::filesystem::create_directories(root);
    std::ofstream out(root / "index.json", std::ios::trunc);
    out << index.dump(2) << '\n';
    return index;
}

}  // namespace qrtm
