#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qrtm/error.hpp"
#include "qrtm/experiments.hpp"
#include "qrtm/ris_codebook.hpp"
#include "qrtm/scenario.hpp"

namespace {

using nlohmann::json;

struct Options {
    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::optional<std::string> schemes;
    std::optional<int> workers;
    bool full_scale = false;
    bool robustness = false;
};

std::optional<std::string> env(const char* name) {
    const char* v = std::getenv(name);
    if (!v || !*v) return std::nullopt;
    return std::string(v);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

// Precedence: flag, then environment, then config file, then defaults.
// Overrides go through the JSON form so they get the same type checks as
// the file.
qrtm::ScenarioConfig resolve_config(const Options& o) {
    json j = o.config_path.empty() ? qrtm::to_json(qrtm::ScenarioConfig{}) : qrtm::to_json(qrtm::load_config(o.config_path));
    if (auto v = env("QRTM_OUT_DIR")) j["out_dir"] = *v;
    if (auto v = env("QRTM_WORKERS")) {
        try {
            j["workers"] = std::stoi(*v);
        } catch (const std::exception&) {
            throw qrtm::ValidationError({"QRTM_WORKERS='" + *v + "' is not an integer"});
        }
    }
    if (o.out_dir) j["out_dir"] = *o.out_dir;
    if (o.workers) j["workers"] = *o.workers;
    if (o.seed) j["master_seed"] = *o.seed;
    if (o.trials) {
        j["trials"] = *o.trials;
        j["roc_trials"] = *o.trials;
    }
    if (o.schemes) j["schemes"] = split_list(*o.schemes);
    if (o.full_scale) j["full_scale"] = true;
    if (o.robustness) j["robustness_sweep"] = true;
    return qrtm::config_from_json(j);
}

json timing_report(const qrtm::ScenarioConfig& c) {
    const auto t = qrtm::slot_timing(c);
    json r = {{"T_slot_s", t.T_slot},
              {"budget_used_s", t.budget_used},
              {"budget_available_s", t.budget_available},
              {"feasible", t.feasible}};
    if (!t.feasible) {
        const int max_m = t.budget_used > 0.0 ? static_cast<int>(std::floor(c.eta * c.T_cpi / t.budget_used)) : c.M_code;
        const double min_cpi = c.M_code * t.budget_used / c.eta;
        std::ostringstream rec;
        rec << "T_sw + N_upd*T_bus = " << t.budget_used << " s exceeds eta*T_slot = " << t.budget_available
            << " s; use M_code <= " << max_m << " or T_cpi >= " << min_cpi << " s";
        r["recommendation"] = {{"max_M_code", max_m}, {"min_T_cpi_s", min_cpi}, {"text", rec.str()}};
    }
    return r;
}

// Exercises schedule construction on a few seeds so constraint problems
// that only show up in a built schedule are reported too.
json validate_report(const qrtm::ScenarioConfig& c, bool& ok) {
    json r;
    auto v = qrtm::config_violations(c);
    const auto t = qrtm::slot_timing(c);
    if (!t.feasible) v.push_back("(T) " + timing_report(c)["recommendation"]["text"].get<std::string>());
    ok = v.empty();
    if (ok) {
        const qrtm::World w = qrtm::make_world(c, c.master_seed);
        for (std::uint64_t s = 0; s < 8 && ok; ++s) {
            const auto d = qrtm::draw_trial(w, s);
            for (const auto& x : qrtm::validate_schedule(d.schedule, c)) {
                v.push_back("(" + x.constraint + ") slot " + std::to_string(x.slot) + ": " + x.detail);
                ok = false;
            }
        }
    }
    r["status"] = ok ? "valid" : "invalid";
    r["violations"] = v;
    r["config_hash"] = qrtm::config_hash(c);
    return r;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"QRTM RIS-assisted ISAC corridor simulator"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("-c,--config", o.config_path, "JSON configuration file")->check(CLI::ExistingFile);
    app.add_option("-o,--out", o.out_dir, "output directory (env QRTM_OUT_DIR)");
    app.add_option("-s,--seed", o.seed, "master seed");
    app.add_option("-t,--trials", o.trials, "Monte Carlo trials per setting (also ROC trials)");
    app.add_option("--schemes", o.schemes, "comma-separated subset of B0,STATIC,B1,B2,B3,QRTM");
    app.add_option("-w,--workers", o.workers, "worker threads, 0 = all cores (env QRTM_WORKERS)");
    app.add_flag("--full-scale", o.full_scale, "use 1e5 trials per setting");
    app.add_flag("--robustness", o.robustness, "also run the robustness grid");

    const std::vector<std::pair<std::string, std::string>> subs = {
        {"roc", "scene-authentication ROC (roc.csv)"},
        {"secrecy", "secrecy rate versus SNR (secrecy.csv)"},
        {"siu", "utility versus sensing fraction (siu.csv)"},
        {"runtime", "optimizer runtime scaling (runtime.csv)"},
        {"all", "all four experiments"},
        {"validate", "check a configuration and sample schedules"},
        {"timing", "slot timing feasibility report"},
    };
    for (const auto& [name, desc] : subs) app.add_subcommand(name, desc);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }
    const std::string cmd = app.get_subcommands().front()->get_name();

    try {
        const qrtm::ScenarioConfig config = resolve_config(o);
        if (cmd == "timing") {
            const json r = timing_report(config);
            std::cout << r.dump(2) << '\n';
            return r["feasible"].get<bool>() ? 0 : 2;
        }
        if (cmd == "validate") {
            bool ok = false;
            std::cout << validate_report(config, ok).dump(2) << '\n';
            return ok ? 0 : 2;
        }
        qrtm::validate_config(config);
        qrtm::RunRequest req;
        req.out_dir = config.out_dir;
        req.roc = cmd == "roc" || cmd == "all";
        req.secrecy = cmd == "secrecy" || cmd == "all";
        req.siu = cmd == "siu" || cmd == "all";
        req.runtime = cmd == "runtime" || cmd == "all";
        auto log = [](const std::string& s) { std::cerr << "[qrtm] " << s << std::endl; };
        json m = qrtm::run_experiments(config, req, log);
        json summary = {{"status", "ok"}, {"out_dir", req.out_dir}, {"summary", m["summary"]}};
        if (config.robustness_sweep) summary["robustness"] = qrtm::run_robustness_sweep(config, req, log);
        std::cout << summary.dump(2) << '\n';
        return 0;
    } catch (const qrtm::ValidationError& e) {
        std::cout << json{{"status", "invalid"}, {"violations", e.violations()}}.dump(2) << '\n';
        return 2;
    } catch (const qrtm::InfeasibleError& e) {
        const auto& r = e.report();
        std::cout << json{{"status", "infeasible"},
                          {"slots_required", r.slots_required},
                          {"slots_available", r.slots_available},
                          {"reasons", r.reasons},
                          {"recommendation", r.recommendation}}
                         .dump(2)
                  << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cout << json{{"status", "error"}, {"message", e.what()}}.dump(2) << '\n';
        return 1;
    }
}
