#include <doctest.h>

#include <algorithm>
#include <string>

#include "json.hpp"
#include "qrtm/error.hpp"
#include "qrtm/scenario.hpp"

using namespace qrtm;

namespace {

bool mentions(const std::vector<std::string>& v, const std::string& tag) {
    return std::any_of(v.begin(), v.end(), [&](const std::string& s) { return s.find(tag) != std::string::npos; });
}

}  // namespace

TEST_CASE("default configuration is valid and feasible") {
    const ScenarioConfig c;
    CHECK(config_violations(c).empty());
    CHECK_NOTHROW(validate_config(c));
    CHECK(slot_timing(c).feasible);
    CHECK(c.effective_trials() == 10000);
}

TEST_CASE("configuration json round trip is exact") {
    ScenarioConfig c;
    c.M = 128;
    c.p_fa_grid = {1e-3, 1e-1};
    c.schemes = {"QRTM", "B0"};
    c.master_seed = 99;
    const ScenarioConfig back = config_from_json(nlohmann::json::parse(to_json(c).dump()));
    CHECK(to_json(back) == to_json(c));
    CHECK(config_hash(back) == config_hash(c));
    ScenarioConfig d = c;
    d.master_seed = 100;
    CHECK(config_hash(d) != config_hash(c));
}

TEST_CASE("config parsing rejects unknown keys and wrong types") {
    CHECK_THROWS_AS(config_from_json(nlohmann::json{{"no_such_key", 1}}), ValidationError);
    CHECK_THROWS_AS(config_from_json(nlohmann::json{{"M", "many"}}), ValidationError);
    CHECK_THROWS_AS(config_from_json(nlohmann::json::array()), ValidationError);
    CHECK(config_from_json(nlohmann::json{{"M", 64}}).M == 64);
}

TEST_CASE("violations name the breached constraint") {
    ScenarioConfig q;
    q.B_phi = 0;
    CHECK(mentions(config_violations(q), "(Q)"));

    ScenarioConfig s;
    s.S_max = s.M + 1;
    CHECK(mentions(config_violations(s), "(S)"));

    ScenarioConfig d1;
    d1.d_min = 0;
    CHECK(mentions(config_violations(d1), "(D1)"));

    // d_min * T_slot < T_min.
    ScenarioConfig d2;
    d2.T_min = 1e-4;
    CHECK(mentions(config_violations(d2), "(D2)"));

    ScenarioConfig p;
    p.P_c = 2.0;
    CHECK(mentions(config_violations(p), "P_max"));

    try {
        validate_config(d2);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(mentions(e.violations(), "(D2)"));
    }
}

TEST_CASE("slot timing examples") {
    ScenarioConfig c;
    c.T_sw = 5e-6;
    c.N_upd = 0;
    c.eta = 0.5;
    auto t = slot_timing(c);
    CHECK(t.T_slot == doctest::Approx(15.625e-6));
    CHECK(t.feasible);

    c.T_sw = 50e-6;
    c.eta = 0.6;
    CHECK_FALSE(slot_timing(c).feasible);

    // Monotone: more slots never restore feasibility.
    for (int m : {64, 128, 256}) {
        c.M_code = m;
        CHECK_FALSE(slot_timing(c).feasible);
    }
}

TEST_CASE("scenario placement respects the corridor") {
    const ScenarioConfig c;
    numerics::RngStream rng(7, 1);
    const Geometry g = build_scenario(c, rng);
    CHECK(static_cast<int>(g.ris_positions.size()) == c.M);
    CHECK(static_cast<int>(g.uav_positions.size()) == c.n_uav);
    for (const auto& u : g.uav_positions) CHECK(g.corridor_bounds.contains(u));
    CHECK_FALSE(g.corridor_bounds.contains(g.eve_position));
    // Half-wavelength element pitch within a panel.
    CHECK(distance(g.ris_positions[0], g.ris_positions[1]) == doctest::Approx(c.wavelength() / 2));

    numerics::RngStream again(7, 1);
    CHECK(build_scenario(c, again).uav_positions == g.uav_positions);
}
