#include <doctest.h>

#include <algorithm>
#include <map>
#include <queue>
#include <set>

#include "qrtm/ris_codebook.hpp"

using namespace qrtm;
using cd = std::complex<double>;

namespace {

RisProfile profile(std::vector<std::uint8_t> idx, int bits) { return RisProfile{std::move(idx), bits}; }

// Fewest steps between two profiles when one step may change up to s
// elements, by breadth-first search over all 2^M binary profiles.
int bfs_steps(const RisProfile& from, const RisProfile& to, int s) {
    const int m = from.size();
    auto key = [](const RisProfile& p) {
        unsigned k = 0;
        for (int i = 0; i < p.size(); ++i) k |= static_cast<unsigned>(p.idx[i]) << i;
        return k;
    };
    const unsigned start = key(from), goal = key(to);
    std::map<unsigned, int> dist{{start, 0}};
    std::queue<unsigned> q;
    q.push(start);
    while (!q.empty()) {
        const unsigned u = q.front();
        q.pop();
        if (u == goal) return dist[u];
        for (unsigned mask = 1; mask < (1u << m); ++mask) {
            if (__builtin_popcount(mask) > s) continue;
            const unsigned v = u ^ mask;
            if (dist.emplace(v, dist[u] + 1).second) q.push(v);
        }
    }
    return -1;
}

ScenarioConfig small_config() {
    ScenarioConfig c;
    c.M = 8;
    c.B_phi = 1;
    c.S_max = 2;
    c.M_code = 16;
    c.d_min = 2;
    return c;
}

}  // namespace

TEST_CASE("phase alphabet is exact at quarter turns") {
    const auto a = phase_alphabet(2);
    REQUIRE(a.size() == 4);
    CHECK(a[0] == cd(1, 0));
    CHECK(a[1] == cd(0, 1));
    CHECK(a[2] == cd(-1, 0));
    CHECK(a[3] == cd(0, -1));
    CHECK(phase_alphabet(3).size() == 8);
}

TEST_CASE("hamming distance counts differing elements") {
    CHECK(hamming_distance(profile({0, 1, 2, 3}, 2), profile({0, 1, 2, 3}, 2)) == 0);
    CHECK(hamming_distance(profile({0, 1, 2, 3}, 2), profile({1, 1, 0, 3}, 2)) == 2);
}

TEST_CASE("codebook entries are distinct and pairwise within S_max") {
    const ScenarioConfig c;
    numerics::RngStream rng(11, 1);
    RisProfile base{std::vector<std::uint8_t>(c.M, 0), c.B_phi};
    for (int m = 0; m < c.M; ++m) base.idx[m] = static_cast<std::uint8_t>(m % 8);
    const Codebook cb = make_codebook(base, c, rng);
    REQUIRE(cb.size() == c.codebook_size);
    CHECK(cb.profiles[0] == base);
    for (int i = 0; i < cb.size(); ++i)
        for (int j = i + 1; j < cb.size(); ++j) {
            const int d = hamming_distance(cb.profiles[i], cb.profiles[j]);
            CHECK(d > 0);
            CHECK(d <= c.S_max);
        }
}

TEST_CASE("sequencing inserts the minimum number of intermediates") {
    const ScenarioConfig c = small_config();
    const RisProfile a = profile({0, 0, 0, 0, 0, 0, 0, 0}, 1);
    const RisProfile b = profile({1, 1, 1, 1, 0, 0, 0, 0}, 1);  // distance 2 * S_max
    const RisProfile visits[] = {a, b};
    const SequencingResult r = min_change_sequencing(visits, c);
    CHECK(r.intermediates == 1);
    CHECK(r.intermediates == bfs_steps(a, b, c.S_max) - 1);
    CHECK(validate_schedule(r.schedule, c).empty());
    CHECK(r.schedule.slot_count() == c.M_code);
    CHECK(r.schedule.at_slot(0) == a);
    CHECK(r.schedule.at_slot(c.M_code - 1) == b);

    // Distance 5 with S_max 2 needs two intermediates.
    const RisProfile far = profile({1, 1, 1, 1, 1, 0, 0, 0}, 1);
    const RisProfile v2[] = {a, far};
    const auto r2 = min_change_sequencing(v2, c);
    CHECK(r2.intermediates == bfs_steps(a, far, c.S_max) - 1);
    CHECK(validate_schedule(r2.schedule, c).empty());
}

TEST_CASE("sequencing reports infeasible layouts") {
    ScenarioConfig c = small_config();
    c.M_code = 4;
    const RisProfile a = profile({0, 0, 0, 0, 0, 0, 0, 0}, 1);
    const RisProfile b = profile({1, 1, 1, 1, 1, 1, 1, 1}, 1);
    const RisProfile visits[] = {a, b};
    try {
        (void)min_change_sequencing(visits, c);
        FAIL("expected InfeasibleError");
    } catch (const InfeasibleError& e) {
        CHECK(e.report().slots_required > e.report().slots_available);
        CHECK_FALSE(e.report().recommendation.empty());
    }
}

TEST_CASE("validate_schedule flags each constraint") {
    const ScenarioConfig c = small_config();
    CodeSchedule s;
    s.profiles = {profile({0, 0, 0, 0, 0, 0, 0, 0}, 1), profile({1, 1, 1, 0, 0, 0, 0, 0}, 1)};
    s.labels = {0, 1};
    s.slots.assign(c.M_code, 0);
    for (int p = 8; p < c.M_code; ++p) s.slots[p] = 1;
    auto has = [](const std::vector<Violation>& v, const std::string& tag) {
        for (const auto& x : v)
            if (x.constraint == tag) return true;
        return false;
    };
    CHECK(has(validate_schedule(s, c), "S"));  // 3 flips at slot 8

    s.profiles[1] = profile({1, 1, 0, 0, 0, 0, 0, 0}, 1);
    CHECK(validate_schedule(s, c).empty());
    s.slots[c.M_code - 2] = 0;  // one-slot dwell, then back
    CHECK(has(validate_schedule(s, c), "D1"));

    CodeSchedule q = s;
    q.slots.assign(c.M_code, 0);
    q.profiles[0].idx[0] = 2;  // outside the 1-bit alphabet
    CHECK(has(validate_schedule(q, c), "Q"));

    CodeSchedule len = q;
    len.profiles[0].idx[0] = 0;
    len.slots.pop_back();
    CHECK(has(validate_schedule(len, c), "len"));
}

TEST_CASE("keyed schedules are valid, reproducible and seed dependent") {
    const ScenarioConfig c;
    numerics::RngStream rng(13, 1);
    RisProfile base{std::vector<std::uint8_t>(c.M, 3), c.B_phi};
    const Codebook cb = make_codebook(base, c, rng);
    std::vector<std::uint8_t> seed(32, 0x5a);
    const CodeSchedule s1 = schedule_from_seed(seed, cb, c, 4);
    CHECK(validate_schedule(s1, c).empty());
    CHECK(serialize_schedule(schedule_from_seed(seed, cb, c, 4)) == serialize_schedule(s1));
    CHECK(serialize_schedule(schedule_from_seed(seed, cb, c, 5)) != serialize_schedule(s1));
    seed[0] ^= 1;
    CHECK(serialize_schedule(schedule_from_seed(seed, cb, c, 4)) != serialize_schedule(s1));
    CHECK_THROWS(schedule_from_seed(std::vector<std::uint8_t>(16), cb, c, 0));

    const std::string audit = audit_text(s1);
    CHECK(audit.rfind("slot=0 label=", 0) == 0);
    CHECK(std::count(audit.begin(), audit.end(), '\n') == c.M_code);
}
