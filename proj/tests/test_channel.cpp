#include <doctest.h>

#include <cmath>

#include "qrtm/channel.hpp"
#include "qrtm/ris_codebook.hpp"

using namespace qrtm;

TEST_CASE("path loss follows the free-space form") {
    const double lam = 0.03;
    CHECK(path_loss(1.0, 2.0, lam) == doctest::Approx(std::pow(lam / (4 * std::numbers::pi), 2)));
    CHECK(path_loss(10.0, 2.0, lam) / path_loss(20.0, 2.0, lam) == doctest::Approx(4.0));
    CHECK(path_loss(10.0, 3.0, lam) / path_loss(20.0, 3.0, lam) == doctest::Approx(8.0));
}

TEST_CASE("direct link mean power matches the path loss") {
    const ScenarioConfig c;
    numerics::RngStream g(3, 1);
    const Geometry geo = build_scenario(c, g);
    const LinkGeometry links = prepare_links(geo, c, 0);
    numerics::RngStream rng(3, 2);
    double acc = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) acc += std::norm(sample_channels(links, c, rng).h_dir_u);
    CHECK(acc / n == doctest::Approx(links.pl_dir_u).epsilon(0.02));
}

TEST_CASE("effective channel adds the phased cascade to the direct path") {
    const ScenarioConfig c;
    numerics::RngStream g(5, 1);
    const Geometry geo = build_scenario(c, g);
    numerics::RngStream rng(5, 2);
    const ChannelRealization r = sample_channels(geo, c, 1, rng);
    RisProfile zero{std::vector<std::uint8_t>(c.M, 0), c.B_phi};
    cd sum = r.h_dir_u;
    for (const auto& x : r.casc_u) sum += x;
    const cd h = effective_channel(r, zero, Node::user);
    CHECK(std::abs(h - sum) < 1e-12 * std::abs(sum));

    // Shifting every element by half a turn negates the cascade.
    RisProfile half{std::vector<std::uint8_t>(c.M, static_cast<std::uint8_t>(1 << (c.B_phi - 1))), c.B_phi};
    const cd h2 = effective_channel(r, half, Node::user);
    CHECK(std::abs(h2 - (2.0 * r.h_dir_u - sum)) < 1e-9 * std::abs(sum));

    CHECK(slot_snr(r, zero, c, Node::user) == doctest::Approx(c.P_c * std::norm(h) / r.noise_power));
}

TEST_CASE("same stream gives the same realization") {
    const ScenarioConfig c;
    numerics::RngStream g(9, 1);
    const Geometry geo = build_scenario(c, g);
    numerics::RngStream a(9, 4), b(9, 4);
    const auto ra = sample_channels(geo, c, 2, a);
    const auto rb = sample_channels(geo, c, 2, b);
    CHECK(ra.casc_u == rb.casc_u);
    CHECK(ra.h_dir_e == rb.h_dir_e);
}
