#include "qrtm/numerics/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qrtm::numerics {

namespace {
constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }
}  // namespace

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t stream_key(std::uint64_t master_seed, std::initializer_list<std::uint64_t> path) noexcept {
    std::uint64_t h = splitmix64(master_seed ^ 0x51a3c0ffee5eedULL);
    for (std::uint64_t p : path) h = splitmix64(h ^ splitmix64(p + 0x632be59bd9b4e019ULL));
    return h;
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_id) {
    seed_from(stream_key(master_seed, {stream_id}));
}

RngStream::RngStream(std::uint64_t master_seed, std::initializer_list<std::uint64_t> path) {
    seed_from(stream_key(master_seed, path));
}

void RngStream::seed_from(std::uint64_t key) noexcept {
    std::uint64_t x = key;
    for (auto& w : s_) {
        x = splitmix64(x);
        w = x;
    }
}

RngStream::result_type RngStream::operator()() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double RngStream::uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

std::int64_t RngStream::uniform_int(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw std::invalid_argument("uniform_int: empty range");
    std::uniform_int_distribution<std::int64_t> dist(lo, hi);
    return dist(*this);
}

double RngStream::normal() { return normal_(*this); }

std::complex<double> RngStream::complex_normal(double variance) {
    const double s = std::sqrt(0.5 * variance);
    const double re = normal();
    const double im = normal();
    return {s * re, s * im};
}

std::complex<double> RngStream::unit_phasor() {
    return std::polar(1.0, 2.0 * std::numbers::pi * uniform());
}

}  // namespace qrtm::numerics
