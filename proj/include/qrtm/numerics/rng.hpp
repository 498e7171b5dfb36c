#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <random>

namespace qrtm::numerics {

/// SplitMix64 finalizer; used for seeding and for hashing stream keys.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Combine a key path into one 64-bit stream key.
std::uint64_t stream_key(std::uint64_t master_seed, std::initializer_list<std::uint64_t> path) noexcept;

/// Value-owned xoshiro256** stream keyed by (master_seed, stream path).
///
/// Streams are derived purely from their key, never from a parent stream's
/// position, so trial t draws the same numbers whichever thread runs it and
/// in whatever order trials are scheduled.
class RngStream {
public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t master_seed, std::uint64_t stream_id);
    RngStream(std::uint64_t master_seed, std::initializer_list<std::uint64_t> path);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()() noexcept;

    /// Uniform on [0, 1).
    double uniform() noexcept;
    /// Uniform integer on [lo, hi].
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
    double normal();
    /// Circularly-symmetric complex Gaussian with E|w|^2 = variance.
    std::complex<double> complex_normal(double variance = 1.0);
    /// Unit phasor with uniform phase.
    std::complex<double> unit_phasor();

private:
    void seed_from(std::uint64_t key) noexcept;

    std::array<std::uint64_t, 4> s_{};
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Convenience factory matching the library's naming of the operation.
inline RngStream seeded_stream(std::uint64_t master_seed, std::uint64_t stream_id) {
    return RngStream(master_seed, stream_id);
}

}  // namespace qrtm::numerics
