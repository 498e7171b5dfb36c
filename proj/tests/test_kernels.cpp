#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdlib>
#include <vector>

#include "qrtm/kernels/kernels.hpp"
#include "qrtm/numerics/rng.hpp"
#include "qrtm/ris_codebook.hpp"

using namespace qrtm;
using kernels::cd;

namespace {
std::vector<cd> random_vec(numerics::RngStream& r, std::size_t n) {
    std::vector<cd> v(n);
    for (auto& x : v) x = r.complex_normal(1.0);
    return v;
}

double rel_err(cd a, cd b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }
}  // namespace

TEST_CASE("every available kernel table matches the scalar reference") {
    const auto& ref = kernels::scalar_table();
    numerics::RngStream r(11, 0);
    for (const auto* t : kernels::available_tables()) {
        CAPTURE(t->name);
        for (std::size_t n : {0u, 1u, 2u, 3u, 5u, 8u, 17u, 64u, 255u, 256u, 1023u}) {
            CAPTURE(n);
            const auto a = random_vec(r, n), b = random_vec(r, n);
            for (int bits = 1; bits <= 4; ++bits) {
                const auto alpha = phase_alphabet(bits);
                std::vector<std::uint8_t> idx(n);
                for (auto& i : idx) i = static_cast<std::uint8_t>(r.uniform_int(0, (1 << bits) - 1));
                CHECK(rel_err(t->indexed_phase_sum(a.data(), idx.data(), alpha.data(), n),
                              ref.indexed_phase_sum(a.data(), idx.data(), alpha.data(), n)) < 1e-12);
            }
            CHECK(rel_err(t->conj_dot(a.data(), b.data(), n), ref.conj_dot(a.data(), b.data(), n)) < 1e-12);
            CHECK(std::abs(t->abs_sum(a.data(), n) - ref.abs_sum(a.data(), n)) < 1e-12 * std::max<double>(1.0, n));

            std::vector<cd> step(n);
            for (auto& s : step) s = r.unit_phasor();
            for (std::size_t slots : {1u, 7u, 64u}) {
                std::vector<cd> o1(slots), o2(slots);
                t->rotating_sum(a.data(), step.data(), n, o1.data(), slots);
                ref.rotating_sum(a.data(), step.data(), n, o2.data(), slots);
                for (std::size_t p = 0; p < slots; ++p) CHECK(rel_err(o1[p], o2[p]) < 1e-10);
            }
        }
    }
}

TEST_CASE("scalar kernels match the definitions") {
    const auto& ref = kernels::scalar_table();
    std::vector<cd> a{{1, 2}, {-3, 0.5}, {0, -1}};
    std::vector<cd> b{{0.5, 0.5}, {2, -1}, {1, 1}};
    cd dot = 0;
    for (int i = 0; i < 3; ++i) dot += std::conj(a[i]) * b[i];
    CHECK(ref.conj_dot(a.data(), b.data(), 3) == dot);
    std::vector<cd> step{{0, 1}, {-1, 0}, {1, 0}};
    std::vector<cd> out(3);
    ref.rotating_sum(a.data(), step.data(), 3, out.data(), 3);
    for (int p = 0; p < 3; ++p) {
        cd want = 0;
        for (int i = 0; i < 3; ++i) want += a[i] * std::pow(step[i], p);
        CHECK(std::abs(out[p] - want) < 1e-12);
    }
}

TEST_CASE("dispatch honours a forced scalar path") {
    CHECK(kernels::scalar_table().isa == kernels::Isa::scalar);
    CHECK(kernels::cpu_supports(kernels::Isa::scalar));
    if (const char* e = std::getenv("QRTM_ISA"); e && std::string(e) == "scalar")
        CHECK(kernels::active().isa == kernels::Isa::scalar);
    if (kernels::avx2_table() && kernels::cpu_supports(kernels::Isa::avx2))
        CHECK(kernels::available_tables().size() == 2);
}
