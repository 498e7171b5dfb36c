#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

// Data-parallel inner loops shared by the channel, scene-authentication and
// optimizer code. Each kernel has a scalar reference and, where the CPU
// supports it, an AVX2+FMA variant chosen once at startup. Variants agree to
// rounding (summation order differs); tests/test_kernels.cpp checks this.

namespace qrtm::kernels {

using cd = std::complex<double>;

enum class Isa { scalar, avx2 };

struct KernelTable {
    Isa isa;
    const char* name;
    /// sum_m coeff[m] * alphabet[idx[m]]
    cd (*indexed_phase_sum)(const cd* coeff, const std::uint8_t* idx, const cd* alphabet, std::size_t n);
    /// sum_m conj(w[m]) * r[m]
    cd (*conj_dot)(const cd* w, const cd* r, std::size_t n);
    /// out[p] = sum_k amp[k] * step[k]^p for p < slots
    void (*rotating_sum)(const cd* amp, const cd* step, std::size_t k, cd* out, std::size_t slots);
    /// sum_m |coeff[m]|
    double (*abs_sum)(const cd* coeff, std::size_t n);
};

const KernelTable& scalar_table();
/// nullptr when the build has no AVX2 variant.
const KernelTable* avx2_table();

bool cpu_supports(Isa isa);
/// Every variant usable on this machine, scalar first.
std::vector<const KernelTable*> available_tables();

/// Table used by the library. Picks the widest supported variant; setting
/// QRTM_ISA=scalar in the environment forces the reference path.
const KernelTable& active();

// Span front-ends over the active table.
cd indexed_phase_sum(std::span<const cd> coeff, std::span<const std::uint8_t> idx, std::span<const cd> alphabet);
cd conj_dot(std::span<const cd> w, std::span<const cd> r);
void rotating_sum(std::span<const cd> amp, std::span<const cd> step, std::span<cd> out);
double abs_sum(std::span<const cd> coeff);

}  // namespace qrtm::kernels
