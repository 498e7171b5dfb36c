#include <vector>

#include "qrtm/kernels/kernels.hpp"

namespace qrtm::kernels {

namespace {

cd indexed_phase_sum_scalar(const cd* coeff, const std::uint8_t* idx, const cd* alphabet, std::size_t n) {
    cd acc{0.0, 0.0};
    for (std::size_t m = 0; m < n; ++m) acc += coeff[m] * alphabet[idx[m]];
    return acc;
}

cd conj_dot_scalar(const cd* w, const cd* r, std::size_t n) {
    cd acc{0.0, 0.0};
    for (std::size_t m = 0; m < n; ++m) acc += std::conj(w[m]) * r[m];
    return acc;
}

void rotating_sum_scalar(const cd* amp, const cd* step, std::size_t k, cd* out, std::size_t slots) {
    std::vector<cd> cur(amp, amp + k);
    for (std::size_t p = 0; p < slots; ++p) {
        cd acc{0.0, 0.0};
        for (std::size_t i = 0; i < k; ++i) {
            acc += cur[i];
            cur[i] *= step[i];
        }
        out[p] = acc;
    }
}

double abs_sum_scalar(const cd* coeff, std::size_t n) {
    double acc = 0.0;
    for (std::size_t m = 0; m < n; ++m) acc += std::abs(coeff[m]);
    return acc;
}

constexpr KernelTable kScalar{
    Isa::scalar, "scalar", indexed_phase_sum_scalar, conj_dot_scalar, rotating_sum_scalar, abs_sum_scalar,
};

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

}  // namespace qrtm::kernels
