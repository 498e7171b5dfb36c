#include <cstdlib>
#include <stdexcept>
#include <string_view>

#include "qrtm/kernels/kernels.hpp"

namespace qrtm::kernels {

bool cpu_supports(Isa isa) {
    switch (isa) {
        case Isa::scalar:
            return true;
        case Isa::avx2:
#if defined(__x86_64__) || defined(__i386__)
            return avx2_table() != nullptr && __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
    }
    return false;
}

std::vector<const KernelTable*> available_tables() {
    std::vector<const KernelTable*> out{&scalar_table()};
    if (cpu_supports(Isa::avx2)) out.push_back(avx2_table());
    return out;
}

const KernelTable& active() {
    static const KernelTable& chosen = [] () -> const KernelTable& {
        const char* env = std::getenv("QRTM_ISA");
        if (env != nullptr && std::string_view(env) == "scalar") return scalar_table();
        if (cpu_supports(Isa::avx2)) return *avx2_table();
        return scalar_table();
    }();
    return chosen;
}

cd indexed_phase_sum(std::span<const cd> coeff, std::span<const std::uint8_t> idx, std::span<const cd> alphabet) {
    if (coeff.size() != idx.size()) throw std::invalid_argument("indexed_phase_sum: length mismatch");
    return active().indexed_phase_sum(coeff.data(), idx.data(), alphabet.data(), coeff.size());
}

cd conj_dot(std::span<const cd> w, std::span<const cd> r) {
    if (w.size() != r.size()) throw std::invalid_argument("conj_dot: length mismatch");
    return active().conj_dot(w.data(), r.data(), w.size());
}

void rotating_sum(std::span<const cd> amp, std::span<const cd> step, std::span<cd> out) {
    if (amp.size() != step.size()) throw std::invalid_argument("rotating_sum: length mismatch");
    active().rotating_sum(amp.data(), step.data(), amp.size(), out.data(), out.size());
}

double abs_sum(std::span<const cd> coeff) { return active().abs_sum(coeff.data(), coeff.size()); }

}  // namespace qrtm::kernels
