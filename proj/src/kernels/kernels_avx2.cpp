#include "qrtm/kernels/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

#include <vector>

namespace qrtm::kernels {

namespace {

// Two interleaved complex doubles per register: [re0 im0 re1 im1].
inline __m256d cmul(__m256d a, __m256d b) {
    const __m256d br = _mm256_movedup_pd(b);
    const __m256d bi = _mm256_permute_pd(b, 0xF);
    const __m256d as = _mm256_permute_pd(a, 0x5);
    return _mm256_fmaddsub_pd(a, br, _mm256_mul_pd(as, bi));
}

inline cd hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return {_mm_cvtsd_f64(s), _mm_cvtsd_f64(_mm_unpackhi_pd(s, s))};
}

inline const double* dptr(const cd* p) { return reinterpret_cast<const double*>(p); }
inline double* dptr(cd* p) { return reinterpret_cast<double*>(p); }

cd indexed_phase_sum_avx2(const cd* coeff, const std::uint8_t* idx, const cd* alphabet, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    const double* a = dptr(alphabet);
    std::size_t m = 0;
    for (; m + 4 <= n; m += 4) {
        const __m256d c0 = _mm256_loadu_pd(dptr(coeff + m));
        const __m256d c1 = _mm256_loadu_pd(dptr(coeff + m + 2));
        const __m256d p0 = _mm256_set_m128d(_mm_loadu_pd(a + 2 * idx[m + 1]), _mm_loadu_pd(a + 2 * idx[m]));
        const __m256d p1 = _mm256_set_m128d(_mm_loadu_pd(a + 2 * idx[m + 3]), _mm_loadu_pd(a + 2 * idx[m + 2]));
        acc0 = _mm256_add_pd(acc0, cmul(c0, p0));
        acc1 = _mm256_add_pd(acc1, cmul(c1, p1));
    }
    cd acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; m < n; ++m) acc += coeff[m] * alphabet[idx[m]];
    return acc;
}

cd conj_dot_avx2(const cd* w, const cd* r, std::size_t n) {
    const __m256d conj_mask = _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t m = 0;
    for (; m + 4 <= n; m += 4) {
        const __m256d w0 = _mm256_xor_pd(_mm256_loadu_pd(dptr(w + m)), conj_mask);
        const __m256d w1 = _mm256_xor_pd(_mm256_loadu_pd(dptr(w + m + 2)), conj_mask);
        acc0 = _mm256_add_pd(acc0, cmul(w0, _mm256_loadu_pd(dptr(r + m))));
        acc1 = _mm256_add_pd(acc1, cmul(w1, _mm256_loadu_pd(dptr(r + m + 2))));
    }
    cd acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; m < n; ++m) acc += std::conj(w[m]) * r[m];
    return acc;
}

void rotating_sum_avx2(const cd* amp, const cd* step, std::size_t k, cd* out, std::size_t slots) {
    const std::size_t kv = k & ~std::size_t{1};
    std::vector<cd> cur(amp, amp + k);
    double* c = dptr(cur.data());
    for (std::size_t p = 0; p < slots; ++p) {
        __m256d acc = _mm256_setzero_pd();
        for (std::size_t i = 0; i < kv; i += 2) {
            const __m256d v = _mm256_loadu_pd(c + 2 * i);
            acc = _mm256_add_pd(acc, v);
            _mm256_storeu_pd(c + 2 * i, cmul(v, _mm256_loadu_pd(dptr(step + i))));
        }
        cd s = hsum(acc);
        for (std::size_t i = kv; i < k; ++i) {
            s += cur[i];
            cur[i] *= step[i];
        }
        out[p] = s;
    }
}

double abs_sum_avx2(const cd* coeff, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t m = 0;
    for (; m + 2 <= n; m += 2) {
        const __m256d v = _mm256_loadu_pd(dptr(coeff + m));
        const __m256d sq = _mm256_mul_pd(v, v);
        // [|c0|^2 |c0|^2 |c1|^2 |c1|^2]
        acc = _mm256_add_pd(acc, _mm256_sqrt_pd(_mm256_hadd_pd(sq, sq)));
    }
    const cd h = hsum(acc);
    double s = 0.5 * (h.real() + h.imag());
    for (; m < n; ++m) s += std::abs(coeff[m]);
    return s;
}

constexpr KernelTable kAvx2{
    Isa::avx2, "avx2", indexed_phase_sum_avx2, conj_dot_avx2, rotating_sum_avx2, abs_sum_avx2,
};

}  // namespace

const KernelTable* avx2_table() { return &kAvx2; }

}  // namespace qrtm::kernels

#else

namespace qrtm::kernels {
const KernelTable* avx2_table() { return nullptr; }
}  // namespace qrtm::kernels

#endif
