#include "expinterp/kernels.hpp"

#if EXPINTERP_HAVE_X86

#include <immintrin.h>

#include "polyphase.hpp"

namespace expinterp::kernels::avx2 {

void upsample_fir(std::span<const double> in, int factor, std::span<const double> taps, std::span<double> out) {
    if (in.empty() || taps.empty()) {
        std::fill(out.begin(), out.end(), 0.0);
        return;
    }
    detail::Polyphase pp(in, factor, taps);
    const auto f = static_cast<std::size_t>(factor);
    for (std::size_t p = 0; p < f; ++p) {
        const std::size_t count = detail::Polyphase::phase_count(out.size(), f, p);
        const double* tp = pp.phase_taps.data() + p * pp.pad;
        double* y = pp.scratch.data();
        std::size_t q = 0;
        for (; q + 4 <= count; q += 4) {
            __m256d acc = _mm256_setzero_pd();
            for (std::size_t i = 0; i < pp.pad; ++i) {
                acc = _mm256_fmadd_pd(_mm256_set1_pd(tp[i]), _mm256_loadu_pd(pp.source(q, i)), acc);
            }
            _mm256_storeu_pd(y + q, acc);
        }
        for (; q < count; ++q) {
            double acc = 0.0;
            for (std::size_t i = 0; i < pp.pad; ++i) acc += tp[i] * *pp.source(q, i);
            y[q] = acc;
        }
        for (std::size_t j = 0; j < count; ++j) out[j * f + p] = y[j];
    }
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
    const std::size_t n = x.size();
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d r = _mm256_fmadd_pd(va, _mm256_loadu_pd(x.data() + i), _mm256_loadu_pd(y.data() + i));
        _mm256_storeu_pd(y.data() + i, r);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

double dot(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x.data() + i), _mm256_loadu_pd(y.data() + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x.data() + i + 4), _mm256_loadu_pd(y.data() + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x.data() + i), _mm256_loadu_pd(y.data() + i), acc0);
    }
    acc0 = _mm256_add_pd(acc0, acc1);
    const __m128d lo = _mm256_castpd256_pd128(acc0);
    const __m128d hi = _mm256_extractf128_pd(acc0, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    double acc = _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
    for (; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

}  // namespace expinterp::kernels::avx2

#endif
