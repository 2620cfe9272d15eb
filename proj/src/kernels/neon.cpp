#include "expinterp/kernels.hpp"

#if EXPINTERP_HAVE_NEON

#include <arm_neon.h>

#include "polyphase.hpp"

namespace expinterp::kernels::neon {

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
        for (; q + 2 <= count; q += 2) {
            float64x2_t acc = vdupq_n_f64(0.0);
            for (std::size_t i = 0; i < pp.pad; ++i) {
                acc = vfmaq_n_f64(acc, vld1q_f64(pp.source(q, i)), tp[i]);
            }
            vst1q_f64(y + q, acc);
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
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        vst1q_f64(y.data() + i, vfmaq_n_f64(vld1q_f64(y.data() + i), vld1q_f64(x.data() + i), a));
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

double dot(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) acc = vfmaq_f64(acc, vld1q_f64(x.data() + i), vld1q_f64(y.data() + i));
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

}  // namespace expinterp::kernels::neon

#endif
