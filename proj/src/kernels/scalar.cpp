#include "expinterp/kernels.hpp"

#include <algorithm>

namespace expinterp::kernels::scalar {

void upsample_fir(std::span<const double> in, int factor, std::span<const double> taps, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    const auto step = static_cast<std::size_t>(factor);
    for (std::size_t k = 0; k < in.size(); ++k) {
        const double v = in[k];
        double* dst = out.data() + k * step;
        for (std::size_t j = 0; j < taps.size(); ++j) dst[j] += v * taps[j];
    }
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

double dot(std::span<const double> x, std::span<const double> y) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
    return acc;
}

}  // namespace expinterp::kernels::scalar
