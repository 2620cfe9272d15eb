#pragma once

// Shared polyphase bookkeeping for the vectorized upsample_fir variants.
//
// Output sample l = q*factor + p only sees taps p, p+factor, p+2*factor, ...
// so each phase p is an ordinary FIR over q against the input. The input is
// copied once into a zero-padded buffer so the vector loops need no bounds
// checks.

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

namespace expinterp::kernels::detail {

struct Polyphase {
    std::size_t pad = 0;               // max taps per phase
    std::vector<double> padded_input;  // pad zeros, input, pad zeros
    std::vector<double> phase_taps;    // phase-major, each row `pad` long, zero-filled
    std::vector<double> scratch;

    Polyphase(std::span<const double> in, int factor, std::span<const double> taps) {
        const auto f = static_cast<std::size_t>(factor);
        pad = (taps.size() + f - 1) / f;
        padded_input.assign(in.size() + 2 * pad + 4, 0.0);
        std::copy(in.begin(), in.end(), padded_input.begin() + static_cast<std::ptrdiff_t>(pad));
        phase_taps.assign(f * pad, 0.0);
        for (std::size_t j = 0; j < taps.size(); ++j) phase_taps[(j % f) * pad + j / f] = taps[j];
        scratch.resize(in.size() + pad + 4);
    }

    // Number of outputs in phase p for an output buffer of length n.
    static std::size_t phase_count(std::size_t n, std::size_t factor, std::size_t p) {
        return n > p ? (n - p + factor - 1) / factor : 0;
    }

    // y[q] = sum_i taps_p[i] * x[q - i] reads padded_input[pad + q - i].
    const double* source(std::size_t q, std::size_t i) const { return padded_input.data() + pad + q - i; }
};

}  // namespace expinterp::kernels::detail
