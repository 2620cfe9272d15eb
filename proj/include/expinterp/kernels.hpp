#pragma once

// Data-parallel inner loops shared by refinement and tessellation.
//
// Every kernel has a scalar reference implementation and vectorized
// variants (AVX2+FMA on x86-64, NEON on AArch64). The public entry points
// dispatch at runtime on the instruction set detected on the host; tests
// pin each variant against the scalar reference.

#include <cstddef>
#include <span>
#include <string_view>

#if defined(__x86_64__) || defined(_M_X64)
#define EXPINTERP_HAVE_X86 1
#else
#define EXPINTERP_HAVE_X86 0
#endif

#if defined(__aarch64__) || defined(_M_ARM64)
#define EXPINTERP_HAVE_NEON 1
#else
#define EXPINTERP_HAVE_NEON 0
#endif

namespace expinterp::kernels {

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa) noexcept;

/// Whether the variant is compiled in and supported by this CPU.
bool isa_available(Isa isa) noexcept;

/// Best variant for this host.
Isa detected_isa() noexcept;

/// Variant used by the dispatching entry points. Defaults to detected_isa();
/// the EXPINTERP_ISA environment variable (scalar|avx2|neon) overrides it.
Isa active_isa() noexcept;

/// Pins the dispatch target; throws InvalidArgument if unavailable.
void force_isa(Isa isa);
void reset_isa() noexcept;

/// Output length of upsample_fir for a given input and filter length.
constexpr std::size_t upsampled_length(std::size_t input, int factor, std::size_t taps) {
    return input == 0 ? 0 : (input - 1) * static_cast<std::size_t>(factor) + taps;
}

/// out[l] = sum_k in[k] * taps[l - factor k]: upsampling by `factor`
/// followed by a full linear convolution. out must have upsampled_length().
void upsample_fir(std::span<const double> in, int factor, std::span<const double> taps, std::span<double> out);

/// y += a * x.
void axpy(double a, std::span<const double> x, std::span<double> y);

double dot(std::span<const double> x, std::span<const double> y);

namespace scalar {
void upsample_fir(std::span<const double> in, int factor, std::span<const double> taps, std::span<double> out);
void axpy(double a, std::span<const double> x, std::span<double> y);
double dot(std::span<const double> x, std::span<const double> y);
}  // namespace scalar

#if EXPINTERP_HAVE_X86
namespace avx2 {
void upsample_fir(std::span<const double> in, int factor, std::span<const double> taps, std::span<double> out);
void axpy(double a, std::span<const double> x, std::span<double> y);
double dot(std::span<const double> x, std::span<const double> y);
}  // namespace avx2
#endif

#if EXPINTERP_HAVE_NEON
namespace neon {
void upsample_fir(std::span<const double> in, int factor, std::span<const double> taps, std::span<double> out);
void axpy(double a, std::span<const double> x, std::span<double> y);
double dot(std::span<const double> x, std::span<const double> y);
}  // namespace neon
#endif

}  // namespace expinterp::kernels
