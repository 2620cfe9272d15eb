#include <atomic>
#include <cstdlib>
#include <string>

#include "expinterp/error.hpp"
#include "expinterp/kernels.hpp"

namespace expinterp::kernels {

namespace {

constexpr int kUnset = -1;
std::atomic<int> g_forced{kUnset};

Isa from_environment(Isa fallback) {
    const char* env = std::getenv("EXPINTERP_ISA");
    if (env == nullptr) return fallback;
    const std::string v(env);
    if (v == "scalar") return Isa::Scalar;
    if (v == "avx2" && isa_available(Isa::Avx2)) return Isa::Avx2;
    if (v == "neon" && isa_available(Isa::Neon)) return Isa::Neon;
    return fallback;
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
        case Isa::Neon: return "neon";
    }
    return "unknown";
}

bool isa_available(Isa isa) noexcept {
    switch (isa) {
        case Isa::Scalar: return true;
        case Isa::Avx2:
#if EXPINTERP_HAVE_X86 && (defined(__GNUC__) || defined(__clang__))
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
        case Isa::Neon: return EXPINTERP_HAVE_NEON != 0;
    }
    return false;
}

Isa detected_isa() noexcept {
    if (isa_available(Isa::Avx2)) return Isa::Avx2;
    if (isa_available(Isa::Neon)) return Isa::Neon;
    return Isa::Scalar;
}

Isa active_isa() noexcept {
    const int forced = g_forced.load(std::memory_order_relaxed);
    if (forced != kUnset) return static_cast<Isa>(forced);
    static const Isa chosen = from_environment(detected_isa());
    return chosen;
}

void force_isa(Isa isa) {
    if (!isa_available(isa)) {
        throw Error(ErrorCode::InvalidArgument, "instruction set not available: " + std::string(isa_name(isa)));
    }
    g_forced.store(static_cast<int>(isa), std::memory_order_relaxed);
}

void reset_isa() noexcept { g_forced.store(kUnset, std::memory_order_relaxed); }

void upsample_fir(std::span<const double> in, int factor, std::span<const double> taps, std::span<double> out) {
    if (factor < 1 || out.size() != upsampled_length(in.size(), factor, taps.size())) {
        throw Error(ErrorCode::InvalidArgument, "upsample_fir: bad factor or output length");
    }
    switch (active_isa()) {
#if EXPINTERP_HAVE_X86
        case Isa::Avx2: return avx2::upsample_fir(in, factor, taps, out);
#endif
#if EXPINTERP_HAVE_NEON
        case Isa::Neon: return neon::upsample_fir(in, factor, taps, out);
#endif
        default: return scalar::upsample_fir(in, factor, taps, out);
    }
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
    if (x.size() != y.size()) throw Error(ErrorCode::InvalidArgument, "axpy: size mismatch");
    switch (active_isa()) {
#if EXPINTERP_HAVE_X86
        case Isa::Avx2: return avx2::axpy(a, x, y);
#endif
#if EXPINTERP_HAVE_NEON
        case Isa::Neon: return neon::axpy(a, x, y);
#endif
        default: return scalar::axpy(a, x, y);
    }
}

double dot(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw Error(ErrorCode::InvalidArgument, "dot: size mismatch");
    switch (active_isa()) {
#if EXPINTERP_HAVE_X86
        case Isa::Avx2: return avx2::dot(x, y);
#endif
#if EXPINTERP_HAVE_NEON
        case Isa::Neon: return neon::dot(x, y);
#endif
        default: return scalar::dot(x, y);
    }
}

}  // namespace expinterp::kernels
