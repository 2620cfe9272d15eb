#include <doctest.h>

#include <random>
#include <vector>

#include "expinterp/error.hpp"
#include "expinterp/kernels.hpp"

using namespace expinterp;
namespace k = expinterp::kernels;

namespace {

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    std::vector<double> v(n);
    for (double& x : v) x = d(rng);
    return v;
}

/// Restores automatic dispatch when a test case ends.
struct IsaGuard {
    ~IsaGuard() { k::reset_isa(); }
};

using FirFn = void (*)(std::span<const double>, int, std::span<const double>, std::span<double>);
using AxpyFn = void (*)(double, std::span<const double>, std::span<double>);
using DotFn = double (*)(std::span<const double>, std::span<const double>);

struct Variant {
    k::Isa isa;
    FirFn fir;
    AxpyFn axpy;
    DotFn dot;
};

std::vector<Variant> vector_variants() {
    std::vector<Variant> out;
#if EXPINTERP_HAVE_X86
    if (k::isa_available(k::Isa::Avx2)) out.push_back({k::Isa::Avx2, k::avx2::upsample_fir, k::avx2::axpy, k::avx2::dot});
#endif
#if EXPINTERP_HAVE_NEON
    if (k::isa_available(k::Isa::Neon)) out.push_back({k::Isa::Neon, k::neon::upsample_fir, k::neon::axpy, k::neon::dot});
#endif
    return out;
}

}  // namespace

TEST_CASE("scalar upsample_fir matches a direct double loop") {
    std::mt19937_64 rng(1);
    for (int factor : {1, 2, 3, 5}) {
        for (std::size_t n : {1u, 2u, 7u, 33u}) {
            for (std::size_t taps : {1u, 4u, 9u, 17u}) {
                const auto in = random_vector(n, rng);
                const auto h = random_vector(taps, rng);
                std::vector<double> out(k::upsampled_length(n, factor, taps));
                k::scalar::upsample_fir(in, factor, h, out);
                for (std::size_t l = 0; l < out.size(); ++l) {
                    double ref = 0.0;
                    for (std::size_t i = 0; i < n; ++i) {
                        const auto j = static_cast<std::ptrdiff_t>(l) - static_cast<std::ptrdiff_t>(i) * factor;
                        if (j >= 0 && j < static_cast<std::ptrdiff_t>(taps)) ref += in[i] * h[static_cast<std::size_t>(j)];
                    }
                    CHECK(out[l] == doctest::Approx(ref).epsilon(1e-14));
                }
            }
        }
    }
}

TEST_CASE("vector kernels agree with the scalar reference") {
    const auto variants = vector_variants();
    if (variants.empty()) MESSAGE("no vector instruction set on this host; only the scalar path is exercised");
    std::mt19937_64 rng(2);
    for (const Variant& v : variants) {
        CAPTURE(k::isa_name(v.isa));
        for (int factor : {1, 2, 3, 4, 6}) {
            for (std::size_t n : {1u, 3u, 4u, 5u, 31u, 128u, 1001u}) {
                for (std::size_t taps : {1u, 3u, 8u, 13u, 25u}) {
                    const auto in = random_vector(n, rng);
                    const auto h = random_vector(taps, rng);
                    const std::size_t len = k::upsampled_length(n, factor, taps);
                    std::vector<double> a(len), b(len);
                    k::scalar::upsample_fir(in, factor, h, a);
                    v.fir(in, factor, h, b);
                    for (std::size_t l = 0; l < len; ++l) CHECK(b[l] == doctest::Approx(a[l]).epsilon(1e-13).scale(1.0));
                }
            }
        }
        for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 9u, 100u, 1027u}) {
            const auto x = random_vector(n, rng);
            auto y1 = random_vector(n, rng);
            auto y2 = y1;
            k::scalar::axpy(0.37, x, y1);
            v.axpy(0.37, x, y2);
            for (std::size_t i = 0; i < n; ++i) CHECK(y2[i] == doctest::Approx(y1[i]).epsilon(1e-15).scale(1.0));
            const double ds = k::scalar::dot(x, y1);
            const double dv = v.dot(x, y1);
            CHECK(dv == doctest::Approx(ds).epsilon(1e-12).scale(1.0));
        }
    }
}

TEST_CASE("dispatch can be pinned and reset") {
    IsaGuard guard;
    CHECK(k::isa_available(k::Isa::Scalar));
    CHECK(k::isa_available(k::detected_isa()));
    k::force_isa(k::Isa::Scalar);
    CHECK(k::active_isa() == k::Isa::Scalar);
    std::vector<double> out(k::upsampled_length(3, 2, 2));
    const std::vector<double> in{1.0, 2.0, 3.0};
    const std::vector<double> h{1.0, 1.0};
    k::upsample_fir(in, 2, h, out);
    CHECK(out == std::vector<double>{1.0, 1.0, 2.0, 2.0, 3.0, 3.0});
    k::reset_isa();
    CHECK(k::active_isa() == k::detected_isa());
#if !EXPINTERP_HAVE_NEON
    CHECK_THROWS_AS(k::force_isa(k::Isa::Neon), Error);
#endif
    CHECK(k::isa_name(k::Isa::Avx2) == "avx2");
}

TEST_CASE("dispatched kernels under every available variant") {
    IsaGuard guard;
    std::mt19937_64 rng(3);
    const auto in = random_vector(50, rng);
    const auto h = random_vector(10, rng);
    std::vector<double> ref(k::upsampled_length(in.size(), 3, h.size()));
    k::scalar::upsample_fir(in, 3, h, ref);
    for (k::Isa isa : {k::Isa::Scalar, k::Isa::Avx2, k::Isa::Neon}) {
        if (!k::isa_available(isa)) continue;
        CAPTURE(k::isa_name(isa));
        k::force_isa(isa);
        std::vector<double> out(ref.size());
        k::upsample_fir(in, 3, h, out);
        for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == doctest::Approx(ref[i]).epsilon(1e-13).scale(1.0));
        // Linearity: filtering 2 in equals twice filtering in.
        std::vector<double> twice(in);
        for (double& x : twice) x *= 2.0;
        std::vector<double> out2(ref.size());
        k::upsample_fir(twice, 3, h, out2);
        for (std::size_t i = 0; i < out.size(); ++i) CHECK(out2[i] == doctest::Approx(2.0 * out[i]).epsilon(1e-13).scale(1.0));
    }
}

TEST_CASE("kernels reject mismatched lengths") {
    const std::vector<double> in{1.0, 2.0};
    const std::vector<double> h{1.0};
    std::vector<double> wrong(5);
    CHECK_THROWS_AS(k::upsample_fir(in, 2, h, wrong), Error);
    std::vector<double> y(3);
    CHECK_THROWS_AS(k::axpy(1.0, in, y), Error);
    CHECK_THROWS_AS(k::dot(in, y), Error);
    std::vector<double> empty;
    k::upsample_fir(std::span<const double>{}, 2, h, empty);
    CHECK(k::upsampled_length(0, 2, 3) == 0);
}
