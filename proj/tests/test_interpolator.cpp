#include <doctest.h>

#include <cmath>

#include "expinterp/bspline.hpp"
#include "expinterp/error.hpp"
#include "expinterp/interpolator.hpp"
#include "oracles.hpp"
#include "root_suite.hpp"

using namespace expinterp;
using suite::kI;
using suite::kPi;

namespace {

std::vector<double> grid(double half_span, int per_unit) {
    std::vector<double> t;
    const int n = static_cast<int>(half_span * per_unit);
    for (int i = -n; i <= n; ++i) t.push_back(static_cast<double>(i) / per_unit + 0.013);
    return t;
}

/// Largest jump of the d-th derivative across the internal knots of f.
double max_knot_jump(const PiecewiseExpPoly& f, int d) {
    const double h = f.step().value();
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < f.piece_count(); ++i)
        worst = std::max(worst, std::abs(f.piece_value(i, h, d) - f.piece_value(i + 1, 0.0, d)));
    // Ends: the function and its derivatives must reach zero.
    worst = std::max(worst, std::abs(f.piece_value(0, 0.0, d)));
    worst = std::max(worst, std::abs(f.piece_value(f.piece_count() - 1, h, d)));
    return worst;
}

}  // namespace

TEST_CASE("system for the quadratic B-spline") {
    const InterpolationSystem sys = build_system(RootVector{0.0, 0.0, 0.0});
    REQUIRE(sys.matrix.rows() == 2);
    CHECK(sys.matrix(0, 0) == doctest::Approx(0.75));
    CHECK(sys.matrix(0, 1) == doctest::Approx(1.0));
    CHECK(sys.matrix(1, 0) == doctest::Approx(0.125));
    CHECK(sys.matrix(1, 1) == doctest::Approx(0.5));
    CHECK(sys.condition_number > 1.0);
}

TEST_CASE("system top-left entry is beta(0)") {
    for (const auto& [name, roots] : suite::interpolation_roots()) {
        CAPTURE(name);
        const auto beta = make_centered_bspline(roots);
        CHECK(build_system(roots).matrix(0, 0) == doctest::Approx(beta(0.0)).epsilon(1e-13));
    }
}

TEST_CASE("cubic system matches sampled B-spline") {
    const RootVector roots{0.0, 0.0, 0.0, 0.0};
    const InterpolationSystem sys = build_system(roots);
    REQUIRE(sys.matrix.rows() == 3);
    auto beta = [](double t) { return oracle::polynomial_bspline(4, t + 2.0); };
    for (int k = 0; k < 3; ++k) {
        CHECK(sys.matrix(k, 0) == doctest::Approx(beta(k)).epsilon(1e-13));
        for (int l = 1; l < 3; ++l)
            CHECK(sys.matrix(k, l) == doctest::Approx(beta(k - 0.5 * l) + beta(k + 0.5 * l)).epsilon(1e-13));
    }
}

TEST_CASE("lambda regression values") {
    auto half = [](const RootVector& r) {
        const Interpolator interp = make_interpolator(r);
        const auto h = interp.lambda().half();
        return std::vector<double>(h.begin(), h.end());
    };
    const auto quad = half(RootVector{0.0, 0.0, 0.0});
    REQUIRE(quad.size() == 2);
    CHECK(quad[0] == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(quad[1] == doctest::Approx(-0.5).epsilon(1e-13));

    const auto roman_u = half(RootVector{2.0 * kPi / 5.0 * kI, -2.0 * kPi / 5.0 * kI, 4.0 * kPi / 5.0 * kI,
                                         -4.0 * kPi / 5.0 * kI});
    REQUIRE(roman_u.size() == 3);
    CHECK(std::abs(roman_u[0] - 18.118) < 5e-4);
    CHECK(std::abs(roman_u[1] + 10.128) < 5e-4);
    CHECK(std::abs(roman_u[2] - 1.730) < 5e-4);
    // Frozen from the oracle solve below.
    CHECK(roman_u[0] == doctest::Approx(18.1178704791).epsilon(1e-10));

    const auto roman_v = half(RootVector{0.0, 4.0 * kPi / 5.0 * kI, -4.0 * kPi / 5.0 * kI});
    CHECK(std::abs(roman_v[0] - 7.396) < 5e-4);
    CHECK(std::abs(roman_v[1] + 2.825) < 5e-4);

    const auto hyper = half(RootVector{0.0, 1.0 / 3.0, -1.0 / 3.0});
    CHECK(std::abs(hyper[0] - 1.968) < 5e-4);
    CHECK(std::abs(hyper[1] + 0.489) < 5e-4);
}

TEST_CASE("lambda agrees with an independent numerical solve") {
    for (const auto& [name, roots] : suite::interpolation_roots()) {
        CAPTURE(name);
        const Interpolator interp = make_interpolator(roots);
        const auto lib = interp.lambda().half();
        const auto ref = oracle::lambda({roots.begin(), roots.end()});
        REQUIRE(lib.size() == ref.size());
        for (std::size_t i = 0; i < ref.size(); ++i)
            CHECK(std::abs(lib[i] - ref[i]) < 1e-9 * std::max(1.0, std::abs(ref[i])));
    }
}

TEST_CASE("quadratic interpolator midpoint value") {
    const Interpolator phi = make_interpolator(RootVector{0.0, 0.0, 0.0});
    CHECK(phi(0.0) == doctest::Approx(1.0));
    CHECK(std::abs(phi(1.0)) < 1e-15);
    CHECK(phi(0.5) == doctest::Approx(9.0 / 16.0).epsilon(1e-14));
}

TEST_CASE("interpolation property across the root suite") {
    for (const auto& [name, roots] : suite::interpolation_roots()) {
        CAPTURE(name);
        const Interpolator phi = make_interpolator(roots);
        const int hw = phi.support_halfwidth();
        CHECK(phi.phi().support_lo() == doctest::Approx(-hw));
        CHECK(phi.phi().support_hi() == doctest::Approx(hw));
        for (int k = -hw - 1; k <= hw + 1; ++k) CHECK(std::abs(phi(k) - (k == 0 ? 1.0 : 0.0)) < 1e-10);
        CHECK(phi.phi().max_imag_residue() < 1e-10);
    }
}

TEST_CASE("interpolators are even") {
    for (const auto& [name, roots] : suite::interpolation_roots()) {
        CAPTURE(name);
        const Interpolator phi = make_interpolator(roots);
        for (double t = 0.0; t < phi.support_halfwidth(); t += 0.0371) CHECK(std::abs(phi(t) - phi(-t)) < 1e-12);
    }
}

TEST_CASE("partition of unity when constants are reproduced") {
    for (const auto& [name, roots] : suite::interpolation_roots()) {
        if (!roots.contains_zero()) continue;
        CAPTURE(name);
        const Interpolator phi = make_interpolator(roots);
        for (double t = 0.0; t < 1.0; t += 0.0625) {
            double s = 0.0;
            for (int k = -8; k <= 8; ++k) s += phi(t - k);
            CHECK(std::abs(s - 1.0) < 1e-10);
        }
    }
}

TEST_CASE("reproduction of every generator on interior grids") {
    for (const auto& [name, roots] : suite::interpolation_roots()) {
        CAPTURE(name);
        const Interpolator phi = make_interpolator(roots);
        CHECK(verify_reproduction(phi, grid(3.0, 32)) < 1e-8);
    }
}

TEST_CASE("reproduction of circles by hand") {
    const int M = 5;
    const Interpolator phi = make_interpolator(ellipse_roots(M));
    for (double t = 0.0; t < 1.0; t += 0.01) {
        double x = 0.0;
        double y = 0.0;
        for (int k = -6; k <= 6; ++k) {
            x += std::cos(2.0 * kPi * k / M) * phi(t * M - k);
            y += std::sin(2.0 * kPi * k / M) * phi(t * M - k);
        }
        CHECK(std::abs(std::hypot(x, y) - 1.0) < 1e-12);
    }
}

TEST_CASE("ellipse closed form matches the solver") {
    for (int M = 3; M <= 12; ++M) {
        CAPTURE(M);
        const CoefficientSequence closed_seq = lambda_closed_form_ellipse(M);
        const Interpolator interp = make_interpolator(ellipse_roots(M));
        const auto closed = closed_seq.half();
        const auto solved = interp.lambda().half();
        REQUIRE(closed.size() == solved.size());
        for (std::size_t i = 0; i < closed.size(); ++i) CHECK(std::abs(closed[i] - solved[i]) < 1e-10);
    }
    CHECK_THROWS_AS(lambda_closed_form_ellipse(2), Error);
}

TEST_CASE("interpolators have n0 - 2 continuous derivatives") {
    for (const auto& [name, roots] : suite::interpolation_roots()) {
        CAPTURE(name);
        const Interpolator phi = make_interpolator(roots);
        PiecewiseExpPoly f = phi.phi();
        for (int d = 0; d <= phi.order() - 2; ++d) {
            CAPTURE(d);
            // Higher derivatives of the steeper interpolators grow; compare relatively.
            double peak = 1.0;
            for (double t : grid(phi.support_halfwidth(), 50)) peak = std::max(peak, std::abs(f(t)));
            CHECK(max_knot_jump(f, 0) < 1e-9 * peak);
            f = f.derivative();
        }
        // The next derivative does jump somewhere: the bound is sharp.
        CHECK(max_knot_jump(f, 0) > 1e-6);
    }
}

TEST_CASE("Fourier transform of the interpolator") {
    for (const auto& [name, roots] : suite::interpolation_roots()) {
        CAPTURE(name);
        const Interpolator phi = make_interpolator(roots);
        const double hw = phi.support_halfwidth();
        for (double w : {0.0, 0.7, 2.1, 3.9, -5.3}) {
            const cplx expect = oracle::fourier_integral([&](double t) { return phi(t - hw); }, 0.0, 2.0 * hw, w) *
                                std::exp(cplx(0.0, w * hw));
            CHECK(std::abs(phi.fourier(w) - expect) < 1e-8);
        }
    }
}

TEST_CASE("Riesz bounds") {
    for (const auto& [name, roots] : suite::interpolation_roots()) {
        CAPTURE(name);
        const RieszBounds r = estimate_riesz_bounds(make_interpolator(roots));
        CHECK(r.lower > 0.0);
        CHECK(r.upper >= r.lower);
        CHECK(r.grid_size == 1024);
    }
}

TEST_CASE("quadratic B-spline frame extrema") {
    const RieszBounds r = estimate_riesz_bounds(make_interpolator(RootVector{0.0, 0.0, 0.0}));
    // Brute force over a fine grid of the quintic autocorrelation.
    double lo = 1e300;
    double hi = 0.0;
    for (int i = 0; i <= 200000; ++i) {
        const double v = oracle::quadratic_frame(2.0 * kPi * i / 200000);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    CHECK(std::abs(r.bspline_frame_min - lo) < 1e-6);
    CHECK(std::abs(r.bspline_frame_max - hi) < 1e-6);
    CHECK(lo == doctest::Approx(2.0 / 15.0).epsilon(1e-9));
    CHECK(hi == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("frame function against a truncated periodization") {
    for (const auto& [name, roots] : suite::interpolation_roots()) {
        CAPTURE(name);
        const auto c = autocorrelation_samples(make_centered_bspline(roots));
        for (double w : {0.1, 1.3, 2.9, 4.4}) {
            double brute = 0.0;
            for (int k = -64; k <= 64; ++k) brute += std::norm(fourier_bspline(roots, w - 2.0 * kPi * k));
            CHECK(bspline_frame_function(c, w) == doctest::Approx(brute).epsilon(1e-6));
        }
    }
}

TEST_CASE("Riesz estimate rejects a coarse grid") {
    CHECK_THROWS_AS(estimate_riesz_bounds(make_interpolator(RootVector{0.0, 0.0, 0.0}), 16), Error);
}

TEST_CASE("construction errors") {
    auto code_of = [](const RootVector& r) {
        try {
            make_interpolator(r);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::NotFound;
    };
    CHECK(code_of(RootVector{1.0, -1.0}) == ErrorCode::OrderTooLow);
    CHECK(code_of(RootVector{0.0, 0.0}) == ErrorCode::OrderTooLow);
    CHECK(code_of(RootVector{1.0, 2.0, 3.0}) == ErrorCode::NotSymmetric);
    CHECK(code_of(RootVector{0.0, kI, kI}) == ErrorCode::NotSymmetric);
    // The hyperbolic Fig. 3 example, +-2 pi / 3 real.
    CHECK_NOTHROW(make_interpolator(RootVector{0.0, 2.0 * kPi / 3.0, -2.0 * kPi / 3.0}));
    const Interpolator hyp = make_interpolator(RootVector{0.0, 2.0 * kPi / 3.0, -2.0 * kPi / 3.0});
    double lowest = 0.0;
    for (double t = 0.0; t < 2.0; t += 0.01) lowest = std::min(lowest, hyp(t));
    CHECK(lowest < 0.0);
}

TEST_CASE("root parsing") {
    const RootVector r = parse_roots("0, 2pi/3i, -2pi/3 i");
    REQUIRE(r.order() == 3);
    CHECK(r[0] == cplx(0.0));
    CHECK(std::abs(r[1] - 2.0 * kPi / 3.0 * kI) < 1e-15);
    CHECK(std::abs(r[2] + 2.0 * kPi / 3.0 * kI) < 1e-15);
    CHECK(parse_roots("0.5:-1, i, -i")[0] == cplx(0.5, -1.0));
    CHECK(parse_roots("i")[0] == kI);
    CHECK(parse_roots("-i")[0] == -kI);
    CHECK(parse_roots("1/3")[0].real() == doctest::Approx(1.0 / 3.0));
    CHECK(parse_roots("2*pi")[0].real() == doctest::Approx(2.0 * kPi));
    for (const char* bad : {"", "x", "1,,2", "pi/", ":1", "1:", "3ii"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(parse_roots(bad), Error);
    }
}

TEST_CASE("root vector properties") {
    const RootVector r{0.0, 1e-12, kI, -kI};
    CHECK(r[1] == cplx(0.0));  // snapped onto the earlier root
    CHECK(r.distinct().size() == 3);
    CHECK(r.is_conjugate_symmetric());
    CHECK(RootVector{0.0, 2.0 * kPi * kI, -2.0 * kPi * kI}.is_riesz_admissible() == false);
    CHECK(RootVector{0.0, 0.5 * kPi * kI, -0.5 * kPi * kI}.is_riesz_admissible());
    CHECK(r.scaled_down(2.0)[2] == 0.5 * kI);
}
