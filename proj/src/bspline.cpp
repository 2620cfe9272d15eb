#include "expinterp/bspline.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <unsupported/Eigen/MatrixFunctions>

#include "expinterp/error.hpp"

namespace expinterp {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

// (e^z - 1) / z, continuous through z = 0.
std::complex<double> expm1_over(std::complex<double> z) {
    if (std::abs(z) < 1e-6) return 1.0 + z / 2.0 + z * z / 6.0;
    return (std::exp(z) - 1.0) / z;
}

}  // namespace

PiecewiseExpPoly make_causal_bspline(const RootVector& roots) {
    if (roots.empty()) throw Error(ErrorCode::InvalidArgument, "B-spline needs at least one root");
    PiecewiseExpPoly b(HalfGrid::integer(0), HalfGrid::integer(1), {ExpPiece{{1.0, 0, roots[0]}}});
    for (std::size_t i = 1; i < roots.order(); ++i) b = convolve_with_exponential_box(b, roots[i]);
    return b;
}

CausalBSplineEvaluator::CausalBSplineEvaluator(const RootVector& roots) {
    if (roots.empty()) throw Error(ErrorCode::InvalidArgument, "B-spline needs at least one root");
    const auto n = static_cast<Eigen::Index>(roots.order());
    order_ = static_cast<int>(n);

    // z_1 = y, z_{j+1} = (D - alpha_j) z_j gives z' = J z with J upper bidiagonal.
    Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(n, n);
    double radius = 1.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        J(j, j) = roots[static_cast<std::size_t>(j)];
        if (j + 1 < n) J(j, j + 1) = 1.0;
        radius = std::max(radius, std::abs(roots[static_cast<std::size_t>(j)]) + 1.0);
    }
    // The spline is sum_k d[k] G(t - k), G the causal Green's function, with
    // d the coefficients of prod_n (1 - exp(alpha_n) z). Each G(t - k) enters
    // as a unit jump of z_n at knot k.
    std::vector<cplx> d{1.0};
    for (const cplx& a : roots) {
        std::vector<cplx> next(d.size() + 1, 0.0);
        const cplx e = std::exp(a);
        for (std::size_t i = 0; i < d.size(); ++i) {
            next[i] += d[i];
            next[i + 1] -= e * d[i];
        }
        d = std::move(next);
    }
    // Taylor degree so that radius^p (1/2)^p / p! is below rounding.
    double term = 1.0;
    degree_ = 0;
    while (degree_ < 256 && (degree_ < order_ || term > 1e-18)) {
        ++degree_;
        term *= 0.5 * radius / degree_;
    }
    const Eigen::MatrixXcd half = (0.5 * J).exp();
    const Eigen::MatrixXcd full = half * half;
    Eigen::VectorXcd state = Eigen::VectorXcd::Zero(n);
    coeffs_.reserve(static_cast<std::size_t>(order_ * (degree_ + 1)));
    for (Eigen::Index k = 0; k < n; ++k) {
        if (k > 0) state = full * state;
        state(n - 1) += d[static_cast<std::size_t>(k)];
        Eigen::VectorXcd v = half * state;
        for (int p = 0; p <= degree_; ++p) {
            coeffs_.push_back(v(0).real());
            v = (J * v) / static_cast<double>(p + 1);
        }
    }
}

double CausalBSplineEvaluator::operator()(double x) const {
    if (!(x >= 0.0) || x >= order_) return 0.0;
    const auto k = static_cast<std::size_t>(x);
    const double s = x - static_cast<double>(k) - 0.5;
    const double* c = coeffs_.data() + k * static_cast<std::size_t>(degree_ + 1);
    double acc = c[degree_];
    for (int p = degree_ - 1; p >= 0; --p) acc = acc * s + c[p];
    return acc;
}

PiecewiseExpPoly center(const PiecewiseExpPoly& causal, int order) {
    return causal.shifted(-HalfGrid::halves(order));
}

PiecewiseExpPoly make_centered_bspline(const RootVector& roots) {
    return center(make_causal_bspline(roots), static_cast<int>(roots.order()));
}

std::complex<double> fourier_bspline(const RootVector& roots, double omega) {
    // (1 - e^{a - iw}) / (iw - a) = (e^z - 1) / z with z = a - iw.
    std::complex<double> acc = 1.0;
    for (const cplx& a : roots) acc *= expm1_over(a - kI * omega);
    return acc;
}

std::complex<double> fourier_centered_bspline(const RootVector& roots, double omega) {
    const double half = 0.5 * static_cast<double>(roots.order());
    return std::exp(kI * omega * half) * fourier_bspline(roots, omega);
}

std::vector<ReproducedFamily> reproduction_space(const RootVector& roots) {
    std::vector<ReproducedFamily> out;
    for (const auto& d : roots.distinct()) out.push_back({d.root, d.multiplicity - 1});
    return out;
}

std::vector<double> autocorrelation_samples(const PiecewiseExpPoly& bspline) {
    using boost::math::quadrature::gauss;
    const double lo = bspline.support_lo();
    const auto n = static_cast<int>(bspline.piece_count() * bspline.step().value() + 0.5);
    std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
    const double h = bspline.step().value();
    for (int k = 0; k <= n; ++k) {
        double acc = 0.0;
        // Both factors share the knot grid, so the product is smooth on every piece.
        for (std::size_t i = 0; i < bspline.piece_count(); ++i) {
            const double a = lo + static_cast<double>(i) * h;
            acc += gauss<double, 30>::integrate(
                [&](double t) { return bspline(t) * bspline(t - k); }, a, a + h);
        }
        c[static_cast<std::size_t>(k)] = acc;
    }
    return c;
}

}  // namespace expinterp
