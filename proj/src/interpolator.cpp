#include "expinterp/interpolator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "expinterp/bspline.hpp"
#include "expinterp/error.hpp"

namespace expinterp {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};
constexpr double kRealTolerance = 1e-9;

}  // namespace

std::complex<double> CoefficientSequence::transfer(double omega) const {
    std::complex<double> acc = 0.0;
    const auto top = max_index();
    for (std::int64_t n = -top; n <= top; ++n) {
        acc += (*this)[n] * std::exp(-kI * omega * (0.5 * static_cast<double>(n)));
    }
    return acc;
}

Interpolator Interpolator::assemble(RootVector roots, CoefficientSequence lambda, double condition_number) {
    Interpolator out;
    out.bspline_ = make_centered_bspline(roots);
    const PiecewiseExpPoly half = out.bspline_.split_to_half_step();
    const auto top = lambda.max_index();
    for (std::int64_t n = -top; n <= top; ++n) {
        if (lambda[n] == 0.0) continue;
        out.phi_.accumulate(half.shifted(HalfGrid::halves(n)), lambda[n]);
    }
    out.roots_ = std::move(roots);
    out.lambda_ = std::move(lambda);
    out.condition_number_ = condition_number;
    return out;
}

std::complex<double> Interpolator::fourier(double omega) const {
    return lambda_.transfer(omega) * fourier_centered_bspline(roots_, omega);
}

InterpolationSystem build_system(const RootVector& roots) {
    if (!roots.is_conjugate_symmetric()) {
        throw Error(ErrorCode::NotSymmetric, "roots must be zero or come in opposite/conjugate pairs");
    }
    if (roots.order() < 3) {
        throw Error(ErrorCode::OrderTooLow, "interpolators need at least three roots");
    }
    const int size = static_cast<int>(roots.order()) - 1;
    const PiecewiseExpPoly beta = make_centered_bspline(roots);

    InterpolationSystem sys;
    sys.roots = roots;
    sys.matrix.resize(size, size);
    sys.rhs = Eigen::VectorXd::Zero(size);
    sys.rhs(0) = 1.0;
    for (int k = 0; k < size; ++k) {
        for (int l = 0; l < size; ++l) {
            std::complex<double> v;
            if (l == 0) {
                v = beta.eval_complex(k);
            } else {
                v = beta.eval_complex(k - 0.5 * l) + beta.eval_complex(k + 0.5 * l);
            }
            sys.imag_residue = std::max(sys.imag_residue, std::abs(v.imag()));
            sys.matrix(k, l) = v.real();
        }
    }
    if (sys.imag_residue > kRealTolerance) {
        throw Error(ErrorCode::NotSymmetric, "interpolation matrix is not real");
    }
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(sys.matrix);
    const auto& sv = svd.singularValues();
    const double smallest = sv(sv.size() - 1);
    sys.condition_number = smallest > 0.0 ? sv(0) / smallest : std::numeric_limits<double>::infinity();
    return sys;
}

CoefficientSequence solve_lambda(const InterpolationSystem& system) {
    if (!(system.condition_number < kMaxConditionNumber)) {
        std::ostringstream msg;
        msg << "interpolation matrix is numerically singular (condition number " << system.condition_number << ")";
        throw Error(ErrorCode::SingularSystem, msg.str());
    }
    const Eigen::VectorXd x = system.matrix.partialPivLu().solve(system.rhs);
    const double residual = (system.matrix * x - system.rhs).lpNorm<Eigen::Infinity>();
    if (!(residual < 1e-10)) {
        throw Error(ErrorCode::SingularSystem, "interpolation system solve left a residual above 1e-10");
    }
    return CoefficientSequence(std::vector<double>(x.data(), x.data() + x.size()));
}

Interpolator make_interpolator(const RootVector& roots) {
    const InterpolationSystem sys = build_system(roots);
    return Interpolator::assemble(roots, solve_lambda(sys), sys.condition_number);
}

RootVector ellipse_roots(int M) {
    const double w = 2.0 * std::numbers::pi / M;
    return RootVector{0.0, {0.0, w}, {0.0, -w}};
}

CoefficientSequence lambda_closed_form_ellipse(int M) {
    if (M < 3) throw Error(ErrorCode::InvalidArgument, "ellipse family needs M >= 3");
    constexpr double pi = std::numbers::pi;
    const double m = static_cast<double>(M);
    const double csc_half = 1.0 / std::sin(pi / (2.0 * m));
    const double l0 = pi * pi * csc_half * csc_half / std::cos(pi / m) / (2.0 * m * m);
    const double l1 = -pi * pi / std::sin(pi / m) / std::sin(2.0 * pi / m) / (m * m);
    return CoefficientSequence({l0, l1});
}

double verify_reproduction(const Interpolator& interp, std::span<const double> t_grid) {
    if (t_grid.empty()) return 0.0;
    const auto& lambda = interp.lambda();
    for (const cplx& a : interp.roots()) {
        std::complex<double> sum = 0.0;
        for (std::int64_t n = -lambda.max_index(); n <= lambda.max_index(); ++n) {
            sum += lambda[n] * std::exp(-a * (0.5 * static_cast<double>(n)));
        }
        if (std::abs(sum) < 1e-9) {
            throw Error(ErrorCode::ReproductionConditionViolated, "lambda annihilates a root's exponential");
        }
    }

    const auto [lo_it, hi_it] = std::minmax_element(t_grid.begin(), t_grid.end());
    const int pad = interp.support_halfwidth() + 1;
    const auto k_lo = static_cast<std::int64_t>(std::floor(*lo_it)) - pad;
    const auto k_hi = static_cast<std::int64_t>(std::ceil(*hi_it)) + pad;

    double worst = 0.0;
    for (const auto& family : reproduction_space(interp.roots())) {
        for (int p = 0; p <= family.max_power; ++p) {
            auto f = [&](double t) { return std::pow(t, p) * std::exp(family.rate * t); };
            double scale = 1.0;
            for (double t : t_grid) scale = std::max(scale, std::abs(f(t)));
            for (double t : t_grid) {
                std::complex<double> rec = 0.0;
                for (std::int64_t k = k_lo; k <= k_hi; ++k) {
                    const double w = interp(t - static_cast<double>(k));
                    if (w != 0.0) rec += f(static_cast<double>(k)) * w;
                }
                worst = std::max(worst, std::abs(rec - f(t)) / scale);
            }
        }
    }
    return worst;
}

double bspline_frame_function(std::span<const double> autocorrelation, double omega) {
    double acc = autocorrelation.empty() ? 0.0 : autocorrelation[0];
    for (std::size_t k = 1; k < autocorrelation.size(); ++k) {
        acc += 2.0 * autocorrelation[k] * std::cos(static_cast<double>(k) * omega);
    }
    return acc;
}

RieszBounds estimate_riesz_bounds(const Interpolator& interp, int grid_size) {
    if (grid_size < 256) throw Error(ErrorCode::InvalidArgument, "Riesz grid needs at least 256 points");
    const std::vector<double> c = autocorrelation_samples(interp.bspline());

    RieszBounds out;
    out.grid_size = grid_size;
    out.bspline_frame_min = out.lambda_hat_min = std::numeric_limits<double>::infinity();
    for (int j = 0; j <= grid_size; ++j) {
        const double w = 2.0 * std::numbers::pi * j / grid_size;
        const double frame = bspline_frame_function(c, w);
        const double lam = std::abs(interp.lambda().transfer(w));
        out.bspline_frame_min = std::min(out.bspline_frame_min, frame);
        out.bspline_frame_max = std::max(out.bspline_frame_max, frame);
        out.lambda_hat_min = std::min(out.lambda_hat_min, lam);
        out.lambda_hat_max = std::max(out.lambda_hat_max, lam);
    }
    out.lower = std::sqrt(std::max(out.bspline_frame_min, 0.0)) * out.lambda_hat_min;
    out.upper = std::sqrt(out.bspline_frame_max) * out.lambda_hat_max;
    if (!(out.lower >= 1e-12)) {
        throw Error(ErrorCode::DegenerateFrame, "estimated lower Riesz bound vanishes");
    }
    return out;
}

}  // namespace expinterp
