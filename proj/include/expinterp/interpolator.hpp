#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "expinterp/exp_poly.hpp"
#include "expinterp/root_vector.hpp"

namespace expinterp {

/// Systems with a larger 2-norm condition number are rejected as singular.
inline constexpr double kMaxConditionNumber = 1e12;

/// Symmetric, finitely supported weights of the half-integer B-spline shifts.
/// Only lambda[0..n0-2] is stored; lambda[-n] = lambda[n] and lambda vanishes
/// for |n| >= n0 - 1.
class CoefficientSequence {
public:
    CoefficientSequence() = default;
    explicit CoefficientSequence(std::vector<double> nonnegative_half)
        : half_(std::move(nonnegative_half)) {}

    double operator[](std::int64_t n) const {
        const auto k = static_cast<std::size_t>(n < 0 ? -n : n);
        return k < half_.size() ? half_[k] : 0.0;
    }
    std::span<const double> half() const { return half_; }
    std::int64_t max_index() const { return static_cast<std::int64_t>(half_.size()) - 1; }
    bool symmetric() const { return true; }

    /// lambda_hat(w) = sum_n lambda[n] exp(-i w n / 2).
    std::complex<double> transfer(double omega) const;

private:
    std::vector<double> half_;
};

/// Interpolation conditions phi(k) = delta[k], k = 0..n0-2, written as A lambda = e1.
struct InterpolationSystem {
    RootVector roots;
    Eigen::MatrixXd matrix;
    Eigen::VectorXd rhs;
    double condition_number = 0.0;
    double imag_residue = 0.0;
};

class Interpolator {
public:
    /// phi(t) = sum_n lambda[n] beta(t - n/2) for given roots and weights.
    /// No interpolation check is made here; use make_interpolator for that.
    static Interpolator assemble(RootVector roots, CoefficientSequence lambda, double condition_number = 0.0);

    const RootVector& roots() const { return roots_; }
    const CoefficientSequence& lambda() const { return lambda_; }
    const PiecewiseExpPoly& phi() const { return phi_; }
    const PiecewiseExpPoly& bspline() const { return bspline_; }
    int order() const { return static_cast<int>(roots_.order()); }
    int support_halfwidth() const { return order() - 1; }
    double condition_number() const { return condition_number_; }

    double operator()(double t) const { return phi_(t); }

    /// phi_hat(w) = lambda_hat(w) * beta_hat(w) for the centered generator.
    std::complex<double> fourier(double omega) const;

private:
    RootVector roots_;
    CoefficientSequence lambda_;
    PiecewiseExpPoly bspline_;
    PiecewiseExpPoly phi_;
    double condition_number_ = 0.0;
};

/// Requires conjugate-symmetric roots (NotSymmetric) and n0 >= 3 (OrderTooLow).
InterpolationSystem build_system(const RootVector& roots);

/// Dense LU solve; SingularSystem when the condition number reaches
/// kMaxConditionNumber or the residual exceeds 1e-10.
CoefficientSequence solve_lambda(const InterpolationSystem& system);

Interpolator make_interpolator(const RootVector& roots);

/// Closed-form weights for roots (0, 2 pi i / M, -2 pi i / M), M >= 3.
CoefficientSequence lambda_closed_form_ellipse(int M);

/// Roots (0, 2 pi i / M, -2 pi i / M) that reproduce circles and ellipses.
RootVector ellipse_roots(int M);

/// Largest reconstruction error of sum_k f(k) phi(t - k) against f(t) over
/// the grid, taken over every generator t^p exp(alpha t) the roots
/// reproduce. Errors are relative to max(1, max |f| on the grid).
/// Throws ReproductionConditionViolated when sum_n lambda[n] exp(-alpha n/2)
/// vanishes for some root.
double verify_reproduction(const Interpolator& interp, std::span<const double> t_grid);

struct RieszBounds {
    double lower = 0.0;
    double upper = 0.0;
    int grid_size = 0;
    // Extremes of sum_k |beta_hat(w - 2 k pi)|^2 and of |lambda_hat| on [0, 2 pi].
    double bspline_frame_min = 0.0;
    double bspline_frame_max = 0.0;
    double lambda_hat_min = 0.0;
    double lambda_hat_max = 0.0;
};

/// B-spline frame function sum_k |beta_hat(w - 2 k pi)|^2 from the
/// autocorrelation samples c[0..]: c[0] + 2 sum_k c[k] cos(k w).
double bspline_frame_function(std::span<const double> autocorrelation, double omega);

/// Riesz constants A = A_beta min|lambda_hat|, B = B_beta max|lambda_hat|
/// estimated on a uniform grid of [0, 2 pi]. grid_size must be >= 256.
RieszBounds estimate_riesz_bounds(const Interpolator& interp, int grid_size = 1024);

}  // namespace expinterp
