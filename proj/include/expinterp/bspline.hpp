#pragma once

#include <complex>
#include <vector>

#include "expinterp/exp_poly.hpp"
#include "expinterp/root_vector.hpp"

namespace expinterp {

/// Causal exponential B-spline, supported on [0, n0]. Built by convolving
/// the first-order factors t -> exp(alpha t) on [0,1) symbolically.
PiecewiseExpPoly make_causal_bspline(const RootVector& roots);

/// Causal exponential B-spline evaluated from per-piece Taylor expansions.
///
/// The closed form above cancels badly when roots nearly coincide, which
/// is exactly what alpha / S looks like at fine refinement scales. Here
/// the spline is propagated knot to knot as the state of its differential
/// operator, which involves no divisions by root differences.
class CausalBSplineEvaluator {
public:
    CausalBSplineEvaluator() = default;
    explicit CausalBSplineEvaluator(const RootVector& roots);

    int order() const { return order_; }
    int degree() const { return degree_; }

    /// Zero outside [0, n0); right-continuous at the knots.
    double operator()(double x) const;

private:
    int order_ = 0;
    int degree_ = 0;
    std::vector<double> coeffs_;  // order_ pieces of degree_ + 1 Taylor coefficients about the midpoint
};

/// beta(t) = beta_causal(t + n0/2); the support becomes [-n0/2, n0/2].
PiecewiseExpPoly center(const PiecewiseExpPoly& causal, int order);

PiecewiseExpPoly make_centered_bspline(const RootVector& roots);

/// Fourier transform of the causal B-spline:
/// prod_n (1 - exp(alpha_n - i w)) / (i w - alpha_n), with the removable
/// singularities at i w = alpha_n resolved by a series expansion.
std::complex<double> fourier_bspline(const RootVector& roots, double omega);

/// Fourier transform of the centered B-spline.
std::complex<double> fourier_centered_bspline(const RootVector& roots, double omega);

/// One generator family t^p exp(rate t), p = 0..max_power, per distinct root.
struct ReproducedFamily {
    std::complex<double> rate;
    int max_power;
};

std::vector<ReproducedFamily> reproduction_space(const RootVector& roots);

/// Integer samples c[k] = int beta(t) beta(t - k) dt for k = 0..n0.
/// The sequence is even and vanishes for |k| >= n0.
std::vector<double> autocorrelation_samples(const PiecewiseExpPoly& bspline);

}  // namespace expinterp
