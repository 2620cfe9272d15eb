#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "expinterp/bspline.hpp"
#include "expinterp/exp_poly.hpp"
#include "expinterp/interpolator.hpp"
#include "expinterp/root_vector.hpp"

namespace expinterp {

/// Two-scale filter h: beta_a(t/m) = sum_k h_{a/m,m}[k] beta_{a/m}(t - k),
/// causal B-splines on both sides. Taps start at index 0.
struct RefinementFilter {
    RootVector roots;
    int factor = 2;
    std::vector<double> taps;
    double imag_residue = 0.0;

    std::complex<double> transfer(double omega) const;
};

/// H(e^{iw}) = m^{-(n0-1)} prod_n sum_{k<m} exp(alpha_n k) exp(-i k w).
std::complex<double> refinement_transfer(const RootVector& roots, int m, double omega);

/// Taps of H for the given roots; n0 (m - 1) + 1 of them. m >= 2.
RefinementFilter refinement_filter(const RootVector& roots, int m);

/// Pre-filter g: phi_causal(t/m0) = sum_k g[k] beta_{alpha/m0}(t - k), where
/// phi_causal(t) = phi(t - (n0 - 1)). Only defined for even m0.
struct PreFilter {
    int factor = 2;
    int order = 0;
    std::int64_t shift = 0;  // m0 (n0/2 - 1) samples of delay
    std::vector<double> taps;

    std::complex<double> transfer(double omega) const;
};

/// G(e^{iw}) = exp(-i w shift) lambda_hat(m0 w) H_{alpha/m0, m0}(e^{iw}).
std::complex<double> pre_filter_transfer(const Interpolator& interp, int m0, double omega);

/// OddFactor unless m0 is even and positive.
PreFilter pre_filter(const Interpolator& interp, int m0);

/// Basis in which a sequence is expanded.
enum class SampleBasis {
    Interpolator,  // f(t) = sum_k c[k] phi(t - k)
    BSpline,       // f(t) = sum_l c[l] beta_causal_{alpha/S}(S (t + n0 - 1) - l)
};

/// Finite or periodic multi-channel sample sequence at grid density `scale`.
///
/// Channel data is planar: values[c][i] is channel c at index origin + i.
/// Periodic sequences have origin 0 and one period stored. Finite
/// sequences are zero-extended.
struct SampleSequence {
    std::vector<std::vector<double>> values;
    std::int64_t origin = 0;
    std::int64_t scale = 1;
    bool periodic = false;
    SampleBasis basis = SampleBasis::Interpolator;
    int order = 0;  // n0 of the generating roots

    std::size_t channels() const { return values.size(); }
    std::size_t length() const { return values.empty() ? 0 : values.front().size(); }
    std::int64_t period() const { return static_cast<std::int64_t>(length()); }

    /// Value at any integer index (wrapped when periodic, zero outside otherwise).
    double at(std::size_t channel, std::int64_t index) const;

    /// Parameter t (original integer grid) a sample is attached to: k itself
    /// for interpolator samples, the center of its B-spline otherwise.
    double parameter(std::int64_t index) const;

    static SampleSequence from_samples(std::vector<std::vector<double>> channels, int order, bool periodic,
                                       std::int64_t origin = 0);
};

/// c0 = (c upsampled by m0) * g. The input must be in the interpolator basis.
SampleSequence change_of_basis(const SampleSequence& c, const PreFilter& pre);

/// c_n = h_{alpha/(S m), m} * (c_{n-1} upsampled by m), S the input scale.
SampleSequence refine_step(const SampleSequence& previous, const RootVector& roots, int m);

/// Pre-filter step followed by `depth` refinement steps; element n of the
/// result is c_n (so the result has depth + 1 entries).
std::vector<SampleSequence> refine_levels(const SampleSequence& c, const Interpolator& interp, int m0, int m,
                                          int depth);

/// Last entry of refine_levels: samples at scale m0 m^depth.
SampleSequence refine_to_depth(const SampleSequence& c, const Interpolator& interp, int m0, int m, int depth);

/// Evaluates the continuous function a sequence represents.
class SequenceEvaluator {
public:
    SequenceEvaluator(const SampleSequence& seq, const Interpolator& interp);

    double operator()(std::size_t channel, double t) const;

private:
    const SampleSequence* seq_;
    const Interpolator* interp_;
    CausalBSplineEvaluator causal_;  // beta_causal for alpha / scale
};

}  // namespace expinterp
