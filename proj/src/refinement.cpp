#include "expinterp/refinement.hpp"

#include <cmath>

#include "expinterp/bspline.hpp"
#include "expinterp/error.hpp"
#include "expinterp/kernels.hpp"

namespace expinterp {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};
constexpr double kRealTolerance = 1e-9;

using CPoly = std::vector<std::complex<double>>;

CPoly multiply(const CPoly& a, const CPoly& b) {
    CPoly out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

std::complex<double> taps_transfer(std::span<const double> taps, double omega) {
    std::complex<double> acc = 0.0;
    for (std::size_t k = 0; k < taps.size(); ++k) acc += taps[k] * std::exp(-kI * omega * static_cast<double>(k));
    return acc;
}

// Upsamples every channel by `factor` and convolves with `taps`, honouring
// periodicity. Scale, basis and order of the result are left to the caller.
SampleSequence upsample_filter(const SampleSequence& in, int factor, std::span<const double> taps) {
    SampleSequence out;
    out.periodic = in.periodic;
    out.values.resize(in.channels());
    const std::size_t n = in.length();
    if (!in.periodic) {
        out.origin = in.origin * factor;
        for (std::size_t c = 0; c < in.channels(); ++c) {
            out.values[c].resize(kernels::upsampled_length(n, factor, taps.size()));
            kernels::upsample_fir(in.values[c], factor, taps, out.values[c]);
        }
        return out;
    }
    // One period of a circular convolution: extend the input on the left by
    // enough wrapped samples that every output of [0, factor*P) is complete.
    const auto period = static_cast<std::int64_t>(n);
    const auto pad = static_cast<std::int64_t>((taps.size() + static_cast<std::size_t>(factor) - 2) /
                                               static_cast<std::size_t>(factor));
    std::vector<double> extended(static_cast<std::size_t>(period + pad));
    std::vector<double> linear(kernels::upsampled_length(extended.size(), factor, taps.size()));
    for (std::size_t c = 0; c < in.channels(); ++c) {
        for (std::int64_t j = 0; j < period + pad; ++j) {
            extended[static_cast<std::size_t>(j)] = in.at(c, j - pad);
        }
        kernels::upsample_fir(extended, factor, taps, linear);
        const auto skip = static_cast<std::ptrdiff_t>(pad * factor);
        out.values[c].assign(linear.begin() + skip, linear.begin() + skip + period * factor);
    }
    return out;
}

}  // namespace

std::complex<double> RefinementFilter::transfer(double omega) const { return taps_transfer(taps, omega); }

std::complex<double> PreFilter::transfer(double omega) const { return taps_transfer(taps, omega); }

std::complex<double> refinement_transfer(const RootVector& roots, int m, double omega) {
    std::complex<double> acc = std::pow(static_cast<double>(m), -static_cast<double>(roots.order()) + 1.0);
    for (const cplx& a : roots) {
        std::complex<double> s = 0.0;
        for (int k = 0; k < m; ++k) s += std::exp((a - kI * omega) * static_cast<double>(k));
        acc *= s;
    }
    return acc;
}

RefinementFilter refinement_filter(const RootVector& roots, int m) {
    if (m < 2) throw Error(ErrorCode::InvalidArgument, "refinement factor must be at least 2");
    if (roots.empty()) throw Error(ErrorCode::InvalidArgument, "refinement filter needs roots");
    CPoly poly{1.0};
    for (const cplx& a : roots) {
        CPoly factor(static_cast<std::size_t>(m));
        for (int k = 0; k < m; ++k) factor[static_cast<std::size_t>(k)] = std::exp(a * static_cast<double>(k));
        poly = multiply(poly, factor);
    }
    const double norm = std::pow(static_cast<double>(m), -static_cast<double>(roots.order()) + 1.0);
    RefinementFilter out;
    out.roots = roots;
    out.factor = m;
    out.taps.reserve(poly.size());
    for (const auto& z : poly) {
        out.taps.push_back(norm * z.real());
        out.imag_residue = std::max(out.imag_residue, std::abs(norm * z.imag()));
    }
    if (out.imag_residue > kRealTolerance) {
        throw Error(ErrorCode::NotSymmetric, "refinement filter taps are not real for these roots");
    }
    return out;
}

std::complex<double> pre_filter_transfer(const Interpolator& interp, int m0, double omega) {
    const double n0 = interp.order();
    const double shift = m0 * (n0 / 2.0 - 1.0);
    return std::exp(-kI * omega * shift) * interp.lambda().transfer(m0 * omega) *
           refinement_transfer(interp.roots().scaled_down(m0), m0, omega);
}

PreFilter pre_filter(const Interpolator& interp, int m0) {
    if (m0 < 2 || m0 % 2 != 0) throw Error(ErrorCode::OddFactor, "the pre-filter needs an even factor m0");
    const int n0 = interp.order();
    const std::int64_t half_m0 = m0 / 2;
    const std::int64_t shift = half_m0 * n0 - m0;
    const std::int64_t top = interp.lambda().max_index();

    // Delay and half-integer lambda shifts land on integer exponents for even m0;
    // the smallest exponent is shift - top*m0/2 = 0.
    std::vector<double> lambda_poly(static_cast<std::size_t>(shift + top * half_m0 + 1), 0.0);
    for (std::int64_t n = -top; n <= top; ++n) {
        lambda_poly[static_cast<std::size_t>(shift + n * half_m0)] += interp.lambda()[n];
    }
    const RefinementFilter h = refinement_filter(interp.roots().scaled_down(m0), m0);

    PreFilter out;
    out.factor = m0;
    out.order = n0;
    out.shift = shift;
    out.taps.assign(lambda_poly.size() + h.taps.size() - 1, 0.0);
    for (std::size_t i = 0; i < lambda_poly.size(); ++i) {
        if (lambda_poly[i] == 0.0) continue;
        for (std::size_t j = 0; j < h.taps.size(); ++j) out.taps[i + j] += lambda_poly[i] * h.taps[j];
    }
    return out;
}

double SampleSequence::at(std::size_t channel, std::int64_t index) const {
    const auto& v = values[channel];
    if (v.empty()) return 0.0;
    if (periodic) {
        const auto p = static_cast<std::int64_t>(v.size());
        return v[static_cast<std::size_t>(((index % p) + p) % p)];
    }
    const std::int64_t i = index - origin;
    if (i < 0 || i >= static_cast<std::int64_t>(v.size())) return 0.0;
    return v[static_cast<std::size_t>(i)];
}

double SampleSequence::parameter(std::int64_t index) const {
    if (basis == SampleBasis::Interpolator) return static_cast<double>(index) / static_cast<double>(scale);
    return (static_cast<double>(index) + 0.5 * order) / static_cast<double>(scale) - (order - 1);
}

SampleSequence SampleSequence::from_samples(std::vector<std::vector<double>> channels, int order, bool periodic,
                                            std::int64_t origin) {
    SampleSequence s;
    s.values = std::move(channels);
    s.order = order;
    s.periodic = periodic;
    s.origin = periodic ? 0 : origin;
    return s;
}

SampleSequence change_of_basis(const SampleSequence& c, const PreFilter& pre) {
    if (c.basis != SampleBasis::Interpolator || c.scale != 1) {
        throw Error(ErrorCode::InvalidArgument, "change of basis expects interpolator samples at unit scale");
    }
    SampleSequence out = upsample_filter(c, pre.factor, pre.taps);
    out.scale = pre.factor;
    out.basis = SampleBasis::BSpline;
    out.order = pre.order;
    return out;
}

SampleSequence refine_step(const SampleSequence& previous, const RootVector& roots, int m) {
    if (previous.basis != SampleBasis::BSpline) {
        throw Error(ErrorCode::InvalidArgument, "refinement steps act on B-spline coefficients; pre-filter first");
    }
    const std::int64_t scale = previous.scale * m;
    const RefinementFilter h = refinement_filter(roots.scaled_down(static_cast<double>(scale)), m);
    SampleSequence out = upsample_filter(previous, m, h.taps);
    out.scale = scale;
    out.basis = SampleBasis::BSpline;
    out.order = previous.order;
    return out;
}

std::vector<SampleSequence> refine_levels(const SampleSequence& c, const Interpolator& interp, int m0, int m,
                                          int depth) {
    if (depth < 0) throw Error(ErrorCode::InvalidArgument, "depth must be nonnegative");
    std::vector<SampleSequence> levels;
    levels.reserve(static_cast<std::size_t>(depth) + 1);
    levels.push_back(change_of_basis(c, pre_filter(interp, m0)));
    for (int n = 1; n <= depth; ++n) levels.push_back(refine_step(levels.back(), interp.roots(), m));
    return levels;
}

SampleSequence refine_to_depth(const SampleSequence& c, const Interpolator& interp, int m0, int m, int depth) {
    return refine_levels(c, interp, m0, m, depth).back();
}

SequenceEvaluator::SequenceEvaluator(const SampleSequence& seq, const Interpolator& interp)
    : seq_(&seq), interp_(&interp) {
    if (seq.basis == SampleBasis::BSpline) {
        causal_ = CausalBSplineEvaluator(interp.roots().scaled_down(static_cast<double>(seq.scale)));
    }
}

double SequenceEvaluator::operator()(std::size_t channel, double t) const {
    double acc = 0.0;
    if (seq_->basis == SampleBasis::Interpolator) {
        const int hw = interp_->support_halfwidth();
        const auto lo = static_cast<std::int64_t>(std::ceil(t - hw));
        const auto hi = static_cast<std::int64_t>(std::floor(t + hw));
        for (std::int64_t k = lo; k <= hi; ++k) acc += seq_->at(channel, k) * (*interp_)(t - static_cast<double>(k));
        return acc;
    }
    const int n0 = seq_->order;
    const double x = static_cast<double>(seq_->scale) * (t + n0 - 1);
    const auto hi = static_cast<std::int64_t>(std::floor(x));
    for (std::int64_t l = hi - n0 + 1; l <= hi; ++l) acc += seq_->at(channel, l) * causal_(x - static_cast<double>(l));
    return acc;
}

}  // namespace expinterp
