#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "expinterp/half_grid.hpp"

namespace expinterp {

/// c * s^power * exp(rate * s), with s measured from the start of its piece.
struct ExpTerm {
    std::complex<double> coeff;
    int power = 0;
    std::complex<double> rate;
};

using ExpPiece = std::vector<ExpTerm>;

/// Exact piecewise exponential-polynomial on a uniform knot grid.
///
/// Piece i covers [origin + i*step, origin + (i+1)*step). Evaluation is
/// right-continuous at knots and exactly zero outside the support. Values
/// are immutable after construction.
class PiecewiseExpPoly {
public:
    PiecewiseExpPoly() = default;
    PiecewiseExpPoly(HalfGrid origin, HalfGrid step, std::vector<ExpPiece> pieces);

    HalfGrid origin() const { return origin_; }
    HalfGrid step() const { return step_; }
    HalfGrid support_end() const { return origin_ + step_ * static_cast<std::int64_t>(pieces_.size()); }
    double support_lo() const { return origin_.value(); }
    double support_hi() const { return support_end().value(); }
    std::size_t piece_count() const { return pieces_.size(); }
    std::span<const ExpPiece> pieces() const { return pieces_; }

    std::complex<double> eval_complex(double t) const;

    /// Real part of the value; callers that need the realness residue use eval_complex.
    double operator()(double t) const { return eval_complex(t).real(); }

    /// Value of piece i (or its derivative) at local coordinate s, which may
    /// equal step to obtain the left limit at the next knot.
    std::complex<double> piece_value(std::size_t i, double s, int derivative = 0) const;

    PiecewiseExpPoly derivative() const;

    /// t -> f(t - by).
    PiecewiseExpPoly shifted(HalfGrid by) const;

    /// Same function with every piece split into halves (step must be 1).
    PiecewiseExpPoly split_to_half_step() const;

    PiecewiseExpPoly scaled(std::complex<double> factor) const;

    /// Largest |Im f| over a uniform sample of each piece.
    double max_imag_residue(int samples_per_piece = 16) const;

    /// Adds factor * other into this function, growing the support as needed.
    /// Both must share the step and lie on a common knot grid.
    void accumulate(const PiecewiseExpPoly& other, std::complex<double> factor = 1.0);

private:
    HalfGrid origin_;
    HalfGrid step_ = HalfGrid::integer(1);
    std::vector<ExpPiece> pieces_;
};

/// Merges terms with identical power and rate and drops exact zeros.
void simplify(ExpPiece& piece);

/// Re-expresses a piece in the local coordinate s' = s - delta.
ExpPiece shift_local(const ExpPiece& piece, double delta);

/// f * (t -> exp(rate t) on [0,1)) for f with unit step starting at 0.
/// Rates within kRootMergeTolerance of a term rate integrate to a power bump.
PiecewiseExpPoly convolve_with_exponential_box(const PiecewiseExpPoly& f, std::complex<double> rate);

}  // namespace expinterp
