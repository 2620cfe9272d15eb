#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string_view>
#include <vector>

namespace expinterp {

using cplx = std::complex<double>;

/// Roots closer than this are treated as one repeated root.
inline constexpr double kRootMergeTolerance = 1e-9;

/// Default tolerance of the Riesz admissibility test on purely imaginary roots.
inline constexpr double kRieszTolerance = 1e-9;

/// Pole list of an exponential B-spline.
///
/// The order of the roots is kept as given (it matters only for
/// bookkeeping; the B-spline is invariant under permutation). On
/// construction, roots within kRootMergeTolerance of an earlier root are
/// snapped onto it so that repeated roots are exactly equal.
class RootVector {
public:
    struct Distinct {
        cplx root;
        int multiplicity;
    };

    RootVector() = default;
    RootVector(std::initializer_list<cplx> roots);
    explicit RootVector(std::vector<cplx> roots);

    std::span<const cplx> roots() const { return roots_; }
    std::size_t order() const { return roots_.size(); }
    bool empty() const { return roots_.empty(); }
    const cplx& operator[](std::size_t i) const { return roots_[i]; }
    auto begin() const { return roots_.begin(); }
    auto end() const { return roots_.end(); }

    /// Distinct roots in order of first appearance with their multiplicities.
    std::vector<Distinct> distinct() const;

    /// True iff the multiset is closed under negation and under complex
    /// conjugation, i.e. every root is zero or paired with its opposite.
    /// This is what makes the centered B-spline real and even.
    bool is_conjugate_symmetric(double tol = kRootMergeTolerance) const;

    /// No two distinct purely imaginary roots differ by a nonzero multiple of 2*pi*i.
    bool is_riesz_admissible(double tol = kRieszTolerance) const;

    bool contains_zero(double tol = kRootMergeTolerance) const;

    /// Roots divided by a positive factor (alpha / m).
    RootVector scaled_down(double factor) const;

    RootVector concat(const RootVector& other) const;

    friend bool operator==(const RootVector&, const RootVector&) = default;

private:
    std::vector<cplx> roots_;
};

/// Parses a comma-separated root list such as "0, 2pi/3i, -2pi/3i" or
/// "0:0, 0.5:-1". A trailing i marks an imaginary value; re:im gives both
/// parts. Factors may be numbers or pi, joined by * or /, or juxtaposed.
/// InvalidArgument on anything else.
RootVector parse_roots(std::string_view text);

}  // namespace expinterp
