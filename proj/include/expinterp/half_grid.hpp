#pragma once

#include <compare>
#include <cstdint>

namespace expinterp {

/// Exact position on the half-integer grid, stored as a count of halves.
///
/// Knots of causal B-splines sit on integers, centered B-splines of odd
/// order and the interpolators sit on half-integers; keeping the count
/// integral means shifted pieces always land on the same grid.
class HalfGrid {
public:
    constexpr HalfGrid() = default;

    static constexpr HalfGrid halves(std::int64_t count) { return HalfGrid(count); }
    static constexpr HalfGrid integer(std::int64_t n) { return HalfGrid(2 * n); }

    constexpr std::int64_t count() const { return halves_; }
    constexpr double value() const { return 0.5 * static_cast<double>(halves_); }

    constexpr HalfGrid operator+(HalfGrid o) const { return HalfGrid(halves_ + o.halves_); }
    constexpr HalfGrid operator-(HalfGrid o) const { return HalfGrid(halves_ - o.halves_); }
    constexpr HalfGrid operator-() const { return HalfGrid(-halves_); }
    constexpr HalfGrid operator*(std::int64_t k) const { return HalfGrid(halves_ * k); }

    constexpr auto operator<=>(const HalfGrid&) const = default;

private:
    constexpr explicit HalfGrid(std::int64_t h) : halves_(h) {}
    std::int64_t halves_ = 0;
};

}  // namespace expinterp
