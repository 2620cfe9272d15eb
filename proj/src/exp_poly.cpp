#include "expinterp/exp_poly.hpp"

#include <algorithm>
#include <cmath>

#include "expinterp/error.hpp"
#include "expinterp/root_vector.hpp"

namespace expinterp {

namespace {

double factorial_ratio(int n, int k) {
    // n! / (n-k)!
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= static_cast<double>(n - i);
    return r;
}

double binomial(int n, int k) {
    return factorial_ratio(n, k) / factorial_ratio(k, k);
}

std::complex<double> eval_term(const ExpTerm& term, double s, int derivative) {
    const std::complex<double> e = std::exp(term.rate * s);
    if (derivative == 0) return term.coeff * std::pow(s, term.power) * e;
    // Leibniz rule on s^p * exp(r s).
    std::complex<double> acc = 0.0;
    const int top = std::min(derivative, term.power);
    for (int j = 0; j <= top; ++j) {
        const double poly = factorial_ratio(term.power, j) * std::pow(s, term.power - j);
        acc += binomial(derivative, j) * poly * std::pow(term.rate, derivative - j);
    }
    return term.coeff * acc * e;
}

}  // namespace

void simplify(ExpPiece& piece) {
    ExpPiece out;
    out.reserve(piece.size());
    for (const ExpTerm& t : piece) {
        auto it = std::find_if(out.begin(), out.end(), [&](const ExpTerm& o) {
            return o.power == t.power && o.rate == t.rate;
        });
        if (it == out.end()) {
            out.push_back(t);
        } else {
            it->coeff += t.coeff;
        }
    }
    std::erase_if(out, [](const ExpTerm& t) { return t.coeff == 0.0; });
    piece = std::move(out);
}

ExpPiece shift_local(const ExpPiece& piece, double delta) {
    ExpPiece out;
    for (const ExpTerm& t : piece) {
        const std::complex<double> scale = t.coeff * std::exp(t.rate * delta);
        for (int k = 0; k <= t.power; ++k) {
            out.push_back({scale * binomial(t.power, k) * std::pow(delta, t.power - k), k, t.rate});
        }
    }
    simplify(out);
    return out;
}

PiecewiseExpPoly::PiecewiseExpPoly(HalfGrid origin, HalfGrid step, std::vector<ExpPiece> pieces)
    : origin_(origin), step_(step), pieces_(std::move(pieces)) {
    if (step_.count() <= 0) throw Error(ErrorCode::InvalidArgument, "knot step must be positive");
    for (auto& p : pieces_) simplify(p);
}

std::complex<double> PiecewiseExpPoly::eval_complex(double t) const {
    if (!std::isfinite(t) || pieces_.empty()) return 0.0;
    const double h = step_.value();
    const double x = (t - origin_.value()) / h;
    const double fi = std::floor(x);
    if (fi < 0.0 || fi >= static_cast<double>(pieces_.size())) return 0.0;
    const auto i = static_cast<std::size_t>(fi);
    const double s = t - (origin_.value() + static_cast<double>(i) * h);
    return piece_value(i, s, 0);
}

std::complex<double> PiecewiseExpPoly::piece_value(std::size_t i, double s, int derivative) const {
    std::complex<double> acc = 0.0;
    for (const ExpTerm& t : pieces_.at(i)) acc += eval_term(t, s, derivative);
    return acc;
}

PiecewiseExpPoly PiecewiseExpPoly::derivative() const {
    std::vector<ExpPiece> out(pieces_.size());
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        for (const ExpTerm& t : pieces_[i]) {
            if (t.power > 0) out[i].push_back({t.coeff * static_cast<double>(t.power), t.power - 1, t.rate});
            if (t.rate != 0.0) out[i].push_back({t.coeff * t.rate, t.power, t.rate});
        }
    }
    return PiecewiseExpPoly(origin_, step_, std::move(out));
}

PiecewiseExpPoly PiecewiseExpPoly::shifted(HalfGrid by) const {
    return PiecewiseExpPoly(origin_ + by, step_, pieces_);
}

PiecewiseExpPoly PiecewiseExpPoly::split_to_half_step() const {
    if (step_ != HalfGrid::integer(1)) {
        throw Error(ErrorCode::InvalidArgument, "split_to_half_step requires a unit knot step");
    }
    std::vector<ExpPiece> out;
    out.reserve(2 * pieces_.size());
    for (const ExpPiece& p : pieces_) {
        out.push_back(p);
        out.push_back(shift_local(p, 0.5));
    }
    return PiecewiseExpPoly(origin_, HalfGrid::halves(1), std::move(out));
}

PiecewiseExpPoly PiecewiseExpPoly::scaled(std::complex<double> factor) const {
    auto out = pieces_;
    for (auto& p : out) {
        for (auto& t : p) t.coeff *= factor;
    }
    return PiecewiseExpPoly(origin_, step_, std::move(out));
}

double PiecewiseExpPoly::max_imag_residue(int samples_per_piece) const {
    double worst = 0.0;
    const double h = step_.value();
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        for (int j = 0; j < samples_per_piece; ++j) {
            const double s = h * static_cast<double>(j) / samples_per_piece;
            worst = std::max(worst, std::abs(piece_value(i, s).imag()));
        }
    }
    return worst;
}

void PiecewiseExpPoly::accumulate(const PiecewiseExpPoly& other, std::complex<double> factor) {
    if (other.pieces_.empty()) return;
    if (pieces_.empty()) {
        *this = other.scaled(factor);
        return;
    }
    if (other.step_ != step_ || (other.origin_ - origin_).count() % step_.count() != 0) {
        throw Error(ErrorCode::InvalidArgument, "accumulate requires a shared knot grid");
    }
    const HalfGrid lo = std::min(origin_, other.origin_);
    const HalfGrid hi = std::max(support_end(), other.support_end());
    const auto count = static_cast<std::size_t>((hi - lo).count() / step_.count());
    std::vector<ExpPiece> merged(count);
    const auto own_offset = static_cast<std::size_t>((origin_ - lo).count() / step_.count());
    const auto other_offset = static_cast<std::size_t>((other.origin_ - lo).count() / step_.count());
    for (std::size_t i = 0; i < pieces_.size(); ++i) merged[own_offset + i] = pieces_[i];
    for (std::size_t i = 0; i < other.pieces_.size(); ++i) {
        for (const ExpTerm& t : other.pieces_[i]) {
            merged[other_offset + i].push_back({t.coeff * factor, t.power, t.rate});
        }
    }
    for (auto& p : merged) simplify(p);
    origin_ = lo;
    pieces_ = std::move(merged);
}

PiecewiseExpPoly convolve_with_exponential_box(const PiecewiseExpPoly& f, std::complex<double> rate) {
    if (f.step() != HalfGrid::integer(1) || f.origin() != HalfGrid::integer(0)) {
        throw Error(ErrorCode::InvalidArgument, "causal convolution needs unit pieces starting at 0");
    }
    // With F(t) = int_{-inf}^t f(u) e^{a(t-u)} du, the result is F(t) - e^a F(t-1).
    // F restricted to piece j is e^{a s} F_{j-1}(1) + int_0^s f_j(u) e^{a(s-u)} du.
    const std::size_t n = f.piece_count();
    std::vector<ExpPiece> primitive(n + 1);
    std::complex<double> carry = 0.0;
    for (std::size_t j = 0; j <= n; ++j) {
        ExpPiece& out = primitive[j];
        if (carry != 0.0) out.push_back({carry, 0, rate});
        if (j < n) {
            for (const ExpTerm& t : f.pieces()[j]) {
                const std::complex<double> d = t.rate - rate;
                const int p = t.power;
                if (std::abs(d) < kRootMergeTolerance) {
                    out.push_back({t.coeff / static_cast<double>(p + 1), p + 1, rate});
                    continue;
                }
                // int_0^s u^p e^{d u} du = e^{d s} sum_k (-1)^k p!/(p-k)! s^{p-k} / d^{k+1} - (-1)^p p! / d^{p+1}
                std::complex<double> dpow = d;
                for (int k = 0; k <= p; ++k) {
                    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
                    out.push_back({t.coeff * sign * factorial_ratio(p, k) / dpow, p - k, t.rate});
                    if (k < p) dpow *= d;
                }
                const double sign = (p % 2 == 0) ? 1.0 : -1.0;
                out.push_back({-t.coeff * sign * factorial_ratio(p, p) / dpow, 0, rate});
            }
        }
        simplify(out);
        carry = 0.0;
        for (const ExpTerm& t : out) carry += eval_term(t, 1.0, 0);
    }

    const std::complex<double> ea = std::exp(rate);
    std::vector<ExpPiece> result(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
        result[j] = primitive[j];
        if (j > 0) {
            for (const ExpTerm& t : primitive[j - 1]) result[j].push_back({-ea * t.coeff, t.power, t.rate});
        }
    }
    return PiecewiseExpPoly(HalfGrid::integer(0), HalfGrid::integer(1), std::move(result));
}

}  // namespace expinterp
