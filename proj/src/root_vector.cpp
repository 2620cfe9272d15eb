#include "expinterp/root_vector.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <numbers>
#include <string>

#include "expinterp/error.hpp"

namespace expinterp {

namespace {

std::vector<cplx> merge_close_roots(std::vector<cplx> roots) {
    for (std::size_t i = 1; i < roots.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (std::abs(roots[i] - roots[j]) < kRootMergeTolerance) {
                roots[i] = roots[j];
                break;
            }
        }
    }
    return roots;
}

int multiplicity_of(const std::vector<RootVector::Distinct>& d, cplx z, double tol) {
    for (const auto& e : d) {
        if (std::abs(e.root - z) < tol) return e.multiplicity;
    }
    return 0;
}

}  // namespace

RootVector::RootVector(std::initializer_list<cplx> roots)
    : roots_(merge_close_roots(std::vector<cplx>(roots))) {}

RootVector::RootVector(std::vector<cplx> roots) : roots_(merge_close_roots(std::move(roots))) {}

std::vector<RootVector::Distinct> RootVector::distinct() const {
    std::vector<Distinct> out;
    for (const cplx& r : roots_) {
        auto it = std::find_if(out.begin(), out.end(), [&](const Distinct& d) { return d.root == r; });
        if (it == out.end()) {
            out.push_back({r, 1});
        } else {
            ++it->multiplicity;
        }
    }
    return out;
}

bool RootVector::is_conjugate_symmetric(double tol) const {
    const auto d = distinct();
    for (const auto& e : d) {
        if (multiplicity_of(d, -e.root, tol) != e.multiplicity) return false;
        if (multiplicity_of(d, std::conj(e.root), tol) != e.multiplicity) return false;
    }
    return true;
}

bool RootVector::is_riesz_admissible(double tol) const {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const auto d = distinct();
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (std::abs(d[i].root.real()) > tol) continue;
        for (std::size_t j = i + 1; j < d.size(); ++j) {
            if (std::abs(d[j].root.real()) > tol) continue;
            const double k = (d[i].root.imag() - d[j].root.imag()) / two_pi;
            const double nearest = std::round(k);
            if (nearest != 0.0 && std::abs(k - nearest) * two_pi < tol) return false;
        }
    }
    return true;
}

bool RootVector::contains_zero(double tol) const {
    return std::any_of(roots_.begin(), roots_.end(), [&](const cplx& r) { return std::abs(r) < tol; });
}

RootVector RootVector::scaled_down(double factor) const {
    std::vector<cplx> out(roots_);
    for (auto& r : out) r /= factor;
    return RootVector(std::move(out));
}

RootVector RootVector::concat(const RootVector& other) const {
    std::vector<cplx> out(roots_);
    out.insert(out.end(), other.roots_.begin(), other.roots_.end());
    return RootVector(std::move(out));
}

namespace {

[[noreturn]] void bad_root(std::string_view token) {
    throw Error(ErrorCode::InvalidArgument, "cannot parse root '" + std::string(token) + "'");
}

double parse_real(std::string_view token, bool unit_if_empty = false) {
    std::string_view s = token;
    double sign = 1.0;
    if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
        if (s.front() == '-') sign = -1.0;
        s.remove_prefix(1);
    }
    if (s.empty()) {
        if (!unit_if_empty) bad_root(token);
        return sign;  // a bare "i" or "-i"
    }
    double value = 1.0;
    bool divide = false;
    bool expect_factor = true;
    while (!s.empty()) {
        double factor = 0.0;
        if (s.starts_with("pi")) {
            factor = std::numbers::pi;
            s.remove_prefix(2);
        } else {
            const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), factor);
            if (ec != std::errc() || ptr == s.data()) bad_root(token);
            s.remove_prefix(static_cast<std::size_t>(ptr - s.data()));
        }
        value = divide ? value / factor : value * factor;
        divide = false;
        expect_factor = false;
        if (!s.empty() && (s.front() == '*' || s.front() == '/')) {
            divide = s.front() == '/';
            s.remove_prefix(1);
            expect_factor = true;
        }
    }
    if (expect_factor) bad_root(token);
    return sign * value;
}

}  // namespace

RootVector parse_roots(std::string_view text) {
    std::vector<cplx> roots;
    std::string compact;
    for (char c : text) {
        if (c != ' ' && c != '\t' && c != '(' && c != ')') compact.push_back(c);
    }
    if (compact.empty()) throw Error(ErrorCode::InvalidArgument, "empty root list");
    std::string_view rest = compact;
    while (true) {
        const std::size_t comma = rest.find(',');
        const std::string_view token = rest.substr(0, comma);
        if (token.empty()) bad_root(token);
        if (const std::size_t colon = token.find(':'); colon != std::string_view::npos) {
            roots.emplace_back(parse_real(token.substr(0, colon)), parse_real(token.substr(colon + 1)));
        } else if (token.back() == 'i' && !(token.ends_with("pi") && !token.ends_with("pii"))) {
            roots.emplace_back(0.0, parse_real(token.substr(0, token.size() - 1), true));
        } else {
            roots.emplace_back(parse_real(token), 0.0);
        }
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
    }
    return RootVector(std::move(roots));
}

}  // namespace expinterp
