#pragma once

#include "abp/divisor.hpp"
#include "abp/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <limits>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace abp {

using cplx = std::complex<double>;

/// Absolute tolerance plus an iteration cap shared by the iterative solvers.
struct Tolerance {
    double abs_tol = 1e-10;
    int max_iter = 200;

    void validate() const {
        if (!(abs_tol >= 1e-14 && abs_tol <= 1e-2))
            fail(ErrorCode::InvalidArgument, "abs_tol must lie in [1e-14, 1e-2], got " + std::to_string(abs_tol));
        if (max_iter <= 0) fail(ErrorCode::InvalidArgument, "max_iter must be positive");
    }
};

/// Counter-clockwise circle sampled at `samples` equally spaced points.
struct Contour {
    cplx center{0.0, 0.0};
    double radius = 1.0;
    std::size_t samples = 64;

    void validate() const {
        if (!(radius > 0.0) || !std::isfinite(radius))
            fail(ErrorCode::InvalidArgument, "contour radius must be positive");
        if (samples < 64 || !std::has_single_bit(samples))
            fail(ErrorCode::InvalidArgument, "contour samples must be a power of two >= 64");
    }

    [[nodiscard]] cplx point(std::size_t k, std::size_t n) const {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        return center + std::polar(radius, theta);
    }
};

inline constexpr std::size_t kMaxContourSamples = std::size_t{1} << 20;

/// Winding number of f around 0 along the contour. Refines by doubling the
/// sample count until two consecutive levels agree and no argument
/// increment exceeds pi/4.
template <class F>
int winding_number(F&& f, const Contour& contour, const Tolerance& tol = {}) {
    contour.validate();
    tol.validate();

    auto sample = [&](std::size_t k, std::size_t n) {
        const cplx value = f(contour.point(k, n));
        if (!(std::abs(value) > tol.abs_tol))
            fail(ErrorCode::ZeroOnContour, "|f| <= abs_tol at sample angle index " + std::to_string(k) + "/" +
                                               std::to_string(n));
        return value;
    };

    std::size_t n = contour.samples;
    std::vector<cplx> values(n);
    for (std::size_t k = 0; k < n; ++k) values[k] = sample(k, n);

    // Total argument change in turns, plus the largest single increment.
    auto count = [](const std::vector<cplx>& v) {
        double total = 0.0, largest = 0.0;
        for (std::size_t k = 0; k < v.size(); ++k) {
            const double step = std::arg(v[(k + 1) % v.size()] / v[k]);
            total += step;
            largest = std::max(largest, std::abs(step));
        }
        return std::pair{static_cast<int>(std::lround(total / (2.0 * std::numbers::pi))), largest};
    };

    constexpr double max_step = std::numbers::pi / 4.0;
    int previous = count(values).first;
    while (2 * n <= kMaxContourSamples) {
        std::vector<cplx> refined(2 * n);
        for (std::size_t k = 0; k < n; ++k) {
            refined[2 * k] = values[k];
            refined[2 * k + 1] = sample(2 * k + 1, 2 * n);
        }
        values = std::move(refined);
        n *= 2;
        const auto [current, largest] = count(values);
        if (current == previous && largest <= max_step) return current;
        previous = current;
    }
    fail(ErrorCode::NoConvergence, "winding number did not stabilise below 2^20 samples");
}

namespace detail {

// Horner evaluation of p and p' for ascending coefficients.
inline std::pair<cplx, cplx> horner(std::span<const cplx> coeffs, cplx z) {
    cplx p = coeffs.back();
    cplx dp{0.0, 0.0};
    for (std::size_t k = coeffs.size() - 1; k-- > 0;) {
        dp = dp * z + p;
        p = p * z + coeffs[k];
    }
    return {p, dp};
}

} // namespace detail

/// All roots of sum_k coeffs[k] z^k (ascending powers) with multiplicity,
/// by Aberth-Ehrlich simultaneous iteration. Roots closer than 10*abs_tol
/// are merged into one point of higher multiplicity.
inline Divisor polynomial_roots(std::span<const cplx> coeffs, const Tolerance& tol = {}) {
    tol.validate();
    if (coeffs.size() < 2) fail(ErrorCode::DegenerateInput, "polynomial must have degree >= 1");
    if (coeffs.size() > 65) fail(ErrorCode::InvalidArgument, "degree is capped at 64");
    if (std::abs(coeffs.back()) < tol.abs_tol)
        fail(ErrorCode::DegenerateInput, "leading coefficient magnitude below abs_tol");

    const std::size_t degree = coeffs.size() - 1;
    std::vector<cplx> monic(coeffs.begin(), coeffs.end());
    for (auto& c : monic) c /= coeffs.back();

    // Fujiwara-type bound for the initial circle.
    double radius = 0.0;
    for (std::size_t k = 0; k < degree; ++k) {
        const double mag = std::abs(monic[k]);
        if (mag > 0.0) radius = std::max(radius, std::pow(mag, 1.0 / static_cast<double>(degree - k)));
    }
    radius = std::max(radius, 1e-3);

    std::vector<cplx> z(degree);
    for (std::size_t k = 0; k < degree; ++k) {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(degree) + 0.4;
        z[k] = std::polar(radius, theta);
    }

    for (int iter = 0; iter < tol.max_iter; ++iter) {
        bool converged = true;
        for (std::size_t i = 0; i < degree; ++i) {
            const auto [p, dp] = detail::horner(monic, z[i]);
            if (p == cplx{0.0, 0.0}) continue;
            const cplx ratio = p / dp;
            cplx repulsion{0.0, 0.0};
            for (std::size_t j = 0; j < degree; ++j)
                if (j != i && z[i] != z[j]) repulsion += 1.0 / (z[i] - z[j]);
            const cplx step = ratio / (1.0 - ratio * repulsion);
            if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) continue;
            z[i] -= step;
            if (std::abs(step) > tol.abs_tol * 1e-2 * std::max(1.0, std::abs(z[i]))) converged = false;
        }
        if (converged) break;
    }

    // Cluster near-coincident roots and replace each cluster by its centroid.
    const double merge = 10.0 * tol.abs_tol;
    std::vector<int> cluster(degree, -1);
    int clusters = 0;
    for (std::size_t i = 0; i < degree; ++i) {
        if (cluster[i] >= 0) continue;
        cluster[i] = clusters;
        std::vector<std::size_t> frontier{i};
        while (!frontier.empty()) {
            const std::size_t a = frontier.back();
            frontier.pop_back();
            for (std::size_t b = 0; b < degree; ++b)
                if (cluster[b] < 0 && std::abs(z[a] - z[b]) <= merge) {
                    cluster[b] = clusters;
                    frontier.push_back(b);
                }
        }
        ++clusters;
    }
    std::vector<cplx> centroid(static_cast<std::size_t>(clusters), cplx{0.0, 0.0});
    std::vector<int> size(static_cast<std::size_t>(clusters), 0);
    for (std::size_t i = 0; i < degree; ++i) {
        centroid[static_cast<std::size_t>(cluster[i])] += z[i];
        ++size[static_cast<std::size_t>(cluster[i])];
    }
    std::vector<cplx> roots;
    roots.reserve(degree);
    for (std::size_t i = 0; i < degree; ++i) {
        const auto c = static_cast<std::size_t>(cluster[i]);
        roots.push_back(size[c] > 1 ? centroid[c] / static_cast<double>(size[c]) : z[i]);
    }
    return Divisor(std::move(roots), Ambient::plane());
}

/// Solves g(t) = target on a bracket where g is monotone: bisection with
/// secant steps, falling back to bisection whenever the secant stalls.
template <class G>
double find_root_monotone(G&& g, double lo, double hi, double target, const Tolerance& tol = {}) {
    tol.validate();
    if (lo > hi) std::swap(lo, hi);
    double f_lo = g(lo) - target;
    double f_hi = g(hi) - target;
    if (std::abs(f_lo) <= tol.abs_tol) return lo;
    if (std::abs(f_hi) <= tol.abs_tol) return hi;
    if (!(f_lo * f_hi < 0.0)) fail(ErrorCode::BadBracket, "g(lo) and g(hi) do not straddle the target");

    bool bisect_next = false;
    for (int iter = 0; iter < tol.max_iter; ++iter) {
        const double width = hi - lo;
        double t = 0.5 * (lo + hi);
        if (!bisect_next) {
            const double secant = hi - f_hi * (hi - lo) / (f_hi - f_lo);
            if (secant > lo && secant < hi) t = secant;
        }
        const double f_t = g(t) - target;
        if (std::abs(f_t) <= tol.abs_tol) return t;
        if ((f_t < 0.0) == (f_lo < 0.0)) {
            lo = t;
            f_lo = f_t;
        } else {
            hi = t;
            f_hi = f_t;
        }
        bisect_next = (hi - lo) > 0.5 * width;
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t)))
            fail(ErrorCode::NoConvergence, "bracket collapsed without meeting abs_tol (g not continuous?)");
    }
    fail(ErrorCode::NoConvergence, "find_root_monotone exceeded max_iter");
}

} // namespace abp
