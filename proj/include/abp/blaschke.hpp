#pragma once

#include "abp/divisor.hpp"
#include "abp/error.hpp"
#include "abp/numerics.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

namespace abp {

/// Disk automorphism factor normalised to fix 1:
///   (1 - conj(a)) / (1 - a) * (z - a) / (1 - conj(a) z).
/// Returns exactly 1 whenever numerator and denominator coincide bitwise
/// (in particular at z = 1).
inline cplx blaschke_factor(cplx a, cplx z) {
    const cplx abar = std::conj(a);
    const cplx num = (1.0 - abar) * (z - a);
    const cplx den = (1.0 - a) * (1.0 - abar * z);
    if (num == den) return {1.0, 0.0};
    return num / den;
}

/// Logarithmic derivative of blaschke_factor(a, .) at z.
inline cplx blaschke_factor_logderiv(cplx a, cplx z) {
    const cplx abar = std::conj(a);
    return 1.0 / (z - a) + abar / (1.0 - abar * z);
}

enum class CenteringClass { fixed_point_centered, zero_centered, none };

inline constexpr double kZeroCenteredTolerance = 1e-8;
inline constexpr double kPoleProximity = 1e-14;

/// Finite Blaschke product fixing the boundary point 1.
class BlaschkeProduct {
public:
    explicit BlaschkeProduct(Divisor zeros, CenteringClass centering = CenteringClass::none)
        : zeros_(zeros.with_ambient(Ambient::disk())), centering_(centering) {
        zeros_.require_inside();
    }

    [[nodiscard]] const Divisor& zeros() const noexcept { return zeros_; }
    [[nodiscard]] std::size_t degree() const noexcept { return zeros_.size(); }
    [[nodiscard]] CenteringClass centering() const noexcept { return centering_; }

    [[nodiscard]] cplx operator()(cplx z) const { return eval(z); }

    [[nodiscard]] cplx eval(cplx z) const {
        if (!(std::abs(z) <= 1.0 + 1e-9)) fail(ErrorCode::OutOfDomain, "Blaschke product evaluated outside the closed disk");
        cplx value{1.0, 0.0};
        for (const auto& a : zeros_.points()) {
            if (std::abs(1.0 - std::conj(a) * z) < kPoleProximity)
                fail(ErrorCode::PoleProximity, "evaluation point within 1e-14 of a pole");
            value *= blaschke_factor(a, z);
        }
        return value;
    }

private:
    Divisor zeros_;
    CenteringClass centering_;
};

namespace detail {

inline cplx barycenter_residual(const Divisor& d, cplx w) {
    cplx s{0.0, 0.0};
    for (const auto& p : d.points()) s += (p - w) / (1.0 - std::conj(w) * p);
    return s;
}

// Damped Newton on the real 2x2 system; returns {w, converged}.
inline std::pair<cplx, bool> barycenter_newton(const Divisor& d, cplx w, const Tolerance& tol) {
    cplx residual = barycenter_residual(d, w);
    for (int iter = 0; iter < tol.max_iter; ++iter) {
        if (std::abs(residual) <= tol.abs_tol) return {w, true};
        cplx dw{0.0, 0.0}, dwbar{0.0, 0.0};
        for (const auto& p : d.points()) {
            const cplx den = 1.0 - std::conj(w) * p;
            dw -= 1.0 / den;
            dwbar += (p - w) * p / (den * den);
        }
        const cplx col_x = dw + dwbar;
        const cplx col_y = cplx{0.0, 1.0} * (dw - dwbar);
        const double det = col_x.real() * col_y.imag() - col_y.real() * col_x.imag();
        if (det == 0.0 || !std::isfinite(det)) return {w, false};
        const double x = (-residual.real() * col_y.imag() + col_y.real() * residual.imag()) / det;
        const double y = (-col_x.real() * residual.imag() + col_x.imag() * residual.real()) / det;
        cplx step{x, y};

        bool accepted = false;
        for (int halving = 0; halving < 40; ++halving) {
            const cplx candidate = w + step;
            if (std::abs(candidate) < 1.0) {
                const cplx r_new = barycenter_residual(d, candidate);
                if (std::abs(r_new) < std::abs(residual)) {
                    w = candidate;
                    residual = r_new;
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if (!accepted) return {w, std::abs(residual) <= tol.abs_tol};
    }
    return {w, std::abs(residual) <= tol.abs_tol};
}

} // namespace detail

/// The unique w in the disk with sum_k (p_k - w) / (1 - conj(w) p_k) = 0.
inline cplx conformal_barycenter(const Divisor& d, const Tolerance& tol = {}) {
    tol.validate();
    const Divisor pts = d.with_ambient(Ambient::disk());
    pts.require_inside();

    cplx mean{0.0, 0.0};
    for (const auto& p : pts.points()) mean += p;
    mean /= static_cast<double>(pts.size());

    if (auto [w, ok] = detail::barycenter_newton(pts, mean, tol); ok) return w;

    // Fallback: exhaustive grid at resolution 1e-3, then polish.
    constexpr double step = 1e-3;
    cplx best = mean;
    double best_res = std::abs(detail::barycenter_residual(pts, mean));
    for (double x = -1.0 + step; x < 1.0; x += step)
        for (double y = -1.0 + step; y < 1.0; y += step) {
            const cplx w{x, y};
            if (std::abs(w) >= 1.0) continue;
            const double res = std::abs(detail::barycenter_residual(pts, w));
            if (res < best_res) {
                best_res = res;
                best = w;
            }
        }
    if (auto [w, ok] = detail::barycenter_newton(pts, best, tol); ok) return w;
    fail(ErrorCode::NoConvergence, "conformal barycenter Newton iteration failed from mean and grid seeds");
}

/// Builds a Blaschke product in the requested normalisation, verifying the
/// class after construction.
inline BlaschkeProduct make_centered(const Divisor& zeros, CenteringClass centering, const Tolerance& tol = {}) {
    switch (centering) {
    case CenteringClass::fixed_point_centered: {
        std::vector<cplx> pts(zeros.points().begin(), zeros.points().end());
        bool has_origin = false;
        for (auto& p : pts)
            if (std::abs(p) <= 1e-14) {
                p = cplx{0.0, 0.0};
                has_origin = true;
            }
        if (!has_origin) fail(ErrorCode::ClassViolation, "fixed point centered product needs a zero at the origin");
        BlaschkeProduct b(Divisor(std::move(pts), Ambient::disk()), centering);
        if (b.eval(cplx{0.0, 0.0}) != cplx{0.0, 0.0})
            fail(ErrorCode::ClassViolation, "constructed product does not fix 0");
        return b;
    }
    case CenteringClass::zero_centered: {
        const cplx w = conformal_barycenter(zeros, tol);
        if (std::abs(w) > kZeroCenteredTolerance)
            fail(ErrorCode::ClassViolation, "conformal barycenter of zeros is (" + std::to_string(w.real()) + ", " +
                                                std::to_string(w.imag()) + "), not 0");
        return BlaschkeProduct(zeros, centering);
    }
    case CenteringClass::none: return BlaschkeProduct(zeros, centering);
    }
    fail(ErrorCode::InvalidArgument, "unknown centering class");
}

/// Reports which normalisation a zero set satisfies (fixed point centered wins ties).
inline CenteringClass centering_of(const Divisor& zeros, const Tolerance& tol = {}) {
    for (const auto& p : zeros.points())
        if (p == cplx{0.0, 0.0}) return CenteringClass::fixed_point_centered;
    if (std::abs(conformal_barycenter(zeros, tol)) <= kZeroCenteredTolerance) return CenteringClass::zero_centered;
    return CenteringClass::none;
}

} // namespace abp
