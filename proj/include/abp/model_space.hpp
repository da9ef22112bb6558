#pragma once

#include "abp/annulus.hpp"
#include "abp/divisor.hpp"
#include "abp/error.hpp"
#include "abp/numerics.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace abp {

/// Finite point set in C* whose product has modulus 1.
class NormalizedDivisor {
public:
    static constexpr double kProductTolerance = 1e-10;

    explicit NormalizedDivisor(Divisor points) : points_(points.with_ambient(Ambient::punctured_plane())) {
        points_.require_inside();
        if (std::abs(points_.log_product_modulus()) > kProductTolerance)
            fail(ErrorCode::InvalidArgument, "normalized divisor must have product modulus 1");
    }

    [[nodiscard]] const Divisor& points() const noexcept { return points_; }
    [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }

private:
    Divisor points_;
};

struct ModelCoordinates {
    double t = 0.0;
    std::vector<cplx> c; // c_1 .. c_{e-1}
    cplx phase{1.0, 0.0};
};

/// Pointwise phi_r(p) = ((|p| - r) / (1 - |p|)) p/|p|, rescaled so the product has modulus 1.
inline NormalizedDivisor phi_r(const Divisor& zeros, double r) {
    if (!(r > 0.0 && r < 1.0)) fail(ErrorCode::InvalidArgument, "r must lie in (0, 1)");
    zeros.with_ambient(Ambient::annulus(r)).require_inside();
    std::vector<cplx> out;
    out.reserve(zeros.size());
    double log_modulus = 0.0;
    for (const auto& p : zeros.points()) {
        const double m = std::abs(p);
        const double s = (m - r) / (1.0 - m);
        out.push_back(s * (p / m));
        log_modulus += std::log(s);
    }
    const double scale = std::exp(-log_modulus / static_cast<double>(out.size()));
    for (auto& z : out) z *= scale;
    return NormalizedDivisor(Divisor(std::move(out)));
}

namespace detail {

// log g(t) with g(t) = prod (|zeta| + t r) / (|zeta| + t).
inline double log_g(const NormalizedDivisor& nd, double r, double t) {
    double s = 0.0;
    for (const auto& z : nd.points().points()) {
        const double m = std::abs(z);
        s += std::log((m + t * r) / (m + t));
    }
    return s;
}

} // namespace detail

/// Inverse of phi_r: solves g(t0) = r^delta and pulls each point back into the annulus.
inline Divisor psi_r(const NormalizedDivisor& nd, double r, int delta, const Tolerance& tol = {1e-13, 400}) {
    detail::require_annulus_parameters(r, delta, nd.size());
    const double target = delta * std::log(r);

    // Root-find in s = log t, where log g is decreasing from 0 to e log r.
    auto h = [&](double s) { return detail::log_g(nd, r, std::exp(s)); };
    double lo = std::log(1e-12), hi = 0.0;
    for (int k = 0; k < 200 && h(lo) <= target; ++k) lo -= std::log(10.0);
    for (int k = 0; k < 200 && h(hi) >= target; ++k) hi += std::log(2.0);
    const double t0 = std::exp(find_root_monotone(h, lo, hi, target, tol));

    std::vector<cplx> out;
    out.reserve(nd.size());
    for (const auto& z : nd.points().points()) {
        const double m = std::abs(z);
        out.push_back(((m + t0 * r) / (m + t0)) * (z / m));
    }
    return Divisor(std::move(out), Ambient::annulus(r));
}

/// Elementary symmetric functions c_1..c_e of the points, so that
/// prod (z - zeta_k) = z^e + sum_k (-1)^k c_k z^{e-k}.
inline std::vector<cplx> sym_e(const Divisor& points) {
    if (points.size() > 64) fail(ErrorCode::InvalidArgument, "sym_e is capped at 64 points");
    std::vector<cplx> c(points.size() + 1, cplx{0.0, 0.0});
    c[0] = 1.0;
    std::size_t used = 0;
    for (const auto& z : points.points()) {
        ++used;
        for (std::size_t k = used; k >= 1; --k) c[k] += c[k - 1] * z;
    }
    c.erase(c.begin());
    return c;
}

inline std::vector<cplx> sym_e(const NormalizedDivisor& nd) { return sym_e(nd.points()); }

inline ModelCoordinates to_model_coordinates(double r, const Divisor& zeros) {
    const auto c = sym_e(phi_r(zeros, r));
    ModelCoordinates out;
    out.t = std::tan((r - 0.5) * std::numbers::pi);
    out.c.assign(c.begin(), c.end() - 1);
    out.phase = c.back() / std::abs(c.back());
    return out;
}

/// gamma(u, v) = ((2 + cos pi v cos pi u) cos 2 pi u, (2 + cos pi v cos pi u) sin 2 pi u, cos pi v sin pi u).
inline std::array<double, 3> mobius_band_point(double u, double v) {
    if (!(u >= 0.0 && u <= 1.0) || !(v >= -1.0 && v <= 1.0))
        fail(ErrorCode::InvalidArgument, "mobius band parameters need u in [0,1], v in [-1,1]");
    constexpr double pi = std::numbers::pi;
    const double radial = 2.0 + std::cos(pi * v) * std::cos(pi * u);
    return {radial * std::cos(2.0 * pi * u), radial * std::sin(2.0 * pi * u), std::cos(pi * v) * std::sin(pi * u)};
}

enum class BalanceTag { leaned, balanced };

inline BalanceTag balanced_locus_classifier(const Divisor& zeros) {
    if (zeros.size() != 2) fail(ErrorCode::InvalidArgument, "balanced locus is defined for e = 2");
    return std::abs(std::abs(zeros[0]) - std::abs(zeros[1])) <= 1e-10 ? BalanceTag::balanced : BalanceTag::leaned;
}

} // namespace abp
