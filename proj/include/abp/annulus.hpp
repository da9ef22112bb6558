#pragma once

#include "abp/blaschke.hpp"
#include "abp/divisor.hpp"
#include "abp/error.hpp"
#include "abp/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace abp {

inline constexpr double kExistenceTolerance = 1e-10;
inline constexpr int kMaxTruncation = 100000;

struct ExistenceResult {
    bool ok = false;
    /// log|prod p_k| - delta * log r
    double residual = 0.0;
};

namespace detail {

inline void require_annulus_parameters(double r, int delta, std::size_t e) {
    if (!(r > 0.0 && r < 1.0)) fail(ErrorCode::InvalidArgument, "annulus radius r must lie in (0, 1)");
    if (e < 2) fail(ErrorCode::InvalidArgument, "an annulus map needs at least two zeros");
    if (delta < 1 || static_cast<std::size_t>(delta) >= e)
        fail(ErrorCode::InvalidArgument, "inner boundary degree must satisfy 1 <= delta < e");
}

inline cplx inverse_power(cplx z, int k) {
    cplx p{1.0, 0.0};
    for (int i = 0; i < k; ++i) p *= z;
    return 1.0 / p;
}

} // namespace detail

/// Zero-set criterion for a proper map A_r -> D of inner degree delta:
/// |prod p_k| = r^delta.
inline ExistenceResult existence_check(double r, int delta, const Divisor& zeros) {
    detail::require_annulus_parameters(r, delta, zeros.size());
    zeros.with_ambient(Ambient::annulus(r)).require_inside();
    const double target = std::pow(r, delta);
    const double modulus = zeros.product_modulus();
    return {std::abs(modulus - target) <= kExistenceTolerance, zeros.log_product_modulus() - delta * std::log(r)};
}

/// Rescales all moduli by the common factor solving lambda^e |prod p| = r^delta.
inline Divisor radial_correct(double r, int delta, const Divisor& zeros) {
    detail::require_annulus_parameters(r, delta, zeros.size());
    zeros.with_ambient(Ambient::annulus(r)).require_inside();
    const double e = static_cast<double>(zeros.size());
    const double log_lambda = (delta * std::log(r) - zeros.log_product_modulus()) / e;
    const double lambda = std::exp(log_lambda);
    std::vector<cplx> pts;
    pts.reserve(zeros.size());
    for (const auto& p : zeros.points()) {
        const cplx q = p * lambda;
        const double m = std::abs(q);
        if (!(m > r && m < 1.0))
            fail(ErrorCode::Unfixable, "rescaling by " + std::to_string(lambda) + " pushes a zero out of (r, 1)");
        pts.push_back(q);
    }
    return Divisor(std::move(pts), Ambient::annulus(r));
}

/// Certified bound for |f_inf - f_N| on the closed annulus and on its image
/// under z -> r^2 z.
///
/// With s_j = r^(2j) / (p_min r^3), each pair satisfies
/// |B_j B_{-j} - 1| <= exp(8e s_j / (1 - s_j)) - 1, so the tail product P obeys
/// |P - 1| <= tau = exp(8e s_{N+1} / ((1 - s_{N+1})(1 - r^2))) - 1. Since
/// |f_inf| <= 1 on both regions, |f_inf - f_N| = |f_inf| |1 - 1/P| <= tau / (1 - tau).
inline double certified_tail_bound(double r, std::size_t e, double p_min, int N) {
    const double rho_lo = r * r * r;
    const double s_next = std::exp(2.0 * (N + 1) * std::log(r)) / (p_min * rho_lo);
    if (!(s_next < 1.0)) return std::numeric_limits<double>::infinity();
    const double exponent = 8.0 * static_cast<double>(e) * s_next / ((1.0 - s_next) * (1.0 - r * r));
    const double tau = std::expm1(exponent);
    if (!(tau < 1.0)) return std::numeric_limits<double>::infinity();
    return tau / (1.0 - tau);
}

/// Boundary-modulus, modularity, reflection and winding diagnostics of a map.
struct VerificationReport {
    double boundary_deviation_outer = 0.0;
    double boundary_deviation_inner = 0.0;
    double modularity_defect = 0.0;
    double reflection_defect = 0.0;
    double truncation_gap = 0.0; // max |f_N - f_2N|
    double mid_circle_max_modulus = 0.0;
    int winding_outer = 0; // on |z| = 1 - eps_outer, counter-clockwise
    int winding_inner = 0; // on |z| = r + eps_inner, boundary orientation (clockwise)
    double eps_outer = 0.0;
    double eps_inner = 0.0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;

    bool operator==(const VerificationReport&) const = default;
};

/// Proper holomorphic map A_r -> D of degree e and inner degree delta with
/// f(1) = 1, represented by its truncated product
///   f_N(z) = z^-delta B_0(z) prod_{j=1..N} B_j(z) B_{-j}(z).
class AnnulusProperMap {
public:
    static AnnulusProperMap build(double r, int delta, const Divisor& zeros, double tol) {
        if (!(tol > 0.0) || !std::isfinite(tol)) fail(ErrorCode::InvalidArgument, "tolerance must be positive");
        const auto check = existence_check(r, delta, zeros);
        if (!check.ok)
            fail(ErrorCode::ExistenceViolation,
                 "|prod p_k| differs from r^delta (log residual " + std::to_string(check.residual) + ")");
        const double p_min = min_modulus(zeros);
        int N = 1;
        double bound = certified_tail_bound(r, zeros.size(), p_min, N);
        while (!(bound < tol)) {
            if (++N > kMaxTruncation)
                fail(ErrorCode::TruncationOverflow, "truncation depth would exceed 1e5 for r = " + std::to_string(r));
            bound = certified_tail_bound(r, zeros.size(), p_min, N);
        }
        return AnnulusProperMap(r, delta, zeros, N, bound);
    }

    /// Reassembles a stored map; the existence condition is re-checked.
    static AnnulusProperMap from_parts(double r, int delta, const Divisor& zeros, int N, double tail_bound) {
        const auto check = existence_check(r, delta, zeros);
        if (!check.ok) fail(ErrorCode::ExistenceViolation, "stored zeros violate |prod p_k| = r^delta");
        if (N < 1 || N > kMaxTruncation) fail(ErrorCode::InvalidArgument, "stored truncation depth out of range");
        if (!(tail_bound >= 0.0)) fail(ErrorCode::InvalidArgument, "stored tail bound must be non-negative");
        return AnnulusProperMap(r, delta, zeros, N, tail_bound);
    }

    /// No existence check; for negative controls in diagnostics.
    static AnnulusProperMap unchecked(double r, int delta, const Divisor& zeros, int N, double tail_bound) {
        detail::require_annulus_parameters(r, delta, zeros.size());
        zeros.with_ambient(Ambient::annulus(r)).require_inside();
        return AnnulusProperMap(r, delta, zeros, N, tail_bound);
    }

    [[nodiscard]] double r() const noexcept { return r_; }
    [[nodiscard]] int delta() const noexcept { return delta_; }
    [[nodiscard]] std::size_t degree() const noexcept { return zeros_.size(); }
    [[nodiscard]] const Divisor& zeros() const noexcept { return zeros_; }
    [[nodiscard]] int truncation() const noexcept { return N_; }
    [[nodiscard]] double tail_bound() const noexcept { return tail_bound_; }

    /// f_N on the closed annulus (with 1e-9 slack).
    [[nodiscard]] cplx eval(cplx z) const {
        const double m = std::abs(z);
        if (!(m >= r_ - 1e-9 && m <= 1.0 + 1e-9))
            fail(ErrorCode::OutOfDomain, "evaluation point outside the closed annulus");
        return eval_truncated(z, N_);
    }

    [[nodiscard]] cplx operator()(cplx z) const { return eval(z); }

    /// f_N anywhere on C* (used by the modularity and reflection checks).
    [[nodiscard]] cplx eval_extended(cplx z) const {
        if (z == cplx{0.0, 0.0}) fail(ErrorCode::OutOfDomain, "the product has a pole at 0");
        return eval_truncated(z, N_);
    }

    /// f_depth for an arbitrary truncation depth.
    [[nodiscard]] cplx eval_truncated(cplx z, int depth) const {
        cplx value = detail::inverse_power(z, delta_);
        for (const auto& p : zeros_.points()) value *= blaschke_factor(p, z);
        double scale = 1.0; // r^(2j)
        for (int j = 1; j <= depth; ++j) {
            scale *= r_ * r_;
            cplx level{1.0, 0.0};
            for (const auto& p : zeros_.points()) {
                level *= blaschke_factor(p * scale, z);
                level /= blaschke_factor(scale / std::conj(p), z);
            }
            value *= level;
        }
        return value;
    }

    /// f_N'(z) / f_N(z).
    [[nodiscard]] cplx log_derivative(cplx z) const {
        cplx d = -static_cast<double>(delta_) / z;
        for (const auto& p : zeros_.points()) d += blaschke_factor_logderiv(p, z);
        double scale = 1.0;
        for (int j = 1; j <= N_; ++j) {
            scale *= r_ * r_;
            for (const auto& p : zeros_.points())
                d += blaschke_factor_logderiv(p * scale, z) - blaschke_factor_logderiv(scale / std::conj(p), z);
        }
        return d;
    }

    [[nodiscard]] VerificationReport verify(std::size_t samples, std::uint64_t seed = 42) const;

    [[nodiscard]] Divisor fiber(cplx w, const Tolerance& tol = {}) const;

private:
    AnnulusProperMap(double r, int delta, const Divisor& zeros, int N, double tail_bound)
        : r_(r), delta_(delta), zeros_(zeros.with_ambient(Ambient::annulus(r)).sorted()), N_(N),
          tail_bound_(tail_bound) {}

    static double min_modulus(const Divisor& d) {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& p : d.points()) m = std::min(m, std::abs(p));
        return m;
    }

    double r_;
    int delta_;
    Divisor zeros_;
    int N_;
    double tail_bound_;
};

namespace detail {

/// Uniform double in [0, 1) from the top 53 bits; independent of the
/// standard library's distribution implementation.
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline int circle_winding(const AnnulusProperMap& m, double radius) {
    Contour c{cplx{0.0, 0.0}, radius, 256};
    return winding_number([&](cplx z) { return m.eval(z); }, c, Tolerance{1e-12, 200});
}

} // namespace detail

inline VerificationReport AnnulusProperMap::verify(std::size_t samples, std::uint64_t seed) const {
    if (samples < 1) fail(ErrorCode::InvalidArgument, "verification needs at least one sample");
    VerificationReport report;
    report.samples = samples;
    report.seed = seed;

    for (std::size_t k = 0; k < samples; ++k) {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(samples);
        const cplx u = std::polar(1.0, theta);
        report.boundary_deviation_outer = std::max(report.boundary_deviation_outer, std::abs(std::abs(eval(u)) - 1.0));
        report.boundary_deviation_inner =
            std::max(report.boundary_deviation_inner, std::abs(std::abs(eval(r_ * u)) - 1.0));
        report.mid_circle_max_modulus =
            std::max(report.mid_circle_max_modulus, std::abs(eval(0.5 * (1.0 + r_) * u)));
    }

    std::mt19937_64 rng(seed);
    for (std::size_t k = 0; k < samples; ++k) {
        const double radius = r_ + (1.0 - r_) * detail::unit_uniform(rng);
        const double theta = 2.0 * std::numbers::pi * detail::unit_uniform(rng);
        const cplx z = std::polar(radius, theta);
        const cplx fz = eval(z);
        report.modularity_defect = std::max(report.modularity_defect, std::abs(eval_extended(r_ * r_ * z) - fz));
        report.reflection_defect =
            std::max(report.reflection_defect, std::abs(1.0 / std::conj(fz) - eval_extended(1.0 / std::conj(z))));
        report.truncation_gap = std::max(report.truncation_gap, std::abs(fz - eval_truncated(z, 2 * N_)));
    }

    double p_min = 1.0, p_max = 0.0;
    for (const auto& p : zeros_.points()) {
        p_min = std::min(p_min, std::abs(p));
        p_max = std::max(p_max, std::abs(p));
    }
    double eps_outer = std::max(0.5 * (1.0 - p_max), 1e-4);
    double eps_inner = std::max(0.5 * (p_min - r_), 1e-4);

    auto winding_with_retry = [&](double& eps, auto radius_of) {
        for (int attempt = 0;; ++attempt) {
            try {
                return detail::circle_winding(*this, radius_of(eps));
            } catch (const Error& err) {
                if (err.code() != ErrorCode::ZeroOnContour || attempt >= 8) throw;
                eps *= 0.5;
            }
        }
    };
    report.winding_outer = winding_with_retry(eps_outer, [&](double eps) { return 1.0 - eps; });
    report.winding_inner = -winding_with_retry(eps_inner, [&](double eps) { return r_ + eps; });
    report.eps_outer = eps_outer;
    report.eps_inner = eps_inner;
    return report;
}

inline Divisor AnnulusProperMap::fiber(cplx w, const Tolerance& tol) const {
    tol.validate();
    if (!(std::abs(w) < 1.0 - 10.0 * tail_bound_))
        fail(ErrorCode::OutOfDomain, "fiber target must satisfy |w| < 1 - 10 tail_bound");

    const std::size_t e = zeros_.size();
    constexpr int kGrid = 64;
    constexpr int kNewtonSteps = 60;
    const double accept = std::max(1e-12, 0.01 * tol.abs_tol);
    const double merge = 10.0 * tol.abs_tol;

    std::vector<cplx> found;
    // Visit the 64x64 polar seed grid in bit-reversed order so early seeds
    // spread over the whole annulus.
    auto bit_reverse6 = [](int v) {
        int out = 0;
        for (int b = 0; b < 6; ++b) out |= ((v >> b) & 1) << (5 - b);
        return out;
    };
    for (int ii = 0; ii < kGrid && found.size() < e; ++ii) {
        for (int kk = 0; kk < kGrid && found.size() < e; ++kk) {
            const int i = bit_reverse6(ii), k = bit_reverse6((kk + ii) % kGrid);
            const double radius = r_ + (1.0 - r_) * (i + 0.5) / kGrid;
            const double theta = 2.0 * std::numbers::pi * (k + 0.5) / kGrid;
            cplx z = std::polar(radius, theta);
            bool converged = false;
            for (int step = 0; step < kNewtonSteps; ++step) {
                const cplx fz = eval_truncated(z, N_);
                const cplx residual = fz - w;
                if (std::abs(residual) <= accept) {
                    converged = true;
                    break;
                }
                const cplx deriv = fz * log_derivative(z);
                if (deriv == cplx{0.0, 0.0} || !std::isfinite(std::abs(deriv))) break;
                cplx dz = residual / deriv;
                // Damp steps that would leave the annulus.
                int halvings = 0;
                while (halvings < 30) {
                    const double m = std::abs(z - dz);
                    if (m > r_ && m < 1.0) break;
                    dz *= 0.5;
                    ++halvings;
                }
                if (halvings == 30) break;
                z -= dz;
            }
            if (!converged) continue;
            const bool duplicate =
                std::any_of(found.begin(), found.end(), [&](cplx f) { return std::abs(f - z) <= merge; });
            if (!duplicate) found.push_back(z);
        }
    }
    if (found.size() < e)
        fail(ErrorCode::IncompleteFiber, "certified " + std::to_string(found.size()) + " of " + std::to_string(e) +
                                             " preimages");
    return Divisor(std::move(found), Ambient::annulus(r_)).sorted();
}

} // namespace abp
