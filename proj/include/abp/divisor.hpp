#pragma once

#include "abp/error.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace abp {

using cplx = std::complex<double>;

/// Where the points of a divisor are required to live.
struct Ambient {
    enum class Kind { plane, punctured_plane, disk, annulus, circle_domain };

    Kind kind = Kind::plane;
    double r = 0.0; // inner radius, annulus only
    int id = 0;     // circle domain identifier

    static Ambient plane() { return {Kind::plane, 0.0, 0}; }
    static Ambient punctured_plane() { return {Kind::punctured_plane, 0.0, 0}; }
    static Ambient disk() { return {Kind::disk, 0.0, 0}; }
    static Ambient annulus(double inner) { return {Kind::annulus, inner, 0}; }
    static Ambient circle_domain(int domain_id) { return {Kind::circle_domain, 0.0, domain_id}; }

    [[nodiscard]] bool contains(cplx z) const {
        const double m = std::abs(z);
        switch (kind) {
        case Kind::plane: return std::isfinite(m);
        case Kind::punctured_plane: return std::isfinite(m) && m > 0.0;
        case Kind::disk: return m < 1.0;
        case Kind::annulus: return m > r && m < 1.0;
        case Kind::circle_domain: return std::isfinite(m); // membership is checked by the domain itself
        }
        return false;
    }
};

/// Unordered finite point set with multiplicity (repeated entries).
class Divisor {
public:
    Divisor() = default;
    explicit Divisor(std::vector<cplx> points, Ambient ambient = Ambient::plane())
        : points_(std::move(points)), ambient_(ambient) {}

    [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
    [[nodiscard]] bool empty() const noexcept { return points_.empty(); }
    [[nodiscard]] std::span<const cplx> points() const noexcept { return points_; }
    [[nodiscard]] const cplx& operator[](std::size_t i) const { return points_[i]; }
    [[nodiscard]] const Ambient& ambient() const noexcept { return ambient_; }

    [[nodiscard]] cplx product() const {
        cplx p{1.0, 0.0};
        for (const auto& z : points_) p *= z;
        return p;
    }

    /// |prod p_k| computed as exp(sum log|p_k|) to avoid underflow for large e.
    [[nodiscard]] double product_modulus() const { return std::exp(log_product_modulus()); }

    [[nodiscard]] double log_product_modulus() const {
        double s = 0.0;
        for (const auto& z : points_) s += std::log(std::abs(z));
        return s;
    }

    void require_inside() const {
        if (points_.empty()) fail(ErrorCode::InvalidArgument, "divisor must contain at least one point");
        for (const auto& z : points_)
            if (!ambient_.contains(z))
                fail(ErrorCode::OutOfDomain, "point (" + std::to_string(z.real()) + ", " + std::to_string(z.imag()) +
                                                 ") lies outside the ambient domain");
    }

    /// Canonical order: by modulus, then by argument in [0, 2pi).
    [[nodiscard]] Divisor sorted() const {
        auto pts = points_;
        std::sort(pts.begin(), pts.end(), [](cplx a, cplx b) {
            const double ma = std::abs(a), mb = std::abs(b);
            if (ma != mb) return ma < mb;
            return canonical_arg(a) < canonical_arg(b);
        });
        return Divisor(std::move(pts), ambient_);
    }

    [[nodiscard]] Divisor with_ambient(Ambient ambient) const { return Divisor(points_, ambient); }

private:
    static double canonical_arg(cplx z) {
        const double a = std::arg(z);
        return a < 0.0 ? a + 2.0 * std::numbers::pi : a;
    }

    std::vector<cplx> points_;
    Ambient ambient_{};
};

/// Largest distance from a point of `a` to its matched point of `b`, using
/// greedy nearest matching; returns +inf when sizes differ. Used to compare
/// divisors as multisets.
inline double multiset_distance(const Divisor& a, const Divisor& b) {
    if (a.size() != b.size()) return HUGE_VAL;
    std::vector<bool> used(b.size(), false);
    double worst = 0.0;
    for (const auto& z : a.points()) {
        double best = HUGE_VAL;
        std::size_t best_j = 0;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (used[j]) continue;
            const double d = std::abs(z - b[j]);
            if (d < best) {
                best = d;
                best_j = j;
            }
        }
        used[best_j] = true;
        worst = std::max(worst, best);
    }
    return worst;
}

} // namespace abp
