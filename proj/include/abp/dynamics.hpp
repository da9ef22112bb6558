#pragma once

#include "abp/error.hpp"
#include "abp/numerics.hpp"
#include "abp/scheme.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

namespace abp {

/// z -> z^m + c z^{-ell}. c = 0 is accepted so z^m can be rendered as a control.
class McMullenMap {
public:
    McMullenMap(int m, int ell, cplx c) : m_(m), ell_(ell), c_(c) {
        if (m < 2 || ell < 2) fail(ErrorCode::InvalidArgument, "m and ell must be >= 2");
        if (m > 16 || ell > 16) fail(ErrorCode::InvalidArgument, "m and ell are capped at 16");
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) fail(ErrorCode::InvalidArgument, "c must be finite");
    }

    [[nodiscard]] int m() const noexcept { return m_; }
    [[nodiscard]] int ell() const noexcept { return ell_; }
    [[nodiscard]] cplx c() const noexcept { return c_; }
    [[nodiscard]] int degree() const noexcept { return m_ + ell_; }

    /// 1/m + 1/ell < 1.
    [[nodiscard]] bool cantor_circle_candidate() const noexcept { return m_ * ell_ > m_ + ell_; }

    [[nodiscard]] cplx operator()(cplx z) const {
        if (c_ == cplx{0.0, 0.0}) return ipow(z, m_);
        return ipow(z, m_) + c_ / ipow(z, ell_);
    }

    /// Modulus shared by all m + ell finite critical points.
    [[nodiscard]] double critical_radius() const {
        return std::pow(std::abs(c_) * ell_ / m_, 1.0 / static_cast<double>(m_ + ell_));
    }

    [[nodiscard]] std::vector<cplx> critical_points() const {
        const int k = m_ + ell_;
        const cplx base = std::pow(c_ * static_cast<double>(ell_) / static_cast<double>(m_), 1.0 / k);
        std::vector<cplx> out;
        for (int j = 0; j < k; ++j) out.push_back(base * std::polar(1.0, 2.0 * std::numbers::pi * j / k));
        return out;
    }

private:
    static cplx ipow(cplx z, int k) {
        cplx out{1.0, 0.0};
        for (int i = 0; i < k; ++i) out *= z;
        return out;
    }

    int m_;
    int ell_;
    cplx c_;
};

enum class OrbitFate { escaped_to_infinity, converged_near_zero_cycle, undecided };

constexpr const char* to_string(OrbitFate f) noexcept {
    switch (f) {
    case OrbitFate::escaped_to_infinity: return "escaped_to_infinity";
    case OrbitFate::converged_near_zero_cycle: return "converged_near_zero_cycle";
    case OrbitFate::undecided: return "undecided";
    }
    return "?";
}

struct OrbitSummary {
    OrbitFate fate = OrbitFate::undecided;
    int steps = 0;
};

inline constexpr double kDefaultEscapeRadius = 1e6;
inline constexpr int kMembershipIterations = 200;
inline constexpr int kCriticalIterations = 10000;

/// Escape-time iteration. Points inside the inner trap are sent past the
/// escape radius by the next step, so they count as escaped one step later.
/// A finite cycle is recognised when an iterate returns within 1e-10 of one
/// of the previous 16 iterates.
inline OrbitSummary iterate(const McMullenMap& f, cplx z, int max_iter = kMembershipIterations,
                            double escape_radius = kDefaultEscapeRadius) {
    if (!(escape_radius >= 10.0)) fail(ErrorCode::InvalidArgument, "escape radius must be >= 10");
    if (max_iter < 0 || max_iter > 100000) fail(ErrorCode::InvalidArgument, "max_iter must lie in [0, 1e5]");

    const bool polynomial = f.c() == cplx{0.0, 0.0};
    const double trap = polynomial ? 0.0 : std::pow(std::abs(f.c()) / (2.0 * escape_radius), 1.0 / f.ell());
    constexpr std::size_t history_size = 16;
    std::array<cplx, history_size> history{};
    std::size_t stored = 0;

    for (int step = 0; step <= max_iter; ++step) {
        const double a = std::abs(z);
        if (a > escape_radius) return {OrbitFate::escaped_to_infinity, step};
        if (!polynomial && a < trap) {
            if (step + 1 > max_iter) return {OrbitFate::undecided, max_iter};
            return {OrbitFate::escaped_to_infinity, step + 1};
        }
        if (polynomial && a < 1e-12) return {OrbitFate::converged_near_zero_cycle, step};
        for (std::size_t i = 0; i < std::min(stored, history_size); ++i)
            if (std::abs(z - history[i]) < 1e-10) return {OrbitFate::converged_near_zero_cycle, step};
        if (step == max_iter) break;
        history[stored % history_size] = z;
        ++stored;
        z = f(z);
    }
    return {OrbitFate::undecided, max_iter};
}

struct RadialInterval {
    double inner = 0.0;
    double outer = 0.0;

    [[nodiscard]] double modulus() const { return std::log(outer / inner) / (2.0 * std::numbers::pi); }
};

struct ClassificationReport {
    bool is_cantor_circle = false;
    int n = 0;
    std::vector<int> degrees;           // inner to outer
    RadialInterval central;             // the annulus A between D_0 and D_inf
    std::vector<RadialInterval> annuli; // A_1 .. A_{n+1}
    std::vector<double> moduli;
    SchemeType scheme_type_after_normalization = SchemeType::I;
    double ray_spread = 0.0;        // largest disagreement between rays for any detected radius
    int critical_escape_steps = 0;  // slowest critical orbit
};

struct ClassifyParams {
    int rays = 8;
    int membership_iter = kMembershipIterations;
    int critical_iter = kCriticalIterations;
    double escape_radius = kDefaultEscapeRadius;
    double precision = 1e-6;
};

namespace detail {

// Escapes without ever entering the critical disk: z lies in the immediate basin of infinity.
inline bool direct_escape(const McMullenMap& f, cplx z, double crit, const ClassifyParams& p) {
    for (int k = 0; k <= p.membership_iter; ++k) {
        const double a = std::abs(z);
        if (a > p.escape_radius) return true;
        if (a < crit) return false;
        z = f(z);
    }
    return false;
}

// z lies in the trap door around 0.
inline bool in_trap_door(const McMullenMap& f, cplx z, double crit, const ClassifyParams& p) {
    return std::abs(z) < crit && direct_escape(f, f(z), crit, p);
}

template <class Pred>
double bisect_radius(Pred&& inside_at, double lo, double hi, double precision) {
    // inside_at(lo) differs from inside_at(hi); returns the switching radius.
    const bool at_lo = inside_at(lo);
    while (hi - lo > precision) {
        const double mid = 0.5 * (lo + hi);
        if (inside_at(mid) == at_lo) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace detail

inline ClassificationReport classify_cantor_circle(const McMullenMap& f, const ClassifyParams& params = {}) {
    if (!f.cantor_circle_candidate()) fail(ErrorCode::InvalidArgument, "1/m + 1/ell must be < 1");
    if (f.c() == cplx{0.0, 0.0}) fail(ErrorCode::InvalidArgument, "c must be nonzero");
    if (params.rays < 1) fail(ErrorCode::InvalidArgument, "need at least one ray");

    int slowest = 0;
    for (const auto& z : f.critical_points()) {
        const auto orbit = iterate(f, z, params.critical_iter, params.escape_radius);
        if (orbit.fate == OrbitFate::undecided)
            fail(ErrorCode::NotHyperbolicEvidence, "a critical orbit is undecided after the iteration budget");
        if (orbit.fate != OrbitFate::escaped_to_infinity)
            fail(ErrorCode::NotCantorCircle, "a critical point is attracted to a finite cycle");
        slowest = std::max(slowest, orbit.steps);
    }

    const double crit = f.critical_radius();
    const cplx v = f(f.critical_points().front());
    if (!detail::in_trap_door(f, v, crit, params))
        fail(ErrorCode::NotCantorCircle, "critical values do not lie in the trap door around 0");

    const double outer_probe = std::max(2.0, 2.0 * crit);
    if (!detail::direct_escape(f, cplx{outer_probe, 0.0}, crit, params))
        fail(ErrorCode::NotCantorCircle, "no basin of infinity found outside the critical circle");

    // Radii per ray: rho0 (edge of D_0), rho1_in / rho1_out (edges of f^{-1}(D_0)), rho_inf (edge of D_inf).
    std::array<std::vector<double>, 4> radii;
    for (int k = 0; k < params.rays; ++k) {
        const double theta = 2.0 * std::numbers::pi * (k + 0.5) / params.rays;
        const cplx dir = std::polar(1.0, theta);
        auto basin = [&](double s) { return detail::direct_escape(f, s * dir, crit, params); };
        auto trap = [&](double s) { return detail::in_trap_door(f, s * dir, crit, params); };
        auto pre_trap = [&](double s) { return detail::in_trap_door(f, f(s * dir), crit, params); };

        const double tiny = crit * 1e-6;
        if (!trap(tiny)) fail(ErrorCode::NotCantorCircle, "no trap door near 0");
        const double rho_inf = detail::bisect_radius(basin, crit, outer_probe, params.precision);
        const double rho0 = detail::bisect_radius(trap, tiny, crit, params.precision);
        if (!pre_trap(crit)) fail(ErrorCode::NotCantorCircle, "critical circle does not map into the trap door");
        const double rho1_in = detail::bisect_radius(pre_trap, rho0, crit, params.precision);
        const double rho1_out = detail::bisect_radius(pre_trap, crit, rho_inf, params.precision);
        radii[0].push_back(rho0);
        radii[1].push_back(rho1_in);
        radii[2].push_back(rho1_out);
        radii[3].push_back(rho_inf);
    }

    ClassificationReport report;
    report.critical_escape_steps = slowest;
    std::array<double, 4> mean{};
    for (std::size_t i = 0; i < 4; ++i) {
        const auto [lo, hi] = std::minmax_element(radii[i].begin(), radii[i].end());
        report.ray_spread = std::max(report.ray_spread, *hi - *lo);
        double s = 0.0;
        for (double x : radii[i]) s += x;
        mean[i] = s / static_cast<double>(radii[i].size());
    }
    if (!(mean[0] < mean[1] && mean[1] < mean[2] && mean[2] < mean[3]))
        fail(ErrorCode::NotCantorCircle, "detected radii are not nested");

    report.central = {mean[0], mean[3]};
    report.annuli = {{mean[0], mean[1]}, {mean[2], mean[3]}};
    for (const auto& a : report.annuli) {
        const double mid = std::sqrt(a.inner * a.outer);
        const int w = winding_number([&](cplx z) { return f(z); }, Contour{{0.0, 0.0}, mid, 256}, Tolerance{1e-12, 200});
        report.degrees.push_back(std::abs(w));
        report.moduli.push_back(a.modulus());
    }
    report.n = static_cast<int>(report.annuli.size()) - 1;

    const int total = report.degrees[0] + report.degrees[1];
    if (total != f.degree() || !is_admissible(report.degrees))
        fail(ErrorCode::NotCantorCircle, "measured degrees are not an admissible split of m + ell");
    report.is_cantor_circle = true;
    report.scheme_type_after_normalization = SchemeType::I;
    return report;
}

struct GrotzschDiagnostic {
    double central_modulus = 0.0;
    double sum_of_moduli = 0.0;
    double margin = 0.0;
    bool pass = false;
};

inline constexpr double kGrotzschMargin = 0.01;

/// mod(A) - sum mod(A_k) from the round-annulus approximation.
inline GrotzschDiagnostic grotzsch_check(const ClassificationReport& report) {
    GrotzschDiagnostic out;
    out.central_modulus = report.central.modulus();
    for (const auto& a : report.annuli) out.sum_of_moduli += a.modulus();
    out.margin = out.central_modulus - out.sum_of_moduli;
    out.pass = out.margin > kGrotzschMargin;
    return out;
}

/// t_r(z) = z exp(2 pi i (|z| - r) / (1 - r)).
inline cplx twist_map(double r, cplx z) {
    if (!(r > 0.0 && r < 1.0)) fail(ErrorCode::InvalidArgument, "r must lie in (0, 1)");
    const double a = std::abs(z);
    if (!(a >= r * (1.0 - 1e-12) && a <= 1.0 + 1e-12)) fail(ErrorCode::OutOfDomain, "twist map needs r <= |z| <= 1");
    return z * std::polar(1.0, 2.0 * std::numbers::pi * (a - r) / (1.0 - r));
}

struct Window {
    double xmin = -1.5, xmax = 1.5, ymin = -1.5, ymax = 1.5;
};

struct RasterImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb; // row-major, 3 bytes per pixel, row 0 at ymax

    [[nodiscard]] std::array<std::uint8_t, 3> at(int x, int y) const {
        const auto i = 3 * (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x));
        return {rgb[i], rgb[i + 1], rgb[i + 2]};
    }

    [[nodiscard]] bool is_black(int x, int y) const {
        const auto p = at(x, y);
        return p[0] == 0 && p[1] == 0 && p[2] == 0;
    }
};

inline constexpr int kRenderIterations = 12;

inline std::array<std::uint8_t, 3> escape_color(int steps) {
    const double t = std::min(1.0, steps / 12.0);
    return {static_cast<std::uint8_t>(255.0 * (1.0 - 0.6 * t)), static_cast<std::uint8_t>(220.0 * (1.0 - t) + 30.0),
            static_cast<std::uint8_t>(80.0 + 150.0 * t)};
}

/// Escape-time image. Undecided pixels are black; pixels attracted to a
/// finite cycle get a separate dark palette.
inline RasterImage render_julia(const McMullenMap& f, const Window& window, int width, int height,
                                int max_iter = kRenderIterations, unsigned threads = 0) {
    if (width < 16 || height < 16 || width > 4096 || height > 4096)
        fail(ErrorCode::InvalidArgument, "image dimensions must lie in [16, 4096]");
    if (!(window.xmax > window.xmin && window.ymax > window.ymin)) fail(ErrorCode::InvalidArgument, "empty window");
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(height));

    RasterImage img{width, height, std::vector<std::uint8_t>(3 * static_cast<std::size_t>(width) * height, 0)};
    auto render_row = [&](int y) {
        const double im = window.ymax - (window.ymax - window.ymin) * (y + 0.5) / height;
        for (int x = 0; x < width; ++x) {
            const double re = window.xmin + (window.xmax - window.xmin) * (x + 0.5) / width;
            const auto orbit = iterate(f, cplx{re, im}, max_iter);
            std::array<std::uint8_t, 3> color{0, 0, 0};
            if (orbit.fate == OrbitFate::escaped_to_infinity) color = escape_color(orbit.steps);
            else if (orbit.fate == OrbitFate::converged_near_zero_cycle)
                color = {20, 30, static_cast<std::uint8_t>(90 + std::min(orbit.steps, 100))};
            const auto i = 3 * (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x));
            img.rgb[i] = color[0];
            img.rgb[i + 1] = color[1];
            img.rgb[i + 2] = color[2];
        }
    };

    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            for (int y = static_cast<int>(t); y < height; y += static_cast<int>(threads)) render_row(y);
        });
    for (auto& th : pool) th.join();
    return img;
}

inline void write_ppm(std::ostream& out, const RasterImage& img) {
    out << "P6\n" << img.width << ' ' << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.rgb.data()), static_cast<std::streamsize>(img.rgb.size()));
}

} // namespace abp
