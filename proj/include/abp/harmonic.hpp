#pragma once

#include "abp/divisor.hpp"
#include "abp/error.hpp"
#include "abp/numerics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace abp {

struct Circle {
    cplx center{0.0, 0.0};
    double radius = 1.0;
};

/// Domain inside `outer` with g >= 1 round holes; degrees[k] is the target
/// boundary degree on gamma_k (gamma_0 is the outer circle).
struct CircleDomain {
    Circle outer;
    std::vector<Circle> inner;
    std::vector<int> degrees;

    [[nodiscard]] std::size_t genus() const noexcept { return inner.size(); }

    [[nodiscard]] const Circle& boundary(std::size_t k) const { return k == 0 ? outer : inner.at(k - 1); }

    void validate() const {
        constexpr double gap = 1e-6;
        if (inner.empty()) fail(ErrorCode::InvalidArgument, "circle domain needs at least one inner circle");
        if (!(outer.radius > 0.0)) fail(ErrorCode::InvalidArgument, "outer radius must be positive");
        if (degrees.size() != inner.size() + 1)
            fail(ErrorCode::InvalidArgument, "degrees must list d_0..d_g");
        for (int d : degrees)
            if (d < 1) fail(ErrorCode::InvalidArgument, "boundary degrees must be positive");
        for (std::size_t i = 0; i < inner.size(); ++i) {
            const auto& c = inner[i];
            if (!(c.radius > 0.0)) fail(ErrorCode::InvalidArgument, "inner radius must be positive");
            if (std::abs(c.center - outer.center) + c.radius > outer.radius - gap)
                fail(ErrorCode::InvalidArgument, "inner circle " + std::to_string(i + 1) + " is not inside the outer one");
            for (std::size_t j = 0; j < i; ++j)
                if (std::abs(c.center - inner[j].center) < c.radius + inner[j].radius + gap)
                    fail(ErrorCode::InvalidArgument, "inner circles " + std::to_string(j + 1) + " and " +
                                                         std::to_string(i + 1) + " overlap");
        }
    }

    [[nodiscard]] bool contains(cplx z) const {
        if (!(std::abs(z - outer.center) < outer.radius)) return false;
        return std::all_of(inner.begin(), inner.end(),
                           [&](const Circle& c) { return std::abs(z - c.center) > c.radius; });
    }

    [[nodiscard]] int total_degree() const {
        int s = 0;
        for (int d : degrees) s += d;
        return s;
    }

    /// The round annulus r < |z| < 1 with boundary degrees (e - delta, delta).
    static CircleDomain annulus(double r, int e, int delta) {
        return CircleDomain{Circle{{0.0, 0.0}, 1.0}, {Circle{{0.0, 0.0}, r}}, {e - delta, delta}};
    }
};

/// log|z| / log r on the closed annulus.
inline double harmonic_measure_annulus(double r, cplx z) {
    if (!(r > 0.0 && r < 1.0)) fail(ErrorCode::InvalidArgument, "r must lie in (0, 1)");
    const double m = std::abs(z);
    if (!(m >= r * (1.0 - 1e-12) && m <= 1.0 + 1e-12)) fail(ErrorCode::OutOfDomain, "point outside the closed annulus");
    return std::log(m) / std::log(r);
}

/// Least-squares collocation solution of the Dirichlet problem with data 1
/// on gamma_k and 0 on the other boundary circles.
class HarmonicMeasure {
public:
    struct Step {
        int order;
        double residual;
    };

    [[nodiscard]] const CircleDomain& domain() const noexcept { return domain_; }
    [[nodiscard]] std::size_t which() const noexcept { return which_; }
    [[nodiscard]] int order() const noexcept { return order_; }
    [[nodiscard]] double residual() const noexcept { return residual_; }
    [[nodiscard]] double condition_estimate() const noexcept { return condition_; }
    [[nodiscard]] const std::vector<double>& coefficients() const noexcept { return coefficients_; }
    [[nodiscard]] const std::vector<Step>& history() const noexcept { return history_; }

    [[nodiscard]] double operator()(cplx z) const { return eval(z); }

    [[nodiscard]] double eval(cplx z) const {
        double value = 0.0;
        std::size_t col = 0;
        for_each_basis(domain_, order_, z, [&](double b) { value += coefficients_[col++] * b; });
        return value;
    }

    /// Visits the basis values at z in column order.
    template <class Sink>
    static void for_each_basis(const CircleDomain& dom, int order, cplx z, Sink&& sink) {
        sink(1.0);
        for (const auto& c : dom.inner) sink(std::log(std::abs(z - c.center)));
        for (const auto& c : dom.inner) {
            const cplx w = c.radius / (z - c.center);
            cplx p = w;
            for (int m = 1; m <= order; ++m) {
                sink(p.real());
                sink(p.imag());
                p *= w;
            }
        }
        const cplx w = (z - dom.outer.center) / dom.outer.radius;
        cplx p = w;
        for (int m = 1; m <= order; ++m) {
            sink(p.real());
            sink(p.imag());
            p *= w;
        }
    }

    static std::size_t basis_size(const CircleDomain& dom, int order) {
        return 1 + dom.genus() + 2 * static_cast<std::size_t>(order) * (dom.genus() + 1);
    }

private:
    friend HarmonicMeasure solve_harmonic_measure(const CircleDomain&, std::size_t, double);

    CircleDomain domain_;
    std::size_t which_ = 1;
    int order_ = 0;
    double residual_ = std::numeric_limits<double>::infinity();
    double condition_ = 0.0;
    std::vector<double> coefficients_;
    std::vector<Step> history_;
};

inline constexpr int kCollocationPerCircle = 256;
inline constexpr int kInitialOrder = 8;
inline constexpr int kMaxOrder = 128;

/// Solves for the harmonic measure of boundary `k` (0 = outer). The order M
/// doubles from 8 until the max boundary error on an interleaved check grid
/// drops below tol, or M reaches 128 (or the basis would outgrow the
/// collocation rows).
inline HarmonicMeasure solve_harmonic_measure(const CircleDomain& dom, std::size_t k, double tol) {
    dom.validate();
    if (k > dom.genus()) fail(ErrorCode::InvalidArgument, "boundary index out of range");
    if (!(tol > 0.0)) fail(ErrorCode::InvalidArgument, "tolerance must be positive");

    const std::size_t circles = dom.genus() + 1;
    const std::size_t rows = circles * kCollocationPerCircle;

    auto boundary_points = [&](double offset) {
        std::vector<std::pair<cplx, double>> pts;
        pts.reserve(rows);
        for (std::size_t c = 0; c < circles; ++c) {
            const Circle& circ = dom.boundary(c);
            for (int i = 0; i < kCollocationPerCircle; ++i) {
                const double theta = 2.0 * std::numbers::pi * (i + offset) / kCollocationPerCircle;
                pts.emplace_back(circ.center + std::polar(circ.radius, theta), c == k ? 1.0 : 0.0);
            }
        }
        return pts;
    };
    const auto collocation = boundary_points(0.0);
    const auto check = boundary_points(0.5);

    HarmonicMeasure best;
    best.domain_ = dom;
    best.which_ = k;

    for (int order = kInitialOrder; order <= kMaxOrder; order *= 2) {
        const std::size_t cols = HarmonicMeasure::basis_size(dom, order);
        if (cols > rows) break;

        Eigen::MatrixXd A(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        Eigen::VectorXd b(static_cast<Eigen::Index>(rows));
        for (std::size_t i = 0; i < rows; ++i) {
            Eigen::Index col = 0;
            HarmonicMeasure::for_each_basis(dom, order, collocation[i].first,
                                            [&](double v) { A(static_cast<Eigen::Index>(i), col++) = v; });
            b(static_cast<Eigen::Index>(i)) = collocation[i].second;
        }
        const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
        const Eigen::VectorXd x = qr.solve(b);

        HarmonicMeasure candidate;
        candidate.domain_ = dom;
        candidate.which_ = k;
        candidate.order_ = order;
        candidate.coefficients_.assign(x.data(), x.data() + x.size());
        const auto& R = qr.matrixR();
        const double r_max = std::abs(R(0, 0));
        const double r_min = std::abs(R(static_cast<Eigen::Index>(cols) - 1, static_cast<Eigen::Index>(cols) - 1));
        candidate.condition_ = r_min > 0.0 ? r_max / r_min : std::numeric_limits<double>::infinity();

        double residual = 0.0;
        for (const auto& [z, target] : collocation) residual = std::max(residual, std::abs(candidate.eval(z) - target));
        for (const auto& [z, target] : check) residual = std::max(residual, std::abs(candidate.eval(z) - target));
        candidate.residual_ = residual;

        best.history_.push_back({order, residual});
        if (residual < best.residual_) {
            auto history = std::move(best.history_);
            best = std::move(candidate);
            best.history_ = std::move(history);
        }
        if (residual < tol) return best;
    }
    fail(ErrorCode::NoConvergence, "harmonic measure residual stalled at " + std::to_string(best.residual_));
}

/// Per-boundary Abel sums sum_j u_k(p_j) against the target degrees d_k.
struct AbelReport {
    std::vector<double> sums;    // k = 1..g
    std::vector<int> targets;    // d_1..d_g
    std::vector<double> residuals;
    std::vector<bool> pass;
    double tolerance = 0.0;
    double solver_residual = 0.0;

    [[nodiscard]] bool all_pass() const { return std::all_of(pass.begin(), pass.end(), [](bool b) { return b; }); }
};

namespace detail {

inline void require_abel_divisor(const CircleDomain& dom, const Divisor& zeros) {
    for (const auto& p : zeros.points())
        if (!dom.contains(p)) fail(ErrorCode::OutOfDomain, "zero lies outside the circle domain");
    if (static_cast<int>(zeros.size()) != dom.total_degree())
        fail(ErrorCode::InvalidArgument, "number of zeros must equal the sum of boundary degrees");
}

inline AbelReport abel_from_measures(const CircleDomain& dom, const std::vector<HarmonicMeasure>& measures,
                                     const Divisor& zeros, double tol) {
    AbelReport report;
    for (const auto& u : measures) report.solver_residual = std::max(report.solver_residual, u.residual());
    report.tolerance = std::max(tol, 10.0 * report.solver_residual);
    for (std::size_t k = 1; k <= dom.genus(); ++k) {
        double s = 0.0;
        for (const auto& p : zeros.points()) s += measures[k - 1](p);
        report.sums.push_back(s);
        report.targets.push_back(dom.degrees[k]);
        report.residuals.push_back(s - dom.degrees[k]);
        report.pass.push_back(std::abs(s - dom.degrees[k]) <= report.tolerance);
    }
    return report;
}

inline std::vector<HarmonicMeasure> solve_inner_measures(const CircleDomain& dom, double solver_tol) {
    std::vector<HarmonicMeasure> measures;
    for (std::size_t k = 1; k <= dom.genus(); ++k) measures.push_back(solve_harmonic_measure(dom, k, solver_tol));
    return measures;
}

inline constexpr double kSolverTolerance = 1e-10;

} // namespace detail

/// Checks sum_j u_k(p_j) = d_k for k = 1..g at tolerance max(tol, 10 * solver residual).
inline AbelReport abel_condition(const CircleDomain& dom, const Divisor& zeros, double tol) {
    dom.validate();
    detail::require_abel_divisor(dom, zeros);
    const auto measures = detail::solve_inner_measures(dom, detail::kSolverTolerance);
    return detail::abel_from_measures(dom, measures, zeros, tol);
}

/// Moves one designated zero per inner circle along the ray from that
/// circle's centre until the Abel sums match the degrees.
inline Divisor abel_adjust(const CircleDomain& dom, const Divisor& zeros, double tol, int max_iter = 50) {
    dom.validate();
    detail::require_abel_divisor(dom, zeros);
    const std::size_t g = dom.genus();
    if (g > 3) fail(ErrorCode::InvalidArgument, "abel_adjust supports g <= 3");

    const auto measures = detail::solve_inner_measures(dom, detail::kSolverTolerance);
    std::vector<cplx> pts(zeros.points().begin(), zeros.points().end());
    if (detail::abel_from_measures(dom, measures, Divisor(pts), tol).all_pass()) return zeros;

    // Designate, for each inner circle, the closest still-free zero.
    std::vector<std::size_t> designated;
    std::vector<bool> taken(pts.size(), false);
    for (std::size_t k = 1; k <= g; ++k) {
        const Circle& c = dom.boundary(k);
        std::size_t best = pts.size();
        double best_gap = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < pts.size(); ++j) {
            if (taken[j]) continue;
            const double gap = std::abs(pts[j] - c.center) - c.radius;
            if (gap < best_gap) {
                best_gap = gap;
                best = j;
            }
        }
        if (best == pts.size()) fail(ErrorCode::InvalidArgument, "not enough zeros to designate");
        taken[best] = true;
        designated.push_back(best);
    }

    std::vector<cplx> direction(g);
    Eigen::VectorXd s(static_cast<Eigen::Index>(g));
    for (std::size_t k = 0; k < g; ++k) {
        const cplx offset = pts[designated[k]] - dom.inner[k].center;
        s(static_cast<Eigen::Index>(k)) = std::abs(offset);
        direction[k] = offset / std::abs(offset);
    }

    auto place = [&](const Eigen::VectorXd& radii) {
        std::vector<cplx> moved = pts;
        for (std::size_t k = 0; k < g; ++k)
            moved[designated[k]] = dom.inner[k].center + radii(static_cast<Eigen::Index>(k)) * direction[k];
        return moved;
    };
    auto residual = [&](const std::vector<cplx>& moved) {
        Eigen::VectorXd res(static_cast<Eigen::Index>(g));
        for (std::size_t k = 0; k < g; ++k) {
            double sum = 0.0;
            for (const auto& p : moved) sum += measures[k](p);
            res(static_cast<Eigen::Index>(k)) = sum - dom.degrees[k + 1];
        }
        return res;
    };
    auto inside = [&](const std::vector<cplx>& moved) {
        return std::all_of(moved.begin(), moved.end(), [&](cplx p) { return dom.contains(p); });
    };

    const double pass_tol = detail::abel_from_measures(dom, measures, Divisor(pts), tol).tolerance;
    Eigen::VectorXd res = residual(place(s));
    for (int iter = 0; iter < max_iter; ++iter) {
        if (res.cwiseAbs().maxCoeff() <= pass_tol) return Divisor(place(s), zeros.ambient());

        Eigen::MatrixXd J(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(g));
        for (std::size_t k = 0; k < g; ++k) {
            const double h = 1e-6 * std::max(1.0, s(static_cast<Eigen::Index>(k)));
            Eigen::VectorXd sp = s, sm = s;
            sp(static_cast<Eigen::Index>(k)) += h;
            sm(static_cast<Eigen::Index>(k)) -= h;
            J.col(static_cast<Eigen::Index>(k)) = (residual(place(sp)) - residual(place(sm))) / (2.0 * h);
        }
        Eigen::VectorXd step = J.colPivHouseholderQr().solve(-res);
        if (!step.allFinite()) fail(ErrorCode::NoConvergence, "singular Abel Jacobian");

        bool accepted = false;
        for (int halving = 0; halving < 30; ++halving) {
            const Eigen::VectorXd trial = s + step;
            const auto moved = place(trial);
            if (inside(moved)) {
                const Eigen::VectorXd trial_res = residual(moved);
                if (trial_res.norm() < res.norm()) {
                    s = trial;
                    res = trial_res;
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if (!accepted) {
            if (!inside(place(s + step * (1 << 30))))
                fail(ErrorCode::Stuck, "a designated zero would leave the domain");
            fail(ErrorCode::NoConvergence, "Abel adjustment made no progress");
        }
    }
    if (res.cwiseAbs().maxCoeff() <= pass_tol) return Divisor(place(s), zeros.ambient());
    fail(ErrorCode::NoConvergence, "Abel adjustment exceeded its iteration budget");
}

} // namespace abp
