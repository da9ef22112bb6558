// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include "abp/abp.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>

using namespace abp;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::string note;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) note = what;
        pass = pass && ok;
    }
};

Divisor random_corrected(std::mt19937_64& rng, double r, int e, int delta) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (;;) {
        std::vector<cplx> pts;
        for (int k = 0; k < e; ++k)
            pts.push_back(std::polar(r + (1.0 - r) * (0.05 + 0.9 * u(rng)), 2.0 * kPi * u(rng)));
        try {
            return radial_correct(r, delta, Divisor(pts));
        } catch (const Error&) {
        }
    }
}

std::vector<AnnulusProperMap> g_built; // every map built by criteria 1 to 3, for criterion 4

cplx sample_annulus(std::mt19937_64& rng, double r) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return std::polar(r + (1.0 - r) * u(rng), 2.0 * kPi * u(rng));
}

Outcome criterion_1() {
    Outcome out;
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> ur(0.05, 0.8);
    for (int t = 0; t < 20; ++t) {
        const auto start = std::chrono::steady_clock::now();
        const int e = 2 + t % 5;
        const int delta = 1 + (t / 5) % (e - 1);
        const double r = ur(rng);
        const Divisor zeros = random_corrected(rng, r, e, delta);
        const auto f = AnnulusProperMap::build(r, delta, zeros, 1e-12);
        const double tb = f.tail_bound();

        out.require(std::abs(f(1.0) - 1.0) <= 1e-12, "f(1) != 1");
        for (const auto& p : zeros.points()) out.require(std::abs(f(p)) <= tb + 1e-10, "|f(p_k)| above bound");
        for (int k = 0; k < 512; ++k) {
            const cplx u = std::polar(1.0, 2.0 * kPi * k / 512.0);
            out.require(std::abs(std::abs(f(u)) - 1.0) <= tb + 1e-9, "outer boundary modulus");
            out.require(std::abs(std::abs(f(r * u)) - 1.0) <= tb + 1e-9, "inner boundary modulus");
        }
        double p_min = 1.0, p_max = 0.0;
        for (const auto& p : zeros.points()) {
            p_min = std::min(p_min, std::abs(p));
            p_max = std::max(p_max, std::abs(p));
        }
        auto fz = [&](cplx z) { return f(z); };
        const int w_inner = -winding_number(fz, Contour{{0.0, 0.0}, 0.5 * (r + p_min), 256});
        const int w_outer = winding_number(fz, Contour{{0.0, 0.0}, 0.5 * (p_max + 1.0), 256});
        out.require(w_inner == delta && w_outer == e - delta, "winding numbers");

        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        out.require(secs < 1.0, "instance slower than 1 s");
        g_built.push_back(f);
    }
    return out;
}

Outcome criterion_2() {
    Outcome out;
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> ur(0.1, 0.7);
    double worst_mod = 0.0, worst_ref = 0.0;
    for (int t = 0; t < 5; ++t) {
        const int e = 2 + t, delta = 1 + t % (e - 1);
        const double r = ur(rng);
        const auto f = AnnulusProperMap::build(r, delta, random_corrected(rng, r, e, delta), 1e-12);
        const double allowed = 2.0 * f.tail_bound() + 1e-9;
        for (int k = 0; k < 1000; ++k) {
            const cplx z = sample_annulus(rng, r);
            const cplx fz = f.eval_extended(z);
            const double mod = std::abs(f.eval_extended(r * r * z) - fz);
            const double ref = std::abs(1.0 / std::conj(fz) - f.eval_extended(1.0 / std::conj(z)));
            worst_mod = std::max(worst_mod, mod);
            worst_ref = std::max(worst_ref, ref);
            out.require(mod <= allowed, "modularity defect");
            out.require(ref <= allowed, "reflection defect");
        }
        g_built.push_back(f);
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "max modularity %.1e, reflection %.1e", worst_mod, worst_ref);
    if (out.pass) out.note = buf;
    return out;
}

Outcome criterion_3() {
    Outcome out;
    std::mt19937_64 rng(3);
    const double r = 0.3;
    const int delta = 2;
    const auto f = AnnulusProperMap::build(r, delta, random_corrected(rng, r, 4, delta), 1e-12);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
        const cplx w = std::polar(0.7 * std::sqrt(u(rng)), 2.0 * kPi * u(rng));
        const Divisor pre = f.fiber(w);
        out.require(pre.size() == 4, "fiber does not have 4 points");
        const double prod = std::exp(pre.log_product_modulus());
        worst = std::max(worst, std::abs(prod - std::pow(r, delta)));
        out.require(std::abs(prod - std::pow(r, delta)) <= 1e-7, "fiber product modulus");
    }
    g_built.push_back(f);
    char buf[64];
    std::snprintf(buf, sizeof buf, "max deviation %.1e", worst);
    if (out.pass) out.note = buf;
    return out;
}

Outcome criterion_4() {
    Outcome out;
    std::mt19937_64 rng(4);
    out.require(!g_built.empty(), "no maps were built");
    double worst_ratio = 0.0;
    for (const auto& f : g_built) {
        double gap = 0.0;
        for (int k = 0; k < 1000; ++k) {
            const cplx z = sample_annulus(rng, f.r());
            gap = std::max(gap, std::abs(f(z) - f.eval_truncated(z, 2 * f.truncation())));
        }
        out.require(gap <= f.tail_bound(), "empirical doubling gap exceeds the certified bound");
        worst_ratio = std::max(worst_ratio, gap / f.tail_bound());
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "%zu maps, max gap/bound %.1e", g_built.size(), worst_ratio);
    if (out.pass) out.note = buf;
    return out;
}

Outcome criterion_5() {
    Outcome out;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ur(0.05, 0.8), u(0.0, 1.0);
    for (auto [e, delta] : {std::pair{2, 1}, std::pair{3, 1}, std::pair{3, 2}, std::pair{5, 2}}) {
        for (int t = 0; t < 50; ++t) {
            const double r = ur(rng);
            const Divisor z = random_corrected(rng, r, e, delta);
            const NormalizedDivisor nd = phi_r(z, r);
            out.require(multiset_distance(psi_r(nd, r, delta), z) <= 1e-9, "psi(phi(z)) != z");
            out.require(multiset_distance(phi_r(psi_r(nd, r, delta), r).points(), nd.points()) <= 1e-9,
                        "phi(psi(nd)) != nd");
        }
    }
    {
        const NormalizedDivisor nd = phi_r(random_corrected(rng, 0.3, 4, 1), 0.3);
        double prev = detail::log_g(nd, 0.3, 1e-12);
        for (int k = 1; k < 100; ++k) {
            const double g = detail::log_g(nd, 0.3, std::pow(10.0, -12.0 + 24.0 * k / 99.0));
            out.require(g < prev, "g not strictly decreasing");
            prev = g;
        }
    }
    for (int t = 0; t < 20; ++t) {
        std::vector<cplx> pts;
        for (int k = 0; k < 2 + t % 8; ++k) pts.emplace_back(2.0 * u(rng) - 1.0, 2.0 * u(rng) - 1.0);
        const auto c = sym_e(Divisor(pts));
        std::vector<cplx> asc(c.size() + 1);
        asc.back() = 1.0;
        for (std::size_t k = 1; k <= c.size(); ++k) asc[c.size() - k] = (k % 2 == 0 ? 1.0 : -1.0) * c[k - 1];
        out.require(multiset_distance(polynomial_roots(asc), Divisor(pts)) <= 1e-8, "sym_e / roots roundtrip");
    }
    for (int k = 0; k <= 10; ++k) {
        const double v = 0.1 * k;
        const auto a = mobius_band_point(1.0, v), b = mobius_band_point(0.0, 1.0 - v);
        for (int i = 0; i < 3; ++i) out.require(std::abs(a[i] - b[i]) <= 1e-12, "mobius seam");
    }
    return out;
}

Outcome criterion_6() {
    Outcome out;
    {
        const double r = 0.35;
        const auto u = solve_harmonic_measure(CircleDomain::annulus(r, 3, 1), 1, 1e-10);
        std::mt19937_64 rng(6);
        double worst = 0.0;
        for (int k = 0; k < 100; ++k) {
            const cplx z = std::polar(r + 1e-3 + (1.0 - r - 2e-3) * (rng() * 0x1.0p-64), 2.0 * kPi * (rng() * 0x1.0p-64));
            worst = std::max(worst, std::abs(u(z) - std::log(std::abs(z)) / std::log(r)));
        }
        out.require(worst <= 1e-6, "annulus harmonic measure");
    }
    {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const double r = 0.3;
        int agree = 0;
        for (int t = 0; t < 50; ++t) {
            const int e = 2 + t % 4, delta = 1 + t % (e - 1);
            std::vector<cplx> pts;
            for (int k = 0; k < e; ++k) pts.push_back(std::polar(r + (1.0 - r) * (0.2 + 0.6 * u(rng)), 2.0 * kPi * u(rng)));
            Divisor z(pts);
            if (t % 2 == 0) {
                try {
                    z = radial_correct(r, delta, z);
                } catch (const Error&) {
                }
            }
            agree += abel_condition(CircleDomain::annulus(r, e, delta), z, 1e-9).all_pass() ==
                     existence_check(r, delta, z).ok;
        }
        out.require(agree == 50, "abel / existence disagreement");
    }
    {
        const CircleDomain dom{Circle{{0.0, 0.0}, 1.0}, {Circle{{0.0, 0.4}, 0.15}, Circle{{0.0, -0.4}, 0.15}}, {2, 1, 1}};
        const auto u1 = solve_harmonic_measure(dom, 1, 1e-10);
        const auto u2 = solve_harmonic_measure(dom, 2, 1e-10);
        const double tol = 2.0 * std::max(u1.residual(), u2.residual());
        std::mt19937_64 rng(8);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        int probes = 0;
        while (probes < 100) {
            const cplx z(u(rng), u(rng));
            if (!dom.contains(z)) continue;
            ++probes;
            out.require(std::abs(u1(std::conj(z)) - u2(z)) <= tol, "mirror symmetry");
        }
    }
    return out;
}

Outcome criterion_7() {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    int checked = 0;
    for (int total = 5; total <= 20; ++total)
        for (int n = 1; (n + 1) * (n + 1) < total; ++n)
            for (const auto& d : enumerate_admissible(total, n)) {
                ++checked;
                std::int64_t l = 1, num = 0;
                for (int x : d.entries()) l = std::lcm(l, static_cast<std::int64_t>(x));
                for (int x : d.entries()) num += l / x;
                const std::int64_t deg = covering_degree(d);
                out.require(deg == l - num && deg >= 1, "covering degree integrality");
                out.require(is_rho_homeomorphism(d) == (deg == 1), "degree 1 <=> homeomorphism");
            }
    auto pv = [](std::vector<int> d) { return PartitionVector(std::move(d)); };
    out.require(covering_degree(pv({2, 3})) == 1 && covering_degree(pv({2, 3, 7})) == 1 &&
                    covering_degree(pv({3, 3, 4})) == 1,
                "deg rho = 1 examples");
    out.require(p2_fiber_bound(pv({3, 3, 4}), SchemeType::II).s0 == 11, "s0 for (3,3,4) type II");
    out.require(p2_fiber_bound(pv({6, 2, 6}), SchemeType::II).bound == 70, "fiber bound for (6,2,6) type II");
    const auto a1 = aut_bound(pv({2, 3}), SchemeType::I);
    const auto a2 = aut_bound(pv({3, 3, 4}), SchemeType::II);
    const auto a3 = aut_bound(pv({6, 2, 6}), SchemeType::II);
    out.require(a1.cyclic_order_divisor == 1 && !a1.dihedral_possible, "Aut trivial for (2,3) type I");
    out.require(a2.cyclic_order_divisor == 1 && !a2.dihedral_possible, "Aut trivial for (3,3,4) type II");
    out.require(a3.dihedral_possible, "dihedral possible for (6,2,6) type II");
    const auto e51 = enumerate_admissible(5, 1);
    out.require(e51.size() == 2 && e51[0] == pv({2, 3}) && e51[1] == pv({3, 2}), "enumerate(5,1)");
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.require(secs < 1.0, "slower than 1 s");
    if (out.pass) out.note = std::to_string(checked) + " partitions checked";
    return out;
}

int count_bands(const RasterImage& img, double theta) {
    const double cx = 0.5 * img.width, cy = 0.5 * img.height;
    int bands = 0;
    bool prev = false;
    for (double s = 0.0; s < 0.5 * img.width - 1.0; s += 0.25) {
        const bool black = img.is_black(static_cast<int>(cx + s * std::cos(theta)), static_cast<int>(cy - s * std::sin(theta)));
        if (black && !prev) ++bands;
        prev = black;
    }
    return bands;
}

Outcome criterion_8() {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    const McMullenMap f(3, 3, 1e-3);
    const auto rep = classify_cantor_circle(f);
    out.require(rep.is_cantor_circle && rep.n == 1 && rep.degrees == std::vector<int>{3, 3}, "classification");
    for (const auto& z : f.critical_points()) {
        const auto o = iterate(f, z, 50);
        out.require(o.fate == OrbitFate::escaped_to_infinity && o.steps <= 50, "critical orbit escape");
    }
    const auto diag = grotzsch_check(rep);
    out.require(diag.margin > 0.0, "Grotzsch margin");
    const auto a = render_julia(f, Window{}, 512, 512);
    const auto b = render_julia(f, Window{}, 512, 512);
    out.require(a.rgb == b.rgb, "render not deterministic");
    int min_bands = 1 << 30;
    for (int k = 0; k < 8; ++k) min_bands = std::min(min_bands, count_bands(a, 2.0 * kPi * (k + 0.5) / 8.0));
    out.require(min_bands >= 3, "fewer than 3 bands on a ray");
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.require(secs < 10.0, "slower than 10 s");
    char buf[96];
    std::snprintf(buf, sizeof buf, "margin %.3f, min bands per ray %d", diag.margin, min_bands);
    if (out.pass) out.note = buf;
    return out;
}

Outcome criterion_9() {
    Outcome out;
    for (double r : {0.1, 0.3, 0.6}) {
        for (int k = 0; k < 256; ++k) {
            const cplx u = std::polar(1.0, 2.0 * kPi * k / 256.0);
            out.require(std::abs(twist_map(r, u) - u) <= 1e-12, "outer circle not fixed");
            out.require(std::abs(twist_map(r, r * u) - r * u) <= 1e-12, "inner circle not fixed");
            const double s = 0.5 * (1.0 + r);
            out.require(std::abs(twist_map(r, s * u) + s * u) <= 1e-12, "no half-turn at mid-modulus");
        }
        for (double t : {0.25, 0.5, 0.75}) {
            const double s = r + t * (1.0 - r);
            const int w = winding_number([&](cplx z) { return twist_map(r, s * z / std::abs(z)); }, Contour{});
            out.require(w == 1, "per-circle winding");
        }
    }
    return out;
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"annulus product construction", criterion_1},
        {"modularity and reflection identities", criterion_2},
        {"fiber product invariance", criterion_3},
        {"truncation certificate", criterion_4},
        {"model space roundtrips", criterion_5},
        {"harmonic measure and Abel condition", criterion_6},
        {"scheme combinatorics", criterion_7},
        {"McMullen Cantor circle dynamics", criterion_8},
        {"twist map", criterion_9},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.note = std::string("exception: ") + e.what();
        }
        const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %zu %s  %-40s %9.1f ms  %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                    ms, o.note.c_str());
        failed += !o.pass;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
