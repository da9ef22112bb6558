#include "abp/numerics.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace abp;

namespace {

std::vector<cplx> expand(const std::vector<cplx>& roots) {
    // Ascending coefficients of prod (z - r_k).
    std::vector<cplx> c{1.0};
    for (const auto& r : roots) {
        std::vector<cplx> next(c.size() + 1, 0.0);
        for (std::size_t k = 0; k < c.size(); ++k) {
            next[k + 1] += c[k];
            next[k] -= r * c[k];
        }
        c = next;
    }
    return c;
}

} // namespace

TEST(Winding, IdentityOnUnitCircle) {
    EXPECT_EQ(winding_number([](cplx z) { return z; }, Contour{}), 1);
}

TEST(Winding, NegativePower) {
    EXPECT_EQ(winding_number([](cplx z) { return 1.0 / (z * z * z); }, Contour{}), -3);
}

TEST(Winding, ZeroOutsideContour) {
    EXPECT_EQ(winding_number([](cplx z) { return z - 2.0; }, Contour{}), 0);
}

TEST(Winding, BlaschkeTypeProduct) {
    // z^-1 times a factor vanishing at 0.5: inner circle sees -1 (counter-clockwise), outer sees 0.
    auto f = [](cplx z) { return (z - 0.5) / (1.0 - 0.5 * z) / z; };
    EXPECT_EQ(winding_number(f, Contour{{0.0, 0.0}, 0.9, 64}), 0);
    EXPECT_EQ(-winding_number(f, Contour{{0.0, 0.0}, 0.3, 64}), 1);
}

TEST(Winding, ZeroOnContourIsReported) {
    try {
        (void)winding_number([](cplx z) { return z - 1.0; }, Contour{});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ZeroOnContour);
    }
}

TEST(Winding, RejectsBadSampleCount) {
    EXPECT_THROW((void)winding_number([](cplx z) { return z; }, Contour{{0.0, 0.0}, 1.0, 100}), Error);
}

TEST(Winding, StableUnderSampleDoubling) {
    auto f = [](cplx z) { return (z - 0.3) * (z + 0.2) * (z - cplx(0.0, 0.4)) * (z - 3.0); };
    for (std::size_t n : {64u, 128u, 256u, 1024u}) EXPECT_EQ(winding_number(f, Contour{{0.0, 0.0}, 1.0, n}), 3);
}

TEST(Tolerance, RangeIsEnforced) {
    EXPECT_THROW(Tolerance({1e-16, 10}).validate(), Error);
    EXPECT_THROW(Tolerance({0.1, 10}).validate(), Error);
    EXPECT_NO_THROW(Tolerance({1e-12, 10}).validate());
}

TEST(Roots, QuadraticExact) {
    const std::vector<cplx> c{-1.0, 0.0, 1.0};
    const Divisor r = polynomial_roots(c);
    EXPECT_LE(multiset_distance(r, Divisor({1.0, -1.0})), 1e-12);
}

TEST(Roots, RandomRoundtripAgainstExpansion) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
        const int deg = 2 + trial % 12;
        std::vector<cplx> roots;
        for (int k = 0; k < deg; ++k) roots.emplace_back(u(rng), u(rng));
        const Divisor found = polynomial_roots(expand(roots));
        EXPECT_LE(multiset_distance(found, Divisor(roots)), 1e-8) << "degree " << deg;
    }
}

TEST(Roots, DoubleRootIsMerged) {
    // (z - 0.5)^2 (z + 1)
    const auto c = expand({0.5, 0.5, -1.0});
    const Divisor r = polynomial_roots(c, Tolerance{1e-6, 500});
    ASSERT_EQ(r.size(), 3u);
    EXPECT_LE(multiset_distance(r, Divisor({0.5, 0.5, -1.0})), 1e-5);
}

TEST(Roots, DegenerateInputs) {
    const std::vector<cplx> constant{1.0};
    EXPECT_THROW((void)polynomial_roots(constant), Error);
    const std::vector<cplx> tiny_lead{1.0, 1.0, 1e-20};
    try {
        (void)polynomial_roots(tiny_lead);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DegenerateInput);
    }
}

TEST(Roots, RootsOfUnity) {
    std::vector<cplx> c(9, 0.0);
    c[0] = -1.0;
    c[8] = 1.0;
    const Divisor r = polynomial_roots(c);
    for (const auto& z : r.points()) EXPECT_NEAR(std::abs(z), 1.0, 1e-12);
}

TEST(RootFinder, CubeRoot) {
    const double x = find_root_monotone([](double t) { return t * t * t; }, 0.0, 3.0, 2.0, Tolerance{1e-14, 200});
    EXPECT_NEAR(x, std::cbrt(2.0), 1e-12);
}

TEST(RootFinder, DecreasingFunction) {
    const double x = find_root_monotone([](double t) { return std::exp(-t); }, 0.0, 10.0, 0.25);
    EXPECT_NEAR(x, std::log(4.0), 1e-9);
}

TEST(RootFinder, BadBracket) {
    try {
        (void)find_root_monotone([](double t) { return t; }, 1.0, 2.0, 5.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::BadBracket);
    }
}

TEST(RootFinder, DiscontinuityIsReported) {
    try {
        (void)find_root_monotone([](double t) { return t < 0.3 ? -1.0 : 1.0; }, 0.0, 1.0, 0.0, Tolerance{1e-12, 500});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NoConvergence);
    }
}

TEST(Divisor, SortedCanonicalOrder) {
    const Divisor d({cplx(0.0, -0.5), cplx(0.5, 0.0), cplx(0.0, 0.5), cplx(0.2, 0.0)});
    const Divisor s = d.sorted();
    EXPECT_EQ(s[0], cplx(0.2, 0.0));
    EXPECT_EQ(s[1], cplx(0.5, 0.0));
    EXPECT_EQ(s[2], cplx(0.0, 0.5));
    EXPECT_EQ(s[3], cplx(0.0, -0.5));
}

TEST(Divisor, ProductModulusViaLogs) {
    std::vector<cplx> pts(2000, cplx(0.5, 0.0));
    const Divisor d(pts);
    EXPECT_NEAR(d.log_product_modulus(), 2000.0 * std::log(0.5), 1e-9);
}

TEST(Divisor, AmbientMembership) {
    EXPECT_THROW(Divisor({cplx(0.1, 0.0)}, Ambient::annulus(0.2)).require_inside(), Error);
    EXPECT_NO_THROW(Divisor({cplx(0.3, 0.0)}, Ambient::annulus(0.2)).require_inside());
    EXPECT_THROW(Divisor({cplx(0.0, 0.0)}, Ambient::punctured_plane()).require_inside(), Error);
}

TEST(Roots, TripleRootAtOrigin) {
    const std::vector<cplx> c{0.0, 0.0, 0.0, 1.0};
    const Divisor r = polynomial_roots(c);
    ASSERT_EQ(r.size(), 3u);
    for (const auto& z : r.points()) EXPECT_LE(std::abs(z), 1e-9);
}

TEST(Roots, ReexpansionMatchesCoefficients) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<cplx> c;
        for (int k = 0; k < 7; ++k) c.emplace_back(u(rng), u(rng));
        c.push_back(1.0);
        const Divisor r = polynomial_roots(c);
        const auto back = expand(std::vector<cplx>(r.points().begin(), r.points().end()));
        for (std::size_t k = 0; k < c.size(); ++k) EXPECT_LE(std::abs(back[k] - c[k]), 100.0 * 1e-10);
    }
}

TEST(RootFinder, Reciprocal) {
    const double x = find_root_monotone([](double t) { return 1.0 / t; }, 0.1, 10.0, 2.0, Tolerance{1e-13, 200});
    EXPECT_NEAR(x, 0.5, 1e-12);
}

TEST(Winding, Monomial) { EXPECT_EQ(winding_number([](cplx z) { return z * z * z; }, Contour{}), 3); }

TEST(Winding, FactorOutsideSmallCircle) {
    auto f = [](cplx z) { return (z - 0.5) / (1.0 - 0.5 * z); };
    EXPECT_EQ(winding_number(f, Contour{}), 1);
    EXPECT_EQ(winding_number(f, Contour{{0.0, 0.0}, 0.4, 64}), 0);
}

TEST(Winding, AdditiveOverProducts) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-0.7, 0.7);
    for (int trial = 0; trial < 20; ++trial) {
        const cplx a(u(rng), u(rng)), b(u(rng), u(rng));
        auto fa = [&](cplx z) { return (z - a) / (1.0 - std::conj(a) * z); };
        auto fb = [&](cplx z) { return (z - b) / (1.0 - std::conj(b) * z); };
        const Contour c{{0.0, 0.0}, 0.5, 64};
        if (std::abs(std::abs(a) - 0.5) < 1e-3 || std::abs(std::abs(b) - 0.5) < 1e-3) continue;
        EXPECT_EQ(winding_number([&](cplx z) { return fa(z) * fb(z); }, c),
                  winding_number(fa, c) + winding_number(fb, c));
    }
}
