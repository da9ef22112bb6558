#pragma once

#include "abp/error.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

namespace abp {

enum class SchemeType { I, II, III };

constexpr const char* to_string(SchemeType t) noexcept {
    switch (t) {
    case SchemeType::I: return "I";
    case SchemeType::II: return "II";
    case SchemeType::III: return "III";
    }
    return "?";
}

inline SchemeType parse_scheme_type(const std::string& s) {
    if (s == "I") return SchemeType::I;
    if (s == "II") return SchemeType::II;
    if (s == "III") return SchemeType::III;
    fail(ErrorCode::InvalidArgument, "scheme type must be I, II or III, got '" + s + "'");
}

namespace detail {

inline std::int64_t checked_lcm(std::int64_t a, std::int64_t b) {
    const std::int64_t g = std::gcd(a, b);
    std::int64_t out = 0;
    if (__builtin_mul_overflow(a / g, b, &out)) fail(ErrorCode::InvalidArgument, "lcm overflows 64-bit integers");
    return out;
}

inline std::int64_t lcm_of(const std::vector<int>& d) {
    std::int64_t l = 1;
    for (int x : d) l = checked_lcm(l, x);
    return l;
}

// sum_k lcm / d_k, i.e. lcm * sum 1/d_k.
inline std::int64_t scaled_reciprocal_sum(const std::vector<int>& d, std::int64_t l) {
    std::int64_t s = 0;
    for (int x : d) s += l / x;
    return s;
}

inline bool palindromic(const std::vector<int>& d) { return std::equal(d.begin(), d.begin() + d.size() / 2, d.rbegin()); }

// gcd over k = 1..n+1 of d_k + sign * (-1)^k.
inline std::int64_t alternating_gcd(const std::vector<int>& d, int sign) {
    std::int64_t g = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const int k = static_cast<int>(i) + 1;
        const int alt = (k % 2 == 0) ? 1 : -1;
        g = std::gcd(g, static_cast<std::int64_t>(d[i]) + sign * alt);
    }
    return g;
}

} // namespace detail

/// True iff every entry is >= 2 and sum 1/d_k < 1, decided exactly.
inline bool is_admissible(const std::vector<int>& d) {
    if (d.empty()) return false;
    for (int x : d) {
        if (x < 1) fail(ErrorCode::InvalidArgument, "partition entries must be positive");
        if (x < 2) return false;
    }
    const std::int64_t l = detail::lcm_of(d);
    return detail::scaled_reciprocal_sum(d, l) < l;
}

/// Ordered admissible tuple (d_1, ..., d_{n+1}).
class PartitionVector {
public:
    explicit PartitionVector(std::vector<int> d) : d_(std::move(d)) {
        if (d_.size() < 2) fail(ErrorCode::InvalidArgument, "partition needs at least two entries (n >= 1)");
        if (!is_admissible(d_)) fail(ErrorCode::InvalidArgument, "partition is not admissible");
    }

    [[nodiscard]] const std::vector<int>& entries() const noexcept { return d_; }
    [[nodiscard]] int n() const noexcept { return static_cast<int>(d_.size()) - 1; }
    [[nodiscard]] int total() const noexcept { return std::accumulate(d_.begin(), d_.end(), 0); }
    [[nodiscard]] int operator[](std::size_t k) const { return d_.at(k); } // 0-based: d_{k+1}
    [[nodiscard]] bool palindromic() const { return detail::palindromic(d_); }
    friend bool operator==(const PartitionVector&, const PartitionVector&) = default;

private:
    std::vector<int> d_;
};

enum class Disk { zero, infinity };

/// The pair (type, tau). tau sends D_0, D_inf and each D_k (k = 1..n) to D_0 or D_inf.
class MappingScheme {
public:
    MappingScheme(SchemeType type, PartitionVector d) : type_(type), d_(std::move(d)) {
        require_parity(type_, d_.n());
        const auto n = static_cast<std::size_t>(d_.n());
        tau_k_.resize(n);
        for (std::size_t k = 1; k <= n; ++k) {
            const bool odd = k % 2 == 1;
            switch (type_) {
            case SchemeType::I:
            case SchemeType::III: tau_k_[k - 1] = odd ? Disk::infinity : Disk::zero; break;
            case SchemeType::II: tau_k_[k - 1] = odd ? Disk::zero : Disk::infinity; break;
            }
        }
        switch (type_) {
        case SchemeType::I: tau_zero_ = Disk::zero, tau_inf_ = Disk::zero; break;
        case SchemeType::II: tau_zero_ = Disk::infinity, tau_inf_ = Disk::zero; break;
        case SchemeType::III: tau_zero_ = Disk::zero, tau_inf_ = Disk::infinity; break;
        }
    }

    static void require_parity(SchemeType type, int n) {
        const bool odd = n % 2 == 1;
        if (type == SchemeType::I && !odd) fail(ErrorCode::ParityViolation, "type I needs n odd");
        if (type != SchemeType::I && odd) fail(ErrorCode::ParityViolation, "types II and III need n even");
    }

    [[nodiscard]] SchemeType type() const noexcept { return type_; }
    [[nodiscard]] const PartitionVector& partition() const noexcept { return d_; }
    [[nodiscard]] Disk tau_zero() const noexcept { return tau_zero_; }
    [[nodiscard]] Disk tau_infinity() const noexcept { return tau_inf_; }
    [[nodiscard]] Disk tau(int k) const { return tau_k_.at(static_cast<std::size_t>(k - 1)); } // k = 1..n

private:
    SchemeType type_;
    PartitionVector d_;
    Disk tau_zero_ = Disk::zero;
    Disk tau_inf_ = Disk::zero;
    std::vector<Disk> tau_k_;
};

enum class Sign { plus, minus };

struct Characteristic {
    std::vector<Sign> chi;
};

inline Characteristic parse_characteristic(const std::string& s) {
    Characteristic c;
    for (char ch : s) {
        if (ch == '+') c.chi.push_back(Sign::plus);
        else if (ch == '-') c.chi.push_back(Sign::minus);
        else if (ch != ',' && ch != ' ') fail(ErrorCode::InvalidArgument, "characteristic symbols must be + or -");
    }
    return c;
}

inline constexpr int kMaxEnumerationTotal = 128;

/// All ordered admissible (d_1..d_{n+1}) with the given total, lexicographic.
inline std::vector<PartitionVector> enumerate_admissible(int total, int n) {
    if (total < 5) fail(ErrorCode::InvalidArgument, "total degree must be >= 5");
    if (total > kMaxEnumerationTotal) fail(ErrorCode::InvalidArgument, "total degree is capped at 128");
    if (n < 1 || (n + 1) * (n + 1) >= total)
        fail(ErrorCode::EmptyRange, "n must satisfy 1 <= n < sqrt(d) - 1");

    std::vector<PartitionVector> out;
    std::vector<int> cur;
    const int parts = n + 1;
    auto rec = [&](auto&& self, int remaining) -> void {
        const int left = parts - static_cast<int>(cur.size());
        if (left == 1) {
            cur.push_back(remaining);
            if (is_admissible(cur)) out.emplace_back(cur);
            cur.pop_back();
            return;
        }
        for (int x = 2; x <= remaining - 2 * (left - 1); ++x) {
            cur.push_back(x);
            self(self, remaining - x);
            cur.pop_back();
        }
    };
    rec(rec, total);
    return out;
}

/// deg rho = (1 - sum 1/d_k) lcm(d).
inline std::int64_t covering_degree(const PartitionVector& d) {
    const std::int64_t l = detail::lcm_of(d.entries());
    return l - detail::scaled_reciprocal_sum(d.entries(), l);
}

/// sum 1/d_k + 1/lcm = 1.
inline bool is_rho_homeomorphism(const PartitionVector& d) {
    const std::int64_t l = detail::lcm_of(d.entries());
    return detail::scaled_reciprocal_sum(d.entries(), l) + 1 == l;
}

struct MarkingCounts {
    std::vector<std::int64_t> s; // s_1 .. s_n
    std::int64_t s_infinity = 0;
};

inline MarkingCounts marking_counts(const PartitionVector& d, SchemeType type, const Characteristic& chi) {
    MappingScheme::require_parity(type, d.n());
    if (static_cast<int>(chi.chi.size()) != d.n())
        fail(ErrorCode::InvalidArgument, "characteristic length must equal n");

    MarkingCounts out;
    const std::int64_t last = d[static_cast<std::size_t>(d.n())];
    switch (type) {
    case SchemeType::I: out.s_infinity = last; break;
    case SchemeType::II: out.s_infinity = 1; break;
    case SchemeType::III: out.s_infinity = last - 1; break;
    }
    for (int j = 1; j <= d.n(); ++j) {
        const std::int64_t dj = d[static_cast<std::size_t>(j - 1)];
        const std::int64_t dj1 = d[static_cast<std::size_t>(j)];
        const std::int64_t delta = chi.chi[static_cast<std::size_t>(j - 1)] == Sign::minus ? dj1 : dj;
        std::int64_t s = dj + dj1 - delta;
        if (type != SchemeType::II && j % 2 == 1) s *= out.s_infinity;
        out.s.push_back(s);
    }
    return out;
}

struct FiberBound {
    std::int64_t s0 = 0;
    std::int64_t bound = 0;
};

inline FiberBound p2_fiber_bound(const PartitionVector& d, SchemeType type) {
    MappingScheme::require_parity(type, d.n());
    const std::int64_t first = d[0];
    const std::int64_t last = d[static_cast<std::size_t>(d.n())];
    FiberBound out;
    out.s0 = type == SchemeType::II ? first * last - 1 : first - 1;
    out.bound = type == SchemeType::I ? out.s0 : 2 * out.s0;
    return out;
}

struct AutBound {
    std::int64_t cyclic_order_divisor = 1;
    bool dihedral_possible = false;
};

inline AutBound aut_bound(const PartitionVector& d, SchemeType type) {
    MappingScheme::require_parity(type, d.n());
    AutBound out;
    out.cyclic_order_divisor = detail::alternating_gcd(d.entries(), type == SchemeType::II ? -1 : 1);
    out.dihedral_possible = type != SchemeType::I && d.palindromic() && d.n() % 2 == 0;
    return out;
}

/// Modulus that the order of a rotation group must divide: D -/+ 1 for
/// centred disk maps (sign + gives D - 1).
inline std::int64_t rot_group_order_divisor_disk(int D, Sign sign) {
    if (D < 2) fail(ErrorCode::InvalidArgument, "disk degree must be >= 2");
    return sign == Sign::plus ? D - 1 : D + 1;
}

/// gcd(delta +/- 1, e) for annulus maps, with gcd(0, e) = e.
inline std::int64_t rot_group_order_divisor_annulus(int e, int delta, Sign sign) {
    if (!(delta >= 1 && e > delta)) fail(ErrorCode::InvalidArgument, "annulus parameters need e > delta >= 1");
    return std::gcd(static_cast<std::int64_t>(sign == Sign::plus ? delta + 1 : delta - 1), static_cast<std::int64_t>(e));
}

inline bool torus_cover_criterion(const PartitionVector& d, SchemeType type) {
    MappingScheme::require_parity(type, d.n());
    switch (type) {
    case SchemeType::I: return detail::alternating_gcd(d.entries(), 1) == 1;
    case SchemeType::II: return detail::alternating_gcd(d.entries(), -1) == 1 && !d.palindromic();
    case SchemeType::III: return detail::alternating_gcd(d.entries(), 1) == 1 && !d.palindromic();
    }
    return false;
}

} // namespace abp
