#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>

namespace covlab {

/// The ordinal omega*q + n. Only ordinals below omega^2 are representable,
/// which is all the chain labels ever need.
struct Ordinal {
    std::uint32_t q = 0;
    std::uint32_t n = 0;

    constexpr Ordinal() = default;
    constexpr Ordinal(std::uint32_t limit_part, std::uint32_t offset) : q(limit_part), n(offset) {}

    constexpr auto operator<=>(const Ordinal&) const = default;

    constexpr bool is_zero() const { return q == 0 && n == 0; }
    constexpr bool is_limit() const { return n == 0 && q > 0; }
    constexpr bool is_successor() const { return n > 0; }
    constexpr Ordinal successor() const { return {q, n + 1}; }

    static constexpr Ordinal omega_times(std::uint32_t k) { return {k, 0}; }

    std::string to_string() const;
};

enum class OrdCmp { LT, EQ, GT };

constexpr OrdCmp ord_compare(Ordinal a, Ordinal b) {
    if (a < b) return OrdCmp::LT;
    if (a == b) return OrdCmp::EQ;
    return OrdCmp::GT;
}

/// Finite part of alpha = beta + n with beta a limit (or zero).
constexpr std::uint32_t f_offset(Ordinal a) { return a.n; }

struct OrdinalHash {
    std::size_t operator()(Ordinal a) const noexcept {
        return std::hash<std::uint64_t>{}((std::uint64_t{a.q} << 32) | a.n);
    }
};

}  // namespace covlab
