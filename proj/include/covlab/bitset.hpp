#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace covlab {

/// Fixed-width dynamic bitset over element indices. The cover solver's inner
/// loop lives on count_and_not / |=, so words are exposed directly.
class Bitset {
public:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    Bitset() = default;
    explicit Bitset(std::size_t bits) : bits_(bits), words_((bits + 63) / 64, 0) {}

    std::size_t size() const noexcept { return bits_; }

    bool test(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i) noexcept { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(std::size_t i) noexcept { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

    void set_all() noexcept {
        for (auto& w : words_) w = ~std::uint64_t{0};
        trim();
    }
    void clear() noexcept {
        for (auto& w : words_) w = 0;
    }

    std::size_t count() const noexcept {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }
    bool none() const noexcept {
        for (auto w : words_)
            if (w) return false;
        return true;
    }
    bool all() const noexcept { return count() == bits_; }

    /// |this \ other|
    std::size_t count_and_not(const Bitset& other) const noexcept {
        std::size_t c = 0;
        for (std::size_t i = 0; i < words_.size(); ++i)
            c += static_cast<std::size_t>(std::popcount(words_[i] & ~other.words_[i]));
        return c;
    }
    std::size_t count_and(const Bitset& other) const noexcept {
        std::size_t c = 0;
        for (std::size_t i = 0; i < words_.size(); ++i)
            c += static_cast<std::size_t>(std::popcount(words_[i] & other.words_[i]));
        return c;
    }
    bool is_subset_of(const Bitset& other) const noexcept {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~other.words_[i]) return false;
        return true;
    }
    bool intersects(const Bitset& other) const noexcept {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & other.words_[i]) return true;
        return false;
    }

    Bitset& operator|=(const Bitset& o) noexcept {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }
    Bitset& operator&=(const Bitset& o) noexcept {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }
    Bitset& subtract(const Bitset& o) noexcept {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
        return *this;
    }
    friend Bitset operator|(Bitset a, const Bitset& b) { return a |= b; }
    friend Bitset operator&(Bitset a, const Bitset& b) { return a &= b; }

    /// First set bit at or after `from`, or npos.
    std::size_t find_next(std::size_t from) const noexcept {
        if (from >= bits_) return npos;
        std::size_t wi = from >> 6;
        std::uint64_t w = words_[wi] & (~std::uint64_t{0} << (from & 63));
        while (true) {
            if (w) return (wi << 6) + static_cast<std::size_t>(std::countr_zero(w));
            if (++wi == words_.size()) return npos;
            w = words_[wi];
        }
    }
    std::size_t find_first() const noexcept { return find_next(0); }

    /// First clear bit at or after `from`, or npos.
    std::size_t find_next_unset(std::size_t from) const noexcept {
        if (from >= bits_) return npos;
        std::size_t wi = from >> 6;
        std::uint64_t w = ~words_[wi] & (~std::uint64_t{0} << (from & 63));
        while (true) {
            if (w) {
                std::size_t i = (wi << 6) + static_cast<std::size_t>(std::countr_zero(w));
                return i < bits_ ? i : npos;
            }
            if (++wi == words_.size()) return npos;
            w = ~words_[wi];
        }
    }

    template <class F>
    void for_each(F&& f) const {
        for (std::size_t wi = 0; wi < words_.size(); ++wi) {
            std::uint64_t w = words_[wi];
            while (w) {
                f((wi << 6) + static_cast<std::size_t>(std::countr_zero(w)));
                w &= w - 1;
            }
        }
    }

    std::vector<std::uint32_t> indices() const {
        std::vector<std::uint32_t> out;
        out.reserve(count());
        for_each([&](std::size_t i) { out.push_back(static_cast<std::uint32_t>(i)); });
        return out;
    }

    std::span<const std::uint64_t> words() const noexcept { return words_; }

    friend bool operator==(const Bitset&, const Bitset&) = default;
    friend auto operator<=>(const Bitset& a, const Bitset& b) {
        if (auto c = a.bits_ <=> b.bits_; c != 0) return c;
        return a.words_ <=> b.words_;
    }

    std::size_t hash() const noexcept {
        std::uint64_t h = 0x9e3779b97f4a7c15ull ^ bits_;
        for (auto w : words_) {
            h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }

private:
    void trim() noexcept {
        if (bits_ & 63) words_.back() &= (std::uint64_t{1} << (bits_ & 63)) - 1;
    }

    std::size_t bits_ = 0;
    std::vector<std::uint64_t> words_;
};

struct BitsetHash {
    std::size_t operator()(const Bitset& b) const noexcept { return b.hash(); }
};

}  // namespace covlab
