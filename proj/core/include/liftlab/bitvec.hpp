#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace liftlab {

/// Fixed-width packed bit vector over GF(2).
class BitVec {
public:
    BitVec() = default;
    explicit BitVec(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

    [[nodiscard]] std::size_t size() const noexcept { return size_; }

    [[nodiscard]] bool test(std::size_t i) const noexcept {
        return (words_[i >> 6] >> (i & 63)) & 1U;
    }
    void set(std::size_t i, bool v = true) noexcept {
        const std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (v) {
            words_[i >> 6] |= mask;
        } else {
            words_[i >> 6] &= ~mask;
        }
    }
    void flip(std::size_t i) noexcept { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

    BitVec& operator^=(const BitVec& o) noexcept {
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= o.words_[w];
        return *this;
    }
    friend BitVec operator^(BitVec a, const BitVec& b) noexcept { return a ^= b; }

    BitVec& operator&=(const BitVec& o) noexcept {
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= o.words_[w];
        return *this;
    }
    friend BitVec operator&(BitVec a, const BitVec& b) noexcept { return a &= b; }

    [[nodiscard]] bool any() const noexcept {
        for (auto w : words_)
            if (w != 0) return true;
        return false;
    }
    [[nodiscard]] bool none() const noexcept { return !any(); }

    [[nodiscard]] std::size_t count() const noexcept {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    /// Parity of the AND with `o`, i.e. the GF(2) inner product.
    [[nodiscard]] bool dot(const BitVec& o) const noexcept {
        std::uint64_t acc = 0;
        for (std::size_t w = 0; w < words_.size(); ++w) acc ^= words_[w] & o.words_[w];
        return std::popcount(acc) & 1;
    }

    /// Lowest set index, or size() if none.
    [[nodiscard]] std::size_t first() const noexcept {
        for (std::size_t w = 0; w < words_.size(); ++w)
            if (words_[w] != 0) return (w << 6) + static_cast<std::size_t>(std::countr_zero(words_[w]));
        return size_;
    }
    /// Next set index strictly after `i`, or size() if none.
    [[nodiscard]] std::size_t next(std::size_t i) const noexcept {
        ++i;
        if (i >= size_) return size_;
        std::size_t w = i >> 6;
        std::uint64_t cur = words_[w] & (~std::uint64_t{0} << (i & 63));
        while (true) {
            if (cur != 0) return (w << 6) + static_cast<std::size_t>(std::countr_zero(cur));
            if (++w == words_.size()) return size_;
            cur = words_[w];
        }
    }

    [[nodiscard]] std::vector<std::size_t> ones() const {
        std::vector<std::size_t> out;
        for (auto i = first(); i < size_; i = next(i)) out.push_back(i);
        return out;
    }

    [[nodiscard]] const std::vector<std::uint64_t>& words() const noexcept { return words_; }

    friend bool operator==(const BitVec&, const BitVec&) = default;
    /// Lexicographic by bit index: the vector whose lowest differing bit is clear sorts first.
    friend std::strong_ordering operator<=>(const BitVec& a, const BitVec& b) noexcept {
        if (a.size_ != b.size_) return a.size_ <=> b.size_;
        for (std::size_t w = 0; w < a.words_.size(); ++w) {
            const auto d = a.words_[w] ^ b.words_[w];
            if (d == 0) continue;
            const auto low = d & (~d + 1);
            return (a.words_[w] & low) ? std::strong_ordering::greater : std::strong_ordering::less;
        }
        return std::strong_ordering::equal;
    }

private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace liftlab
