#pragma once

#include <cassert>
#include <cstdint>
#include <string>
#include <vector>

namespace prefplan {

/// Runtime-sized bitset. Used for state sets and per-state action sets.
class Bitset {
public:
    Bitset() = default;
    explicit Bitset(int n) : n_(n), w_(static_cast<size_t>((n + 63) / 64), 0) {}

    static Bitset full(int n) {
        Bitset b(n);
        for (int i = 0; i < n; ++i) b.set(i);
        return b;
    }

    int size() const { return n_; }

    void set(int i) { w_[idx(i)] |= bit(i); }
    void reset(int i) { w_[idx(i)] &= ~bit(i); }
    void assign(int i, bool v) { v ? set(i) : reset(i); }
    bool test(int i) const { return (w_[idx(i)] & bit(i)) != 0; }

    void clear() { std::fill(w_.begin(), w_.end(), 0); }

    int count() const {
        int c = 0;
        for (uint64_t w : w_) c += __builtin_popcountll(w);
        return c;
    }
    bool any() const {
        for (uint64_t w : w_)
            if (w) return true;
        return false;
    }
    bool none() const { return !any(); }

    bool operator==(const Bitset& o) const { return n_ == o.n_ && w_ == o.w_; }
    bool operator!=(const Bitset& o) const { return !(*this == o); }

    Bitset& operator|=(const Bitset& o) {
        assert(n_ == o.n_);
        for (size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
        return *this;
    }
    Bitset& operator&=(const Bitset& o) {
        assert(n_ == o.n_);
        for (size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
        return *this;
    }
    /// Removes every element of `o` from this set.
    Bitset& operator-=(const Bitset& o) {
        assert(n_ == o.n_);
        for (size_t i = 0; i < w_.size(); ++i) w_[i] &= ~o.w_[i];
        return *this;
    }

    friend Bitset operator|(Bitset a, const Bitset& b) { return a |= b; }
    friend Bitset operator&(Bitset a, const Bitset& b) { return a &= b; }
    friend Bitset operator-(Bitset a, const Bitset& b) { return a -= b; }

    bool is_subset_of(const Bitset& o) const {
        assert(n_ == o.n_);
        for (size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & ~o.w_[i]) return false;
        return true;
    }
    bool intersects(const Bitset& o) const {
        assert(n_ == o.n_);
        for (size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & o.w_[i]) return true;
        return false;
    }

    template <typename Fn>
    void for_each(Fn fn) const {
        for (size_t wi = 0; wi < w_.size(); ++wi) {
            uint64_t w = w_[wi];
            while (w) {
                int b = __builtin_ctzll(w);
                fn(static_cast<int>(wi * 64 + b));
                w &= w - 1;
            }
        }
    }

    std::vector<int> to_vector() const {
        std::vector<int> out;
        for_each([&](int i) { out.push_back(i); });
        return out;
    }

    std::string str() const {
        std::string s = "{";
        bool first = true;
        for_each([&](int i) {
            if (!first) s += ",";
            s += std::to_string(i);
            first = false;
        });
        return s + "}";
    }

private:
    static size_t idx(int i) { return static_cast<size_t>(i) >> 6; }
    static uint64_t bit(int i) { return uint64_t{1} << (i & 63); }

    int n_ = 0;
    std::vector<uint64_t> w_;
};

} // namespace prefplan
