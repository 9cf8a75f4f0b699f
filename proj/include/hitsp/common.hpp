#ifndef HITSP_COMMON_HPP
#define HITSP_COMMON_HPP

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdint>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hitsp {

// Malformed input (bad JSON, duplicate edges, ids out of range). Distinct
// from a validation failure, which is reported through ValidationReport.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A structural precondition of the algorithm failed (bad caller input,
// infeasible request, non-convergence).
struct StructuralError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An internal invariant that should hold for every valid input was violated.
struct AssertionError : std::logic_error {
    using std::logic_error::logic_error;
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw StructuralError(msg);
}

#define HITSP_ASSERT(cond, msg)                                              \
    do {                                                                     \
        if (!(cond)) throw ::hitsp::AssertionError(std::string("invariant " \
            "violated: ") + (msg) + " [" #cond "]");                         \
    } while (0)

// ---------------------------------------------------------------------------
// Bitset over a fixed universe (vertices of a graph, or half-edge ids).
// ---------------------------------------------------------------------------
class Bitset {
public:
    Bitset() = default;
    explicit Bitset(int n) : n_(n), w_((n + 63) / 64, 0) {}

    int universe() const { return n_; }
    void set(int i) { w_[i >> 6] |= (std::uint64_t{1} << (i & 63)); }
    void reset(int i) { w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    bool test(int i) const { return (w_[i >> 6] >> (i & 63)) & 1; }

    int count() const {
        int c = 0;
        for (auto x : w_) c += std::popcount(x);
        return c;
    }
    bool any() const {
        for (auto x : w_) if (x) return true;
        return false;
    }
    bool intersects(const Bitset& o) const {
        for (std::size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & o.w_[i]) return true;
        return false;
    }
    int intersection_count(const Bitset& o) const {
        int c = 0;
        for (std::size_t i = 0; i < w_.size(); ++i)
            c += std::popcount(w_[i] & o.w_[i]);
        return c;
    }
    bool intersection_parity_odd(const Bitset& o) const {
        std::uint64_t acc = 0;
        for (std::size_t i = 0; i < w_.size(); ++i) acc ^= (w_[i] & o.w_[i]);
        return std::popcount(acc) & 1;
    }
    bool is_subset_of(const Bitset& o) const {
        for (std::size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & ~o.w_[i]) return false;
        return true;
    }
    Bitset operator&(const Bitset& o) const {
        Bitset r(n_);
        for (std::size_t i = 0; i < w_.size(); ++i) r.w_[i] = w_[i] & o.w_[i];
        return r;
    }
    Bitset operator|(const Bitset& o) const {
        Bitset r(n_);
        for (std::size_t i = 0; i < w_.size(); ++i) r.w_[i] = w_[i] | o.w_[i];
        return r;
    }
    Bitset complement() const {
        Bitset r(n_);
        for (std::size_t i = 0; i < w_.size(); ++i) r.w_[i] = ~w_[i];
        int tail = n_ & 63;
        if (tail) r.w_.back() &= (std::uint64_t{1} << tail) - 1;
        return r;
    }
    bool operator==(const Bitset& o) const { return n_ == o.n_ && w_ == o.w_; }
    bool operator<(const Bitset& o) const { return w_ < o.w_; }

    std::vector<int> members() const {
        std::vector<int> m;
        for (int i = 0; i < n_; ++i) if (test(i)) m.push_back(i);
        return m;
    }
    static Bitset of(int n, const std::vector<int>& ids) {
        Bitset b(n);
        for (int i : ids) b.set(i);
        return b;
    }

    // Sorted member lists compared lexicographically; used as the
    // deterministic tie-break when several minimal tight sets qualify.
    static bool lex_less(const Bitset& a, const Bitset& b) {
        int n = std::max(a.n_, b.n_);
        for (int i = 0; i < n; ++i) {
            bool ia = i < a.n_ && a.test(i), ib = i < b.n_ && b.test(i);
            if (ia != ib) return ia;
        }
        return false;
    }

    std::size_t hash() const {
        std::size_t h = 1469598103934665603ull;
        for (auto x : w_) {
            h ^= x;
            h *= 1099511628211ull;
        }
        return h;
    }

private:
    int n_ = 0;
    std::vector<std::uint64_t> w_;
};

struct BitsetHash {
    std::size_t operator()(const Bitset& b) const { return b.hash(); }
};

// ---------------------------------------------------------------------------
// Deterministic random streams.
//
// Each (masterSeed, trialIndex, purpose) triple yields an independent stream,
// so tree sampling and the Bernoulli draws of the certificate construction
// never share randomness, and trials can run on any number of threads with
// bit-identical results.
// ---------------------------------------------------------------------------
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

class RandomStream {
public:
    RandomStream(std::uint64_t master, std::uint64_t trial, const std::string& purpose) {
        std::uint64_t h = master;
        h = splitmix64(h ^ 0x2545f4914f6cdd1dull);
        h = splitmix64(h ^ trial);
        for (unsigned char c : purpose) h = splitmix64(h ^ c);
        eng_.seed(h);
    }
    explicit RandomStream(std::uint64_t seed) { eng_.seed(splitmix64(seed)); }

    std::uint64_t next_u64() { return eng_(); }

    // Unbiased integer in [0, bound) by rejection; stable across platforms,
    // unlike std::uniform_int_distribution.
    std::uint64_t below(std::uint64_t bound) {
        std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            std::uint64_t r = eng_();
            if (r >= threshold) return r % bound;
        }
    }
    double uniform01() {
        return (eng_() >> 11) * 0x1.0p-53;  // 53 random bits in [0,1)
    }
    bool bernoulli(double p) { return uniform01() < p; }

    // Index into a nonnegative weight vector, proportional to weight.
    int weighted_pick(const std::vector<double>& w, double total) {
        double r = uniform01() * total;
        for (std::size_t i = 0; i + 1 < w.size(); ++i) {
            r -= w[i];
            if (r < 0) return static_cast<int>(i);
        }
        return static_cast<int>(w.size()) - 1;
    }

private:
    std::mt19937_64 eng_;
};

// Shortest round-trip formatting; shared by the JSON and CSV writers so both
// carry identical numeric content.
inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace hitsp

#endif  // HITSP_COMMON_HPP
