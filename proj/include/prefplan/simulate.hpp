#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "prefplan/improvement.hpp"
#include "prefplan/synthesis.hpp"

namespace prefplan {

/// Small deterministic generator (splitmix64-seeded xoshiro256**) so that
/// runs are reproducible bit-for-bit across platforms.
class Rng {
public:
    explicit Rng(uint64_t seed) {
        uint64_t x = seed;
        for (int i = 0; i < 4; ++i) {
            x += 0x9e3779b97f4a7c15ULL;
            uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            s_[i] = z ^ (z >> 31);
        }
    }

    uint64_t next() {
        uint64_t result = rotl(s_[1] * 5, 7) * 9;
        uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform integer in [0, n), unbiased (rejection sampling).
    int uniform(int n) {
        uint64_t bound = static_cast<uint64_t>(n);
        uint64_t threshold = (0 - bound) % bound;
        while (true) {
            uint64_t r = next();
            if (r >= threshold) return static_cast<int>(r % bound);
        }
    }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t s_[4];
};

struct Play {
    std::vector<int> states;   // product state indices
    int dead_end = -1;         // state where no action was available, or -1

    int length() const { return static_cast<int>(states.size()); }
};

namespace detail {

inline int sample_branch(const std::vector<Transition>& branches, Rng& rng) {
    // common denominator sampling keeps the draw exact
    long long d = 1;
    for (const Transition& t : branches) d = std::lcm(d, t.prob.den);
    if (d <= 0 || d > (1LL << 40)) {
        // improbable fallback: cumulative doubles
        double u = static_cast<double>(rng.next() >> 11) * 0x1.0p-53;
        double acc = 0;
        for (const Transition& t : branches) {
            acc += t.prob.to_double();
            if (u < acc) return t.dst;
        }
        return branches.back().dst;
    }
    long long r = rng.uniform(static_cast<int>(d));
    long long acc = 0;
    for (const Transition& t : branches) {
        acc += t.prob.num * (d / t.prob.den);
        if (r < acc) return t.dst;
    }
    return branches.back().dst;
}

template <typename ChooseActions>
Play roll(const ImprovementMdp& imdp, ChooseActions choose, int start, int horizon,
          uint64_t seed) {
    if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
    if (start < 0 || start >= imdp.num_product_states())
        throw std::invalid_argument("start state out of range");

    Rng rng(seed);
    Play play;
    play.states.reserve(static_cast<size_t>(horizon) + 1);
    play.states.push_back(start);

    int v = start;
    for (int step = 0; step < horizon; ++step) {
        Bitset actions = choose(v, step);
        if (actions.none()) {
            play.dead_end = v;
            break;
        }
        std::vector<int> opts = actions.to_vector();
        int a = opts[static_cast<size_t>(rng.uniform(static_cast<int>(opts.size())))];
        v = sample_branch(imdp.product.branches(v, a), rng);
        play.states.push_back(v);
    }
    return play;
}

} // namespace detail

/// Samples one play under a permissive strategy: uniform tie-breaking over
/// the allowed set; after the strategy goes silent the play continues with
/// any product-safe action. A state with no available action ends the play
/// early and is recorded as its dead end.
inline Play sample_play(const ImprovementMdp& imdp, const Strategy& strategy, int start,
                        int horizon, uint64_t seed) {
    return detail::roll(
        imdp,
        [&](int v, int) {
            const Bitset& set = strategy.at(v);
            if (set.any()) return set;
            return imdp.safe_actions(v);
        },
        start, horizon, seed);
}

/// Counter-strategy variant: the improvement counter starts at `counter` and
/// decrements on entering the current phase target.
inline Play sample_play(const ImprovementMdp& imdp, const CounterStrategy& strategy, int counter,
                        int start, int horizon, uint64_t seed) {
    int c = counter;
    return detail::roll(
        imdp,
        [&](int v, int step) {
            if (step > 0) c = strategy.next_counter(c, v);
            return strategy.allowed(v, c);
        },
        start, horizon, seed);
}

/// Number of improving steps in a play: transitions whose destination carries
/// the improvement flag.
inline int count_improvements(const ImprovementMdp& imdp, const Play& play) {
    if (play.states.empty()) return 0;
    for (int v : play.states)
        if (v < 0 || v >= imdp.num_product_states())
            throw std::invalid_argument("play state out of range");
    int count = 0;
    for (size_t i = 1; i < play.states.size(); ++i)
        if (ImprovementMdp::flag_of(play.states[i]) == 1) ++count;
    return count;
}

struct RunSummary {
    int runs = 0;
    int horizon = 0;
    uint64_t seed = 0;
    std::vector<int> improvements; // per run, by run index
    int dead_end_runs = 0;

    double fraction_at_least(int k) const {
        if (runs == 0) return 0.0;
        int c = 0;
        for (int v : improvements)
            if (v >= k) ++c;
        return static_cast<double>(c) / runs;
    }
    int max_improvements() const {
        int m = 0;
        for (int v : improvements)
            if (v > m) m = v;
        return m;
    }
};

namespace detail {

inline uint64_t run_seed(uint64_t seed, int run) {
    uint64_t x = seed ^ (0x517cc1b727220a95ULL * static_cast<uint64_t>(run + 1));
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    return x;
}

} // namespace detail

inline RunSummary improvement_statistics(const ImprovementMdp& imdp, const Strategy& strategy,
                                         int start, int runs, int horizon, uint64_t seed) {
    if (runs < 1) throw std::invalid_argument("runs must be at least 1");
    RunSummary summary;
    summary.runs = runs;
    summary.horizon = horizon;
    summary.seed = seed;
    summary.improvements.reserve(static_cast<size_t>(runs));
    for (int r = 0; r < runs; ++r) {
        Play p = sample_play(imdp, strategy, start, horizon, detail::run_seed(seed, r));
        if (p.dead_end >= 0) ++summary.dead_end_runs;
        summary.improvements.push_back(count_improvements(imdp, p));
    }
    return summary;
}

inline RunSummary improvement_statistics(const ImprovementMdp& imdp,
                                         const CounterStrategy& strategy, int counter, int start,
                                         int runs, int horizon, uint64_t seed) {
    if (runs < 1) throw std::invalid_argument("runs must be at least 1");
    RunSummary summary;
    summary.runs = runs;
    summary.horizon = horizon;
    summary.seed = seed;
    summary.improvements.reserve(static_cast<size_t>(runs));
    for (int r = 0; r < runs; ++r) {
        Play p = sample_play(imdp, strategy, counter, start, horizon, detail::run_seed(seed, r));
        if (p.dead_end >= 0) ++summary.dead_end_runs;
        summary.improvements.push_back(count_improvements(imdp, p));
    }
    return summary;
}

} // namespace prefplan
