#pragma once

#include <cstdint>

namespace tfpanel {

// Counter-based generator: every draw is a pure function of
// (seed, unit, period, stream, draw), so per-unit generation is
// order-independent and reproducible under any parallel schedule.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    // Uniform on (0, 1].
    double uniform(std::uint64_t unit, std::uint64_t period,
                   std::uint64_t stream, std::uint64_t draw = 0) const;

    // Standard normal via Box-Muller on two counter draws.
    double normal(std::uint64_t unit, std::uint64_t period,
                  std::uint64_t stream, std::uint64_t draw = 0) const;

private:
    std::uint64_t seed_;
};

// Sequential convenience wrapper over CounterRng for places that just need
// a stream of draws (Monte Carlo loops). Still fully deterministic.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream)
        : rng_(seed), stream_(stream), counter_(0) {}

    double uniform() { return rng_.uniform(0, counter_++, stream_); }
    double normal() { return rng_.normal(0, counter_++, stream_); }

private:
    CounterRng rng_;
    std::uint64_t stream_;
    std::uint64_t counter_;
};

} // namespace tfpanel
