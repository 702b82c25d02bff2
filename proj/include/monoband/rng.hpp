#pragma once

#include <cstdint>

namespace monoband {

// Counter-based random streams. Every draw is a pure function of
// (seed, stream, counter), so replicates and simulation runs can be generated
// in any order or from any thread and still be reproducible bit for bit.
namespace rng {

// Stateless mix of (seed, stream, counter) into a uniform 64-bit word.
std::uint64_t mix(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);

// Uniform double in (0, 1) from a 64-bit word (never returns 0 or 1).
double to_unit(std::uint64_t word);

// Inverse of the standard normal CDF (Wichura's PPND16), accurate to
// near machine precision on (0, 1).
double normal_quantile(double u);

}  // namespace rng

// A sequential view over one counter-based stream.
class RandomStream {
  public:
    RandomStream(std::uint64_t seed, std::uint64_t stream)
        : seed_(seed), stream_(stream) {}

    std::uint64_t next_u64() { return rng::mix(seed_, stream_, counter_++); }
    double uniform() { return rng::to_unit(next_u64()); }
    double normal() { return rng::normal_quantile(uniform()); }
    // Standardized draws: mean 0, variance 1.
    double std_exponential();
    double std_lognormal();

    // Random access without touching the sequential counter.
    double normal_at(std::uint64_t counter) const {
        return rng::normal_quantile(rng::to_unit(rng::mix(seed_, stream_, counter)));
    }

  private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
};

// Stream ids are namespaced by purpose so that e.g. bootstrap replicate r of
// simulation run q never collides with the data-generating stream of run q.
namespace stream_id {
constexpr std::uint64_t kData = 0x01;
constexpr std::uint64_t kBootstrap = 0x02;
constexpr std::uint64_t kStudyRun = 0x03;

inline std::uint64_t compose(std::uint64_t purpose, std::uint64_t index) {
    return (purpose << 56) ^ index;
}
}  // namespace stream_id

}  // namespace monoband
