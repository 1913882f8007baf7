#pragma once

// Reproducible random streams. A stream is identified by (seed, stream_id);
// identical identifiers always produce identical sequences, and distinct
// stream ids yield statistically independent sequences, so independent runs
// and parallel workers can share one base seed.
//
// Engine: xoshiro256++ seeded through a splitmix64 chain over the identifier.
// Normal deviates use the Box-Muller transform, so the whole pipeline is
// bit-stable across platforms (no implementation-defined std distributions).

#include <cstdint>

namespace cfak {

struct RngStream {
    std::uint64_t seed = 0;
    std::int64_t stream_id = 0;
};

class Rng {
  public:
    explicit Rng(RngStream stream);

    std::uint64_t next_u64();

    // uniform in [0, 1)
    double next_unit();

    // uniform in [lo, hi)
    double next_uniform(double lo, double hi);

    // standard normal deviate
    double next_normal();

  private:
    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace cfak
