#pragma once

#include <cstdint>
#include <random>

namespace lfctune {

// Seeded generator shared by the optimizers. The uniform mapping is done by
// hand (instead of std::uniform_real_distribution) so that a given seed
// produces the same stream on every standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // uniform in [0, 1)
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // uniform in [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

private:
    std::mt19937_64 eng_;
};

}  // namespace lfctune
