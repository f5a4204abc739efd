#ifndef EIGNETS_RNG_HPP
#define EIGNETS_RNG_HPP

#include <cstdint>
#include <random>

namespace eignets {

// Deterministic random stream. Draws are fully specified by the seed: the
// engine is mt19937_64 (bit-exact by the standard) and the real-valued
// transforms below avoid std::*_distribution, whose output is
// implementation-defined. Reruns with the same seed produce identical bytes.
class rng {
public:
    explicit rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t raw() { return eng_(); }

    // uniform in [0,1) with 53 random bits
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // standard normal via Box-Muller; one deviate per call, spare cached
    double normal();

    int sign() { return (eng_() & 1u) ? 1 : -1; }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace eignets

#endif
