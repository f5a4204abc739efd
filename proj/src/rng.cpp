#include "eignets/rng.hpp"

#include <cmath>

namespace eignets {

double rng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    constexpr double two_pi = 6.28318530717958647692;
    double u1;
    do {
        u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    spare_ = radius * std::sin(two_pi * u2);
    have_spare_ = true;
    return radius * std::cos(two_pi * u2);
}

} // namespace eignets
