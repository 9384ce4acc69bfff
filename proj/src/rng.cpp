#include "dafnn/rng.hpp"

#include <cmath>
#include <numbers>

namespace dafnn {

Rng::Rng(std::uint64_t seed, Stream stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffULL),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream)};
    engine_.seed(seq);
}

std::uint64_t Rng::raw() { return engine_(); }

double Rng::uniform() {
    return static_cast<double>(raw() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
    double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

} // namespace dafnn
