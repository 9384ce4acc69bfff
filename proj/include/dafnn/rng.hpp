#pragma once

#include <cstdint>
#include <random>

namespace dafnn {

// Purpose-split random streams: every consumer derives its own engine from
// (seed, stream), so adding draws in one place never shifts another, and all
// draws happen outside parallel regions.
enum class Stream : std::uint32_t {
    ParamInit = 1,
    EnsembleInit = 2,
    ObsPerturb = 3,
    ProcessNoise = 4,
    DataSampling = 5,
};

class Rng {
public:
    Rng(std::uint64_t seed, Stream stream);

    std::uint64_t raw();
    double uniform();  // [0, 1)
    // Standard normal via Box-Muller on explicit uniforms; platform-stable,
    // unlike std::normal_distribution whose algorithm is unspecified.
    double normal();

private:
    std::mt19937_64 engine_;
};

} // namespace dafnn
