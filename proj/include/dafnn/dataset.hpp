#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace dafnn {

struct Dataset {
    std::vector<double> xs;
    std::vector<double> ys;
    std::string name;

    std::size_t size() const { return xs.size(); }
    void validate() const;  // equal lengths, nonempty, strictly increasing xs
};

struct CasePair {
    Dataset train;
    Dataset validation;
};

// Ricker wavelet (Mexican Hat), sigma = 1: psi(t) = C (1 - t^2) exp(-t^2/2),
// C = 2 / (sqrt(3) * pi^(1/4)). Zeros at t = +-1, global minimum at t = +-sqrt(3).
double ricker(double t);

// 201 training points at 0.01*pi spacing on [0, 2*pi]; 21 validation points
// at 0.1*pi spacing; targets sin(x).
CasePair gen_sine();

enum class Placement { Grid, Random };

// 200 training and 30 validation points on [-5, 5]; uniform grids by default,
// seeded uniform-random placement (sorted) as the alternative.
CasePair gen_mexican_hat(Placement placement = Placement::Grid, std::uint64_t seed = 0);

// Index of the grid point nearest to x; lower index wins ties.
std::size_t nearest_index(const std::vector<double>& grid, double x);

} // namespace dafnn
