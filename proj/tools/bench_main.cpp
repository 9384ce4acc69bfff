#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "dafnn/dataset.hpp"
#include "dafnn/ensemble.hpp"
#include "dafnn/network.hpp"
#include "dafnn/rng.hpp"

namespace {

template <typename F>
double best_ms(F&& f, int reps) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        if (ms < best) best = ms;
    }
    return best;
}

} // namespace

int main() {
    using namespace dafnn;
    const NetworkSpec spec;
    const int n_e = 512;
    Rng rng(7, Stream::EnsembleInit);
    const ParameterVector base = random_params(spec, 0.5, rng);
    const TrainableMask mask = TrainableMask::all(spec);
    Rng rng2(7, Stream::ProcessNoise);
    const Ensemble e = init_ensemble(spec, base, n_e, 0.3, mask, rng2);
    const std::vector<double> grid = gen_sine().train.xs;

    // warm up
    auto parallel = ensemble_predict_curve(spec, e, grid);
    auto serial = ensemble_predict_curve_serial(spec, e, grid);
    bool identical = parallel == serial;

    const int reps = 20;
    const double ms_serial =
        best_ms([&] { serial = ensemble_predict_curve_serial(spec, e, grid); }, reps);
    const double ms_parallel =
        best_ms([&] { parallel = ensemble_predict_curve(spec, e, grid); }, reps);
    identical = identical && parallel == serial;

    int threads = 1;
#ifdef _OPENMP
#pragma omp parallel
    {
#pragma omp master
        threads = omp_get_num_threads();
    }
#endif
    std::printf("ensemble_predict_curve: %d members x %zu grid points, best of %d\n", n_e,
                grid.size(), reps);
    std::printf("  serial   %8.3f ms\n", ms_serial);
    std::printf("  parallel %8.3f ms (%d threads, speedup %.2fx)\n", ms_parallel, threads,
                ms_serial / ms_parallel);
    std::printf("  results bit-identical: %s\n", identical ? "yes" : "NO");
    return identical ? 0 : 1;
}
