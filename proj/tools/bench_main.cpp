// Timing comparison of the OpenMP kernels against their serial references.
#include <chrono>
#include <cstdio>
#include <functional>

#include "ltlab/brownian.hpp"
#include "ltlab/chaos.hpp"
#include "ltlab/parallel.hpp"
#include "ltlab/rng.hpp"
#include "ltlab/simplex.hpp"

namespace {

double time_ms(const std::function<void()>& fn) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void report(const char* name, double serial_ms, double parallel_ms) {
    std::printf("%-34s %10.1f ms %10.1f ms %7.2fx\n", name, serial_ms, parallel_ms,
                serial_ms / parallel_ms);
}

}  // namespace

int main() {
    std::printf("threads: %d\n", ltl::thread_count());
    std::printf("%-34s %13s %13s %8s\n", "kernel", "serial", "openmp", "speedup");

    {
        ltl::BlockFamily fam = ltl::extremal_blocks(ltl::ExtremalFamily::B0);
        double s = time_ms([&] { ltl::block_integral(1.2, fam, 1e-2, 400000, 9, false); });
        double p = time_ms([&] { ltl::block_integral(1.2, fam, 1e-2, 400000, 9, true); });
        report("block_integral (4e5 samples)", s, p);
    }
    {
        ltl::VerdictConfig vc;
        vc.decades = 8;
        vc.n_samples = 400000;
        vc.parallel = false;
        double s = time_ms([&] { ltl::singular_scan(ltl::SingularIntegral::sing3, 0.3, vc); });
        vc.parallel = true;
        double p = time_ms([&] { ltl::singular_scan(ltl::SingularIntegral::sing3, 0.3, vc); });
        report("singular_scan (4e5 samples)", s, p);
    }
    {
        double s = time_ms([&] { ltl::contraction_ratio(2, 2, 0.1, 1.0, 400000, 3, false); });
        double p = time_ms([&] { ltl::contraction_ratio(2, 2, 0.1, 1.0, 400000, 3, true); });
        report("contraction_ratio (4e5 samples)", s, p);
    }
    {
        const int n_paths = 24, n_steps = 1 << 12;
        const double dt = 1.0 / n_steps;
        auto batch = [&](bool par) {
            ltl::for_each_block(n_paths, par, [&](int p) {
                ltl::Path path = ltl::sample_path(1, n_steps, 1.0, 100 + p);
                ltl::riesz_hamiltonian(path, 0.1, 0.8, std::sqrt(dt));
            });
        };
        double s = time_ms([&] { batch(false); });
        double p = time_ms([&] { batch(true); });
        report("riesz_hamiltonian batch (24 paths)", s, p);
    }
    {
        // histogram/FFT fast path against the quadratic-cost direct sum
        ltl::Path path = ltl::sample_path(1, 1 << 11, 1.0, 5);
        const double dt = path.dt;
        double s = time_ms([&] { ltl::riesz_hamiltonian_direct(path, 0.1, 0.8, std::sqrt(dt)); });
        double p = time_ms([&] { ltl::riesz_hamiltonian(path, 0.1, 0.8, std::sqrt(dt)); });
        report("riesz direct vs histogram (2^11)", s, p);
    }
    return 0;
}
