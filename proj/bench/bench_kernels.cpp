// Serial vs OpenMP throughput for the three path-parallel kernels.
// Usage: bench_kernels [n_paths] [threads]

#include "slelab/estimators.hpp"
#include "slelab/parallel.hpp"
#include "slelab/radial.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include <omp.h>

using namespace slelab;

namespace {

template <class F>
double time_s(F&& f) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

} // namespace

int main(int argc, char** argv) {
    long n = argc > 1 ? std::atol(argv[1]) : 2000;
    int threads = argc > 2 ? std::atoi(argv[2]) : omp_get_max_threads();

    SleParams p = SleParams::make(2.0, -1.5, 1.0, 0.0);
    SpectrumParams sp = spectrum_params(p, 0.0);

    std::printf("%-28s %10s %10s %8s %12s\n", "kernel", "serial[s]", "omp[s]", "speedup",
                "checksum");

    {
        std::vector<double> out(n);
        auto body = [&](std::size_t i) {
            DriverPath d = simulate_driver(p, 1e-3, 2.0, 42, i);
            LoewnerObservables obs = evolve_observables(d, 1.0);
            out[i] = obs.log_gprime.back();
        };
        double ts = time_s([&] { serial_paths(n, body); });
        std::vector<double> ref = out;
        double tp = time_s([&] { parallel_paths(n, threads, body); });
        double chk = 0.0;
        bool same = true;
        for (long i = 0; i < n; ++i) {
            chk += out[i];
            same = same && out[i] == ref[i];
        }
        std::printf("%-28s %10.3f %10.3f %7.2fx %12.4f %s\n", "driver+observables", ts, tp,
                    ts / tp, chk, same ? "" : "MISMATCH");
    }

    {
        std::vector<double> out(n);
        auto body = [&](std::size_t i) {
            TiltedPath tpath = simulate_tilted(p, sp, 1e-3, 20.0, 43, i);
            out[i] = tpath.l.back();
        };
        double ts = time_s([&] { serial_paths(n, body); });
        std::vector<double> ref = out;
        double tp = time_s([&] { parallel_paths(n, threads, body); });
        double chk = 0.0;
        bool same = true;
        for (long i = 0; i < n; ++i) {
            chk += out[i];
            same = same && out[i] == ref[i];
        }
        std::printf("%-28s %10.3f %10.3f %7.2fx %12.4f %s\n", "tilted SDE", ts, tp, ts / tp,
                    chk / n, same ? "" : "MISMATCH");
    }

    {
        SleParams p3 = SleParams::make(3.0, -1.0, 1.0, 0.0);
        SpectrumParams sp3 = spectrum_params(p3, 0.0);
        BoxCountOptions opt;
        opt.dt = 2e-4;
        opt.t_max = 1.0;
        long nb = std::max<long>(n / 40, 4);
        opt.workers = 1;
        std::vector<BoxCountReport> r1, r2;
        double ts = time_s([&] { r1 = box_count_range(p3, sp3, 3, 5, nb, opt, 44); });
        opt.workers = threads;
        double tp = time_s([&] { r2 = box_count_range(p3, sp3, 3, 5, nb, opt, 44); });
        bool same = true;
        for (std::size_t i = 0; i < r1.size(); ++i)
            same = same && r1[i].count_upper == r2[i].count_upper &&
                   r1[i].count_lower == r2[i].count_lower;
        std::printf("%-28s %10.3f %10.3f %7.2fx %12.4f %s\n", "box counts (n=3..5)", ts, tp,
                    ts / tp, r1.back().count_upper, same ? "" : "MISMATCH");
    }
    return 0;
}
