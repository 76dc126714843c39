// Timing comparison of the OpenMP kernels against the serial reference.
// The outputs are bit-identical by construction (disjoint writes, serial
// reductions); this target reports wall-clock speedups only.

#include <chrono>
#include <cstdio>

#include "bohmlab/equivariance.hpp"
#include "bohmlab/grid.hpp"
#include "bohmlab/sampler.hpp"

using namespace bohmlab;
namespace chrono = std::chrono;

namespace {

GaussianPacket packet(double c, double k, double w) {
    GaussianPacket p;
    p.center = {c};
    p.momentum = {k};
    p.width = w;
    return p;
}

template <typename Fn>
double time_ms(Fn&& fn) {
    const auto t0 = chrono::steady_clock::now();
    fn();
    const auto t1 = chrono::steady_clock::now();
    return chrono::duration<double, std::milli>(t1 - t0).count();
}

void report(const char* name, double serial_ms, double omp_ms) {
    std::printf("%-24s serial %9.1f ms   openmp %9.1f ms   speedup %.2fx\n", name, serial_ms, omp_ms,
                serial_ms / omp_ms);
}

}  // namespace

int main() {
    const auto psi = antisymmetrize({packet(-1.0, 1.0, 0.7), packet(1.0, -1.0, 0.7)},
                                    ModelParams::natural(2, 1));

#ifdef _OPENMP
    std::printf("openmp enabled\n");
#else
    std::printf("openmp not compiled in; both columns run serially\n");
#endif

    {
        SamplerConfig ser, omp;
        ser.exec = ExecMode::serial;
        omp.exec = ExecMode::openmp;
        const double a = time_ms([&] { sample_density(*psi, 0.0, 60000, 1, ser); });
        const double b = time_ms([&] { sample_density(*psi, 0.0, 60000, 1, omp); });
        report("metropolis sampling", a, b);
    }
    {
        const auto e0 = sample_density(*psi, 0.0, 4000, 2);
        TransportOptions ser, omp;
        ser.exec = ExecMode::serial;
        omp.exec = ExecMode::openmp;
        const double a = time_ms([&] { transport_ensemble(*psi, e0, 1.0, psi->params(), ser); });
        const double b = time_ms([&] { transport_ensemble(*psi, e0, 1.0, psi->params(), omp); });
        report("ensemble transport", a, b);
    }
    {
        const double a = time_ms([&] {
            check_periodicity(*psi, TopologicalFactor::sign(2), 200000, 3, 0.0, 1.0, 1e-300,
                              ExecMode::serial);
        });
        const double b = time_ms([&] {
            check_periodicity(*psi, TopologicalFactor::sign(2), 200000, 3, 0.0, 1.0, 1e-300,
                              ExecMode::openmp);
        });
        report("periodicity scan", a, b);
    }
    {
        auto make = [&](ExecMode mode) {
            auto st = init_antisymmetric(packet(-1.5, 0.6, 0.5), packet(1.5, -0.6, 0.5),
                                         GridSpec::square(257, -6.0, 6.0));
            st.exec = mode;
            advance(st, 1e-3, 400);
        };
        const double a = time_ms([&] { make(ExecMode::serial); });
        const double b = time_ms([&] { make(ExecMode::openmp); });
        report("grid stepping 257^2", a, b);
    }
    return 0;
}
