// Timings for the GF(2) QLC scan: generic reference, table kernel on one
// thread, table kernel under OpenMP, and the cost split between the σ and ∇g
// filters. Also times the de Morgan suite serially and in parallel.

#include "qgeom/demorgan.hpp"
#include "qgeom/m2_enumeration.hpp"
#include "qgeom/parallel.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>

using namespace qgeom::m2;
using namespace qgeom::m2::f2;
using Clock = std::chrono::steady_clock;

namespace {

template <class F>
double time_it(F&& f) {
    const auto t0 = Clock::now();
    f();
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void bench_metric(MetricId id, Code reference_span, int threads) {
    const auto g = metric_of<qgeom::Gf2>(id);
    const FastKernel kernel(g);
    std::printf("metric %s\n", to_string(id));

    ScanStats ref_stats;
    const double t_ref = time_it([&] { scan_reference(g, 0, reference_span, &ref_stats); });
    const double ref_full = t_ref * static_cast<double>(kCodeCount) / reference_span;
    std::printf("  reference        %10.4f s for 2^%d candidates, %.1f s extrapolated to 2^24\n", t_ref,
                __builtin_ctz(reference_span), ref_full);

    ScanStats serial_stats;
    const double t_serial = time_it([&] { scan_fast_serial(kernel, 0, kCodeCount, &serial_stats); });
    std::printf("  fast, 1 thread   %10.4f s (%.0fx reference)\n", t_serial, ref_full / t_serial);

    ScanStats par_stats;
    const double t_par = time_it([&] { scan_parallel(kernel, 0, kCodeCount, threads, &par_stats); });
    std::printf("  fast, %2d threads %10.4f s (%.2fx serial)\n", threads, t_par, t_serial / t_par);

    // Filter ordering: σ is required before ∇g can be evaluated, so the
    // comparison is the cost of each stage and how much each one rejects.
    std::uint64_t sigma_ok = 0;
    const double t_sigma = time_it([&] {
        for (Code c = 0; c < kCodeCount; ++c) sigma_ok += kernel.sigma_solvable(c) ? 1 : 0;
    });
    std::uint64_t metric_ok = 0;
    std::uint16_t sig0 = 0;
    kernel.sigma_solvable(0, &sig0);
    const double t_metric = time_it([&] {
        for (Code c = 0; c < kCodeCount; ++c) metric_ok += kernel.metric_compatible(c, sig0) ? 1 : 0;
    });
    const double n = static_cast<double>(kCodeCount);
    std::printf("  sigma filter     %6.2f ns/candidate, rejects %.2f%%\n", 1e9 * t_sigma / n,
                100.0 * static_cast<double>(serial_stats.sigma_rejected) / n);
    std::printf("  nabla g filter   %6.2f ns/candidate (fixed sigma), rejects %.2f%% of sigma survivors\n",
                1e9 * t_metric / n,
                100.0 * static_cast<double>(serial_stats.metric_rejected) / static_cast<double>(sigma_ok));
    std::printf("  accepted %llu (%llu pass nabla g under the zero-code sigma); reference window agrees: %s\n",
                static_cast<unsigned long long>(serial_stats.accepted), static_cast<unsigned long long>(metric_ok),
                ref_stats.accepted == scan_fast_serial(kernel, 0, reference_span).size() ? "yes" : "no");
}

void bench_demorgan(int threads) {
    qgeom::demorgan::VerifyOptions opts;
    opts.exhaustive_max_vertices = 4;
    opts.random_max_vertices = 4;
    omp_set_num_threads(1);
    const double t1 = time_it([&] { qgeom::demorgan::duality_diffeomorphism_check(opts); });
    omp_set_num_threads(threads);
    const double tn = time_it([&] { qgeom::demorgan::duality_diffeomorphism_check(opts); });
    std::printf("de Morgan duality, all digraphs on <= 4 vertices\n");
    std::printf("  1 thread  %8.3f s\n  %d threads %8.3f s (%.2fx)\n", t1, threads, tn, t1 / tn);
}

}  // namespace

int main(int argc, char** argv) {
    const int threads = qgeom::configured_threads();
    const Code span = Code{1} << (argc > 1 ? std::atoi(argv[1]) : 14);
    bench_metric(MetricId::G1, span, threads);
    bench_metric(MetricId::G2, span, threads);
    bench_demorgan(threads);
}
