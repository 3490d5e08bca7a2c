// Serial reference vs OpenMP kernels. Usage: bench_kernels [repeats]

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "hopnet/experiments.hpp"
#include "hopnet/reference.hpp"

using namespace hopnet;

namespace {

template <class F>
double best_of(int repeats, F&& f) {
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const auto start = std::chrono::steady_clock::now();
        f();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    }
    return best;
}

void row(const char* name, double serial, double parallel) {
    std::printf("%-28s %10.4f %10.4f %8.2fx\n", name, serial, parallel, serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
    const int repeats = argc > 1 ? std::atoi(argv[1]) : 3;
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (built without OpenMP)\n");
#endif
    std::printf("%-28s %10s %10s %9s\n", "kernel", "serial s", "parallel s", "speedup");

    // largest matrix size in the characterization table
    const PatternSet large = generate_topic_patterns(1412, 4131, {}, 1);
    std::size_t sink = 0;
    const double ref_counts =
        best_of(repeats, [&] { sink += reference::cooccurrence_counts(large.patterns(), large.units()).size(); });
    const double par_counts = best_of(repeats, [&] { sink += cooccurrence_counts(large.patterns(), large.units()).size(); });
    row("cooccurrence N=4131 n=1412", ref_counts, par_counts);

    ExperimentPlan plan = default_plan();
    plan.source = PatternSource::topic;
    plan.units = 500;
    plan.patterns = 90;
    const PatternSet patterns = load_patterns(plan);
    const double ref_run = best_of(repeats, [&] { sink += reference::run_experiment(plan, patterns).levels.size(); });
    const double par_run = best_of(repeats, [&] { sink += run_experiment(plan, patterns).levels.size(); });
    row("experiment N=500 n=90", ref_run, par_run);

    return sink == 0;
}
