#include <cycdec/admissibility.hh>
#include <cycdec/constructions.hh>
#include <cycdec/oracle.hh>
#include <cycdec/solver.hh>
#include <cycdec/transforms.hh>

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

using namespace cycdec;

namespace
{
    auto bm_enumerate(benchmark::State & state) -> void
    {
        int lambda = static_cast<int>(state.range(0)), n = static_cast<int>(state.range(1));
        for (auto _ : state)
            benchmark::DoNotOptimize(enumerate_admissible(lambda, n).size());
    }

    auto bm_solve_exact(benchmark::State & state) -> void
    {
        int n = static_cast<int>(state.range(0));
        auto m = LengthList::repeated(n, n - 1);
        for (auto _ : state)
            benchmark::DoNotOptimize(solve_exact(2, n, m, SearchBudget::unlimited()).status);
    }

    // Cold solves of random admissible lists: a fresh memo table per solve.
    auto bm_cold_solve(benchmark::State & state) -> void
    {
        int lambda = static_cast<int>(state.range(0)), n = static_cast<int>(state.range(1));
        auto lists = enumerate_admissible(lambda, n);
        std::mt19937_64 rng(1);
        for (auto _ : state) {
            Solver solver;
            auto r = solver.solve(lambda, n, lists[rng() % lists.size()]);
            if (r.status != SolveStatus::Solved)
                state.SkipWithError("solve failed");
        }
    }

    auto bm_sweep(benchmark::State & state) -> void
    {
        int lambda = static_cast<int>(state.range(0)), n = static_cast<int>(state.range(1));
        for (auto _ : state) {
            Solver solver;
            benchmark::DoNotOptimize(sweep_admissible(solver, lambda, n, [] (const SweepEntry &) { }));
        }
    }

    auto bm_switch(benchmark::State & state) -> void
    {
        Solver solver;
        auto cert = solver.certificate(2, 9, LengthList::repeated(9, 8));
        Packing p = cert.packing;
        p.cycles.pop_back();
        auto l = leave(p);
        std::vector<std::tuple<Vertex, Vertex, Vertex>> choices;
        for (Vertex a = 0 ; a < 9 ; ++a)
            for (Vertex b = 0 ; b < 9 ; ++b)
                for (Vertex c = 0 ; c < 9 ; ++c)
                    if (a != b && c != a && c != b && l.mult(a, c) > 0 && l.mult(b, c) == 0)
                        choices.emplace_back(a, b, c);
        std::size_t i = 0;
        for (auto _ : state) {
            auto [a, b, c] = choices[i++ % choices.size()];
            try {
                benchmark::DoNotOptimize(perform_switch(p, a, b, c).terminus);
            }
            catch (const TransformError &) {
            }
        }
    }

    auto bm_circ12_single(benchmark::State & state) -> void
    {
        int n = static_cast<int>(state.range(0));
        auto m = LengthList::repeated(3, n / 3 - 1) + LengthList{ n - 3 * (n / 3 - 1) };
        for (auto _ : state)
            benchmark::DoNotOptimize(circ12_single(n, m).size());
    }

    auto bm_hamilton_circulant(benchmark::State & state) -> void
    {
        int n = static_cast<int>(state.range(0));
        std::vector<int> distances;
        for (int d = 3 ; d <= n / 2 ; ++d)
            distances.push_back(d);
        for (auto _ : state) {
            HamiltonCache cache;
            benchmark::DoNotOptimize(hamilton_decompose_circulant(n, distances, SearchBudget::nodes(5'000'000), &cache));
        }
    }
}

BENCHMARK(bm_enumerate)->Args({ 2, 9 })->Args({ 3, 9 })->Unit(benchmark::kMillisecond);
BENCHMARK(bm_solve_exact)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_cold_solve)->Args({ 2, 9 })->Args({ 3, 8 })->Args({ 4, 9 })->Unit(benchmark::kMillisecond);
BENCHMARK(bm_sweep)->Args({ 2, 7 })->Args({ 3, 7 })->Unit(benchmark::kMillisecond);
BENCHMARK(bm_switch)->Unit(benchmark::kMicrosecond);
BENCHMARK(bm_circ12_single)->Arg(40)->Arg(400)->Unit(benchmark::kMicrosecond);
BENCHMARK(bm_hamilton_circulant)->Arg(11)->Arg(14)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
