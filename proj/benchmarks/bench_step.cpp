#include "chemorep/mms.hpp"
#include "chemorep/projections.hpp"

#include <benchmark/benchmark.h>

using namespace chemorep;

namespace {

void run_step(benchmark::State& st, Method method)
{
    auto exact = std::make_shared<const ManufacturedSolution>();
    const Spaces sp = make_spaces(std::make_shared<const Mesh>(unit_square_mesh(static_cast<int>(st.range(0)))));
    SolverConfig c;
    c.method = method;
    UsScheme scheme(sp, c, forcing_terms(exact));
    const State s0 = initialize_state(sp, exact->initial_data(0.0));
    for (auto _ : st) benchmark::DoNotOptimize(scheme.step(s0));
}

void BM_StepNewton(benchmark::State& st) { run_step(st, Method::Newton); }
void BM_StepPicard(benchmark::State& st) { run_step(st, Method::Picard); }

} // namespace

BENCHMARK(BM_StepNewton)->Arg(20)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StepPicard)->Arg(20)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);
