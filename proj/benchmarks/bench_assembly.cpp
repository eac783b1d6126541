#include "chemorep/assembly.hpp"
#include "chemorep/state.hpp"

#include <benchmark/benchmark.h>

using namespace chemorep;

namespace {

Spaces spaces_for(int m) { return make_spaces(std::make_shared<const Mesh>(unit_square_mesh(m))); }

void BM_AssembleStiffnessP1(benchmark::State& st)
{
    const Spaces sp = spaces_for(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(assemble_bilinear(FormTag::Stiffness, *sp.u, *sp.u));
}

void BM_AssembleSigmaForm(benchmark::State& st)
{
    const Spaces sp = spaces_for(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(assemble_bilinear(FormTag::BForm, *sp.sigma, *sp.sigma));
}

void BM_AssembleMassP2(benchmark::State& st)
{
    const Spaces sp = spaces_for(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(assemble_bilinear(FormTag::Mass, *sp.v, *sp.v));
}

} // namespace

BENCHMARK(BM_AssembleStiffnessP1)->Arg(20)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AssembleSigmaForm)->Arg(20)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AssembleMassP2)->Arg(20)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);
