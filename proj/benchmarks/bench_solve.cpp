#include "chemorep/assembly.hpp"
#include "chemorep/solvers.hpp"
#include "chemorep/state.hpp"

#include <benchmark/benchmark.h>

using namespace chemorep;

namespace {

/// Picard-type (u, sigma) block at u = 2 and sigma = 0, k = 1e-5.
CsrMatrix picard_block(const Spaces& sp)
{
    const double k = 1e-5;
    const FeFunction w(sp.u, Vector(sp.u->n_dofs(), 2.0));
    const CsrMatrix uu = add(assemble_bilinear(FormTag::Mass, *sp.u, *sp.u, {}, false),
                             assemble_bilinear(FormTag::Stiffness, *sp.u, *sp.u, {}, false), 1.0 / k, 1.0);
    const CsrMatrix us = assemble_bilinear(FormTag::ConvUSigma, *sp.u, *sp.sigma, {&w}, false);
    const CsrMatrix ss = add(assemble_bilinear(FormTag::Mass, *sp.sigma, *sp.sigma, {}, false),
                             assemble_bilinear(FormTag::BForm, *sp.sigma, *sp.sigma, {}, false), 1.0 / k, 1.0);
    CsrMatrix su = assemble_bilinear(FormTag::ConvGradU, *sp.sigma, *sp.u, {&w}, false);
    su.scale(-1.0);
    const int nu = sp.u->n_dofs(), ns = sp.sigma->n_dofs();
    CsrMatrix a = block_matrix({{{&uu, &us}, {&su, &ss}}}, {nu, ns}, {nu, ns});
    std::vector<int> fixed;
    for (int d : sp.sigma->constrained_dofs()) fixed.push_back(nu + d);
    constrain_symmetric(a, fixed);
    return a;
}

void BM_BlockSparseLu(benchmark::State& st)
{
    const Spaces sp = make_spaces(std::make_shared<const Mesh>(unit_square_mesh(static_cast<int>(st.range(0)))));
    const CsrMatrix a = picard_block(sp);
    const Vector b(a.rows(), 1.0);
    for (auto _ : st) benchmark::DoNotOptimize(solve_direct(a, b));
}

void BM_BlockBiCgStab(benchmark::State& st)
{
    const Spaces sp = make_spaces(std::make_shared<const Mesh>(unit_square_mesh(static_cast<int>(st.range(0)))));
    const CsrMatrix a = picard_block(sp);
    const Vector b(a.rows(), 1.0);
    for (auto _ : st) benchmark::DoNotOptimize(solve_general(a, b, 1e-10));
}

} // namespace

BENCHMARK(BM_BlockSparseLu)->Arg(20)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BlockBiCgStab)->Arg(20)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);
