#include <benchmark/benchmark.h>

#include "unitforge/northcott.hpp"
#include "unitforge/square_classes.hpp"

namespace uf = unitforge;
using uf::Int;
using uf::QuadElem;
using uf::QuadField;
using uf::Rat;

namespace {

void BM_FundamentalUnit(benchmark::State& state) {
  const QuadField f{Int(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(uf::fundamental_unit(f));
}
BENCHMARK(BM_FundamentalUnit)->Arg(21)->Arg(94)->Arg(421);

void BM_PellReport(benchmark::State& state) {
  const QuadField f{Int(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(uf::pell_report(f));
}
BENCHMARK(BM_PellReport)->Arg(421);

void BM_BiquadMul(benchmark::State& state) {
  const uf::BiquadField f(Int(2), Int(21));
  const uf::BiquadElem mu(f, {uf::make_rat(7, 2), uf::make_rat(3, 2), uf::make_rat(1, 2),
                              uf::make_rat(1, 2)});
  uf::BiquadElem acc = uf::BiquadElem::from_rational(f, Rat(1));
  for (auto _ : state) {
    acc = acc * mu;
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_BiquadMul);

void BM_BiquadSqrt(benchmark::State& state) {
  const uf::BiquadField f(Int(3), Int(7));
  const uf::BiquadElem e3 = uf::BiquadElem::from_subfield(
      f, 3, QuadElem(f.subfield(3), uf::make_rat(5, 2), uf::make_rat(1, 2)));
  for (auto _ : state) benchmark::DoNotOptimize(uf::biquad_sqrt(e3));
}
BENCHMARK(BM_BiquadSqrt);

void BM_RepresentFourSquares(benchmark::State& state) {
  const auto I4 = uf::GramLattice<Rat>::identity(uf::RationalBase{}, 4);
  for (auto _ : state)
    benchmark::DoNotOptimize(uf::represent(I4, Rat(state.range(0))));
}
BENCHMARK(BM_RepresentFourSquares)->Arg(30)->Arg(9999);

void BM_DescentRun(benchmark::State& state) {
  const auto I4 = uf::GramLattice<Rat>::identity(uf::RationalBase{}, 4);
  for (auto _ : state)
    benchmark::DoNotOptimize(uf::descent_run(I4, Rat(state.range(0)), 8));
}
BENCHMARK(BM_DescentRun)->Arg(10000);

void BM_IsSquareIn(benchmark::State& state) {
  std::vector<Int> gens;
  for (long p : {2L, 3L, 5L, 7L, 11L, 13L, 17L, 19L, 23L, 29L})
    gens.emplace_back(p);
  const auto field = uf::MultiquadDescriptor::from_generators(gens);
  for (auto _ : state)
    benchmark::DoNotOptimize(uf::is_square_in(Rat(2 * 7 * 29), field));
}
BENCHMARK(BM_IsSquareIn);

void BM_Theorem72(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(uf::theorem72_certificate(
        static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_Theorem72)->Arg(3);

}  // namespace
