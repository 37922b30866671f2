#include <benchmark/benchmark.h>

#include "horolab/suites.hpp"
#include "horolab/divergence.hpp"

namespace {

using namespace horolab;

HorosphereContext context_for(int n) {
  RunConfig cfg;
  cfg.n = n;
  return cfg.context();
}

void BM_Iwasawa(benchmark::State& st) {
  Rng rng(1);
  const SpecialLinear g = random_special_linear(rng, static_cast<int>(st.range(0)), 1.0);
  for (auto _ : st) benchmark::DoNotOptimize(iwasawa_nak(g));
}
BENCHMARK(BM_Iwasawa)->Arg(2)->Arg(3)->Arg(4)->Arg(8);

void BM_Distance(benchmark::State& st) {
  Rng rng(2);
  const int n = static_cast<int>(st.range(0));
  const Point a = sample_ball(base_point(n), 3.0, rng), b = sample_ball(base_point(n), 3.0, rng);
  for (auto _ : st) benchmark::DoNotOptimize(distance(a, b));
}
BENCHMARK(BM_Distance)->Arg(3)->Arg(4)->Arg(8);

void BM_Busemann(benchmark::State& st) {
  const HorosphereContext ctx = context_for(static_cast<int>(st.range(0)));
  Rng rng(3);
  const Point x = sample_ball(base_point(ctx.dim()), 2.0, rng);
  for (auto _ : st) benchmark::DoNotOptimize(ctx.height(x));
}
BENCHMARK(BM_Busemann)->Arg(3)->Arg(4);

void BM_RhoValue(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  Rng rng(4);
  const Point x = sample_ball(base_point(n), 1.0, rng);
  const Chamber d = sample_shadow(x, 2.0, rng);
  for (auto _ : st) benchmark::DoNotOptimize(rho_value(x, d));
}
BENCHMARK(BM_RhoValue)->Arg(3)->Arg(4);

void BM_ProjectToZ(benchmark::State& st) {
  const HorosphereContext ctx = context_for(static_cast<int>(st.range(0)));
  Rng rng(5);
  const Point u = push(retract_to_Z(sample_ball(base_point(ctx.dim()), 1.0, rng), ctx), ctx.cfg.tau, 3.0);
  const BoundaryPoint s = sample_shadow(u, 1.0, rng).point(ctx.cfg.tau);
  for (auto _ : st) benchmark::DoNotOptimize(project_to_Z(u, s, ctx));
}
BENCHMARK(BM_ProjectToZ)->Arg(3)->Arg(4);

void BM_AreOpposite(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  Rng rng(6);
  const Chamber a = random_chamber(rng, n), b = random_chamber(rng, n);
  for (auto _ : st) benchmark::DoNotOptimize(are_opposite(a, b));
}
BENCHMARK(BM_AreOpposite)->Arg(3)->Arg(4)->Arg(8);

void BM_OmegaEdge(benchmark::State& st) {
  const HorosphereContext ctx = context_for(3);
  Rng rng(7);
  const std::vector<Point> z{retract_to_Z(sample_ball(base_point(3), 2.0, rng), ctx),
                             retract_to_Z(sample_ball(base_point(3), 2.0, rng), ctx)};
  for (auto _ : st) benchmark::DoNotOptimize(build_omega_infty(z, ctx, 11, {}));
}
BENCHMARK(BM_OmegaEdge)->Unit(benchmark::kMillisecond);

void BM_WhitneyPath(benchmark::State& st) {
  const HorosphereContext ctx = context_for(3);
  Rng rng(8);
  const auto [za, zb] = z_pair_at_distance(ctx, static_cast<double>(st.range(0)), rng);
  for (auto _ : st) benchmark::DoNotOptimize(whitney_fill(ZSphere{0, {za, zb}}, ctx));
}
BENCHMARK(BM_WhitneyPath)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_FlatSphere(benchmark::State& st) {
  const HorosphereContext ctx = context_for(3);
  for (auto _ : st) benchmark::DoNotOptimize(flat_sphere_on_Z(point_at_height(ctx, 4.0), ctx, 32));
}
BENCHMARK(BM_FlatSphere)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
