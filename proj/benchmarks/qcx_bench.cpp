#include <benchmark/benchmark.h>

#include <vector>

#include "qcx/convexifiability.hpp"
#include "qcx/extended.hpp"
#include "qcx/fd.hpp"
#include "qcx/field.hpp"
#include "qcx/linalg.hpp"
#include "qcx/quasiconvexity.hpp"
#include "qcx/sampling.hpp"

namespace {

using namespace qcx;

std::vector<PointE> points(std::size_t n) {
  Sampler s(7);
  std::vector<PointE> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(s.point(0.1, 10));
  return out;
}

void BM_EvalU(benchmark::State& state) {
  const auto ps = points(1024);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval_u(ps[i++ & 1023], Alpha(0.7)));
  }
}
BENCHMARK(BM_EvalU);

void BM_HessU(benchmark::State& state) {
  const auto ps = points(1024);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hess_u(ps[i++ & 1023], Alpha(0.7)));
  }
}
BENCHMARK(BM_HessU);

void BM_FdHessianQuad(benchmark::State& state) {
  const auto ps = points(64);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        fd_hessian<extended::quad>(extended::UField{0.7}, ps[i++ & 63]));
  }
}
BENCHMARK(BM_FdHessianQuad);

void BM_EigenvaluesClosedForm(benchmark::State& state) {
  const auto ps = points(1024);
  std::vector<Sym3> ms;
  for (const auto& p : ps) ms.push_back(hess_u(p, Alpha(1.3)));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(eigenvalues(ms[i++ & 1023]));
}
BENCHMARK(BM_EigenvaluesClosedForm);

void BM_JacobiEigen(benchmark::State& state) {
  const auto ps = points(1024);
  std::vector<Sym3> ms;
  for (const auto& p : ps) ms.push_back(hess_u(p, Alpha(1.3)));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(jacobi_eigen(ms[i++ & 1023]));
}
BENCHMARK(BM_JacobiEigen);

void BM_SegmentBatch(benchmark::State& state) {
  Sampler s(8);
  std::vector<SegmentSample> segs;
  std::vector<double> alphas;
  for (int i = 0; i < 10000; ++i) {
    const PointE p1 = s.point(0.05, 20);
    const PointE p2 = s.point(0.05, 20);
    segs.emplace_back(p1, p2, s.uniform(0, 1));
    alphas.push_back(0.5);
  }
  const unsigned threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        run_quasiconvexity_batch(segs, alphas, 1e-10, 1e-10, threads));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(segs.size()));
}
BENCHMARK(BM_SegmentBatch)->Arg(1)->Arg(4)->UseRealTime();

void BM_CertificateAttempt(benchmark::State& state) {
  const auto ps = points(256);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(attempt_certificate(ps[i++ & 255], Alpha(0.5)));
  }
}
BENCHMARK(BM_CertificateAttempt);

void BM_AlphaOneSignFlip(benchmark::State& state) {
  const auto ps = points(256);
  const MonotoneF f = MonotoneF::exponential(5.0);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(alpha_one_sign_flip(ps[i++ & 255], f));
  }
}
BENCHMARK(BM_AlphaOneSignFlip);

}  // namespace

BENCHMARK_MAIN();
