#include <benchmark/benchmark.h>

#include <vector>

#include "hypercluster/autodiff.hpp"
#include "hypercluster/cluster.hpp"
#include "hypercluster/grid.hpp"
#include "hypercluster/hypernet.hpp"
#include "hypercluster/metrics.hpp"
#include "hypercluster/random.hpp"
#include "hypercluster/trainer.hpp"

using namespace hypercluster;

namespace {

Tensor random_tensor(std::vector<std::size_t> shape, Rng& rng)
{
    Tensor t(std::move(shape));
    for (float& v : t.values()) {
        v = static_cast<float>(rng.uniform(-1.0, 1.0));
    }
    return t;
}

// An r x r image as observations.
Observations image(std::size_t r, Rng& rng)
{
    Grid g(r, r, 1);
    for (float& v : g.data) {
        v = static_cast<float>(rng.uniform());
    }
    return grid_to_pointset(g, "bench", std::nullopt).obs;
}

void BM_LinearForward(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    Rng rng(1);
    Parameter w("w", random_tensor({64, 64}, rng));
    Parameter b("b", random_tensor({64}, rng));
    const Tensor x = random_tensor({n, 64}, rng);
    for (auto _ : state) {
        Tape tape;
        Var y = linear(tape.constant(x), tape.param(w), tape.param(b));
        benchmark::DoNotOptimize(y.value().data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_LinearForward)->Arg(784)->Arg(3136);

void BM_LinearBackward(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    Rng rng(2);
    Parameter w("w", random_tensor({64, 64}, rng));
    Parameter b("b", random_tensor({64}, rng));
    const Tensor x = random_tensor({n, 64}, rng);
    for (auto _ : state) {
        Tape tape;
        Var loss = mean_rows(linear(tape.constant(x), tape.param(w), tape.param(b)));
        loss = squared_error(loss, tape.constant(Tensor({64})));
        tape.backward(loss);
        benchmark::DoNotOptimize(w.grad.data());
    }
}
BENCHMARK(BM_LinearBackward)->Arg(784)->Arg(3136);

void BM_MeanRows(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    Rng rng(3);
    const Tensor x = random_tensor({n, 64}, rng);
    for (auto _ : state) {
        Tape tape;
        Var y = mean_rows(tape.constant(x));
        benchmark::DoNotOptimize(y.value().data());
    }
}
BENCHMARK(BM_MeanRows)->Arg(784)->Arg(3136);

void BM_SampleLoss(benchmark::State& state)
{
    const auto r = static_cast<std::size_t>(state.range(0));
    Rng rng(4);
    const HyperNet net = HyperNet::init(HyperNetConfig{}, 1);
    const Observations o = image(r, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(net.sample_loss(o));
    }
}
BENCHMARK(BM_SampleLoss)->Arg(28)->Arg(56);

void BM_LossAndGrad(benchmark::State& state)
{
    const auto r = static_cast<std::size_t>(state.range(0));
    Rng rng(5);
    HyperNet net = HyperNet::init(HyperNetConfig{}, 1);
    std::vector<Observations> batch;
    for (int i = 0; i < 4; ++i) {
        batch.push_back(image(r, rng));
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(loss_and_grad(net, batch));
    }
    state.SetItemsProcessed(state.iterations() * 4);
}
BENCHMARK(BM_LossAndGrad)->Arg(28)->Arg(56);

void BM_KMeans(benchmark::State& state)
{
    Rng rng(6);
    const Tensor x = random_tensor({static_cast<std::size_t>(state.range(0)), 81}, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(kmeans(x, 10, {10, 300, 0}).inertia);
    }
}
BENCHMARK(BM_KMeans)->Arg(1000)->Arg(3000);

void BM_Ami(benchmark::State& state)
{
    Rng rng(7);
    const auto n = static_cast<std::size_t>(state.range(0));
    std::vector<int> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = static_cast<int>(rng.index(10));
        b[i] = static_cast<int>(rng.index(10));
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(ami(a, b));
    }
}
BENCHMARK(BM_Ami)->Arg(3000)->Arg(60000);

} // namespace

BENCHMARK_MAIN();
