#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "hypercluster/error.hpp"
#include "hypercluster/hypernet.hpp"
#include "hypercluster/random.hpp"
#include "hypercluster/sampler.hpp"
#include "hypercluster/synth.hpp"
#include "hypercluster/trainer.hpp"

#include "oracles.hpp"

using namespace hypercluster;

namespace {

Observations random_obs(Rng& rng, std::size_t n, std::size_t d, std::size_t m)
{
    Observations o{Tensor({n, d}), Tensor({n, m})};
    for (float& v : o.coords.values()) {
        v = static_cast<float>(rng.uniform());
    }
    for (float& v : o.values.values()) {
        v = static_cast<float>(rng.uniform());
    }
    return o;
}

double l1(const std::vector<float>& v)
{
    double s = 0.0;
    for (float x : v) {
        s += std::fabs(x);
    }
    return s;
}

} // namespace

TEST_CASE("output length equals the SIREN parameter count")
{
    Rng rng(1);
    for (const SirenSpec& spec : {SirenSpec{2, 1, 4, 5, 30.0}, SirenSpec{2, 3, 4, 32, 30.0}, SirenSpec{1, 4, 4, 5, 30.0}}) {
        HyperNetConfig cfg;
        cfg.spec = spec;
        const HyperNet net = HyperNet::init(cfg, 2);
        CHECK(net.heads().output_dim() == param_count(spec));
        CHECK(net.predict_weights(random_obs(rng, 7, spec.d, spec.m)).size() == param_count(spec));
        CHECK(net.predict_weights(random_obs(rng, 1, spec.d, spec.m)).size() == param_count(spec));
    }
    HyperNetConfig mnist;
    CHECK(HyperNet::init(mnist, 0).weight_dim() == 81);
}

TEST_CASE("initial predictions lie inside the SIREN init intervals")
{
    Rng rng(2);
    HyperNetConfig cfg;
    cfg.spec = {2, 1, 4, 5, 30.0};
    const HyperNet net = HyperNet::init(cfg, 3);
    const auto layout = layer_layout(cfg.spec);
    for (int trial = 0; trial < 10; ++trial) {
        const Observations o = random_obs(rng, 30, 2, 1);
        const auto pooled = net.pooled(o);
        const double delta = cfg.head_init * l1(pooled) * 1.0001;
        const auto w = net.predict_weights(o);
        for (std::size_t l = 0; l < layout.size(); ++l) {
            const double bound = l == 0 ? 1.0 / static_cast<double>(cfg.spec.d)
                                        : std::sqrt(6.0 / static_cast<double>(layout[l].in)) / cfg.spec.omega0;
            for (std::size_t i = layout[l].offset; i < layout[l].offset + layout[l].size(); ++i) {
                CHECK(std::fabs(w[i]) <= bound + delta);
            }
        }
    }
}

TEST_CASE("head biases sample the SIREN init distribution")
{
    HyperNetConfig cfg;
    cfg.spec = {2, 3, 4, 32, 30.0};
    const HyperNet net = HyperNet::init(cfg, 4);
    const auto& b0 = net.heads().biases[0].value;
    const auto& b1 = net.heads().biases[1].value;
    const double bound1 = std::sqrt(6.0 / 32.0) / 30.0;
    float max0 = 0.0f, max1 = 0.0f;
    for (float v : b0.values()) {
        max0 = std::max(max0, std::fabs(v));
    }
    for (float v : b1.values()) {
        max1 = std::max(max1, std::fabs(v));
    }
    CHECK(max0 <= 0.5f);
    CHECK(max0 > 0.45f);
    CHECK(max1 <= bound1);
    CHECK(max1 > 0.9 * bound1);
    for (const auto& w : net.heads().weights) {
        for (float v : w.value.values()) {
            CHECK(std::fabs(v) <= 1e-2f);
        }
    }
}

TEST_CASE("layer scales multiply each head block")
{
    Rng rng(5);
    HyperNetConfig base;
    base.spec = {1, 1, 3, 4, 30.0};
    HyperNetConfig scaled = base;
    scaled.layer_scales = {2.0f, 1.0f, 0.5f};
    const HyperNet a = HyperNet::init(base, 6);
    const HyperNet b = HyperNet::init(scaled, 6);
    const Observations o = random_obs(rng, 9, 1, 1);
    const auto wa = a.predict_weights(o);
    const auto wb = b.predict_weights(o);
    // Bias init is divided by the scale, so only the weight part differs.
    const auto ra = oracle::predict(a, o);
    const auto rb = oracle::predict(b, o);
    for (std::size_t i = 0; i < wa.size(); ++i) {
        CHECK(std::fabs(wa[i] - ra[i]) < 1e-5);
        CHECK(std::fabs(wb[i] - rb[i]) < 1e-5);
    }
    scaled.layer_scales = {1.0f, 1.0f};
    CHECK_THROWS_AS(HyperNet::init(scaled, 6), ArgumentError);
}

TEST_CASE("seeded init is reproducible and seeds differ")
{
    HyperNetConfig cfg;
    cfg.head_hidden = 16;
    const HyperNet a = HyperNet::init(cfg, 42);
    const HyperNet b = HyperNet::init(cfg, 42);
    const HyperNet c = HyperNet::init(cfg, 43);
    const auto pa = a.parameters();
    const auto pb = b.parameters();
    const auto pc = c.parameters();
    REQUIRE(pa.size() == pb.size());
    bool any_diff = false;
    for (std::size_t i = 0; i < pa.size(); ++i) {
        CHECK(pa[i]->name == pb[i]->name);
        CHECK(pa[i]->value == pb[i]->value);
        any_diff = any_diff || !(pa[i]->value == pc[i]->value);
    }
    CHECK(a.rff().frequencies == b.rff().frequencies);
    CHECK(any_diff);
}

TEST_CASE("optional hidden head layer matches the oracle")
{
    Rng rng(7);
    HyperNetConfig cfg;
    cfg.spec = {2, 2, 4, 6, 30.0};
    cfg.head_hidden = 24;
    const HyperNet net = HyperNet::init(cfg, 8);
    CHECK(net.heads().hidden_weight.has_value());
    const Observations o = random_obs(rng, 50, 2, 2);
    const auto w = net.predict_weights(o);
    const auto ref = oracle::predict(net, o);
    for (std::size_t i = 0; i < w.size(); ++i) {
        CHECK(std::fabs(w[i] - ref[i]) < 1e-5);
    }
}

TEST_CASE("initial loss is finite and of SIREN-init order")
{
    Rng rng(9);
    HyperNetConfig cfg;
    const HyperNet net = HyperNet::init(cfg, 10);
    const Observations o = random_obs(rng, 200, 2, 1);
    const float loss = net.sample_loss(o);
    CHECK(std::isfinite(loss));
    CHECK(loss < 10.0f);
    CHECK(std::fabs(loss - oracle::sample_loss(net, o)) < 1e-5 * std::max(1.0, static_cast<double>(loss)));
}

TEST_CASE("embed_dataset shape and determinism")
{
    Rng rng(11);
    HyperNetConfig cfg;
    cfg.spec = {1, 1, 4, 5, 30.0};
    const HyperNet net = HyperNet::init(cfg, 12);
    std::vector<Observations> data{random_obs(rng, 20, 1, 1)};
    const Tensor one = embed_dataset(net, data, std::nullopt);
    CHECK(one.rows() == 1);
    CHECK(one.cols() == param_count(cfg.spec));
    for (int k = 0; k < 4; ++k) {
        data.push_back(random_obs(rng, 10 + k, 1, 1));
    }
    const Tensor a = embed_dataset(net, data, 32);
    const Tensor b = embed_dataset(net, data, 32);
    CHECK(a == b);
    CHECK(a.rows() == 5);
    const auto row3 = net.predict_weights(resample(data[3], 32));
    CHECK(std::equal(row3.begin(), row3.end(), a.row(3).begin()));
}

TEST_CASE("trained embeddings separate two synthetic classes")
{
    SineDatasetConfig sc;
    sc.classes = {{1.0, 0.8, 1.2, -0.8, 0.8}, {4.0, 0.8, 1.2, -0.8, 0.8}};
    sc.per_class = 40;
    sc.points_lo = sc.points_hi = 256;
    sc.seed = 11;
    const Dataset ds = synth_sine_dataset(sc);
    TrainConfig tc;
    tc.epochs = 30;
    tc.batch_size = 16;
    tc.r_train = {16, 32, 64};
    tc.seed = 4;
    tc.model.spec = {1, 1, 4, 5, 30.0};
    const auto obs = ds.observations();
    const TrainResult res = train(obs, tc);
    const Tensor z = embed_dataset(res.net, obs, 48);
    const auto labels = ds.labels();
    double intra = 0.0, inter = 0.0;
    std::size_t ni = 0, ne = 0;
    for (std::size_t a = 0; a < z.rows(); ++a) {
        for (std::size_t b = a + 1; b < z.rows(); ++b) {
            double d = 0.0;
            for (std::size_t j = 0; j < z.cols(); ++j) {
                d += (z(a, j) - z(b, j)) * (z(a, j) - z(b, j));
            }
            d = std::sqrt(d);
            if (labels[a] == labels[b]) {
                intra += d;
                ++ni;
            } else {
                inter += d;
                ++ne;
            }
        }
    }
    CHECK(inter / static_cast<double>(ne) > intra / static_cast<double>(ni));
}
