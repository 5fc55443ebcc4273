#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "hypercluster/error.hpp"
#include "hypercluster/random.hpp"
#include "hypercluster/siren.hpp"

#include "oracles.hpp"

using namespace hypercluster;

namespace {

std::vector<float> random_weights(const SirenSpec& spec, Rng& rng, double scale)
{
    std::vector<float> w(param_count(spec));
    for (float& v : w) {
        v = static_cast<float>(rng.uniform(-scale, scale));
    }
    return w;
}

Tensor random_coords(std::size_t n, std::size_t d, Rng& rng)
{
    Tensor t({n, d});
    for (float& v : t.values()) {
        v = static_cast<float>(rng.uniform());
    }
    return t;
}

} // namespace

TEST_CASE("param_count reproduces the reference architectures")
{
    CHECK(param_count({2, 1, 4, 5, 30.0}) == 81);
    CHECK(param_count({2, 3, 4, 32, 30.0}) == 2307);
    CHECK(param_count({1, 4, 4, 5, 30.0}) == 94);
    CHECK(param_count({3, 2, 2, 7, 30.0}) == (3 * 7 + 7) + (7 * 2 + 2));
}

TEST_CASE("spec validation")
{
    CHECK_THROWS_AS(SirenSpec({2, 1, 1, 5, 30.0}).validate(), ArgumentError);
    CHECK_THROWS_AS(SirenSpec({2, 1, 4, 0, 30.0}).validate(), ArgumentError);
    CHECK_THROWS_AS(SirenSpec({0, 1, 4, 5, 30.0}).validate(), ArgumentError);
    CHECK_NOTHROW(SirenSpec({2, 1, 4, 5, 30.0}).validate());
}

TEST_CASE("layout sizes and slicing round trip")
{
    const SirenSpec spec{2, 1, 4, 5, 30.0};
    const auto layout = layer_layout(spec);
    REQUIRE(layout.size() == 4);
    CHECK(layout[0].weight_size() == 10);
    CHECK(layout[0].out == 5);
    CHECK(layout[1].weight_size() == 25);
    CHECK(layout[2].weight_size() == 25);
    CHECK(layout[3].weight_size() == 5);
    CHECK(layout[3].out == 1);
    CHECK(layout[3].offset + layout[3].size() == 81);

    Rng rng(1);
    const auto w = random_weights(spec, rng, 1.0);
    const auto layers = slice_layout(spec, w);
    CHECK(layers[1].weight(2, 3) == w[layout[1].offset + 2 * 5 + 3]);
    CHECK(layers[1].bias[4] == w[layout[1].bias_offset() + 4]);
    CHECK(flatten_layout(spec, layers) == w);

    std::vector<float> short_w(w.begin(), w.end() - 1);
    CHECK_THROWS_AS(slice_layout(spec, short_w), DimensionError);
    std::vector<float> long_w = w;
    long_w.push_back(0.0f);
    CHECK_THROWS_AS(slice_layout(spec, long_w), DimensionError);
}

TEST_CASE("zero weights give zero output; final bias gives a constant")
{
    const SirenSpec spec{2, 3, 4, 5, 30.0};
    Rng rng(2);
    const Tensor x = random_coords(20, 2, rng);
    std::vector<float> w(param_count(spec), 0.0f);
    const Tensor zero = siren_eval(spec, w, x);
    CHECK(zero == Tensor({20, 3}));

    const auto layout = layer_layout(spec);
    w[layout.back().bias_offset() + 0] = 0.5f;
    w[layout.back().bias_offset() + 2] = -2.0f;
    const Tensor c = siren_eval(spec, w, x);
    for (std::size_t i = 0; i < 20; ++i) {
        CHECK(c(i, 0) == 0.5f);
        CHECK(c(i, 1) == 0.0f);
        CHECK(c(i, 2) == -2.0f);
    }
}

TEST_CASE("siren_eval matches the scalar interpreter")
{
    Rng rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        const SirenSpec spec{1 + rng.index(3), 1 + rng.index(4), 2 + rng.index(4), 1 + rng.index(12), 30.0};
        // SIREN-init magnitudes keep the sinusoids in their usual regime.
        const auto w = random_weights(spec, rng, std::sqrt(6.0 / static_cast<double>(spec.width)) / 30.0 * 3.0);
        const Tensor x = random_coords(25, spec.d, rng);
        const Tensor got = siren_eval(spec, w, x);
        const auto ref = oracle::siren(spec, w, x);
        for (std::size_t i = 0; i < 25; ++i) {
            for (std::size_t c = 0; c < spec.m; ++c) {
                CHECK(std::fabs(got(i, c) - ref[i][c]) < 1e-5);
            }
        }
    }
}

TEST_CASE("evaluation on a subset of points is pointwise identical")
{
    const SirenSpec spec{2, 1, 4, 5, 30.0};
    Rng rng(4);
    const auto w = random_weights(spec, rng, 0.2);
    const Tensor full = random_coords(64, 2, rng);
    const Tensor all = siren_eval(spec, w, full);
    Tensor sub({5, 2});
    const std::size_t pick[5] = {63, 0, 17, 17, 40};
    for (std::size_t i = 0; i < 5; ++i) {
        std::ranges::copy(full.row(pick[i]), sub.row(i).begin());
    }
    const Tensor part = siren_eval(spec, w, sub);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(part(i, 0) == all(pick[i], 0));
    }
}

TEST_CASE("coordinate and weight shape errors")
{
    const SirenSpec spec{2, 1, 4, 5, 30.0};
    Rng rng(5);
    const auto w = random_weights(spec, rng, 0.1);
    CHECK_THROWS_AS(siren_eval(spec, w, random_coords(3, 1, rng)), DimensionError);
    std::vector<float> bad(w.begin(), w.end() - 2);
    CHECK_THROWS_AS(siren_eval(spec, bad, random_coords(3, 2, rng)), DimensionError);
}

TEST_CASE("reconstruction gradient with respect to w matches finite differences")
{
    Rng rng(6);
    const SirenSpec spec{1, 2, 3, 3, 30.0};
    std::vector<float> w0 = random_weights(spec, rng, 0.3);
    const Tensor x = random_coords(8, 1, rng);
    Tensor u({8, 2});
    for (float& v : u.values()) {
        v = static_cast<float>(rng.uniform(-1.0, 1.0));
    }
    Parameter wp("w", Tensor({w0.size()}, w0));
    Tape tape;
    Var loss = squared_error(siren_forward(spec, tape.param(wp), tape.constant(x)), tape.constant(u));
    tape.backward(loss);

    auto ref_loss = [&](const std::vector<double>& w) {
        // Double-precision forward with double weights.
        double total = 0.0;
        for (std::size_t i = 0; i < 8; ++i) {
            std::vector<double> h{x(i, 0)};
            std::size_t pos = 0;
            for (std::size_t l = 0; l < spec.layers; ++l) {
                const std::size_t in = h.size();
                const std::size_t out = l + 1 == spec.layers ? spec.m : spec.width;
                std::vector<double> next(out);
                for (std::size_t j = 0; j < out; ++j) {
                    double z = w[pos + out * in + j];
                    for (std::size_t k = 0; k < in; ++k) {
                        z += w[pos + j * in + k] * h[k];
                    }
                    next[j] = l + 1 == spec.layers ? z : std::sin(30.0 * z);
                }
                pos += out * in + out;
                h = next;
            }
            for (std::size_t c = 0; c < 2; ++c) {
                total += (u(i, c) - h[c]) * (u(i, c) - h[c]);
            }
        }
        return total / 8.0;
    };
    std::vector<double> wd(w0.begin(), w0.end());
    double worst = 0.0;
    for (std::size_t k = 0; k < wd.size(); ++k) {
        auto hi = wd;
        auto lo = wd;
        hi[k] += 1e-6;
        lo[k] -= 1e-6;
        const double fd = (ref_loss(hi) - ref_loss(lo)) / 2e-6;
        const double g = wp.grad[k];
        worst = std::max(worst, std::fabs(g - fd) / std::max({std::fabs(g), std::fabs(fd), 1e-3}));
    }
    CHECK(worst < 1e-3);
}
