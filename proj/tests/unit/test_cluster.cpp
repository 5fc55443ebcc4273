#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "hypercluster/cluster.hpp"
#include "hypercluster/error.hpp"
#include "hypercluster/metrics.hpp"
#include "hypercluster/random.hpp"

using namespace hypercluster;

namespace {

struct Blobs {
    Tensor x;
    std::vector<int> labels;
};

Blobs make_blobs(std::size_t per, std::size_t k, std::size_t dim, double spread, Rng& rng)
{
    Blobs b{Tensor({per * k, dim}), {}};
    for (std::size_t c = 0; c < k; ++c) {
        std::vector<double> centre(dim);
        for (double& v : centre) {
            v = 10.0 * static_cast<double>(c) + rng.uniform(-1.0, 1.0);
        }
        for (std::size_t i = 0; i < per; ++i) {
            const std::size_t row = c * per + i;
            for (std::size_t j = 0; j < dim; ++j) {
                b.x(row, j) = static_cast<float>(centre[j] + spread * rng.normal());
            }
            b.labels.push_back(static_cast<int>(c));
        }
    }
    return b;
}

} // namespace

TEST_CASE("kmeans recovers well separated blobs")
{
    Rng rng(1);
    const Blobs b = make_blobs(30, 4, 3, 0.5, rng);
    const KMeansResult r = kmeans(b.x, 4, {10, 300, 7});
    CHECK(r.partition.k == 4);
    CHECK(r.partition.size() == 120);
    CHECK(ari(b.labels, r.partition.assignments) == 1.0);
    CHECK(r.centers.size() == 4);
    CHECK(r.inertia > 0.0);
}

TEST_CASE("kmeans edge cases")
{
    Rng rng(2);
    Tensor x({6, 2});
    for (float& v : x.values()) {
        v = static_cast<float>(rng.uniform());
    }
    const KMeansResult all = kmeans(x, 6);
    CHECK(all.inertia == 0.0);
    std::vector<int> sorted = all.partition.assignments;
    std::ranges::sort(sorted);
    CHECK(sorted == std::vector<int>{0, 1, 2, 3, 4, 5});

    // Duplicated points always share a cluster.
    Tensor dup({8, 2});
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            dup(i, j) = dup(i + 4, j) = static_cast<float>(rng.uniform());
        }
    }
    for (std::size_t k = 1; k <= 4; ++k) {
        const auto p = kmeans(dup, k, {3, 300, k}).partition.assignments;
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(p[i] == p[i + 4]);
        }
    }
    CHECK_THROWS_AS(kmeans(x, 7), ArgumentError);
    CHECK_THROWS_AS(kmeans(x, 0), ArgumentError);
}

TEST_CASE("kmeans is deterministic for a seed and its inertia never increases")
{
    Rng rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        const Blobs b = make_blobs(25, 3, 4, 4.0, rng);
        const KMeansResult a = kmeans(b.x, 5, {4, 300, static_cast<std::uint64_t>(trial)});
        const KMeansResult c = kmeans(b.x, 5, {4, 300, static_cast<std::uint64_t>(trial)});
        CHECK(a.partition.assignments == c.partition.assignments);
        CHECK(a.inertia == c.inertia);
        REQUIRE_FALSE(a.inertia_trace.empty());
        for (std::size_t i = 1; i < a.inertia_trace.size(); ++i) {
            CHECK(a.inertia_trace[i] <= a.inertia_trace[i - 1] * (1.0 + 1e-12));
        }
        CHECK(a.inertia == doctest::Approx(a.inertia_trace.back()).epsilon(1e-9));
    }
}

TEST_CASE("gmm with one component gives the sample moments")
{
    Rng rng(4);
    Tensor x({200, 2});
    for (std::size_t i = 0; i < 200; ++i) {
        x(i, 0) = static_cast<float>(3.0 + 2.0 * rng.normal());
        x(i, 1) = static_cast<float>(-1.0 + 0.5 * rng.normal());
    }
    double mean[2] = {0.0, 0.0}, var[2] = {0.0, 0.0};
    for (std::size_t j = 0; j < 2; ++j) {
        for (std::size_t i = 0; i < 200; ++i) {
            mean[j] += x(i, j);
        }
        mean[j] /= 200.0;
        for (std::size_t i = 0; i < 200; ++i) {
            var[j] += (x(i, j) - mean[j]) * (x(i, j) - mean[j]);
        }
        var[j] /= 200.0;
    }
    const GmmResult g = gmm_fit(x, 1);
    CHECK(g.model.weights[0] == doctest::Approx(1.0));
    for (std::size_t j = 0; j < 2; ++j) {
        CHECK(g.model.means[0][j] == doctest::Approx(mean[j]).epsilon(1e-9));
        CHECK(g.model.variances[0][j] == doctest::Approx(var[j]).epsilon(1e-9));
    }
}

TEST_CASE("gmm log-likelihood never decreases and the model stays valid")
{
    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const Blobs b = make_blobs(30, 3, 2, 3.0 + trial, rng);
        GmmOptions opt;
        opt.tol = 0.0;
        opt.max_iter = 50;
        opt.seed = static_cast<std::uint64_t>(trial);
        const GmmResult g = gmm_fit(b.x, 3, opt);
        for (std::size_t i = 1; i < g.log_likelihood.size(); ++i) {
            CHECK(g.log_likelihood[i] >= g.log_likelihood[i - 1] - 1e-9);
        }
        CHECK(std::accumulate(g.model.weights.begin(), g.model.weights.end(), 0.0) == doctest::Approx(1.0));
        for (const auto& v : g.model.variances) {
            for (double s : v) {
                CHECK(s >= opt.var_floor);
            }
        }
    }
}

TEST_CASE("gmm separates two blobs and survives duplicated points")
{
    Rng rng(6);
    const Blobs b = make_blobs(40, 2, 3, 0.5, rng);
    const GmmResult g = gmm_fit(b.x, 2);
    CHECK(ari(b.labels, g.partition.assignments) == 1.0);

    Tensor same({10, 2}, 1.5f);
    const GmmResult d = gmm_fit(same, 2);
    for (const auto& v : d.model.variances) {
        for (double s : v) {
            CHECK(std::isfinite(s));
            CHECK(s >= 1e-6);
        }
    }
    CHECK_THROWS_AS(gmm_fit(same, 11), ArgumentError);
}

TEST_CASE("pca2 of collinear points has a zero second component")
{
    Tensor x({50, 3});
    for (std::size_t i = 0; i < 50; ++i) {
        const double t = static_cast<double>(i) / 49.0;
        x(i, 0) = static_cast<float>(t);
        x(i, 1) = static_cast<float>(2.0 * t + 1.0);
        x(i, 2) = static_cast<float>(-t);
    }
    const Projection p = pca2(x);
    CHECK_FALSE(p.degenerate);
    CHECK(p.coords.rows() == 50);
    CHECK(p.coords.cols() == 2);
    CHECK(p.explained_variance[1] < 1e-8 * p.explained_variance[0]);
    for (std::size_t i = 0; i < 50; ++i) {
        CHECK(std::fabs(p.coords(i, 1)) < 1e-4);
    }
}

TEST_CASE("pca2 explained variance is rotation invariant and bounded by the total")
{
    Rng rng(7);
    Tensor x({100, 2});
    for (std::size_t i = 0; i < 100; ++i) {
        x(i, 0) = static_cast<float>(3.0 * rng.normal());
        x(i, 1) = static_cast<float>(0.5 * rng.normal());
    }
    const double angle = 0.7;
    Tensor rot({100, 2});
    for (std::size_t i = 0; i < 100; ++i) {
        rot(i, 0) = static_cast<float>(std::cos(angle) * x(i, 0) - std::sin(angle) * x(i, 1));
        rot(i, 1) = static_cast<float>(std::sin(angle) * x(i, 0) + std::cos(angle) * x(i, 1));
    }
    const Projection a = pca2(x);
    const Projection b = pca2(rot);
    for (std::size_t c = 0; c < 2; ++c) {
        CHECK(a.explained_variance[c] == doctest::Approx(b.explained_variance[c]).epsilon(1e-4));
    }

    Tensor wide({40, 6});
    for (float& v : wide.values()) {
        v = static_cast<float>(rng.normal());
    }
    double total = 0.0;
    for (std::size_t j = 0; j < 6; ++j) {
        double m = 0.0;
        for (std::size_t i = 0; i < 40; ++i) {
            m += wide(i, j);
        }
        m /= 40.0;
        for (std::size_t i = 0; i < 40; ++i) {
            total += (wide(i, j) - m) * (wide(i, j) - m);
        }
    }
    total /= 39.0;
    const Projection w = pca2(wide);
    CHECK(w.explained_variance[0] >= w.explained_variance[1]);
    CHECK(w.explained_variance[0] + w.explained_variance[1] <= total * (1.0 + 1e-6));
}

TEST_CASE("pca2 degenerate input")
{
    const Projection p = pca2(Tensor({5, 3}, 2.0f));
    CHECK(p.degenerate);
    CHECK(p.coords == Tensor({5, 2}));
    CHECK_THROWS(pca2(Tensor({1, 3})));
}

TEST_CASE("standardize gives zero mean and unit spread")
{
    Rng rng(8);
    Tensor x({30, 3});
    for (std::size_t i = 0; i < 30; ++i) {
        x(i, 0) = static_cast<float>(5.0 + 3.0 * rng.normal());
        x(i, 1) = 4.0f;
        x(i, 2) = static_cast<float>(rng.uniform());
    }
    const Tensor s = standardize(x);
    for (std::size_t j = 0; j < 3; ++j) {
        double m = 0.0, v = 0.0;
        for (std::size_t i = 0; i < 30; ++i) {
            m += s(i, j);
        }
        m /= 30.0;
        for (std::size_t i = 0; i < 30; ++i) {
            v += (s(i, j) - m) * (s(i, j) - m);
        }
        v /= 30.0;
        CHECK(std::fabs(m) < 1e-5);
        if (j == 1) {
            CHECK(v == 0.0);
        } else {
            CHECK(v == doctest::Approx(1.0).epsilon(1e-4));
        }
    }
}
