#include "doctest.h"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "hypercluster/error.hpp"
#include "hypercluster/eval.hpp"
#include "hypercluster/metrics.hpp"
#include "hypercluster/random.hpp"
#include "hypercluster/synth.hpp"

#include "oracles.hpp"

using namespace hypercluster;

TEST_CASE("ari worked examples")
{
    const std::vector<int> a{0, 0, 1, 1};
    CHECK(ari(a, a) == 1.0);
    CHECK(ari(a, std::vector<int>{5, 5, 2, 2}) == 1.0);
    CHECK(ari(a, std::vector<int>{0, 1, 0, 1}) == -0.5);
    CHECK(ari(std::vector<int>{0, 0, 0, 0}, std::vector<int>{0, 0, 0, 0}) == 1.0);
    CHECK(ari(std::vector<int>{0, 1, 2, 3}, std::vector<int>{0, 0, 0, 0}) == 0.0);
    CHECK_THROWS_AS(ari(a, std::vector<int>{0, 1}), ArgumentError);
    CHECK_THROWS_AS(ari(std::vector<int>{0}, std::vector<int>{0}), ArgumentError);
}

TEST_CASE("ari equals the pair-counting oracle")
{
    Rng rng(1);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 2 + rng.index(30);
        const auto a = oracle::random_labels(n, 1 + static_cast<int>(rng.index(5)), rng);
        const auto b = oracle::random_labels(n, 1 + static_cast<int>(rng.index(5)), rng);
        const auto ref = oracle::ari_pairs(a, b);
        CHECK(ari(a, b) == doctest::Approx(ref.value()).epsilon(1e-12));
    }
}

TEST_CASE("ami worked examples")
{
    const std::vector<int> a{0, 0, 1, 1};
    CHECK(ami(a, a) == doctest::Approx(1.0));
    CHECK(ami(a, std::vector<int>{3, 3, 7, 7}) == doctest::Approx(1.0));
    // Uninformative single cluster.
    CHECK(ami(a, std::vector<int>{0, 0, 0, 0}) == 0.0);
    CHECK(ami(std::vector<int>{0, 0, 0}, std::vector<int>{1, 1, 1}) == 1.0);
    CHECK_THROWS_AS(ami(a, std::vector<int>{0, 1, 2}), ArgumentError);
}

TEST_CASE("ami matches exhaustive enumeration of E[MI]")
{
    Rng rng(2);
    int compared = 0;
    for (int trial = 0; trial < 150; ++trial) {
        const std::size_t n = 2 + rng.index(6);
        const auto a = oracle::random_labels(n, 1 + static_cast<int>(rng.index(3)), rng);
        const auto b = oracle::random_labels(n, 1 + static_cast<int>(rng.index(3)), rng);
        const Contingency c = contingency(a, b);
        CHECK(expected_mutual_information(c) == doctest::Approx(oracle::expected_mi_enumerated(a, b)).epsilon(1e-10));
        const double denom = 0.5 * (entropy(c.row_sums) + entropy(c.col_sums)) - oracle::expected_mi_enumerated(a, b);
        if (std::fabs(denom) < 1e-9) {
            continue;
        }
        ++compared;
        CHECK(std::fabs(ami(a, b) - oracle::ami_enumerated(a, b)) < 1e-9);
    }
    CHECK(compared > 50);
}

TEST_CASE("E[MI] agrees with Monte-Carlo relabeling for larger n")
{
    Rng rng(3);
    for (int trial = 0; trial < 5; ++trial) {
        const auto a = oracle::random_labels(12, 3, rng);
        const auto b = oracle::random_labels(12, 4, rng);
        const oracle::Estimate est = oracle::expected_mi_monte_carlo(a, b, 20000, rng);
        const double emi = expected_mutual_information(contingency(a, b));
        CHECK(std::fabs(emi - est.mean) <= 4.0 * est.stderr_);
    }
}

TEST_CASE("entropy and MI against the map-based oracle")
{
    Rng rng(4);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + rng.index(50);
        const auto a = oracle::random_labels(n, 4, rng);
        const auto b = oracle::random_labels(n, 3, rng);
        const Contingency c = contingency(a, b);
        CHECK(entropy(c.row_sums) == doctest::Approx(oracle::entropy(a)).epsilon(1e-12));
        CHECK(mutual_information(c) == doctest::Approx(oracle::mutual_information(a, b)).epsilon(1e-10));
    }
}

TEST_CASE("scores are symmetric and invariant to relabeling")
{
    Rng rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + rng.index(40);
        const auto a = oracle::random_labels(n, 4, rng);
        const auto b = oracle::random_labels(n, 3, rng);
        CHECK(ari(a, b) == doctest::Approx(ari(b, a)).epsilon(1e-14));
        CHECK(ami(a, b) == doctest::Approx(ami(b, a)).epsilon(1e-12));
        std::vector<int> relabeled(b.size());
        for (std::size_t i = 0; i < b.size(); ++i) {
            relabeled[i] = 100 - 7 * b[i];
        }
        CHECK(ari(a, relabeled) == doctest::Approx(ari(a, b)).epsilon(1e-14));
        CHECK(ami(a, relabeled) == doctest::Approx(ami(a, b)).epsilon(1e-12));
        const bool same = same_partition(a, b);
        CHECK((ari(a, b) == doctest::Approx(1.0).epsilon(1e-12)) == same);
        CHECK(ari(a, b) <= 1.0 + 1e-12);
        CHECK(ami(a, b) <= 1.0 + 1e-12);
    }
}

TEST_CASE("independent partitions score near zero")
{
    Rng rng(6);
    double sum_ami = 0.0, sum_ari = 0.0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
        const auto a = oracle::random_labels(200, 4, rng);
        const auto b = oracle::random_labels(200, 4, rng);
        sum_ami += ami(a, b);
        sum_ari += ari(a, b);
    }
    CHECK(std::fabs(sum_ami / trials) < 0.05);
    CHECK(std::fabs(sum_ari / trials) < 0.05);
}

TEST_CASE("contingency table sums")
{
    const std::vector<int> a{2, 2, 0, 1, 1, 1};
    const std::vector<int> b{5, 4, 4, 4, 5, 5};
    const Contingency c = contingency(a, b);
    CHECK(c.total == 6);
    CHECK(c.row_sums == std::vector<std::int64_t>{1, 3, 2});
    CHECK(c.col_sums == std::vector<std::int64_t>{3, 3});
    CHECK(c.table == std::vector<std::vector<std::int64_t>>{{1, 0}, {1, 2}, {1, 1}});
}

namespace {

// Two classes whose raw values are already perfectly separable: constant
// offsets of +-5 on a smooth carrier.
Dataset separable()
{
    SineDatasetConfig sc;
    sc.classes = {{1.0, 0.1, 0.1, 0.0, 0.0}, {2.0, 0.1, 0.1, 0.0, 0.0}};
    sc.per_class = 15;
    sc.points_lo = sc.points_hi = 32;
    sc.seed = 1;
    Dataset ds = synth_sine_dataset(sc);
    for (auto& s : ds.samples) {
        for (float& v : s.obs.values.values()) {
            v += *s.label == 0 ? -5.0f : 5.0f;
        }
    }
    return ds;
}

} // namespace

TEST_CASE("eval protocol scores a separable dataset perfectly and covers every row")
{
    const Dataset ds = separable();
    HyperNetConfig cfg;
    cfg.spec = {1, 1, 4, 5, 30.0};
    const HyperNet net = HyperNet::init(cfg, 1);
    EvalConfig ec;
    ec.seen = {16, 32};
    ec.held_out = {64};
    ec.seeds = 3;
    ec.standardize = true;
    ec.pixel_baseline = 32;
    const auto rows = eval_protocol(net, ds, ec);
    // 3 resolutions x 2 algorithms x 2 metrics + baseline x 2 metrics.
    CHECK(rows.size() == 14);
    std::size_t baseline = 0;
    for (const auto& r : rows) {
        CHECK(r.seeds == 3);
        CHECK(r.values.size() == 3);
        if (r.split == "baseline") {
            ++baseline;
            CHECK(r.algorithm == "pixels-kmeans");
            CHECK(r.resolution == 32);
            CHECK(r.mean == doctest::Approx(1.0));
            CHECK(r.stddev == doctest::Approx(0.0));
        } else {
            CHECK((r.split == "seen") == (r.resolution != 64));
        }
    }
    CHECK(baseline == 2);

    std::ostringstream csv;
    write_report_csv(rows, csv);
    CHECK(csv.str().rfind("resolution,split,algorithm,metric,mean,std,seeds\n", 0) == 0);
    std::ostringstream table;
    write_report_table(rows, table);
    CHECK_FALSE(table.str().empty());

    Dataset unlabeled = ds;
    unlabeled.samples[3].label.reset();
    CHECK_THROWS_AS(eval_protocol(net, unlabeled, ec), ArgumentError);
}

TEST_CASE("summarize uses the population standard deviation")
{
    const EvalRow r = summarize(28, "seen", "kmeans", "AMI", {0.5, 0.7});
    CHECK(r.mean == doctest::Approx(0.6));
    CHECK(r.stddev == doctest::Approx(0.1));
    CHECK(r.seeds == 2);
    CHECK(parse_algorithm("gmm") == ClusterAlgorithm::Gmm);
    CHECK(algorithm_name(ClusterAlgorithm::KMeans) == "kmeans");
    CHECK_THROWS_AS(parse_algorithm("dbscan"), ArgumentError);
}
