#include "hypercluster/eval.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>

#include "hypercluster/error.hpp"
#include "hypercluster/random.hpp"
#include "hypercluster/sampler.hpp"

namespace hypercluster {

std::string algorithm_name(ClusterAlgorithm algo)
{
    return algo == ClusterAlgorithm::KMeans ? "kmeans" : "gmm";
}

ClusterAlgorithm parse_algorithm(const std::string& name)
{
    if (name == "kmeans") {
        return ClusterAlgorithm::KMeans;
    }
    if (name == "gmm") {
        return ClusterAlgorithm::Gmm;
    }
    throw ArgumentError("unknown clustering algorithm '" + name + "' (expected kmeans or gmm)");
}

Partition cluster_embeddings(const Tensor& x, std::size_t k, ClusterAlgorithm algo, std::uint64_t seed)
{
    if (algo == ClusterAlgorithm::KMeans) {
        KMeansOptions opts;
        opts.seed = seed;
        return kmeans(x, k, opts).partition;
    }
    GmmOptions opts;
    opts.seed = seed;
    return gmm_fit(x, k, opts).partition;
}

EvalRow summarize(std::size_t resolution, std::string split, std::string algorithm, std::string metric,
                  std::vector<double> values)
{
    EvalRow row;
    row.resolution = resolution;
    row.split = std::move(split);
    row.algorithm = std::move(algorithm);
    row.metric = std::move(metric);
    row.seeds = values.size();
    double mean = 0.0;
    for (double v : values) {
        mean += v;
    }
    mean /= static_cast<double>(std::max<std::size_t>(1, values.size()));
    double var = 0.0;
    for (double v : values) {
        var += (v - mean) * (v - mean);
    }
    var /= static_cast<double>(std::max<std::size_t>(1, values.size()));
    row.mean = mean;
    row.stddev = std::sqrt(var);
    row.values = std::move(values);
    return row;
}

namespace {

std::uint64_t seed_for(std::uint64_t base, std::size_t s)
{
    Rng rng(base + 0x51ed2701ULL * (s + 1));
    return rng.next();
}

void score(std::vector<EvalRow>& rows, const Tensor& x, const std::vector<int>& labels, std::size_t k,
           ClusterAlgorithm algo, std::size_t r, const std::string& split, const std::string& name,
           const EvalConfig& config)
{
    std::vector<double> amis;
    std::vector<double> aris;
    for (std::size_t s = 0; s < config.seeds; ++s) {
        const Partition p = cluster_embeddings(x, k, algo, seed_for(config.base_seed, s));
        amis.push_back(ami(labels, p.assignments, config.normalizer));
        aris.push_back(ari(labels, p.assignments));
    }
    rows.push_back(summarize(r, split, name, "AMI", std::move(amis)));
    rows.push_back(summarize(r, split, name, "ARI", std::move(aris)));
}

} // namespace

std::vector<EvalRow> eval_protocol(const HyperNet& net, const Dataset& dataset, const EvalConfig& config)
{
    if (!dataset.labeled()) {
        throw ArgumentError("evaluation needs a fully labeled dataset");
    }
    if (config.seeds == 0) {
        throw ArgumentError("evaluation needs at least one seed");
    }
    const std::vector<int> labels = dataset.labels();
    const std::size_t k = config.k == 0 ? dataset.num_classes() : config.k;
    const std::vector<Observations> data = dataset.observations();

    std::vector<EvalRow> rows;
    auto run_split = [&](std::span<const std::size_t> resolutions, const std::string& split) {
        for (std::size_t r : resolutions) {
            Tensor x = embed_dataset(net, data, r);
            if (config.standardize) {
                x = standardize(x);
            }
            for (ClusterAlgorithm algo : config.algorithms) {
                score(rows, x, labels, k, algo, r, split, algorithm_name(algo), config);
            }
        }
    };
    run_split(config.seen, "seen");
    run_split(config.held_out, "held-out");

    if (config.pixel_baseline) {
        const std::size_t r = *config.pixel_baseline;
        const std::size_t points = points_at_resolution(dataset.d, r);
        Tensor x({data.size(), points * dataset.m});
        for (std::size_t n = 0; n < data.size(); ++n) {
            const Observations o = resample(data[n], r);
            std::copy(o.values.values().begin(), o.values.values().end(), x.row(n).begin());
        }
        score(rows, x, labels, k, ClusterAlgorithm::KMeans, r, "baseline", "pixels-kmeans", config);
    }
    return rows;
}

void write_report_csv(std::span<const EvalRow> rows, std::ostream& out)
{
    out << "resolution,split,algorithm,metric,mean,std,seeds\n";
    char buf[64];
    for (const EvalRow& row : rows) {
        std::snprintf(buf, sizeof(buf), "%.6f,%.6f", row.mean, row.stddev);
        out << row.resolution << ',' << row.split << ',' << row.algorithm << ',' << row.metric << ',' << buf << ','
            << row.seeds << '\n';
    }
}

void write_report_table(std::span<const EvalRow> rows, std::ostream& out)
{
    struct Cell {
        std::string ami;
        std::string ari;
    };
    std::vector<std::tuple<std::size_t, std::string, std::string>> order;
    std::map<std::tuple<std::size_t, std::string, std::string>, Cell> cells;
    char buf[160];
    for (const EvalRow& row : rows) {
        const auto key = std::make_tuple(row.resolution, row.split, row.algorithm);
        if (!cells.contains(key)) {
            order.push_back(key);
        }
        std::snprintf(buf, sizeof(buf), "%.3f +- %.3f", row.mean, row.stddev);
        (row.metric == "AMI" ? cells[key].ami : cells[key].ari) = buf;
    }
    std::snprintf(buf, sizeof(buf), "%-10s  %-9s  %-14s  %-15s  %-15s\n", "resolution", "split", "algorithm", "AMI",
                  "ARI");
    out << buf;
    for (const auto& key : order) {
        const Cell& c = cells[key];
        std::snprintf(buf, sizeof(buf), "%-10zu  %-9s  %-14s  %-15s  %-15s\n", std::get<0>(key),
                      std::get<1>(key).c_str(), std::get<2>(key).c_str(), c.ami.c_str(), c.ari.c_str());
        out << buf;
    }
}

} // namespace hypercluster
