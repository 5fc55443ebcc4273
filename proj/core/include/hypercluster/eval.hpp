#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hypercluster/cluster.hpp"
#include "hypercluster/hypernet.hpp"
#include "hypercluster/metrics.hpp"
#include "hypercluster/pointset.hpp"

namespace hypercluster {

enum class ClusterAlgorithm { KMeans, Gmm };

std::string algorithm_name(ClusterAlgorithm algo);
/// Accepts "kmeans" and "gmm".
ClusterAlgorithm parse_algorithm(const std::string& name);

/// Runs one clustering algorithm with the given seed.
Partition cluster_embeddings(const Tensor& x, std::size_t k, ClusterAlgorithm algo, std::uint64_t seed);

struct EvalConfig {
    std::vector<std::size_t> seen;
    std::vector<std::size_t> held_out;
    /// Cluster count; 0 means the number of ground-truth classes (oracle K).
    std::size_t k = 0;
    std::vector<ClusterAlgorithm> algorithms{ClusterAlgorithm::KMeans, ClusterAlgorithm::Gmm};
    std::size_t seeds = 5;
    std::uint64_t base_seed = 0;
    bool standardize = false;
    AmiNormalizer normalizer = AmiNormalizer::Arithmetic;
    /// Adds K-means on raw flattened values at this resolution.
    std::optional<std::size_t> pixel_baseline;
};

struct EvalRow {
    std::size_t resolution = 0;
    std::string split;      // "seen", "held-out" or "baseline"
    std::string algorithm;  // "kmeans", "gmm", "pixels-kmeans"
    std::string metric;     // "AMI" or "ARI"
    double mean = 0.0;
    double stddev = 0.0;
    std::size_t seeds = 0;
    std::vector<double> values;
};

/// For every resolution (seen first, then held-out) and algorithm: embed the
/// dataset at that resolution, cluster once per seed and score against the
/// labels. Std is the population standard deviation over seeds. Throws
/// ArgumentError if the dataset is unlabeled.
std::vector<EvalRow> eval_protocol(const HyperNet& net, const Dataset& dataset, const EvalConfig& config);

/// Mean/std summary helper shared with the CLI.
EvalRow summarize(std::size_t resolution, std::string split, std::string algorithm, std::string metric,
                  std::vector<double> values);

/// `resolution,split,algorithm,metric,mean,std,seeds`.
void write_report_csv(std::span<const EvalRow> rows, std::ostream& out);
/// Aligned text table, one line per (resolution, algorithm) with AMI and ARI.
void write_report_table(std::span<const EvalRow> rows, std::ostream& out);

} // namespace hypercluster
