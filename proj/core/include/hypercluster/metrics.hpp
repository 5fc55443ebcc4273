#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hypercluster {

/// Cross-tabulation of two labelings over the same samples.
struct Contingency {
    /// [rows x cols] counts; rows follow the first labeling's distinct labels
    /// in increasing order, columns the second's.
    std::vector<std::vector<std::int64_t>> table;
    std::vector<std::int64_t> row_sums;
    std::vector<std::int64_t> col_sums;
    std::int64_t total = 0;
};

Contingency contingency(std::span<const int> a, std::span<const int> b);

/// Adjusted Rand index (Hubert-Arabie). When the expected and maximum index
/// coincide the result is 1 for identical partitions and 0 otherwise.
/// Throws ArgumentError on a length mismatch or fewer than two samples.
double ari(std::span<const int> truth, std::span<const int> pred);

enum class AmiNormalizer { Arithmetic, Max, Min, Geometric };

/// Mutual information in nats.
double mutual_information(const Contingency& c);
/// Entropy (nats) of a marginal count vector.
double entropy(std::span<const std::int64_t> counts);
/// E[MI] under random relabeling with fixed marginals (hypergeometric model).
double expected_mutual_information(const Contingency& c);

/// Adjusted mutual information (MI - E[MI]) / (norm(H_a, H_b) - E[MI]). A
/// vanishing denominator gives 1 for identical partitions and 0 otherwise.
double ami(std::span<const int> truth, std::span<const int> pred,
           AmiNormalizer normalizer = AmiNormalizer::Arithmetic);

/// True when both labelings induce the same set partition.
bool same_partition(std::span<const int> a, std::span<const int> b);

} // namespace hypercluster
