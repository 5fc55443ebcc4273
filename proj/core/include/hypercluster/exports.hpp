#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hypercluster/cluster.hpp"
#include "hypercluster/pointset.hpp"

namespace hypercluster {

/// `id,label,w_0..w_{dz-1}`; label is empty for unlabeled samples.
void write_embedding_csv(const Dataset& dataset, const Tensor& weights, std::ostream& out);

struct EmbeddingTable {
    std::vector<std::string> ids;
    std::vector<std::optional<int>> labels;
    Tensor weights;
};
EmbeddingTable read_embedding_csv(std::istream& in);

/// `id,assigned[,label]`.
void write_partition_csv(std::span<const std::string> ids, const Partition& partition,
                         std::span<const std::optional<int>> labels, std::ostream& out);

struct ProjectedPoint {
    std::string id;
    float pc1 = 0.0f;
    float pc2 = 0.0f;
    std::optional<int> label;
    std::size_t resolution = 0;
};

/// `id,pc1,pc2,label,resolution`.
void write_projection_csv(std::span<const ProjectedPoint> points, std::ostream& out);

/// Scatter plot: color by label, marker shape by resolution, one marker
/// element per point.
void write_projection_svg(std::span<const ProjectedPoint> points, std::ostream& out);

} // namespace hypercluster
