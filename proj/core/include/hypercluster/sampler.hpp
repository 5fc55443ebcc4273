#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hypercluster/pointset.hpp"
#include "hypercluster/random.hpp"

namespace hypercluster {

/// Seen (training) and held-out (test-only) resolutions. A resolution r means
/// r points for d = 1 and an r x r grid for d = 2.
struct ResolutionSet {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;

    /// Resolutions that appear in both lists.
    std::vector<std::size_t> overlap() const;
};

/// Re-discretizes one function at resolution r:
///  - d = 1: piecewise-linear interpolation (constant beyond the outermost
///    samples) onto r align-corners points;
///  - d = 2: the observations must form a square align-corners grid, which is
///    resampled bilinearly onto r x r.
/// Throws ArgumentError for r = 0 or unsupported layouts.
Observations resample(const Observations& obs, std::size_t r);

/// Points carried by an r-resolution discretization in dimension d.
std::size_t points_at_resolution(std::size_t d, std::size_t r);

struct ResolutionBatch {
    std::size_t resolution = 0;
    std::vector<std::size_t> members;
    std::vector<Observations> observations;
};

/// Draws r uniformly from R_train per call and resamples the requested members
/// to it, so every member of a batch has the same point count.
class ResolutionSampler {
public:
    ResolutionSampler(std::vector<std::size_t> r_train, std::uint64_t seed);

    std::size_t draw_resolution();
    ResolutionBatch make_batch(std::span<const Observations> data, std::span<const std::size_t> members);

    const std::vector<std::size_t>& resolutions() const { return r_train_; }

private:
    std::vector<std::size_t> r_train_;
    Rng rng_;
};

/// Convenience form: batch_size members drawn uniformly with replacement.
ResolutionBatch sample_resolution_batch(std::span<const Observations> data, std::span<const std::size_t> r_train,
                                        std::size_t batch_size, Rng& rng);

} // namespace hypercluster
