#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hypercluster/tensor.hpp"

namespace hypercluster {

/// Hard cluster assignment of N samples into labels [0, k).
struct Partition {
    std::vector<int> assignments;
    std::size_t k = 0;

    std::size_t size() const { return assignments.size(); }
};

struct KMeansOptions {
    std::size_t restarts = 10;
    std::size_t max_iter = 300;
    std::uint64_t seed = 0;
};

struct KMeansResult {
    Partition partition;
    /// Sum of squared distances to the assigned centers.
    double inertia = 0.0;
    /// [k x D] centers.
    std::vector<std::vector<double>> centers;
    /// Inertia after every assignment step of the winning restart.
    std::vector<double> inertia_trace;
    std::size_t iterations = 0;
    std::size_t best_restart = 0;
};

/// k-means++ seeding then Lloyd iterations until assignments stop changing.
/// An empty cluster is re-seeded with the point farthest from its center.
/// The restart with the lowest inertia wins (ties go to the earlier restart).
/// Throws ArgumentError for k = 0 or k > N.
KMeansResult kmeans(const Tensor& x, std::size_t k, const KMeansOptions& options = {});

struct GmmOptions {
    std::size_t max_iter = 200;
    double tol = 1e-6;
    double var_floor = 1e-6;
    std::uint64_t seed = 0;
    /// Restarts for the k-means initialization.
    std::size_t init_restarts = 10;
};

/// Diagonal-covariance Gaussian mixture.
struct GmmModel {
    std::vector<double> weights;
    std::vector<std::vector<double>> means;
    std::vector<std::vector<double>> variances;
};

struct GmmResult {
    GmmModel model;
    Partition partition;
    /// Mean log-likelihood per sample at each EM iteration.
    std::vector<double> log_likelihood;
    std::size_t iterations = 0;
};

/// EM initialized from k-means; stops when the relative change in
/// log-likelihood drops below tol. Hard labels are argmax responsibilities.
GmmResult gmm_fit(const Tensor& x, std::size_t k, const GmmOptions& options = {});

struct Projection {
    /// [N x 2].
    Tensor coords;
    std::vector<double> explained_variance;
    /// True when the data had no variance; coords are then all zero.
    bool degenerate = false;
};

/// Projection onto the top two principal directions. Each direction's
/// largest-magnitude component is made positive. Needs N >= 2.
Projection pca2(const Tensor& x);

/// Column-wise z-scoring (columns with zero spread are only centered).
Tensor standardize(const Tensor& x);

} // namespace hypercluster
