#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hypercluster/autodiff.hpp"

namespace hypercluster {

/// Architecture of the sinusoidal decoder g_w: R^d -> R^m. `layers` counts
/// affine maps; all but the last are followed by sin(omega0 * .).
struct SirenSpec {
    std::size_t d = 2;
    std::size_t m = 1;
    std::size_t layers = 4;
    std::size_t width = 5;
    double omega0 = 30.0;

    void validate() const;
    friend bool operator==(const SirenSpec&, const SirenSpec&) = default;
};

/// d_z = (d h + h) + (L - 2)(h^2 + h) + (h m + m).
std::size_t param_count(const SirenSpec& spec);

/// Placement of one layer inside the flat weight vector. Layers are stored in
/// order; within a layer the [out x in] weight matrix (row-major) precedes the
/// bias.
struct LayerLayout {
    std::size_t offset = 0;
    std::size_t out = 0;
    std::size_t in = 0;

    std::size_t weight_size() const { return out * in; }
    std::size_t bias_offset() const { return offset + weight_size(); }
    std::size_t size() const { return weight_size() + out; }
};

std::vector<LayerLayout> layer_layout(const SirenSpec& spec);

struct LayerWeights {
    Tensor weight;  // [out x in]
    Tensor bias;    // [out]
};

/// Splits a flat weight vector into per-layer matrices and biases. Throws
/// DimensionError if the length differs from param_count(spec).
std::vector<LayerWeights> slice_layout(const SirenSpec& spec, std::span<const float> flat);
/// Inverse of slice_layout.
std::vector<float> flatten_layout(const SirenSpec& spec, std::span<const LayerWeights> layers);

/// Differentiable evaluation at coords [I x d]; `weights` is the flat vector.
Var siren_forward(const SirenSpec& spec, Var weights, Var coords);

/// Plain evaluation, returns [I x m].
Tensor siren_eval(const SirenSpec& spec, std::span<const float> weights, const Tensor& coords);

} // namespace hypercluster
