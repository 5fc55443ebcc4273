#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hypercluster/encoder.hpp"
#include "hypercluster/siren.hpp"

namespace hypercluster {

struct HyperNetConfig {
    SirenSpec spec;
    EncoderConfig encoder;
    /// Width of an optional ReLU layer between pooling and the heads; 0 maps
    /// the pooled vector to the weights directly.
    std::size_t head_hidden = 0;
    /// Half-width of the uniform head-weight initialization.
    double head_init = 1e-2;
    /// Per-SIREN-layer output scale s_l; empty means all ones.
    std::vector<float> layer_scales;

    friend bool operator==(const HyperNetConfig&, const HyperNetConfig&) = default;
};

/// One affine head per SIREN layer, each emitting that layer's [W_l, b_l]
/// block of the flat weight vector.
struct HeadBank {
    std::optional<Parameter> hidden_weight;
    std::optional<Parameter> hidden_bias;
    std::vector<Parameter> weights;
    std::vector<Parameter> biases;
    std::vector<float> scales;

    std::size_t output_dim() const;
};

/// Point set -> pooled representation -> SIREN weight vector.
class HyperNet {
public:
    /// Heads start near zero with biases drawn from the SIREN initialization
    /// (first layer U(-1/d, 1/d), later layers U(-sqrt(6/fan_in)/omega0, +...)),
    /// so every initial prediction is itself a standard SIREN init.
    static HyperNet init(const HyperNetConfig& config, std::uint64_t seed);

    const HyperNetConfig& config() const { return config_; }
    const SirenSpec& spec() const { return config_.spec; }
    std::size_t weight_dim() const { return param_count(config_.spec); }

    const RffEmbedding& rff() const { return rff_; }
    const PerPointNet& point_net() const { return point_net_; }
    const HeadBank& heads() const { return heads_; }

    /// Trainable parameters in a fixed order (the checkpoint order).
    std::vector<Parameter*> parameters();
    std::vector<const Parameter*> parameters() const;
    std::size_t parameter_count() const;

    /// Tracked forward passes for training.
    Var pooled(Tape& tape, const Observations& obs);
    Var predict(Tape& tape, const Observations& obs);
    /// Reconstruction error of one sample, (1/I) sum ||u - g_w(x)||^2.
    Var sample_loss(Tape& tape, const Observations& obs);

    /// Untracked forward passes.
    Var pooled(Tape& tape, const Observations& obs) const;
    Var predict(Tape& tape, const Observations& obs) const;
    std::vector<float> pooled(const Observations& obs) const;
    std::vector<float> predict_weights(const Observations& obs) const;
    float sample_loss(const Observations& obs) const;

    /// Reassembles a network from stored pieces (used by checkpoint loading).
    static HyperNet assemble(HyperNetConfig config, RffEmbedding rff, PerPointNet point_net, HeadBank heads);

private:
    template <typename Self>
    static Var pooled_impl(Self& self, Tape& tape, const Observations& obs);
    template <typename Self>
    static Var predict_impl(Self& self, Tape& tape, const Observations& obs);

    void check_observations(const Observations& obs) const;

    HyperNetConfig config_;
    RffEmbedding rff_;
    PerPointNet point_net_;
    HeadBank heads_;
};

/// Row n = predicted weights for sample n, resampled to resolution r when
/// given (native discretization otherwise). Returns [N x d_z].
Tensor embed_dataset(const HyperNet& net, std::span<const Observations> data, std::optional<std::size_t> r);

} // namespace hypercluster
