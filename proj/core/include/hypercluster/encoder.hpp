#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "hypercluster/autodiff.hpp"
#include "hypercluster/pointset.hpp"
#include "hypercluster/random.hpp"

namespace hypercluster {

struct EncoderConfig {
    std::size_t rff_dim = 32;
    double rff_scale = 1.0;
    std::size_t hidden = 64;
    /// Width of the pooled representation.
    std::size_t latent = 64;
    /// Also feed the raw coordinates to the per-point network.
    bool raw_coords = false;

    friend bool operator==(const EncoderConfig&, const EncoderConfig&) = default;
};

/// Frozen random Fourier features gamma(x) = [cos(2 pi B x), sin(2 pi B x)].
struct RffEmbedding {
    /// [rff_dim / 2 x d], entries ~ N(0, scale^2).
    Tensor frequencies;
    double scale = 1.0;

    static RffEmbedding sample(std::size_t d, std::size_t rff_dim, double scale, Rng& rng);

    std::size_t input_dim() const { return frequencies.cols(); }
    std::size_t output_dim() const { return 2 * frequencies.rows(); }

    /// Embeds every row of coords [I x d]; returns [I x rff_dim].
    Tensor embed(const Tensor& coords) const;
    std::vector<float> embed_point(std::span<const float> x) const;
};

/// Per-point network h1: three affine layers with ReLU between them.
struct PerPointNet {
    std::array<Parameter, 3> weights;
    std::array<Parameter, 3> biases;

    static PerPointNet init(std::size_t in, std::size_t hidden, std::size_t out, Rng& rng);

    std::size_t input_dim() const { return weights[0].value.cols(); }
    std::size_t output_dim() const { return weights[2].value.rows(); }

    template <typename Self>
    static Var forward(Self& self, Tape& tape, Var features)
    {
        Var h = features;
        for (std::size_t l = 0; l < 3; ++l) {
            h = linear(h, bind(tape, self.weights[l]), bind(tape, self.biases[l]));
            if (l < 2) {
                h = relu(h);
            }
        }
        return h;
    }
};

/// Per-point input rows [I x (rff_dim (+ d) + m)]: RFF(x), optionally x, then u(x).
Tensor point_features(const RffEmbedding& rff, const Observations& obs, bool raw_coords);

/// Mean over points of h1(features): a rank-1 tensor of the latent width.
/// Throws ArgumentError for an empty point set.
template <typename Net>
Var encode_points(Tape& tape, Net& net, const RffEmbedding& rff, const Observations& obs, bool raw_coords)
{
    Var features = tape.constant(point_features(rff, obs, raw_coords));
    return mean_rows(PerPointNet::forward(net, tape, features));
}

} // namespace hypercluster
