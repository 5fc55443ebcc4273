#include "hypercluster/encoder.hpp"

#include <cmath>
#include <numbers>

#include "hypercluster/error.hpp"

namespace hypercluster {

RffEmbedding RffEmbedding::sample(std::size_t d, std::size_t rff_dim, double scale, Rng& rng)
{
    if (rff_dim == 0 || rff_dim % 2 != 0) {
        throw ArgumentError("RFF dimension must be a positive even number");
    }
    RffEmbedding out;
    out.scale = scale;
    out.frequencies = Tensor({rff_dim / 2, d});
    for (float& v : out.frequencies.values()) {
        v = static_cast<float>(scale * rng.normal());
    }
    return out;
}

Tensor RffEmbedding::embed(const Tensor& coords) const
{
    if (coords.cols() != input_dim()) {
        throw DimensionError("RFF expects " + std::to_string(input_dim()) + "-d coordinates, got " +
                             shape_string(coords.shape()));
    }
    const std::size_t half = frequencies.rows();
    Tensor out({coords.rows(), 2 * half});
    for (std::size_t i = 0; i < coords.rows(); ++i) {
        const auto row = embed_point(coords.row(i));
        std::copy(row.begin(), row.end(), out.row(i).begin());
    }
    return out;
}

std::vector<float> RffEmbedding::embed_point(std::span<const float> x) const
{
    if (x.size() != input_dim()) {
        throw DimensionError("RFF expects " + std::to_string(input_dim()) + "-d coordinates, got " +
                             std::to_string(x.size()));
    }
    const std::size_t half = frequencies.rows();
    std::vector<float> out(2 * half);
    for (std::size_t k = 0; k < half; ++k) {
        double proj = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            proj += static_cast<double>(frequencies(k, j)) * x[j];
        }
        const double angle = 2.0 * std::numbers::pi * proj;
        out[k] = static_cast<float>(std::cos(angle));
        out[half + k] = static_cast<float>(std::sin(angle));
    }
    return out;
}

PerPointNet PerPointNet::init(std::size_t in, std::size_t hidden, std::size_t out, Rng& rng)
{
    PerPointNet net;
    const std::array<std::size_t, 3> fan_in{in, hidden, hidden};
    const std::array<std::size_t, 3> fan_out{hidden, hidden, out};
    for (std::size_t l = 0; l < 3; ++l) {
        // He-style uniform bound sqrt(6 / fan_in).
        const double bound = std::sqrt(6.0 / static_cast<double>(fan_in[l]));
        Tensor w({fan_out[l], fan_in[l]});
        for (float& v : w.values()) {
            v = static_cast<float>(rng.uniform(-bound, bound));
        }
        net.weights[l] = Parameter("h1.w" + std::to_string(l), std::move(w));
        net.biases[l] = Parameter("h1.b" + std::to_string(l), Tensor({fan_out[l]}));
    }
    return net;
}

Tensor point_features(const RffEmbedding& rff, const Observations& obs, bool raw_coords)
{
    if (obs.count() == 0) {
        throw ArgumentError("cannot encode an empty point set");
    }
    const std::size_t rff_dim = rff.output_dim();
    const std::size_t d = obs.dim();
    const std::size_t m = obs.channels();
    const std::size_t width = rff_dim + (raw_coords ? d : 0) + m;
    Tensor out({obs.count(), width});
    const Tensor gamma = rff.embed(obs.coords);
    for (std::size_t i = 0; i < obs.count(); ++i) {
        float* dst = out.row(i).data();
        std::copy(gamma.row(i).begin(), gamma.row(i).end(), dst);
        dst += rff_dim;
        if (raw_coords) {
            std::copy(obs.coords.row(i).begin(), obs.coords.row(i).end(), dst);
            dst += d;
        }
        std::copy(obs.values.row(i).begin(), obs.values.row(i).end(), dst);
    }
    return out;
}

} // namespace hypercluster
