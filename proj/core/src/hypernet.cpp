#include "hypercluster/hypernet.hpp"

#include <cmath>

#include "hypercluster/error.hpp"
#include "hypercluster/sampler.hpp"

namespace hypercluster {

std::size_t HeadBank::output_dim() const
{
    std::size_t n = 0;
    for (const auto& b : biases) {
        n += b.value.size();
    }
    return n;
}

namespace {

// Half-width of the SIREN initialization interval for layer l.
double siren_init_bound(const SirenSpec& spec, std::size_t l, const LayerLayout& layer)
{
    if (l == 0) {
        return 1.0 / static_cast<double>(spec.d);
    }
    return std::sqrt(6.0 / static_cast<double>(layer.in)) / spec.omega0;
}

} // namespace

HyperNet HyperNet::init(const HyperNetConfig& config, std::uint64_t seed)
{
    config.spec.validate();
    HyperNet net;
    net.config_ = config;
    Rng root(seed);
    Rng rff_rng(root.fork());
    Rng h1_rng(root.fork());
    Rng head_rng(root.fork());

    const EncoderConfig& enc = config.encoder;
    net.rff_ = RffEmbedding::sample(config.spec.d, enc.rff_dim, enc.rff_scale, rff_rng);
    const std::size_t in = enc.rff_dim + (enc.raw_coords ? config.spec.d : 0) + config.spec.m;
    net.point_net_ = PerPointNet::init(in, enc.hidden, enc.latent, h1_rng);

    const auto layout = layer_layout(config.spec);
    HeadBank& heads = net.heads_;
    heads.scales = config.layer_scales.empty() ? std::vector<float>(layout.size(), 1.0f) : config.layer_scales;
    if (heads.scales.size() != layout.size()) {
        throw ArgumentError("layer_scales needs one entry per SIREN layer");
    }
    std::size_t head_in = enc.latent;
    if (config.head_hidden > 0) {
        const double bound = std::sqrt(6.0 / static_cast<double>(enc.latent));
        Tensor w({config.head_hidden, enc.latent});
        for (float& v : w.values()) {
            v = static_cast<float>(head_rng.uniform(-bound, bound));
        }
        heads.hidden_weight = Parameter("head.hidden.w", std::move(w));
        heads.hidden_bias = Parameter("head.hidden.b", Tensor({config.head_hidden}));
        head_in = config.head_hidden;
    }
    for (std::size_t l = 0; l < layout.size(); ++l) {
        Tensor w({layout[l].size(), head_in});
        for (float& v : w.values()) {
            v = static_cast<float>(head_rng.uniform(-config.head_init, config.head_init));
        }
        const double bound = siren_init_bound(config.spec, l, layout[l]);
        const double s = heads.scales[l];
        if (s == 0.0) {
            throw ArgumentError("layer scales must be nonzero");
        }
        Tensor b({layout[l].size()});
        for (float& v : b.values()) {
            v = static_cast<float>(head_rng.uniform(-bound, bound) / s);
        }
        heads.weights.emplace_back("head" + std::to_string(l) + ".w", std::move(w));
        heads.biases.emplace_back("head" + std::to_string(l) + ".b", std::move(b));
    }
    return net;
}

HyperNet HyperNet::assemble(HyperNetConfig config, RffEmbedding rff, PerPointNet point_net, HeadBank heads)
{
    HyperNet net;
    net.config_ = std::move(config);
    net.rff_ = std::move(rff);
    net.point_net_ = std::move(point_net);
    net.heads_ = std::move(heads);
    if (net.heads_.output_dim() != net.weight_dim()) {
        throw DimensionError("head outputs total " + std::to_string(net.heads_.output_dim()) +
                             " but the SIREN needs " + std::to_string(net.weight_dim()));
    }
    return net;
}

std::vector<Parameter*> HyperNet::parameters()
{
    std::vector<Parameter*> out;
    for (std::size_t l = 0; l < 3; ++l) {
        out.push_back(&point_net_.weights[l]);
        out.push_back(&point_net_.biases[l]);
    }
    if (heads_.hidden_weight) {
        out.push_back(&*heads_.hidden_weight);
        out.push_back(&*heads_.hidden_bias);
    }
    for (std::size_t l = 0; l < heads_.weights.size(); ++l) {
        out.push_back(&heads_.weights[l]);
        out.push_back(&heads_.biases[l]);
    }
    return out;
}

std::vector<const Parameter*> HyperNet::parameters() const
{
    auto mut = const_cast<HyperNet*>(this)->parameters();
    return {mut.begin(), mut.end()};
}

std::size_t HyperNet::parameter_count() const
{
    std::size_t n = 0;
    for (const Parameter* p : parameters()) {
        n += p->value.size();
    }
    return n;
}

void HyperNet::check_observations(const Observations& obs) const
{
    if (obs.count() == 0) {
        throw ArgumentError("cannot encode an empty point set");
    }
    if (obs.dim() != config_.spec.d || obs.channels() != config_.spec.m) {
        throw DimensionError("observations have (d, m) = (" + std::to_string(obs.dim()) + ", " +
                             std::to_string(obs.channels()) + "), model expects (" + std::to_string(config_.spec.d) +
                             ", " + std::to_string(config_.spec.m) + ")");
    }
}

template <typename Self>
Var HyperNet::pooled_impl(Self& self, Tape& tape, const Observations& obs)
{
    self.check_observations(obs);
    return encode_points(tape, self.point_net_, self.rff_, obs, self.config_.encoder.raw_coords);
}

template <typename Self>
Var HyperNet::predict_impl(Self& self, Tape& tape, const Observations& obs)
{
    Var z = pooled_impl(self, tape, obs);
    auto& heads = self.heads_;
    if (heads.hidden_weight) {
        z = relu(linear(z, bind(tape, *heads.hidden_weight), bind(tape, *heads.hidden_bias)));
    }
    std::vector<Var> blocks;
    blocks.reserve(heads.weights.size());
    for (std::size_t l = 0; l < heads.weights.size(); ++l) {
        Var block = linear(z, bind(tape, heads.weights[l]), bind(tape, heads.biases[l]));
        blocks.push_back(scale(block, heads.scales[l]));
    }
    return concat(blocks);
}

Var HyperNet::pooled(Tape& tape, const Observations& obs)
{
    return pooled_impl(*this, tape, obs);
}

Var HyperNet::pooled(Tape& tape, const Observations& obs) const
{
    return pooled_impl(*this, tape, obs);
}

Var HyperNet::predict(Tape& tape, const Observations& obs)
{
    return predict_impl(*this, tape, obs);
}

Var HyperNet::predict(Tape& tape, const Observations& obs) const
{
    return predict_impl(*this, tape, obs);
}

Var HyperNet::sample_loss(Tape& tape, const Observations& obs)
{
    Var w = predict(tape, obs);
    Var pred = siren_forward(config_.spec, w, tape.constant(obs.coords));
    return squared_error(pred, tape.constant(obs.values));
}

std::vector<float> HyperNet::pooled(const Observations& obs) const
{
    Tape tape;
    const Tensor& v = pooled(tape, obs).value();
    return {v.values().begin(), v.values().end()};
}

std::vector<float> HyperNet::predict_weights(const Observations& obs) const
{
    Tape tape;
    const Tensor& v = predict(tape, obs).value();
    return {v.values().begin(), v.values().end()};
}

float HyperNet::sample_loss(const Observations& obs) const
{
    Tape tape;
    Var w = predict(tape, obs);
    Var pred = siren_forward(config_.spec, w, tape.constant(obs.coords));
    return squared_error(pred, tape.constant(obs.values)).value()[0];
}

Tensor embed_dataset(const HyperNet& net, std::span<const Observations> data, std::optional<std::size_t> r)
{
    const std::size_t dz = net.weight_dim();
    Tensor out({data.size(), dz});
    for (std::size_t n = 0; n < data.size(); ++n) {
        const auto w = r ? net.predict_weights(resample(data[n], *r)) : net.predict_weights(data[n]);
        std::copy(w.begin(), w.end(), out.row(n).begin());
    }
    return out;
}

} // namespace hypercluster
