#include "hypercluster/siren.hpp"

#include "hypercluster/error.hpp"

namespace hypercluster {

void SirenSpec::validate() const
{
    if (d == 0 || m == 0) {
        throw ArgumentError("SIREN input and output dimensions must be positive");
    }
    if (layers < 2) {
        throw ArgumentError("SIREN needs at least 2 layers");
    }
    if (width == 0) {
        throw ArgumentError("SIREN hidden width must be positive");
    }
    if (!(omega0 > 0.0)) {
        throw ArgumentError("SIREN omega0 must be positive");
    }
}

std::size_t param_count(const SirenSpec& spec)
{
    spec.validate();
    const std::size_t h = spec.width;
    return (spec.d * h + h) + (spec.layers - 2) * (h * h + h) + (h * spec.m + spec.m);
}

std::vector<LayerLayout> layer_layout(const SirenSpec& spec)
{
    spec.validate();
    std::vector<LayerLayout> out;
    std::size_t offset = 0;
    for (std::size_t l = 0; l < spec.layers; ++l) {
        LayerLayout layer;
        layer.offset = offset;
        layer.in = l == 0 ? spec.d : spec.width;
        layer.out = l + 1 == spec.layers ? spec.m : spec.width;
        offset += layer.size();
        out.push_back(layer);
    }
    return out;
}

std::vector<LayerWeights> slice_layout(const SirenSpec& spec, std::span<const float> flat)
{
    const std::size_t expected = param_count(spec);
    if (flat.size() != expected) {
        throw DimensionError("SIREN weight vector has " + std::to_string(flat.size()) + " entries, spec needs " +
                             std::to_string(expected));
    }
    std::vector<LayerWeights> out;
    for (const LayerLayout& layer : layer_layout(spec)) {
        const float* base = flat.data() + layer.offset;
        out.push_back({Tensor({layer.out, layer.in}, std::vector<float>(base, base + layer.weight_size())),
                       Tensor({layer.out}, std::vector<float>(base + layer.weight_size(), base + layer.size()))});
    }
    return out;
}

std::vector<float> flatten_layout(const SirenSpec& spec, std::span<const LayerWeights> layers)
{
    const auto layout = layer_layout(spec);
    if (layers.size() != layout.size()) {
        throw DimensionError("expected " + std::to_string(layout.size()) + " SIREN layers, got " +
                             std::to_string(layers.size()));
    }
    std::vector<float> flat;
    flat.reserve(param_count(spec));
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const Shape wshape{layout[l].out, layout[l].in};
        if (layers[l].weight.shape() != wshape || layers[l].bias.size() != layout[l].out) {
            throw DimensionError("SIREN layer " + std::to_string(l) + " has the wrong shape");
        }
        flat.insert(flat.end(), layers[l].weight.values().begin(), layers[l].weight.values().end());
        flat.insert(flat.end(), layers[l].bias.values().begin(), layers[l].bias.values().end());
    }
    return flat;
}

Var siren_forward(const SirenSpec& spec, Var weights, Var coords)
{
    const std::size_t expected = param_count(spec);
    if (weights.value().size() != expected) {
        throw DimensionError("SIREN weight vector has " + std::to_string(weights.value().size()) +
                             " entries, spec needs " + std::to_string(expected));
    }
    if (coords.value().rank() != 2 || coords.value().cols() != spec.d) {
        throw DimensionError("SIREN coordinates must be [I x " + std::to_string(spec.d) + "], got " +
                             shape_string(coords.value().shape()));
    }
    const auto layout = layer_layout(spec);
    const auto omega = static_cast<float>(spec.omega0);
    Var h = coords;
    for (std::size_t l = 0; l < layout.size(); ++l) {
        const LayerLayout& layer = layout[l];
        Var w = slice(weights, layer.offset, {layer.out, layer.in});
        Var b = slice(weights, layer.bias_offset(), {layer.out});
        h = linear(h, w, b);
        if (l + 1 < layout.size()) {
            h = sin(scale(h, omega));
        }
    }
    return h;
}

Tensor siren_eval(const SirenSpec& spec, std::span<const float> weights, const Tensor& coords)
{
    Tape tape;
    Var w = tape.constant(Tensor({weights.size()}, std::vector<float>(weights.begin(), weights.end())));
    Var x = tape.constant(coords);
    return siren_forward(spec, w, x).value();
}

} // namespace hypercluster
