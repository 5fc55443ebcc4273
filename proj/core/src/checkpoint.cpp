#include "hypercluster/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "hypercluster/error.hpp"

namespace hypercluster {

namespace {

constexpr char kMagic[4] = {'F', 'H', 'N', 'C'};

void put_u32(std::ostream& out, std::uint32_t v)
{
    const unsigned char bytes[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                                    static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(bytes), 4);
}

std::uint32_t get_u32(std::istream& in, const char* what)
{
    unsigned char bytes[4];
    if (!in.read(reinterpret_cast<char*>(bytes), 4)) {
        throw FormatError(std::string("checkpoint truncated while reading ") + what);
    }
    return std::uint32_t{bytes[0]} | (std::uint32_t{bytes[1]} << 8) | (std::uint32_t{bytes[2]} << 16) |
           (std::uint32_t{bytes[3]} << 24);
}

void put_floats(std::ostream& out, const Tensor& t)
{
    for (float v : t.values()) {
        put_u32(out, std::bit_cast<std::uint32_t>(v));
    }
}

Tensor get_floats(std::istream& in, const Shape& shape, const std::string& name)
{
    Tensor t(shape);
    for (float& v : t.values()) {
        v = std::bit_cast<float>(get_u32(in, name.c_str()));
    }
    return t;
}

nlohmann::json shape_json(const Tensor& t)
{
    return nlohmann::json(t.shape());
}

nlohmann::json metadata(const Checkpoint& ckpt)
{
    const HyperNet& net = ckpt.net;
    const HyperNetConfig& cfg = net.config();
    nlohmann::json meta;
    meta["spec"] = {{"d", cfg.spec.d},
                    {"m", cfg.spec.m},
                    {"layers", cfg.spec.layers},
                    {"width", cfg.spec.width},
                    {"omega0", cfg.spec.omega0}};
    meta["latent"] = cfg.encoder.latent;
    meta["hidden"] = cfg.encoder.hidden;
    meta["d_rff"] = cfg.encoder.rff_dim;
    meta["sigma_rff"] = cfg.encoder.rff_scale;
    meta["raw_coords"] = cfg.encoder.raw_coords;
    meta["head_hidden"] = cfg.head_hidden;
    meta["head_init"] = cfg.head_init;
    meta["layer_scales"] = net.heads().scales;
    meta["seed"] = ckpt.seed;
    meta["step"] = ckpt.step;
    nlohmann::json arrays = nlohmann::json::array();
    arrays.push_back({{"name", "rff.B"}, {"shape", shape_json(net.rff().frequencies)}});
    for (const Parameter* p : net.parameters()) {
        arrays.push_back({{"name", p->name}, {"shape", shape_json(p->value)}});
    }
    meta["arrays"] = arrays;
    return meta;
}

} // namespace

void save_checkpoint(const Checkpoint& ckpt, std::ostream& out)
{
    const std::string meta = metadata(ckpt).dump();
    out.write(kMagic, 4);
    put_u32(out, kCheckpointVersion);
    put_u32(out, static_cast<std::uint32_t>(meta.size()));
    out.write(meta.data(), static_cast<std::streamsize>(meta.size()));
    put_floats(out, ckpt.net.rff().frequencies);
    for (const Parameter* p : ckpt.net.parameters()) {
        put_floats(out, p->value);
    }
    if (!out) {
        throw FormatError("checkpoint write failed");
    }
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path)
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw FormatError("cannot write " + tmp.string());
        }
        save_checkpoint(ckpt, out);
        out.flush();
        if (!out) {
            throw FormatError("write failed for " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

Checkpoint load_checkpoint(std::istream& in)
{
    char magic[4];
    if (!in.read(magic, 4)) {
        throw FormatError("checkpoint truncated while reading magic");
    }
    if (std::memcmp(magic, kMagic, 4) != 0) {
        throw FormatError("not a checkpoint: bad magic");
    }
    const std::uint32_t version = get_u32(in, "version");
    if (version != kCheckpointVersion) {
        throw FormatError("unsupported checkpoint version " + std::to_string(version) + " (this build reads version " +
                          std::to_string(kCheckpointVersion) + ")");
    }
    const std::uint32_t meta_len = get_u32(in, "metadata length");
    std::string meta_text(meta_len, '\0');
    if (!in.read(meta_text.data(), meta_len)) {
        throw FormatError("checkpoint truncated while reading metadata");
    }

    nlohmann::json meta;
    HyperNetConfig cfg;
    Checkpoint ckpt;
    std::vector<std::pair<std::string, Shape>> arrays;
    try {
        meta = nlohmann::json::parse(meta_text);
        const auto& spec = meta.at("spec");
        cfg.spec.d = spec.at("d").get<std::size_t>();
        cfg.spec.m = spec.at("m").get<std::size_t>();
        cfg.spec.layers = spec.at("layers").get<std::size_t>();
        cfg.spec.width = spec.at("width").get<std::size_t>();
        cfg.spec.omega0 = spec.at("omega0").get<double>();
        cfg.encoder.latent = meta.at("latent").get<std::size_t>();
        cfg.encoder.hidden = meta.at("hidden").get<std::size_t>();
        cfg.encoder.rff_dim = meta.at("d_rff").get<std::size_t>();
        cfg.encoder.rff_scale = meta.at("sigma_rff").get<double>();
        cfg.encoder.raw_coords = meta.at("raw_coords").get<bool>();
        cfg.head_hidden = meta.at("head_hidden").get<std::size_t>();
        cfg.head_init = meta.at("head_init").get<double>();
        cfg.layer_scales = meta.at("layer_scales").get<std::vector<float>>();
        ckpt.seed = meta.at("seed").get<std::uint64_t>();
        ckpt.step = meta.at("step").get<std::uint64_t>();
        for (const auto& a : meta.at("arrays")) {
            arrays.emplace_back(a.at("name").get<std::string>(), a.at("shape").get<Shape>());
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("checkpoint metadata is invalid: ") + e.what());
    }
    cfg.spec.validate();

    // Build a network of the right shape, then overwrite every array from the file.
    HyperNet net = HyperNet::init(cfg, 0);
    RffEmbedding rff = net.rff();
    PerPointNet point_net = net.point_net();
    HeadBank heads = net.heads();
    HyperNet shaped = HyperNet::assemble(cfg, rff, point_net, heads);
    auto params = shaped.parameters();
    if (arrays.size() != params.size() + 1) {
        throw FormatError("checkpoint lists " + std::to_string(arrays.size()) + " arrays, expected " +
                          std::to_string(params.size() + 1));
    }
    if (arrays[0].second != rff.frequencies.shape()) {
        throw FormatError("checkpoint RFF matrix has shape " + shape_string(arrays[0].second));
    }
    rff.frequencies = get_floats(in, arrays[0].second, arrays[0].first);
    for (std::size_t k = 0; k < params.size(); ++k) {
        const auto& [name, shape] = arrays[k + 1];
        if (name != params[k]->name || shape != params[k]->value.shape()) {
            throw FormatError("checkpoint array '" + name + "' " + shape_string(shape) + " does not match '" +
                              params[k]->name + "' " + shape_string(params[k]->value.shape()));
        }
        params[k]->value = get_floats(in, shape, name);
        params[k]->grad = Tensor(shape);
    }
    rff.scale = cfg.encoder.rff_scale;
    ckpt.net = HyperNet::assemble(cfg, std::move(rff), shaped.point_net(), shaped.heads());
    return ckpt;
}

Checkpoint load_checkpoint(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FormatError("cannot open checkpoint " + path.string());
    }
    return load_checkpoint(in);
}

} // namespace hypercluster
