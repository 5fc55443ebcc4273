#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#if defined(__GLIBC__)
#include <malloc.h>
#endif

#include "CLI11.hpp"

#include "hypercluster/checkpoint.hpp"
#include "hypercluster/cluster.hpp"
#include "hypercluster/error.hpp"
#include "hypercluster/eval.hpp"
#include "hypercluster/exports.hpp"
#include "hypercluster/grid.hpp"
#include "hypercluster/hypernet.hpp"
#include "hypercluster/metrics.hpp"
#include "hypercluster/pointset.hpp"
#include "hypercluster/random.hpp"
#include "hypercluster/sampler.hpp"
#include "hypercluster/synth.hpp"
#include "hypercluster/trainer.hpp"

#include "toml_config.hpp"

namespace fs = std::filesystem;
using namespace hypercluster;

namespace {

enum Exit : int { kOk = 0, kUsage = 2, kData = 3, kNumerical = 4 };

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::size_t env_threads()
{
    const char* v = std::getenv("HYPERCLUSTER_THREADS");
    if (v == nullptr || *v == '\0') {
        return 1;
    }
    std::size_t n = 0;
    const char* end = v + std::strlen(v);
    const auto [ptr, ec] = std::from_chars(v, end, n);
    if (ec != std::errc{} || ptr != end || n == 0) {
        throw UsageError(std::string("HYPERCLUSTER_THREADS must be a positive integer, got '") + v + "'");
    }
    return n;
}

// Refuses to clobber earlier results unless --force was given.
void claim(const std::vector<fs::path>& outputs, bool force)
{
    for (const auto& p : outputs) {
        if (fs::exists(p) && !force) {
            throw UsageError(p.string() + " already exists (use --force to overwrite)");
        }
    }
    for (const auto& p : outputs) {
        if (p.has_parent_path()) {
            fs::create_directories(p.parent_path());
        }
    }
}

std::ofstream open_out(const fs::path& p)
{
    std::ofstream out(p, std::ios::binary);
    if (!out) {
        throw FormatError("cannot write " + p.string());
    }
    return out;
}

void write_text(const fs::path& p, const std::string& text)
{
    auto out = open_out(p);
    out << text;
}

Dataset load_dataset(const std::string& path)
{
    Dataset ds = read_jsonl(fs::path(path));
    if (ds.size() == 0) {
        throw FormatError(path + ": no samples");
    }
    ds.validate();
    return ds;
}

// Common bookkeeping shared by the subcommands that write into --out-dir.
struct OutDir {
    std::string dir;
    bool force = false;

    void add(CLI::App* cmd, bool required = true)
    {
        auto* opt = cmd->add_option("--out-dir", dir, "Directory receiving all outputs");
        if (required) {
            opt->required();
        }
        cmd->add_flag("--force", force, "Overwrite existing outputs");
    }
    fs::path operator/(const std::string& name) const { return fs::path(dir) / name; }
};

const std::vector<std::string> kSnapshotSkip{"help", "config", "force"};

void write_snapshot(const CLI::App& cmd, const fs::path& path)
{
    write_text(path, cli::snapshot(cmd, kSnapshotSkip));
}

// ---- synth ----------------------------------------------------------------

struct SynthArgs {
    std::vector<double> classes{1.0, 4.0};
    std::size_t per_class = 100;
    std::size_t channels = 1;
    std::vector<std::size_t> i_range{256, 256};
    std::vector<double> amp{0.8, 1.2};
    std::vector<double> phase{-0.8, 0.8};
    bool irregular = false;
    std::uint64_t seed = 0;
    std::string out;
    bool force = false;
};

std::pair<double, double> range_of(const std::vector<double>& v, const char* flag)
{
    if (v.size() == 1) {
        return {v[0], v[0]};
    }
    if (v.size() != 2 || v[0] > v[1]) {
        throw UsageError(std::string(flag) + " expects LO,HI with LO <= HI");
    }
    return {v[0], v[1]};
}

int run_synth(const CLI::App& cmd, const SynthArgs& a)
{
    if (a.classes.empty()) {
        throw UsageError("--classes needs at least one frequency");
    }
    const auto [ilo, ihi] = range_of(std::vector<double>(a.i_range.begin(), a.i_range.end()), "--i-range");
    const auto [alo, ahi] = range_of(a.amp, "--amp");
    const auto [plo, phi] = range_of(a.phase, "--phase");
    SineDatasetConfig sc;
    for (double f : a.classes) {
        sc.classes.push_back({f, alo, ahi, plo, phi});
    }
    sc.per_class = a.per_class;
    sc.channels = a.channels;
    sc.points_lo = static_cast<std::size_t>(ilo);
    sc.points_hi = static_cast<std::size_t>(ihi);
    sc.irregular = a.irregular;
    sc.seed = a.seed;
    const fs::path out(a.out);
    const fs::path snap = fs::path(a.out + ".config.toml");
    claim({out, snap}, a.force);
    const Dataset ds = synth_sine_dataset(sc);
    write_jsonl(ds, out);
    write_snapshot(cmd, snap);
    std::printf("wrote %zu samples to %s\n", ds.size(), out.string().c_str());
    return kOk;
}

// ---- ingest-mnist ---------------------------------------------------------

struct IngestArgs {
    std::string mnist_dir = "data/mnist";
    std::string images;
    std::string labels;
    std::size_t subset = 0;
    std::vector<int> classes;
    std::size_t resolution = 28;
    std::uint64_t seed = 0;
    std::string out;
    bool force = false;
};

int run_ingest(const CLI::App& cmd, const IngestArgs& a)
{
    const fs::path images = a.images.empty() ? fs::path(a.mnist_dir) / "train-images-idx3-ubyte" : fs::path(a.images);
    const fs::path labels = a.labels.empty() ? fs::path(a.mnist_dir) / "train-labels-idx1-ubyte" : fs::path(a.labels);
    const fs::path out(a.out);
    const fs::path snap = fs::path(a.out + ".config.toml");
    claim({out, snap}, a.force);
    const LabeledImages li = read_mnist(images, labels);

    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < li.images.size(); ++i) {
        if (a.classes.empty() || std::ranges::find(a.classes, static_cast<int>(li.labels[i])) != a.classes.end()) {
            idx.push_back(i);
        }
    }
    if (a.subset > 0) {
        if (a.subset > idx.size()) {
            throw UsageError("--subset " + std::to_string(a.subset) + " exceeds the " + std::to_string(idx.size()) +
                             " available digits");
        }
        Rng pick(a.seed);
        pick.shuffle(idx);
        idx.resize(a.subset);
        std::ranges::sort(idx);
    }
    Dataset ds;
    ds.d = 2;
    ds.m = 1;
    for (std::size_t i : idx) {
        const Grid& g = li.images[i];
        const Grid base = g.height == a.resolution && g.width == a.resolution ? g : bilinear_resample(g, a.resolution);
        ds.samples.push_back(grid_to_pointset(base, "mnist-" + std::to_string(i), li.labels[i]));
    }
    write_jsonl(ds, out);
    write_snapshot(cmd, snap);
    std::printf("wrote %zu digits at %zux%zu to %s\n", ds.size(), a.resolution, a.resolution, out.string().c_str());
    return kOk;
}

// ---- train ----------------------------------------------------------------

struct TrainArgs {
    std::string data;
    std::vector<std::size_t> r_train{14, 28, 56};
    std::size_t epochs = 50;
    std::size_t batch = 128;
    std::uint64_t seed = 0;
    std::size_t spec_width = 5;
    std::size_t spec_layers = 4;
    double omega0 = 30.0;
    double lr0 = 3e-4;
    double lr_final = 1e-4;
    double val_fraction = 0.1;
    std::size_t val_resolution = 0;
    std::size_t eval_every = 0;
    std::size_t rff_dim = 32;
    double rff_scale = 1.0;
    std::size_t encoder_width = 64;
    std::size_t latent = 64;
    std::size_t head_hidden = 0;
    bool raw_coords = false;
    std::size_t threads = 0;
    bool quiet = false;
    OutDir out;
};

int run_train(const CLI::App& cmd, const TrainArgs& a)
{
    if (a.r_train.empty()) {
        throw UsageError("--r-train needs at least one resolution");
    }
    const fs::path model = a.out / "model.fhnc";
    const fs::path trace = a.out / "trace.csv";
    const fs::path snap = a.out / "config.toml";
    claim({model, trace, snap}, a.out.force);
    const Dataset ds = load_dataset(a.data);

    TrainConfig tc;
    tc.epochs = a.epochs;
    tc.batch_size = a.batch;
    tc.r_train = a.r_train;
    tc.seed = a.seed;
    tc.lr0 = a.lr0;
    tc.lr_final = a.lr_final;
    tc.val_fraction = a.val_fraction;
    tc.eval_every = a.eval_every;
    if (a.val_resolution > 0) {
        tc.val_resolution = a.val_resolution;
    }
    tc.threads = a.threads > 0 ? a.threads : env_threads();
    tc.model.spec = {ds.d, ds.m, a.spec_layers, a.spec_width, a.omega0};
    tc.model.encoder.rff_dim = a.rff_dim;
    tc.model.encoder.rff_scale = a.rff_scale;
    tc.model.encoder.hidden = a.encoder_width;
    tc.model.encoder.latent = a.latent;
    tc.model.encoder.raw_coords = a.raw_coords;
    tc.model.head_hidden = a.head_hidden;
    tc.validate();

    write_snapshot(cmd, snap);
    const auto t0 = std::chrono::steady_clock::now();
    TrainHooks hooks;
    std::vector<TraceRow> rows;
    hooks.on_step = [&](const TraceRow& row) { rows.push_back(row); };
    hooks.on_epoch = [&](std::size_t epoch, const HyperNet&, std::uint64_t step) {
        if (a.quiet) {
            return;
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::fprintf(stderr, "epoch %zu/%zu  step %llu  loss %.6g%s  %.1fs\n", epoch, a.epochs,
                     static_cast<unsigned long long>(step), rows.empty() ? 0.0 : rows.back().train_loss,
                     rows.empty() || !rows.back().val_loss
                         ? ""
                         : ("  val " + std::to_string(*rows.back().val_loss)).c_str(),
                     secs);
    };
    const auto obs = ds.observations();
    const TrainResult res = train(obs, tc, hooks);
    save_checkpoint({res.net, a.seed, res.steps}, model);
    {
        auto out = open_out(trace);
        write_trace_csv(res.trace, out);
    }
    std::printf("trained %llu steps; final loss %.6g; wrote %s\n", static_cast<unsigned long long>(res.steps),
                res.trace.empty() ? 0.0 : res.trace.back().train_loss, model.string().c_str());
    return kOk;
}

// ---- embed ----------------------------------------------------------------

struct EmbedArgs {
    std::string model;
    std::string data;
    std::size_t resolution = 0;
    OutDir out;
};

int run_embed(const CLI::App& cmd, const EmbedArgs& a)
{
    const fs::path csv = a.out / "embeddings.csv";
    const fs::path snap = a.out / "config.toml";
    claim({csv, snap}, a.out.force);
    const Checkpoint ck = load_checkpoint(fs::path(a.model));
    const Dataset ds = load_dataset(a.data);
    const auto obs = ds.observations();
    const std::optional<std::size_t> r = a.resolution > 0 ? std::optional(a.resolution) : std::nullopt;
    const Tensor z = embed_dataset(ck.net, obs, r);
    {
        auto out = open_out(csv);
        write_embedding_csv(ds, z, out);
    }
    write_snapshot(cmd, snap);
    std::printf("embedded %zu samples into %zu dimensions\n", z.rows(), z.cols());
    return kOk;
}

// ---- cluster --------------------------------------------------------------

struct ClusterArgs {
    std::string embeddings;
    std::string algo = "kmeans";
    std::size_t k = 0;
    std::uint64_t seed = 0;
    bool standardize = false;
    OutDir out;
};

int run_cluster(const CLI::App& cmd, const ClusterArgs& a)
{
    const ClusterAlgorithm algo = parse_algorithm(a.algo);
    const fs::path csv = a.out / "partition.csv";
    const fs::path snap = a.out / "config.toml";
    claim({csv, snap}, a.out.force);
    std::ifstream in(a.embeddings);
    if (!in) {
        throw FormatError("cannot open " + a.embeddings);
    }
    const EmbeddingTable table = read_embedding_csv(in);
    const bool labeled = std::ranges::all_of(table.labels, [](const auto& l) { return l.has_value(); });
    std::vector<int> truth;
    if (labeled) {
        for (const auto& l : table.labels) {
            truth.push_back(*l);
        }
    }
    std::size_t k = a.k;
    if (k == 0) {
        if (!labeled) {
            throw UsageError("--k is required for unlabeled embeddings");
        }
        std::vector<int> distinct = truth;
        std::ranges::sort(distinct);
        k = static_cast<std::size_t>(std::ranges::unique(distinct).begin() - distinct.begin());
    }
    const Tensor x = a.standardize ? standardize(table.weights) : table.weights;
    const Partition p = cluster_embeddings(x, k, algo, a.seed);
    {
        auto out = open_out(csv);
        write_partition_csv(table.ids, p, table.labels, out);
    }
    write_snapshot(cmd, snap);
    std::printf("clustered %zu samples into %zu groups with %s\n", p.size(), k, algorithm_name(algo).c_str());
    if (labeled && truth.size() >= 2) {
        std::printf("AMI %.4f  ARI %.4f\n", ami(truth, p.assignments), ari(truth, p.assignments));
    }
    return kOk;
}

// ---- eval -----------------------------------------------------------------

struct EvalArgs {
    std::string model;
    std::string data;
    std::vector<std::size_t> seen;
    std::vector<std::size_t> held_out;
    std::vector<std::string> algos{"kmeans", "gmm"};
    std::size_t k = 0;
    std::size_t seeds = 5;
    std::uint64_t seed = 0;
    bool standardize = false;
    std::size_t pixel_baseline = 0;
    OutDir out;
};

int run_eval(const CLI::App& cmd, const EvalArgs& a)
{
    if (a.seen.empty() && a.held_out.empty()) {
        throw UsageError("give at least one resolution via --seen or --held-out");
    }
    EvalConfig ec;
    ec.seen = a.seen;
    ec.held_out = a.held_out;
    ec.k = a.k;
    ec.seeds = a.seeds;
    ec.base_seed = a.seed;
    ec.standardize = a.standardize;
    ec.algorithms.clear();
    for (const auto& name : a.algos) {
        ec.algorithms.push_back(parse_algorithm(name));
    }
    if (a.pixel_baseline > 0) {
        ec.pixel_baseline = a.pixel_baseline;
    }
    const fs::path csv = a.out / "report.csv";
    const fs::path txt = a.out / "report.txt";
    const fs::path snap = a.out / "config.toml";
    claim({csv, txt, snap}, a.out.force);
    const Checkpoint ck = load_checkpoint(fs::path(a.model));
    const Dataset ds = load_dataset(a.data);
    const auto rows = eval_protocol(ck.net, ds, ec);
    {
        auto out = open_out(csv);
        write_report_csv(rows, out);
    }
    {
        auto out = open_out(txt);
        write_report_table(rows, out);
    }
    write_snapshot(cmd, snap);
    write_report_table(rows, std::cout);
    return kOk;
}

// ---- project --------------------------------------------------------------

struct ProjectArgs {
    std::string model;
    std::string data;
    std::vector<std::size_t> resolutions;
    OutDir out;
};

int run_project(const CLI::App& cmd, const ProjectArgs& a)
{
    const fs::path csv = a.out / "projection.csv";
    const fs::path svg = a.out / "projection.svg";
    const fs::path snap = a.out / "config.toml";
    claim({csv, svg, snap}, a.out.force);
    const Checkpoint ck = load_checkpoint(fs::path(a.model));
    const Dataset ds = load_dataset(a.data);
    const auto obs = ds.observations();

    // One PCA fitted on every resolution so the panels share axes.
    std::vector<Tensor> blocks;
    for (std::size_t r : a.resolutions) {
        blocks.push_back(embed_dataset(ck.net, obs, r));
    }
    const std::size_t n = ds.size();
    const std::size_t dz = blocks.front().cols();
    Tensor all({n * blocks.size(), dz});
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        for (std::size_t i = 0; i < n; ++i) {
            std::ranges::copy(blocks[b].row(i), all.row(b * n + i).begin());
        }
    }
    const Projection proj = pca2(all);
    std::vector<ProjectedPoint> points;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t row = b * n + i;
            points.push_back(
                {ds.samples[i].id, proj.coords(row, 0), proj.coords(row, 1), ds.samples[i].label, a.resolutions[b]});
        }
    }
    {
        auto out = open_out(csv);
        write_projection_csv(points, out);
    }
    {
        auto out = open_out(svg);
        write_projection_svg(points, out);
    }
    write_snapshot(cmd, snap);
    std::printf("projected %zu points; explained variance %.4g, %.4g\n", points.size(), proj.explained_variance[0],
                proj.explained_variance[1]);
    return kOk;
}

int report(const char* kind, const std::exception& e, int code)
{
    std::fprintf(stderr, "hypercluster: %s: %s\n", kind, e.what());
    return code;
}

} // namespace

int main(int argc, char** argv)
{
#if defined(__GLIBC__)
    // Keep large activation buffers on the heap instead of fresh mmaps.
    mallopt(M_MMAP_THRESHOLD, 256 << 20);
    mallopt(M_TRIM_THRESHOLD, 1 << 30);
#endif
    CLI::App app{"Cluster functions by the SIREN weights a hypernetwork predicts for them"};
    app.name("hypercluster");
    app.option_defaults()->always_capture_default();
    app.config_formatter(std::make_shared<cli::TomlConfig>());
    app.set_config("--config", "", "TOML file with one table per subcommand; flags take precedence");
    app.require_subcommand(1);

    SynthArgs synth;
    auto* c_synth = app.add_subcommand("synth", "Generate labeled 1-D sinusoid datasets as JSONL");
    c_synth->add_option("--classes", synth.classes, "Class frequencies")->delimiter(',');
    c_synth->add_option("--per-class", synth.per_class, "Samples per class");
    c_synth->add_option("--channels", synth.channels, "Output channels m");
    c_synth->add_option("--i-range", synth.i_range, "Points per sample LO,HI")->delimiter(',');
    c_synth->add_option("--amp", synth.amp, "Amplitude range LO,HI")->delimiter(',');
    c_synth->add_option("--phase", synth.phase, "Phase range LO,HI")->delimiter(',');
    c_synth->add_flag("--irregular", synth.irregular, "Random instead of uniform sample locations");
    c_synth->add_option("--seed", synth.seed, "Random seed");
    c_synth->add_option("--out", synth.out, "Output JSONL file")->required();
    c_synth->add_flag("--force", synth.force, "Overwrite existing outputs");

    IngestArgs ingest;
    auto* c_ingest = app.add_subcommand("ingest-mnist", "Convert MNIST IDX files to JSONL point sets");
    c_ingest->add_option("--mnist-dir", ingest.mnist_dir, "Directory with train-{images,labels} IDX files");
    c_ingest->add_option("--images", ingest.images, "IDX image file (overrides --mnist-dir)");
    c_ingest->add_option("--labels", ingest.labels, "IDX label file (overrides --mnist-dir)");
    c_ingest->add_option("--subset", ingest.subset, "Keep a seeded random subset of this size (0 keeps all)");
    c_ingest->add_option("--classes", ingest.classes, "Keep only these digits")->delimiter(',');
    c_ingest->add_option("--resolution", ingest.resolution, "Base grid resolution")->check(CLI::PositiveNumber);
    c_ingest->add_option("--seed", ingest.seed, "Seed for --subset");
    c_ingest->add_option("--out", ingest.out, "Output JSONL file")->required();
    c_ingest->add_flag("--force", ingest.force, "Overwrite existing outputs");

    TrainArgs tr;
    auto* c_train = app.add_subcommand("train", "Train the hypernetwork on reconstruction loss");
    c_train->add_option("--data", tr.data, "Training JSONL")->required();
    c_train->add_option("--r-train", tr.r_train, "Training resolutions")->delimiter(',');
    c_train->add_option("--epochs", tr.epochs, "Epochs");
    c_train->add_option("--batch", tr.batch, "Batch size")->check(CLI::PositiveNumber);
    c_train->add_option("--seed", tr.seed, "Random seed");
    c_train->add_option("--spec-width", tr.spec_width, "SIREN hidden width")->check(CLI::PositiveNumber);
    c_train->add_option("--spec-layers", tr.spec_layers, "SIREN layer count");
    c_train->add_option("--omega0", tr.omega0, "SIREN frequency factor");
    c_train->add_option("--lr0", tr.lr0, "Initial learning rate");
    c_train->add_option("--lr-final", tr.lr_final, "Learning rate after the last step");
    c_train->add_option("--val-fraction", tr.val_fraction, "Fraction held out for validation loss");
    c_train->add_option("--val-resolution", tr.val_resolution, "Validation resolution (0: median of --r-train)");
    c_train->add_option("--eval-every", tr.eval_every, "Validation interval in steps (0: every epoch)");
    c_train->add_option("--rff-dim", tr.rff_dim, "Fourier feature width");
    c_train->add_option("--rff-scale", tr.rff_scale, "Fourier frequency scale");
    c_train->add_option("--encoder-width", tr.encoder_width, "Per-point network width");
    c_train->add_option("--latent", tr.latent, "Pooled representation width");
    c_train->add_option("--head-hidden", tr.head_hidden, "Hidden head width (0: affine heads)");
    c_train->add_flag("--raw-coords", tr.raw_coords, "Also feed raw coordinates to the encoder");
    c_train->add_option("--threads", tr.threads, "Worker threads (0: HYPERCLUSTER_THREADS or 1)");
    c_train->add_flag("--quiet", tr.quiet, "No per-epoch progress");
    tr.out.add(c_train);

    EmbedArgs em;
    auto* c_embed = app.add_subcommand("embed", "Predict SIREN weights for every sample");
    c_embed->add_option("--model", em.model, "Checkpoint")->required();
    c_embed->add_option("--data", em.data, "Input JSONL")->required();
    c_embed->add_option("--resolution", em.resolution, "Resample to this resolution first (0: as stored)");
    em.out.add(c_embed);

    ClusterArgs cl;
    auto* c_cluster = app.add_subcommand("cluster", "Cluster an embeddings CSV");
    c_cluster->add_option("--embeddings", cl.embeddings, "CSV written by embed")->required();
    c_cluster->add_option("--algo", cl.algo, "kmeans or gmm")->check(CLI::IsMember({"kmeans", "gmm"}));
    c_cluster->add_option("--k", cl.k, "Cluster count (0: number of labels)");
    c_cluster->add_option("--seed", cl.seed, "Random seed");
    c_cluster->add_flag("--standardize", cl.standardize, "Z-score each weight coordinate first");
    cl.out.add(c_cluster);

    EvalArgs ev;
    auto* c_eval = app.add_subcommand("eval", "AMI/ARI over resolutions, algorithms and seeds");
    c_eval->add_option("--model", ev.model, "Checkpoint")->required();
    c_eval->add_option("--data", ev.data, "Labeled JSONL")->required();
    c_eval->add_option("--seen", ev.seen, "Resolutions used in training")->delimiter(',');
    c_eval->add_option("--held-out", ev.held_out, "Resolutions not used in training")->delimiter(',');
    c_eval->add_option("--algo", ev.algos, "Algorithms")->delimiter(',')->check(CLI::IsMember({"kmeans", "gmm"}));
    c_eval->add_option("--k", ev.k, "Cluster count (0: number of labels)");
    c_eval->add_option("--seeds", ev.seeds, "Clustering seeds per cell")->check(CLI::PositiveNumber);
    c_eval->add_option("--seed", ev.seed, "First clustering seed");
    c_eval->add_flag("--standardize", ev.standardize, "Z-score each weight coordinate first");
    c_eval->add_option("--pixel-baseline", ev.pixel_baseline, "Also cluster raw values at this resolution");
    ev.out.add(c_eval);

    ProjectArgs pr;
    auto* c_project = app.add_subcommand("project", "2-D PCA of the weights as CSV and SVG");
    c_project->add_option("--model", pr.model, "Checkpoint")->required();
    c_project->add_option("--data", pr.data, "Input JSONL")->required();
    c_project->add_option("--resolutions", pr.resolutions, "Resolutions to embed")->delimiter(',')->required();
    pr.out.add(c_project);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    } catch (const FormatError& e) {
        return report("config error", e, kData);
    }

    try {
        if (*c_synth) {
            return run_synth(*c_synth, synth);
        }
        if (*c_ingest) {
            return run_ingest(*c_ingest, ingest);
        }
        if (*c_train) {
            return run_train(*c_train, tr);
        }
        if (*c_embed) {
            return run_embed(*c_embed, em);
        }
        if (*c_cluster) {
            return run_cluster(*c_cluster, cl);
        }
        if (*c_eval) {
            return run_eval(*c_eval, ev);
        }
        if (*c_project) {
            return run_project(*c_project, pr);
        }
    } catch (const UsageError& e) {
        return report("usage error", e, kUsage);
    } catch (const ArgumentError& e) {
        return report("invalid argument", e, kUsage);
    } catch (const NumericalError& e) {
        return report("numerical failure", e, kNumerical);
    } catch (const FormatError& e) {
        return report("data error", e, kData);
    } catch (const DimensionError& e) {
        return report("data error", e, kData);
    } catch (const fs::filesystem_error& e) {
        return report("file error", e, kData);
    } catch (const std::exception& e) {
        return report("error", e, 1);
    }
    return kUsage;
}
