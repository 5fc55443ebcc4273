#include "hypercluster/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <thread>

#include "hypercluster/error.hpp"
#include "hypercluster/optim.hpp"
#include "hypercluster/random.hpp"
#include "hypercluster/sampler.hpp"

namespace hypercluster {

void TrainConfig::validate() const
{
    if (epochs == 0 || batch_size == 0) {
        throw ArgumentError("epochs and batch size must be positive");
    }
    if (r_train.empty()) {
        throw ArgumentError("training resolution set is empty");
    }
    if (std::find(r_train.begin(), r_train.end(), std::size_t{0}) != r_train.end()) {
        throw ArgumentError("training resolutions must be positive");
    }
    if (!(val_fraction >= 0.0 && val_fraction < 1.0)) {
        throw ArgumentError("validation fraction must lie in [0, 1)");
    }
    model.spec.validate();
}

void write_trace_csv(std::span<const TraceRow> trace, std::ostream& out)
{
    const bool with_val = std::any_of(trace.begin(), trace.end(), [](const TraceRow& r) { return r.val_loss; });
    out << (with_val ? "step,lr,train_loss,val_loss\n" : "step,lr,train_loss\n");
    out.precision(9);
    for (const TraceRow& row : trace) {
        out << row.step << ',' << row.lr << ',' << row.train_loss;
        if (with_val) {
            out << ',';
            if (row.val_loss) {
                out << *row.val_loss;
            }
        }
        out << '\n';
    }
}

namespace {

// Sorting first makes the batch loss independent of member order.
double sorted_mean(std::vector<double> values)
{
    std::sort(values.begin(), values.end());
    double total = 0.0;
    for (double v : values) {
        total += v;
    }
    return total / static_cast<double>(values.size());
}

} // namespace

double loss_batch(const HyperNet& net, std::span<const Observations> batch)
{
    if (batch.empty()) {
        throw ArgumentError("loss of an empty batch");
    }
    std::vector<double> losses;
    losses.reserve(batch.size());
    for (const Observations& obs : batch) {
        losses.push_back(net.sample_loss(obs));
    }
    return sorted_mean(std::move(losses));
}

namespace {

struct SampleGrad {
    double loss = 0.0;
    std::vector<Tensor> grads;
};

// Gradient of one sample's loss scaled by `weight`, left in `net`'s grads.
SampleGrad sample_grad(HyperNet& net, const Observations& obs, float weight)
{
    auto params = net.parameters();
    for (Parameter* p : params) {
        p->zero_grad();
    }
    Tape tape;
    Var loss = net.sample_loss(tape, obs);
    tape.backward(loss, weight);
    SampleGrad out;
    out.loss = loss.value()[0];
    out.grads.reserve(params.size());
    for (Parameter* p : params) {
        out.grads.push_back(p->grad);
    }
    return out;
}

} // namespace

double loss_and_grad(HyperNet& net, std::span<const Observations> batch, std::size_t threads)
{
    if (batch.empty()) {
        throw ArgumentError("loss of an empty batch");
    }
    const auto weight = static_cast<float>(1.0 / static_cast<double>(batch.size()));
    std::vector<SampleGrad> results(batch.size());

    threads = std::max<std::size_t>(1, std::min(threads, batch.size()));
    if (threads == 1) {
        for (std::size_t n = 0; n < batch.size(); ++n) {
            results[n] = sample_grad(net, batch[n], weight);
        }
    } else {
        std::vector<HyperNet> replicas(threads, net);
        std::vector<std::thread> workers;
        for (std::size_t w = 0; w < threads; ++w) {
            workers.emplace_back([&, w] {
                for (std::size_t n = w; n < batch.size(); n += threads) {
                    results[n] = sample_grad(replicas[w], batch[n], weight);
                }
            });
        }
        for (auto& t : workers) {
            t.join();
        }
    }

    // Reduce in sample order regardless of which worker produced what.
    auto params = net.parameters();
    for (Parameter* p : params) {
        p->zero_grad();
    }
    std::vector<double> losses;
    losses.reserve(results.size());
    for (const SampleGrad& r : results) {
        losses.push_back(r.loss);
        for (std::size_t k = 0; k < params.size(); ++k) {
            float* dst = params[k]->grad.data();
            const float* src = r.grads[k].data();
            for (std::size_t i = 0; i < r.grads[k].size(); ++i) {
                dst[i] += src[i];
            }
        }
    }
    return sorted_mean(std::move(losses));
}

TrainResult train(std::span<const Observations> data, const TrainConfig& config, const TrainHooks& hooks)
{
    config.validate();
    if (data.empty()) {
        throw ArgumentError("cannot train on an empty dataset");
    }
    for (const Observations& obs : data) {
        if (obs.dim() != config.model.spec.d || obs.channels() != config.model.spec.m) {
            throw DimensionError("training data does not match the SIREN's (d, m)");
        }
    }

    Rng root(config.seed);
    const std::uint64_t model_seed = root.fork();
    Rng split_rng(root.fork());
    Rng order_rng(root.fork());
    ResolutionSampler sampler(config.r_train, root.fork());

    TrainResult result{HyperNet::init(config.model, model_seed), {}, 0, {}, {}};
    HyperNet& net = result.net;

    std::vector<std::size_t> all(data.size());
    for (std::size_t i = 0; i < all.size(); ++i) {
        all[i] = i;
    }
    split_rng.shuffle(all);
    const auto n_val = static_cast<std::size_t>(std::floor(config.val_fraction * static_cast<double>(data.size())));
    result.val_indices.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n_val));
    result.train_indices.assign(all.begin() + static_cast<std::ptrdiff_t>(n_val), all.end());
    std::sort(result.val_indices.begin(), result.val_indices.end());
    std::sort(result.train_indices.begin(), result.train_indices.end());
    if (result.train_indices.empty()) {
        throw ArgumentError("validation split leaves no training samples");
    }

    std::size_t val_r = config.val_resolution.value_or(0);
    if (val_r == 0) {
        auto sorted = config.r_train;
        std::sort(sorted.begin(), sorted.end());
        val_r = sorted[(sorted.size() - 1) / 2];
    }
    std::vector<Observations> val_set;
    for (std::size_t idx : result.val_indices) {
        val_set.push_back(resample(data[idx], val_r));
    }

    const std::size_t n_train = result.train_indices.size();
    const std::size_t steps_per_epoch = (n_train + config.batch_size - 1) / config.batch_size;
    const std::uint64_t total_steps = static_cast<std::uint64_t>(steps_per_epoch) * config.epochs;
    const std::size_t eval_every = config.eval_every == 0 ? steps_per_epoch : config.eval_every;
    const LrSchedule schedule(config.lr0, config.lr_final, total_steps);

    auto params = net.parameters();
    AdamState adam = make_adam_state(params);
    std::vector<std::size_t> order = result.train_indices;

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        order_rng.shuffle(order);
        for (std::size_t start = 0; start < n_train; start += config.batch_size) {
            const std::size_t stop = std::min(n_train, start + config.batch_size);
            const std::span<const std::size_t> members(order.data() + start, stop - start);
            const ResolutionBatch batch = sampler.make_batch(data, members);

            const double lr = schedule.at(result.steps);
            const double loss = loss_and_grad(net, batch.observations, config.threads);
            if (!std::isfinite(loss)) {
                throw NumericalError("non-finite training loss at step " + std::to_string(result.steps + 1));
            }
            adam_step(params, adam, lr);
            result.steps += 1;

            TraceRow row{result.steps, lr, loss, std::nullopt};
            if (!val_set.empty() && (result.steps % eval_every == 0 || result.steps == total_steps)) {
                const double val = loss_batch(net, val_set);
                if (!std::isfinite(val)) {
                    throw NumericalError("non-finite validation loss at step " + std::to_string(result.steps));
                }
                row.val_loss = val;
            }
            result.trace.push_back(row);
            if (hooks.on_step) {
                hooks.on_step(row);
            }
        }
        if (hooks.on_epoch) {
            hooks.on_epoch(epoch + 1, net, result.steps);
        }
    }
    return result;
}

} // namespace hypercluster
