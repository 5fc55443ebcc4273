#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "hypercluster/hypernet.hpp"
#include "hypercluster/pointset.hpp"

namespace hypercluster {

struct TrainConfig {
    std::size_t epochs = 50;
    std::size_t batch_size = 128;
    std::vector<std::size_t> r_train{14, 28, 56};
    std::uint64_t seed = 0;
    HyperNetConfig model;
    double lr0 = 3e-4;
    double lr_final = 1e-4;
    /// Validation loss every this many steps; 0 means once per epoch.
    std::size_t eval_every = 0;
    /// Fraction of samples held out for validation loss.
    double val_fraction = 0.1;
    /// Resolution for validation; defaults to the median of r_train.
    std::optional<std::size_t> val_resolution;
    /// Worker threads for per-sample forward/backward (results are reduced in
    /// sample order, so the thread count never changes the outcome).
    std::size_t threads = 1;

    void validate() const;
};

struct TraceRow {
    std::uint64_t step = 0;
    double lr = 0.0;
    double train_loss = 0.0;
    std::optional<double> val_loss;
};

/// Writes `step,lr,train_loss[,val_loss]`; the val column is present when any
/// row carries a validation loss and is left empty on rows that do not.
void write_trace_csv(std::span<const TraceRow> trace, std::ostream& out);

struct TrainResult {
    HyperNet net;
    std::vector<TraceRow> trace;
    std::uint64_t steps = 0;
    std::vector<std::size_t> train_indices;
    std::vector<std::size_t> val_indices;
};

struct TrainHooks {
    std::function<void(const TraceRow&)> on_step;
    /// Called after each epoch with the 1-based epoch number.
    std::function<void(std::size_t epoch, const HyperNet&, std::uint64_t step)> on_epoch;
};

/// Mean over the batch of per-sample reconstruction errors, summed in sorted
/// order so member order does not matter. Throws ArgumentError for an empty
/// batch.
double loss_batch(const HyperNet& net, std::span<const Observations> batch);

/// Accumulates d(loss_batch)/d(theta) into the parameters' grads (which are
/// zeroed first) and returns the batch loss.
double loss_and_grad(HyperNet& net, std::span<const Observations> batch, std::size_t threads = 1);

/// Reconstruction-only training with a resolution drawn from r_train per
/// batch. Takes observations only: labels never reach this code path.
/// Throws NumericalError (naming the step) on a non-finite loss or gradient.
TrainResult train(std::span<const Observations> data, const TrainConfig& config, const TrainHooks& hooks = {});

} // namespace hypercluster
