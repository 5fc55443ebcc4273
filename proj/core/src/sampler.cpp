#include "hypercluster/sampler.hpp"

#include <algorithm>
#include <numeric>

#include "hypercluster/error.hpp"
#include "hypercluster/grid.hpp"

namespace hypercluster {

std::vector<std::size_t> ResolutionSet::overlap() const
{
    std::vector<std::size_t> out;
    for (std::size_t r : train) {
        if (std::find(test.begin(), test.end(), r) != test.end()) {
            out.push_back(r);
        }
    }
    return out;
}

std::size_t points_at_resolution(std::size_t d, std::size_t r)
{
    std::size_t n = 1;
    for (std::size_t k = 0; k < d; ++k) {
        n *= r;
    }
    return n;
}

namespace {

Observations resample_1d(const Observations& obs, std::size_t r)
{
    const std::size_t count = obs.count();
    const std::size_t m = obs.channels();
    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return obs.coords(a, 0) < obs.coords(b, 0); });

    Observations out;
    out.coords = Tensor({r, 1});
    out.values = Tensor({r, m});
    std::size_t seg = 0;
    for (std::size_t i = 0; i < r; ++i) {
        const double t = grid_coordinate(i, r);
        out.coords(i, 0) = static_cast<float>(t);
        const double first = obs.coords(order.front(), 0);
        const double last = obs.coords(order.back(), 0);
        if (count == 1 || t <= first) {
            for (std::size_t c = 0; c < m; ++c) {
                out.values(i, c) = obs.values(order.front(), c);
            }
            continue;
        }
        if (t >= last) {
            for (std::size_t c = 0; c < m; ++c) {
                out.values(i, c) = obs.values(order.back(), c);
            }
            continue;
        }
        while (seg + 1 < count && obs.coords(order[seg + 1], 0) < t) {
            ++seg;
        }
        const std::size_t a = order[seg];
        const std::size_t b = order[seg + 1];
        const double xa = obs.coords(a, 0);
        const double xb = obs.coords(b, 0);
        const double w = xb > xa ? (t - xa) / (xb - xa) : 0.0;
        for (std::size_t c = 0; c < m; ++c) {
            out.values(i, c) = static_cast<float>((1.0 - w) * obs.values(a, c) + w * obs.values(b, c));
        }
    }
    return out;
}

} // namespace

Observations resample(const Observations& obs, std::size_t r)
{
    if (r == 0) {
        throw ArgumentError("resample: resolution must be positive");
    }
    if (obs.dim() == 1) {
        return resample_1d(obs, r);
    }
    if (obs.dim() == 2) {
        const auto grid = pointset_to_grid(obs);
        if (!grid) {
            throw ArgumentError("resample: 2-D observations are not a square align-corners grid");
        }
        return grid_to_pointset(bilinear_resample(*grid, r), {}, std::nullopt).obs;
    }
    throw ArgumentError("resample: unsupported domain dimension " + std::to_string(obs.dim()));
}

ResolutionSampler::ResolutionSampler(std::vector<std::size_t> r_train, std::uint64_t seed)
  : r_train_(std::move(r_train)), rng_(seed)
{
    if (r_train_.empty()) {
        throw ArgumentError("training resolution set is empty");
    }
    if (std::find(r_train_.begin(), r_train_.end(), std::size_t{0}) != r_train_.end()) {
        throw ArgumentError("training resolutions must be positive");
    }
}

std::size_t ResolutionSampler::draw_resolution()
{
    return r_train_[rng_.index(r_train_.size())];
}

ResolutionBatch ResolutionSampler::make_batch(std::span<const Observations> data, std::span<const std::size_t> members)
{
    ResolutionBatch batch;
    batch.resolution = draw_resolution();
    batch.members.assign(members.begin(), members.end());
    batch.observations.reserve(members.size());
    for (std::size_t idx : members) {
        batch.observations.push_back(resample(data[idx], batch.resolution));
    }
    return batch;
}

ResolutionBatch sample_resolution_batch(std::span<const Observations> data, std::span<const std::size_t> r_train,
                                        std::size_t batch_size, Rng& rng)
{
    if (r_train.empty()) {
        throw ArgumentError("training resolution set is empty");
    }
    if (data.empty()) {
        throw ArgumentError("cannot sample a batch from an empty dataset");
    }
    ResolutionBatch batch;
    batch.resolution = r_train[rng.index(r_train.size())];
    for (std::size_t k = 0; k < batch_size; ++k) {
        const std::size_t idx = rng.index(data.size());
        batch.members.push_back(idx);
        batch.observations.push_back(resample(data[idx], batch.resolution));
    }
    return batch;
}

} // namespace hypercluster
