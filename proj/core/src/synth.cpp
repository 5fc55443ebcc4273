#include "hypercluster/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>

#include "hypercluster/error.hpp"
#include "hypercluster/grid.hpp"
#include "hypercluster/random.hpp"

namespace hypercluster {

Dataset synth_sine_dataset(const SineDatasetConfig& config)
{
    if (config.classes.empty()) {
        throw ArgumentError("synth: at least one class is required");
    }
    std::set<double> freqs;
    for (const auto& c : config.classes) {
        if (!freqs.insert(c.freq).second) {
            throw ArgumentError("synth: class frequencies must be distinct");
        }
        if (c.amp_lo > c.amp_hi || c.phase_lo > c.phase_hi) {
            throw ArgumentError("synth: empty amplitude or phase range");
        }
    }
    if (config.channels == 0 || config.points_lo == 0 || config.points_lo > config.points_hi) {
        throw ArgumentError("synth: need channels >= 1 and 1 <= points_lo <= points_hi");
    }

    Rng rng(config.seed);
    Dataset ds;
    ds.d = 1;
    ds.m = config.channels;
    const double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t k = 0; k < config.classes.size(); ++k) {
        const SineClass& cls = config.classes[k];
        for (std::size_t n = 0; n < config.per_class; ++n) {
            const std::size_t count = config.points_lo + rng.index(config.points_hi - config.points_lo + 1);
            std::vector<double> xs(count);
            for (std::size_t i = 0; i < count; ++i) {
                xs[i] = config.irregular ? rng.uniform() : grid_coordinate(i, count);
            }
            if (config.irregular) {
                std::sort(xs.begin(), xs.end());
            }
            std::vector<double> amps(config.channels);
            std::vector<double> phases(config.channels);
            for (std::size_t c = 0; c < config.channels; ++c) {
                amps[c] = rng.uniform(cls.amp_lo, cls.amp_hi);
                phases[c] = rng.uniform(cls.phase_lo, cls.phase_hi);
            }

            PointSet ps;
            char id[32];
            std::snprintf(id, sizeof(id), "sine-%zu-%05zu", k, n);
            ps.id = id;
            ps.label = static_cast<int>(k);
            ps.obs.coords = Tensor({count, 1});
            ps.obs.values = Tensor({count, config.channels});
            for (std::size_t i = 0; i < count; ++i) {
                ps.obs.coords(i, 0) = static_cast<float>(xs[i]);
                for (std::size_t c = 0; c < config.channels; ++c) {
                    ps.obs.values(i, c) =
                        static_cast<float>(amps[c] * std::sin(two_pi * cls.freq * xs[i] + phases[c]));
                }
            }
            ds.samples.push_back(std::move(ps));
        }
    }
    return ds;
}

} // namespace hypercluster
