#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hypercluster/pointset.hpp"

namespace hypercluster {

/// One class of u_c(x) = amp * sin(2 pi freq x + phase), amplitude and phase
/// drawn per sample and channel from the given closed ranges.
struct SineClass {
    double freq = 1.0;
    double amp_lo = 1.0;
    double amp_hi = 1.0;
    double phase_lo = 0.0;
    double phase_hi = 0.0;
};

struct SineDatasetConfig {
    std::vector<SineClass> classes;
    std::size_t per_class = 100;
    std::size_t channels = 1;
    std::size_t points_lo = 64;
    std::size_t points_hi = 64;
    /// Uniform-random sample locations instead of a uniform grid.
    bool irregular = false;
    std::uint64_t seed = 0;
};

/// Labeled 1-D multi-channel sinusoids; label = class index. Samples are
/// emitted class-major. Class frequencies must be distinct.
Dataset synth_sine_dataset(const SineDatasetConfig& config);

} // namespace hypercluster
