#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hypercluster/autodiff.hpp"

namespace hypercluster {

struct AdamConfig {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// Moment estimates for a fixed list of parameters.
struct AdamState {
    AdamConfig config;
    std::vector<Tensor> m;
    std::vector<Tensor> v;
    std::uint64_t t = 0;
};

AdamState make_adam_state(std::span<Parameter* const> params, AdamConfig config = {});

/// One bias-corrected Adam update (no weight decay) using each parameter's
/// `grad`. Throws NumericalError, naming the step and parameter, if any
/// gradient entry is non-finite; parameters are left untouched in that case.
void adam_step(std::span<Parameter* const> params, AdamState& state, double lr);

/// Power-law decay lr(t) = lr0 / (1 + t / tau), with tau chosen so that
/// lr(total_steps) == lr_final.
class LrSchedule {
public:
    LrSchedule(double lr0, double lr_final, std::uint64_t total_steps);

    /// Steps outside [0, total_steps] are clamped to the endpoints.
    double at(std::uint64_t step) const;

    double initial() const { return lr0_; }
    double final() const { return lr_final_; }
    std::uint64_t total_steps() const { return total_; }

private:
    double lr0_;
    double lr_final_;
    std::uint64_t total_;
    double tau_;
};

} // namespace hypercluster
