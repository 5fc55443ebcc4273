#include "hypercluster/optim.hpp"

#include <cmath>
#include <string>

#include "hypercluster/error.hpp"

namespace hypercluster {

AdamState make_adam_state(std::span<Parameter* const> params, AdamConfig config)
{
    AdamState state;
    state.config = config;
    for (const Parameter* p : params) {
        state.m.emplace_back(p->value.shape());
        state.v.emplace_back(p->value.shape());
    }
    return state;
}

void adam_step(std::span<Parameter* const> params, AdamState& state, double lr)
{
    if (params.size() != state.m.size()) {
        throw DimensionError("adam_step: state tracks " + std::to_string(state.m.size()) + " parameters, got " +
                             std::to_string(params.size()));
    }
    for (std::size_t k = 0; k < params.size(); ++k) {
        const Parameter& p = *params[k];
        if (p.grad.shape() != p.value.shape() || state.m[k].shape() != p.value.shape()) {
            throw DimensionError("adam_step: shape mismatch for parameter '" + p.name + "'");
        }
        if (!p.grad.all_finite()) {
            throw NumericalError("non-finite gradient in parameter '" + p.name + "' at step " +
                                 std::to_string(state.t + 1));
        }
    }

    state.t += 1;
    const AdamConfig& c = state.config;
    const double correction1 = 1.0 - std::pow(c.beta1, static_cast<double>(state.t));
    const double correction2 = 1.0 - std::pow(c.beta2, static_cast<double>(state.t));
    for (std::size_t k = 0; k < params.size(); ++k) {
        Parameter& p = *params[k];
        Tensor& m = state.m[k];
        Tensor& v = state.v[k];
        for (std::size_t i = 0; i < p.value.size(); ++i) {
            const double g = p.grad[i];
            const double mi = c.beta1 * m[i] + (1.0 - c.beta1) * g;
            const double vi = c.beta2 * v[i] + (1.0 - c.beta2) * g * g;
            m[i] = static_cast<float>(mi);
            v[i] = static_cast<float>(vi);
            const double update = lr * (mi / correction1) / (std::sqrt(vi / correction2) + c.eps);
            p.value[i] = static_cast<float>(p.value[i] - update);
        }
    }
}

LrSchedule::LrSchedule(double lr0, double lr_final, std::uint64_t total_steps)
  : lr0_(lr0), lr_final_(lr_final), total_(total_steps)
{
    if (!(lr0 > 0.0) || !(lr_final > 0.0) || lr_final > lr0) {
        throw ArgumentError("learning-rate schedule needs 0 < lr_final <= lr0");
    }
    if (total_steps == 0) {
        throw ArgumentError("learning-rate schedule needs total_steps > 0");
    }
    const double ratio = lr0 / lr_final - 1.0;
    tau_ = ratio > 0.0 ? static_cast<double>(total_steps) / ratio : 0.0;
}

double LrSchedule::at(std::uint64_t step) const
{
    if (step == 0 || tau_ == 0.0) {
        return step >= total_ ? lr_final_ : lr0_;
    }
    if (step >= total_) {
        return lr_final_;
    }
    return lr0_ / (1.0 + static_cast<double>(step) / tau_);
}

} // namespace hypercluster
