#include "dst/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dst {

const char* to_string(OptKind kind) {
    switch (kind) {
        case OptKind::sgd: return "sgd";
        case OptKind::momentum: return "momentum";
        case OptKind::adam: return "adam";
    }
    return "?";
}

OptKind opt_kind_from_string(std::string_view text) {
    if (text == "sgd") return OptKind::sgd;
    if (text == "momentum") return OptKind::momentum;
    if (text == "adam") return OptKind::adam;
    throw std::invalid_argument("unknown optimizer '" + std::string(text) + "'");
}

OptState OptState::init(const InnerOptimizer& opt, size_t n) {
    OptState s;
    if (opt.kind == OptKind::momentum) s.m.assign(n, 0.0);
    if (opt.kind == OptKind::adam) {
        s.m.assign(n, 0.0);
        s.v.assign(n, 0.0);
    }
    return s;
}

InnerUpdateResult inner_update(const InnerOptimizer& opt, const OptState& state,
                               const ParamVector& params, std::span<const double> grads) {
    const size_t n = params.size();
    if (grads.size() != n)
        throw std::invalid_argument("inner_update: gradient length " +
                                    std::to_string(grads.size()) +
                                    " does not match parameter count " + std::to_string(n));
    for (size_t i = 0; i < n; ++i)
        if (std::isnan(grads[i]))
            throw std::invalid_argument("inner_update: NaN gradient at index " +
                                        std::to_string(i));
    if (!(opt.learning_rate > 0.0))
        throw std::invalid_argument("inner_update: learning rate must be positive");

    InnerUpdateResult out;
    out.state = state;
    out.state.step = state.step + 1;
    out.update.resize(n);

    switch (opt.kind) {
        case OptKind::sgd:
            for (size_t i = 0; i < n; ++i) out.update[i] = -opt.learning_rate * grads[i];
            break;
        case OptKind::momentum:
            if (out.state.m.size() != n)
                throw std::invalid_argument("inner_update: momentum state size mismatch");
            for (size_t i = 0; i < n; ++i) {
                out.state.m[i] = opt.beta * out.state.m[i] + grads[i];
                out.update[i] = -opt.learning_rate * out.state.m[i];
            }
            break;
        case OptKind::adam: {
            if (out.state.m.size() != n || out.state.v.size() != n)
                throw std::invalid_argument("inner_update: adam state size mismatch");
            const auto t = static_cast<double>(out.state.step);
            const double corr1 = 1.0 - std::pow(opt.beta1, t);
            const double corr2 = 1.0 - std::pow(opt.beta2, t);
            for (size_t i = 0; i < n; ++i) {
                out.state.m[i] = opt.beta1 * out.state.m[i] + (1.0 - opt.beta1) * grads[i];
                out.state.v[i] =
                    opt.beta2 * out.state.v[i] + (1.0 - opt.beta2) * grads[i] * grads[i];
                const double m_hat = out.state.m[i] / corr1;
                const double v_hat = out.state.v[i] / corr2;
                out.update[i] = -opt.learning_rate * m_hat / (std::sqrt(v_hat) + opt.eps_hat);
            }
            break;
        }
    }
    return out;
}

std::vector<float> apply_update(std::span<const float> params,
                                std::span<const double> update) {
    if (params.size() != update.size())
        throw std::invalid_argument("apply_update: length mismatch");
    std::vector<float> out(params.size());
    for (size_t i = 0; i < params.size(); ++i)
        out[i] = static_cast<float>(static_cast<double>(params[i]) + update[i]);
    return out;
}

DstStepResult dst_step(const ParamVector& params, const SeedSnapshot& seed,
                       std::span<const double> grads, const InnerOptimizer& opt,
                       const OptState& opt_state, const DstConfig& cfg,
                       const SiloPartition& partition, const DstState& dst_state) {
    const size_t n = params.size();
    if (seed.size() != n)
        throw std::invalid_argument("dst_step: seed/parameter length mismatch");
    if (partition.total != n)
        throw std::invalid_argument("dst_step: partition does not cover the parameter vector");

    auto inner = inner_update(opt, opt_state, params, grads);
    std::vector<float> theta_hat = apply_update(params.values, inner.update);
    for (size_t i = 0; i < n; ++i)
        if (!std::isfinite(theta_hat[i]))
            throw std::runtime_error("dst_step: non-finite updated parameter at index " +
                                     std::to_string(i));

    std::vector<double> delta = score(cfg.distance, theta_hat, seed.values());
    normalize_scores(delta, params.layout, seed.values(), cfg.normalization);

    DstStepResult result;
    result.opt_state = std::move(inner.state);
    result.dst_state = dst_state;

    std::vector<SiloSelection> silo_stats;
    const std::vector<size_t>* selected = nullptr;
    if (cfg.churn || dst_state.step == 0) {
        auto sel = select(delta, partition, cfg.epsilon, cfg.selection,
                          dst_state.thresholds);
        result.dst_state.thresholds = std::move(sel.state);
        result.dst_state.frozen_subset = std::move(sel.indices);
        result.dst_state.frozen = !cfg.churn;
        silo_stats = std::move(sel.silos);
        selected = &result.dst_state.frozen_subset;
    } else {
        selected = &result.dst_state.frozen_subset;
        // Recompute per-silo stats for the frozen subset.
        for (const auto& silo : partition.silos) {
            SiloSelection stat;
            stat.silo_id = silo.id;
            stat.silo_size = silo.size;
            stat.budget = silo_budget(silo.size, cfg.epsilon);
            for (const auto& range : silo.ranges) {
                auto lo = std::lower_bound(selected->begin(), selected->end(), range.begin);
                auto hi = std::lower_bound(selected->begin(), selected->end(), range.end);
                stat.selected += static_cast<size_t>(hi - lo);
            }
            if (result.dst_state.thresholds.initialized(silo.id))
                stat.threshold = result.dst_state.thresholds.get(silo.id);
            silo_stats.push_back(std::move(stat));
        }
    }
    result.dst_state.step = dst_state.step + 1;

    // Final vector: seed everywhere, updated values on the selected subset.
    result.params.layout = params.layout;
    result.params.values.assign(seed.values().begin(), seed.values().end());
    for (size_t i : *selected) result.params.values[i] = theta_hat[i];

    result.record.step = dst_state.step;
    result.record.subset = *selected;
    result.record.selected_count = selected->size();
    for (const auto& stat : silo_stats) {
        const double realized =
            stat.silo_size == 0 ? 0.0
                                : static_cast<double>(stat.selected) /
                                      static_cast<double>(stat.silo_size);
        result.record.silos.push_back(SiloStepStat{stat.silo_id, stat.silo_size,
                                                   stat.budget, stat.selected,
                                                   stat.threshold, realized});
    }
    return result;
}

}  // namespace dst
