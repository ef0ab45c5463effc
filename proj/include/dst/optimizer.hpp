#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "dst/distance.hpp"
#include "dst/param_store.hpp"
#include "dst/partition.hpp"
#include "dst/selection.hpp"

namespace dst {

enum class OptKind { sgd, momentum, adam };

const char* to_string(OptKind kind);
OptKind opt_kind_from_string(std::string_view text);

struct InnerOptimizer {
    OptKind kind = OptKind::sgd;
    double learning_rate = 0.01;
    double beta = 0.9;       // momentum coefficient
    double beta1 = 0.9;      // adam
    double beta2 = 0.999;    // adam
    double eps_hat = 1e-8;   // adam
};

// Moment arrays and step counter. The state transition consumes only the
// gradients; it never sees the post-reset parameters (the update rule is
// computed as if every step were a full fine-tuning step).
struct OptState {
    std::vector<double> m;  // momentum velocity / adam first moment
    std::vector<double> v;  // adam second moment
    int64_t step = 0;

    static OptState init(const InnerOptimizer& opt, size_t n);
};

struct InnerUpdateResult {
    std::vector<double> update;  // u: signed parameter increments
    OptState state;
};

InnerUpdateResult inner_update(const InnerOptimizer& opt, const OptState& state,
                               const ParamVector& params, std::span<const double> grads);

// theta_hat = params + u, rounded back to the float32 parameter domain.
std::vector<float> apply_update(std::span<const float> params, std::span<const double> update);

struct DstConfig {
    double epsilon = 1e-2;
    DistanceKind distance = DistanceKind::inverse_relative;
    NormalizationMode normalization;
    SiloScheme scheme = SiloScheme::per_module_and_layer;
    SelectionMode selection;
    bool churn = true;  // false: freeze the subset after the first step
};

struct SiloStepStat {
    std::string silo_id;
    size_t silo_size = 0;
    size_t budget = 0;
    size_t selected = 0;
    double threshold = 0.0;
    double realized_eps = 0.0;  // selected / silo_size
};

struct DstStepRecord {
    int64_t step = 0;
    size_t selected_count = 0;
    std::vector<SiloStepStat> silos;
    std::vector<size_t> subset;  // global indices, sorted
};

// Cross-step selection state: running thresholds, the frozen subset when
// churn is disabled, and the step counter.
struct DstState {
    ThresholdState thresholds;
    std::vector<size_t> frozen_subset;
    bool frozen = false;
    int64_t step = 0;
};

struct DstStepResult {
    ParamVector params;
    OptState opt_state;
    DstState dst_state;
    DstStepRecord record;
};

// One full DST update: inner optimizer step, distance scoring, per-silo
// subset selection, and reset of everything outside the subset to the seed.
DstStepResult dst_step(const ParamVector& params, const SeedSnapshot& seed,
                       std::span<const double> grads, const InnerOptimizer& opt,
                       const OptState& opt_state, const DstConfig& cfg,
                       const SiloPartition& partition, const DstState& dst_state);

}  // namespace dst
