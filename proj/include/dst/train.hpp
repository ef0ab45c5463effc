#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "dst/optimizer.hpp"
#include "dst/subset_delta.hpp"
#include "dst/task.hpp"

namespace dst {

enum class TrainMethod { full, dst, random_mask };

const char* to_string(TrainMethod m);
TrainMethod train_method_from_string(std::string_view text);

struct TrainConfig {
    TrainMethod method = TrainMethod::full;
    DstConfig dst;               // method == dst
    double mask_fraction = 0.0;  // method == random_mask
    uint64_t mask_seed = 0;
    int64_t steps = 1000;
    size_t batch_size = 32;
    LossKind loss = LossKind::mse;
    int64_t checkpoint_interval = 50;
    double holdout_fraction = 0.2;
    uint64_t batch_seed = 7;
    InnerOptimizer opt;
};

struct MetricRow {
    int64_t step = 0;  // 1-based step just completed
    double train_loss = 0.0;
    double holdout_loss = 0.0;
};

struct RunArtifacts {
    ParamVector final_params;
    std::vector<MetricRow> metrics;
    std::vector<DstStepRecord> records;  // checkpoints only; dst and random_mask
    SubsetDelta delta;
    double final_holdout_loss = 0.0;
};

// Fine-tunes from the seed by the configured method. Deterministic given the
// seeds in the config.
RunArtifacts finetune(const TrainConfig& cfg, const MlpSpec& model,
                      const SeedSnapshot& seed, const Dataset& task);

// Plain full training from a fresh init; produces the seed model.
ParamVector pretrain(const MlpSpec& model, const Dataset& task, const InnerOptimizer& opt,
                     int64_t steps, size_t batch_size, LossKind loss, uint64_t batch_seed);

struct PretrainConfig {
    InnerOptimizer opt;
    int64_t steps = 500;
    size_t batch_size = 32;
    LossKind loss = LossKind::mse;
    uint64_t batch_seed = 1;
};

struct TrainRun {
    ParamVector seed_params;
    RunArtifacts artifacts;
};

// Full pipeline: pretrain on one task, snapshot, fine-tune on the other.
TrainRun train(const MlpSpec& model, const TaskSpec& pretrain_task,
               const TaskSpec& finetune_task, const PretrainConfig& pre,
               const TrainConfig& fine);

struct SweepCell {
    double learning_rate = 0.0;
    double epsilon = 0.0;
    uint64_t seed = 0;
    double final_holdout_loss = 0.0;
};

// Full factorial (lr x epsilon x seed) DST sweep. Per master seed, all task /
// init / batch seeds are derived via sub_seed and the pretraining is shared
// across grid cells.
std::vector<SweepCell> lr_epsilon_sweep(const MlpSpec& model, const TaskSpec& pretrain_task,
                                        const TaskSpec& finetune_task,
                                        const PretrainConfig& pre, const TrainConfig& base,
                                        const std::vector<double>& learning_rates,
                                        const std::vector<double>& epsilons,
                                        const std::vector<uint64_t>& seeds);

}  // namespace dst
