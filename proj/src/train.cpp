#include "dst/train.hpp"
#include <limits>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dst/errors.hpp"
#include "dst/rng.hpp"

namespace dst {

const char* to_string(TrainMethod m) {
    switch (m) {
        case TrainMethod::full: return "full";
        case TrainMethod::dst: return "dst";
        case TrainMethod::random_mask: return "random_mask";
    }
    return "?";
}

TrainMethod train_method_from_string(std::string_view text) {
    if (text == "full") return TrainMethod::full;
    if (text == "dst") return TrainMethod::dst;
    if (text == "random_mask") return TrainMethod::random_mask;
    throw std::invalid_argument("unknown train method '" + std::string(text) + "'");
}

namespace {

Dataset gather_rows(const Dataset& ds, std::span<const size_t> rows) {
    Dataset out;
    out.inputs = Matrix(rows.size(), ds.inputs.cols);
    out.targets = Matrix(rows.size(), ds.targets.cols);
    for (size_t r = 0; r < rows.size(); ++r) {
        for (size_t c = 0; c < ds.inputs.cols; ++c)
            out.inputs.at(r, c) = ds.inputs.at(rows[r], c);
        for (size_t c = 0; c < ds.targets.cols; ++c)
            out.targets.at(r, c) = ds.targets.at(rows[r], c);
    }
    return out;
}

std::vector<size_t> random_mask_indices(size_t n, double fraction, uint64_t seed) {
    const size_t k = silo_budget(n, fraction);
    std::vector<size_t> pool(n);
    for (size_t i = 0; i < n; ++i) pool[i] = i;
    Xoshiro256 rng(seed);
    for (size_t i = 0; i < k; ++i) {
        const size_t j = i + static_cast<size_t>(rng.below(n - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    return pool;
}

}  // namespace

RunArtifacts finetune(const TrainConfig& cfg, const MlpSpec& model,
                      const SeedSnapshot& seed, const Dataset& task) {
    model.validate();
    if (seed.size() != model.param_count())
        throw ConfigError("seed model has " + std::to_string(seed.size()) +
                          " parameters, MLP spec needs " +
                          std::to_string(model.param_count()));
    if (cfg.steps < 1) throw ConfigError("train.steps must be >= 1");
    if (cfg.batch_size < 1) throw ConfigError("train.batch_size must be >= 1");
    if (!(cfg.holdout_fraction > 0.0 && cfg.holdout_fraction < 1.0))
        throw ConfigError("train.holdout_fraction must be in (0, 1)");

    const size_t total_rows = task.inputs.rows;
    const auto holdout_rows = static_cast<size_t>(
        std::floor(cfg.holdout_fraction * static_cast<double>(total_rows)));
    const size_t train_rows = total_rows - holdout_rows;
    if (train_rows == 0 || holdout_rows == 0)
        throw ConfigError("dataset too small for the requested holdout split");

    std::vector<size_t> holdout_ids(holdout_rows);
    for (size_t i = 0; i < holdout_rows; ++i) holdout_ids[i] = train_rows + i;
    const Dataset holdout = gather_rows(task, holdout_ids);

    ParamVector params;
    params.layout = seed.layout();
    params.values.assign(seed.values().begin(), seed.values().end());

    OptState opt_state = OptState::init(cfg.opt, params.size());
    DstState dst_state;
    SiloPartition partition;
    if (cfg.method == TrainMethod::dst) {
        partition = build_partition(params.layout, cfg.dst.scheme);
        validate_partition(partition, params.size());
    }

    std::vector<size_t> mask;
    if (cfg.method == TrainMethod::random_mask) {
        if (!(cfg.mask_fraction > 0.0 && cfg.mask_fraction <= 1.0))
            throw ConfigError("train.mask_fraction must be in (0, 1] for random_mask");
        mask = random_mask_indices(params.size(), cfg.mask_fraction, cfg.mask_seed);
    }

    RunArtifacts artifacts;
    Xoshiro256 batch_rng(cfg.batch_seed);
    std::vector<size_t> batch_ids(cfg.batch_size);

    for (int64_t step = 0; step < cfg.steps; ++step) {
        for (auto& id : batch_ids) id = static_cast<size_t>(batch_rng.below(train_rows));
        const Dataset batch = gather_rows(task, batch_ids);

        const auto wide = widen(params);
        const LossGrad lg = mlp_backward(model, wide, batch.inputs, batch.targets, cfg.loss);
        if (!std::isfinite(lg.loss))
            throw std::runtime_error("training diverged at step " + std::to_string(step));

        DstStepRecord record;
        switch (cfg.method) {
            case TrainMethod::full: {
                auto inner = inner_update(cfg.opt, opt_state, params, lg.grads);
                params.values = apply_update(params.values, inner.update);
                opt_state = std::move(inner.state);
                break;
            }
            case TrainMethod::dst: {
                auto result = dst_step(params, seed, lg.grads, cfg.opt, opt_state, cfg.dst,
                                       partition, dst_state);
                params = std::move(result.params);
                opt_state = std::move(result.opt_state);
                dst_state = std::move(result.dst_state);
                record = std::move(result.record);
                break;
            }
            case TrainMethod::random_mask: {
                auto inner = inner_update(cfg.opt, opt_state, params, lg.grads);
                const auto theta_hat = apply_update(params.values, inner.update);
                params.values.assign(seed.values().begin(), seed.values().end());
                for (size_t i : mask) params.values[i] = theta_hat[i];
                opt_state = std::move(inner.state);
                record.step = step;
                record.subset = mask;
                record.selected_count = mask.size();
                break;
            }
        }

        const bool at_checkpoint =
            (cfg.checkpoint_interval > 0 && (step + 1) % cfg.checkpoint_interval == 0) ||
            step + 1 == cfg.steps;
        if (at_checkpoint) {
            const auto wide_now = widen(params);
            const double holdout_loss =
                mlp_loss(model, wide_now, holdout.inputs, holdout.targets, cfg.loss);
            artifacts.metrics.push_back({step + 1, lg.loss, holdout_loss});
            if (cfg.method != TrainMethod::full) artifacts.records.push_back(record);
        }
    }

    artifacts.final_params = params;
    artifacts.delta = diff(seed, params);
    if (cfg.method == TrainMethod::dst) {
        artifacts.delta.epsilon = cfg.dst.epsilon;
        artifacts.delta.distance_tag = static_cast<uint8_t>(cfg.dst.distance);
        artifacts.delta.scheme_tag = static_cast<uint8_t>(cfg.dst.scheme);
    }
    artifacts.final_holdout_loss = artifacts.metrics.back().holdout_loss;
    return artifacts;
}

ParamVector pretrain(const MlpSpec& model, const Dataset& task, const InnerOptimizer& opt,
                     int64_t steps, size_t batch_size, LossKind loss, uint64_t batch_seed) {
    model.validate();
    if (steps < 1) throw ConfigError("pretrain steps must be >= 1");
    ParamVector params = init_mlp(model);
    OptState opt_state = OptState::init(opt, params.size());
    Xoshiro256 batch_rng(batch_seed);
    std::vector<size_t> batch_ids(batch_size);

    for (int64_t step = 0; step < steps; ++step) {
        for (auto& id : batch_ids) id = static_cast<size_t>(batch_rng.below(task.inputs.rows));
        const Dataset batch = gather_rows(task, batch_ids);
        const auto wide = widen(params);
        const LossGrad lg = mlp_backward(model, wide, batch.inputs, batch.targets, loss);
        if (!std::isfinite(lg.loss))
            throw std::runtime_error("pretraining diverged at step " + std::to_string(step));
        auto inner = inner_update(opt, opt_state, params, lg.grads);
        params.values = apply_update(params.values, inner.update);
        opt_state = std::move(inner.state);
    }
    return params;
}

TrainRun train(const MlpSpec& model, const TaskSpec& pretrain_task,
               const TaskSpec& finetune_task, const PretrainConfig& pre,
               const TrainConfig& fine) {
    const Dataset pre_ds = gen_task(pretrain_task);
    const Dataset fine_ds = gen_task(finetune_task);

    TrainRun run;
    run.seed_params =
        pretrain(model, pre_ds, pre.opt, pre.steps, pre.batch_size, pre.loss, pre.batch_seed);
    const SeedSnapshot seed(run.seed_params);
    run.artifacts = finetune(fine, model, seed, fine_ds);
    return run;
}

std::vector<SweepCell> lr_epsilon_sweep(const MlpSpec& model, const TaskSpec& pretrain_task,
                                        const TaskSpec& finetune_task,
                                        const PretrainConfig& pre, const TrainConfig& base,
                                        const std::vector<double>& learning_rates,
                                        const std::vector<double>& epsilons,
                                        const std::vector<uint64_t>& seeds) {
    if (learning_rates.empty() || epsilons.empty() || seeds.empty())
        throw ConfigError("sweep grid must not be empty");

    std::vector<SweepCell> cells;
    for (uint64_t master : seeds) {
        MlpSpec m = model;
        m.init_seed = sub_seed(master, 0);
        TaskSpec pre_task = pretrain_task;
        pre_task.rng_seed = sub_seed(master, 1);
        TaskSpec fine_task = finetune_task;
        fine_task.rng_seed = sub_seed(master, 1);  // same base task as pretraining
        fine_task.shift_seed = sub_seed(master, 2);

        PretrainConfig pre_cfg = pre;
        pre_cfg.batch_seed = sub_seed(master, 3);

        const Dataset pre_ds = gen_task(pre_task);
        const Dataset fine_ds = gen_task(fine_task);
        const ParamVector seed_params = pretrain(m, pre_ds, pre_cfg.opt, pre_cfg.steps,
                                                 pre_cfg.batch_size, pre_cfg.loss,
                                                 pre_cfg.batch_seed);
        const SeedSnapshot seed(seed_params);

        for (double eps : epsilons) {
            for (double lr : learning_rates) {
                TrainConfig cfg = base;
                cfg.method = TrainMethod::dst;
                cfg.dst.epsilon = eps;
                cfg.opt.learning_rate = lr;
                cfg.batch_seed = sub_seed(master, 4);
                // A diverged cell is a valid sweep outcome: record it as an
                // infinite loss so the argmin skips it.
                double loss;
                try {
                    loss = finetune(cfg, m, seed, fine_ds).final_holdout_loss;
                } catch (const ConfigError&) {
                    throw;
                } catch (const std::runtime_error&) {
                    loss = std::numeric_limits<double>::infinity();
                }
                cells.push_back({lr, eps, master, loss});
            }
        }
    }
    return cells;
}

}  // namespace dst
