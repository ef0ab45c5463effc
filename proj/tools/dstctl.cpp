// dstctl: batch driver for dynamic subset tuning experiments.
//
// Subcommands: pretrain, finetune, apply, diff, overlap, stats, bench, sweep.
// Exit codes: 0 success, 2 usage/config error, 3 data-integrity error,
// 1 runtime failure.

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dst/analysis.hpp"
#include "dst/errors.hpp"
#include "dst/run_config.hpp"
#include "dst/subset_delta.hpp"
#include "dst/train.hpp"

namespace {

using namespace dst;

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
    RunConfig cfg = RunConfig::parse_file(path);
    for (const auto& o : overrides) cfg.apply_override(o);
    return cfg;
}

// Harness models need at least two layers so per-module-and-layer siloing
// has distinct silos to work with.
void require_harness_model(const MlpSpec& spec) {
    spec.validate();
    if (spec.layer_count() < 2)
        throw ConfigError("model.widths must describe at least two layers");
}

MlpSpec model_from_config(const RunConfig& cfg) {
    MlpSpec spec;
    spec.widths = cfg.get_size_list("model.widths");
    spec.activation = activation_from_string(cfg.get_string("model.activation", "tanh"));
    spec.init_seed = cfg.get_seed("model.init_seed", 1);
    require_harness_model(spec);
    return spec;
}

std::vector<size_t> widths_from_layout(const ParamLayout& layout) {
    const auto& groups = layout.groups();
    if (groups.size() < 2 || groups.size() % 2 != 0)
        throw ConfigError("seed checkpoint layout is not an MLP layout");
    std::vector<size_t> widths;
    for (size_t l = 0; l * 2 < groups.size(); ++l) {
        const auto& w = groups[l * 2];
        const auto& b = groups[l * 2 + 1];
        if (w.module_kind != "weight" || b.module_kind != "bias" || b.length == 0 ||
            w.length % b.length != 0)
            throw ConfigError("seed checkpoint layout is not an MLP layout");
        if (l == 0) widths.push_back(w.length / b.length);
        widths.push_back(b.length);
    }
    return widths;
}

TaskSpec task_from_config(const RunConfig& cfg, const MlpSpec& model, bool with_shift) {
    TaskSpec task;
    task.kind = task_kind_from_string(cfg.get_string("task.kind"));
    task.input_dim = static_cast<size_t>(
        cfg.get_int("task.input_dim", static_cast<int64_t>(model.widths.front())));
    task.output_dim = static_cast<size_t>(
        cfg.get_int("task.output_dim", static_cast<int64_t>(model.widths.back())));
    task.samples = static_cast<size_t>(cfg.get_int("task.samples", 2048));
    task.noise_scale = cfg.get_double("task.noise", 0.05);
    task.rng_seed = cfg.get_seed("task.seed", 11);
    task.teacher_hidden = static_cast<size_t>(cfg.get_int("task.teacher_hidden", 32));
    task.class_spread = cfg.get_double("task.class_spread", 3.0);
    if (with_shift) {
        task.shift_fraction = cfg.get_double("task.shift_fraction", 0.0);
        task.shift_scale = cfg.get_double("task.shift_scale", 0.0);
        task.shift_seed = cfg.get_seed("task.shift_seed", 1);
    }
    if (task.input_dim != model.widths.front())
        throw ConfigError("task.input_dim does not match model input width");
    if (task.output_dim != model.widths.back())
        throw ConfigError("task.output_dim does not match model output width");
    return task;
}

InnerOptimizer opt_from_config(const RunConfig& cfg) {
    InnerOptimizer opt;
    opt.kind = opt_kind_from_string(cfg.get_string("opt.kind"));
    opt.learning_rate = cfg.get_double("opt.lr");
    opt.beta = cfg.get_double("opt.beta", 0.9);
    opt.beta1 = cfg.get_double("opt.beta1", 0.9);
    opt.beta2 = cfg.get_double("opt.beta2", 0.999);
    opt.eps_hat = cfg.get_double("opt.eps", 1e-8);
    if (!(opt.learning_rate > 0.0)) throw ConfigError("opt.lr must be positive");
    for (double b : {opt.beta, opt.beta1, opt.beta2})
        if (!(b >= 0.0 && b < 1.0)) throw ConfigError("optimizer betas must be in [0, 1)");
    return opt;
}

DstConfig dst_from_config(const RunConfig& cfg) {
    DstConfig dc;
    dc.epsilon = cfg.get_double("dst.epsilon");
    if (!(dc.epsilon > 0.0 && dc.epsilon <= 1.0))
        throw ConfigError("dst.epsilon must be in (0, 1]");
    dc.distance =
        distance_kind_from_string(cfg.get_string("dst.distance", "inverse_relative"));
    dc.scheme = silo_scheme_from_string(cfg.get_string("dst.scheme", "per_module_and_layer"));
    dc.selection.kind =
        selection_kind_from_string(cfg.get_string("dst.selection", "exact_topk"));
    dc.selection.iterations = static_cast<int>(cfg.get_int("dst.m", 3));
    dc.selection.fluctuation = cfg.get_double("dst.r", 2.0);
    if (dc.selection.iterations < 1) throw ConfigError("dst.m must be >= 1");
    if (!(dc.selection.fluctuation > 1.0)) throw ConfigError("dst.r must be > 1");
    if (dc.selection.kind == SelectionMode::Kind::iterative && dc.epsilon >= 1.0)
        throw ConfigError("dst.selection=iterative requires dst.epsilon < 1");
    dc.churn = cfg.get_bool("dst.churn", true);
    const std::string norm = cfg.get_string("dst.normalization", "none");
    if (norm == "none")
        dc.normalization.kind = NormalizationMode::Kind::none;
    else if (norm == "size")
        dc.normalization.kind = NormalizationMode::Kind::size;
    else if (norm == "mean")
        dc.normalization.kind = NormalizationMode::Kind::mean;
    else
        throw ConfigError("dst.normalization must be none, size or mean");
    const std::string gran = cfg.get_string("dst.norm_granularity", "per_module");
    if (gran == "per_module")
        dc.normalization.granularity = NormGranularity::per_module;
    else if (gran == "per_module_and_layer")
        dc.normalization.granularity = NormGranularity::per_module_and_layer;
    else
        throw ConfigError("dst.norm_granularity must be per_module or per_module_and_layer");
    return dc;
}

TrainConfig train_from_config(const RunConfig& cfg) {
    TrainConfig tc;
    tc.method = train_method_from_string(cfg.get_string("train.method"));
    tc.steps = cfg.get_int("train.steps");
    tc.batch_size = static_cast<size_t>(cfg.get_int("train.batch_size", 32));
    tc.loss = loss_kind_from_string(cfg.get_string("train.loss", "mse"));
    tc.batch_seed = cfg.get_seed("train.seed", 7);
    tc.checkpoint_interval = cfg.get_int("train.checkpoint_interval", 50);
    tc.holdout_fraction = cfg.get_double("train.holdout_fraction", 0.2);
    tc.opt = opt_from_config(cfg);
    if (tc.method == TrainMethod::dst) tc.dst = dst_from_config(cfg);
    if (tc.method == TrainMethod::random_mask) {
        tc.mask_fraction = cfg.get_double("train.mask_fraction");
        tc.mask_seed = cfg.get_seed("train.mask_seed", 0);
        if (!(tc.mask_fraction > 0.0 && tc.mask_fraction <= 1.0))
            throw ConfigError("train.mask_fraction must be in (0, 1]");
    }
    return tc;
}

PretrainConfig pretrain_from_config(const RunConfig& cfg) {
    PretrainConfig pc;
    pc.opt.kind = opt_kind_from_string(cfg.get_string("pretrain.opt", "adam"));
    pc.opt.learning_rate = cfg.get_double("pretrain.lr");
    pc.steps = cfg.get_int("pretrain.steps");
    pc.batch_size = static_cast<size_t>(cfg.get_int("pretrain.batch_size", 32));
    pc.loss = loss_kind_from_string(cfg.get_string("pretrain.loss", "mse"));
    pc.batch_seed = cfg.get_seed("pretrain.seed", 1);
    return pc;
}

void write_metrics_csv(const std::string& path, const std::vector<MetricRow>& rows) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << "step,train_loss,holdout_loss\n";
    for (const auto& r : rows)
        out << r.step << "," << r.train_loss << "," << r.holdout_loss << "\n";
}

void write_records_csv(const std::string& path, const std::vector<DstStepRecord>& records) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << "step,silo_id,silo_size,budget,selected,threshold,realized_eps\n";
    for (const auto& rec : records) {
        if (rec.silos.empty()) {
            out << rec.step << ",ALL,," << "" << "," << rec.selected_count << ",,\n";
            continue;
        }
        for (const auto& s : rec.silos)
            out << rec.step << "," << s.silo_id << "," << s.silo_size << "," << s.budget
                << "," << s.selected << "," << s.threshold << "," << s.realized_eps << "\n";
    }
}

// analysis outputs are line-oriented tab-separated records
void write_churn_tsv(const std::string& path, const ChurnSeries& series) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << "step\toverlap_vs_first\toverlap_vs_previous\n";
    for (size_t i = 0; i < series.steps.size(); ++i)
        out << series.steps[i] << "\t" << series.vs_first[i] << "\t"
            << series.vs_previous[i] << "\n";
}

int cmd_pretrain(const std::string& config_path, const std::string& out_dir,
                 const std::vector<std::string>& overrides) {
    const RunConfig cfg = load_config(config_path, overrides);
    const MlpSpec model = model_from_config(cfg);
    const TaskSpec task = task_from_config(cfg, model, /*with_shift=*/false);
    const InnerOptimizer opt = opt_from_config(cfg);
    const int64_t steps = cfg.get_int("train.steps");
    const auto batch = static_cast<size_t>(cfg.get_int("train.batch_size", 32));
    const LossKind loss = loss_kind_from_string(cfg.get_string("train.loss", "mse"));
    const uint64_t batch_seed = cfg.get_seed("train.seed", 7);

    const Dataset ds = gen_task(task);
    const ParamVector params = pretrain(model, ds, opt, steps, batch, loss, batch_seed);

    std::filesystem::create_directories(out_dir);
    save_checkpoint(params, out_dir + "/seed.dstc", 0);
    const double final_loss = mlp_loss(model, widen(params), ds.inputs, ds.targets, loss);
    std::printf("pretrain loss %.6g, wrote %s/seed.dstc\n", final_loss, out_dir.c_str());
    return 0;
}

int cmd_finetune(const std::string& config_path, const std::string& seed_path,
                 const std::string& out_dir, const std::vector<std::string>& overrides) {
    const RunConfig cfg = load_config(config_path, overrides);
    const LoadedCheckpoint loaded = load_checkpoint(seed_path);

    MlpSpec model;
    model.widths = cfg.has("model.widths") ? cfg.get_size_list("model.widths")
                                           : widths_from_layout(loaded.params.layout);
    model.activation = activation_from_string(cfg.get_string("model.activation", "tanh"));
    require_harness_model(model);
    if (model.param_count() != loaded.params.size())
        throw ConfigError("model.widths does not match the seed checkpoint");

    const TaskSpec task = task_from_config(cfg, model, /*with_shift=*/true);
    const TrainConfig tc = train_from_config(cfg);

    const SeedSnapshot seed(loaded.params);
    const Dataset ds = gen_task(task);
    const RunArtifacts artifacts = finetune(tc, model, seed, ds);

    std::filesystem::create_directories(out_dir);
    save_checkpoint(artifacts.final_params, out_dir + "/final.dstc", seed.checksum());
    save_delta(artifacts.delta, out_dir + "/delta.dstd");
    write_metrics_csv(out_dir + "/metrics.csv", artifacts.metrics);
    write_records_csv(out_dir + "/records.csv", artifacts.records);
    // overlap is undefined for empty subsets (all budgets rounded to zero)
    if (tc.method == TrainMethod::dst && !artifacts.records.empty() &&
        artifacts.records.front().selected_count > 0)
        write_churn_tsv(out_dir + "/churn.tsv", churn_series(artifacts.records));

    if (tc.method == TrainMethod::dst) {
        size_t budget_total = 0;
        const auto partition = build_partition(loaded.params.layout, tc.dst.scheme);
        for (const auto& s : partition.silos)
            budget_total += silo_budget(s.size, tc.dst.epsilon);
        std::printf(
            "final holdout loss %.6g, subset size %zu (budget %zu, bitwise coincidences "
            "%zu), wrote artifacts to %s\n",
            artifacts.final_holdout_loss, artifacts.delta.entries.size(), budget_total,
            budget_total > artifacts.delta.entries.size()
                ? budget_total - artifacts.delta.entries.size()
                : 0,
            out_dir.c_str());
    } else {
        std::printf("final holdout loss %.6g, subset size %zu, wrote artifacts to %s\n",
                    artifacts.final_holdout_loss, artifacts.delta.entries.size(),
                    out_dir.c_str());
    }
    return 0;
}

int cmd_apply(const std::string& seed_path, const std::string& delta_path,
              const std::string& out_path) {
    const LoadedCheckpoint seed_file = load_checkpoint(seed_path);
    const SeedSnapshot seed(seed_file.params);
    const SubsetDelta delta = load_delta(delta_path);
    if (delta.seed_checksum != seed.checksum()) {
        std::fprintf(stderr,
                     "checksum mismatch: delta built against %" PRIu64
                     ", seed file has %" PRIu64 "\n",
                     delta.seed_checksum, seed.checksum());
        return 3;
    }
    const ParamVector merged = apply(seed, delta);
    save_checkpoint(merged, out_path, seed.checksum());
    std::printf("applied %zu entries, wrote %s\n", delta.entries.size(), out_path.c_str());
    return 0;
}

int cmd_diff(const std::string& seed_path, const std::string& model_path,
             const std::string& out_path) {
    const LoadedCheckpoint seed_file = load_checkpoint(seed_path);
    const LoadedCheckpoint model_file = load_checkpoint(model_path);
    const SeedSnapshot seed(seed_file.params);
    const SubsetDelta delta = diff(seed, model_file.params);
    save_delta(delta, out_path);
    std::printf("delta has %zu entries, wrote %s\n", delta.entries.size(), out_path.c_str());
    return 0;
}

std::vector<size_t> delta_subset(const SubsetDelta& d) {
    std::vector<size_t> out;
    out.reserve(d.entries.size());
    for (const auto& e : d.entries) out.push_back(static_cast<size_t>(e.index));
    return out;
}

int cmd_overlap(const std::vector<std::string>& delta_paths) {
    std::vector<SubsetDelta> deltas;
    for (const auto& p : delta_paths) deltas.push_back(load_delta(p));
    for (size_t i = 1; i < deltas.size(); ++i)
        if (deltas[i].model_size != deltas[0].model_size)
            throw ConfigError("delta '" + delta_paths[i] + "' has model size " +
                              std::to_string(deltas[i].model_size) + ", expected " +
                              std::to_string(deltas[0].model_size));
    std::vector<std::vector<size_t>> subsets;
    for (const auto& d : deltas) subsets.push_back(delta_subset(d));
    const auto matrix = overlap_matrix(subsets);

    std::printf("overlap");
    for (const auto& p : delta_paths) std::printf(",%s", p.c_str());
    std::printf("\n");
    for (size_t i = 0; i < matrix.size(); ++i) {
        std::printf("%s", delta_paths[i].c_str());
        for (double v : matrix[i]) std::printf(",%.6f", v);
        std::printf("\n");
    }
    return 0;
}

int cmd_stats(const std::string& delta_path, const std::string& seed_path,
              const std::string& granularity) {
    const SubsetDelta delta = load_delta(delta_path);
    const LoadedCheckpoint seed_file = load_checkpoint(seed_path);
    if (delta.model_size != seed_file.params.size())
        throw ConfigError("delta model size does not match the seed checkpoint");
    const SiloScheme scheme = silo_scheme_from_string(granularity);
    const auto dist =
        module_distribution(delta_subset(delta), seed_file.params.layout, scheme);
    const SiloPartition partition = build_partition(seed_file.params.layout, scheme);

    std::printf("silo_id\tsilo_size\tfraction\n");
    for (const auto& silo : partition.silos)
        std::printf("%s\t%zu\t%.8f\n", silo.id.c_str(), silo.size, dist.at(silo.id));
    return 0;
}

volatile double g_bench_sink = 0.0;

double median_seconds(std::vector<double>& samples) {
    std::sort(samples.begin(), samples.end());
    return samples[samples.size() / 2];
}

int cmd_bench(const std::string& seed_path, const std::vector<std::string>& delta_paths,
              int64_t repetitions) {
    if (repetitions < 1) throw ConfigError("--reps must be >= 1");
    const LoadedCheckpoint seed_file = load_checkpoint(seed_path);
    const SeedSnapshot seed(seed_file.params);

    using clock = std::chrono::steady_clock;
    const auto time_of = [](auto&& fn) {
        const auto t0 = clock::now();
        fn();
        const auto t1 = clock::now();
        return std::chrono::duration<double>(t1 - t0).count();
    };

    // plain pass over the raw seed values, the baseline all overheads are
    // measured against
    std::vector<double> base_samples;
    for (int64_t r = 0; r < repetitions; ++r)
        base_samples.push_back(time_of([&] {
            double acc = 0.0;
            for (size_t i = 0; i < seed.size(); ++i) acc += seed.values()[i];
            g_bench_sink = acc;
        }));
    const double seed_forward = median_seconds(base_samples);

    std::printf("delta,entries,dense_apply_s,view_forward_s,seed_forward_s,view_overhead\n");
    for (const auto& path : delta_paths) {
        const SubsetDelta delta = load_delta(path);
        std::vector<double> dense_samples, view_samples;
        for (int64_t r = 0; r < repetitions; ++r) {
            dense_samples.push_back(time_of([&] {
                const ParamVector merged = apply(seed, delta);
                g_bench_sink = merged.values.empty() ? 0.0 : merged.values[0];
            }));
            const DeltaView view(seed, delta);
            view_samples.push_back(time_of([&] {
                double acc = 0.0;
                for (size_t i = 0; i < view.size(); ++i) acc += view[i];
                g_bench_sink = acc;
            }));
        }
        const double dense = median_seconds(dense_samples);
        const double viewt = median_seconds(view_samples);
        std::printf("%s,%zu,%.9f,%.9f,%.9f,%.6f\n", path.c_str(), delta.entries.size(),
                    dense, viewt, seed_forward,
                    seed_forward > 0.0 ? (viewt - seed_forward) / seed_forward : 0.0);
    }
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir,
              const std::vector<std::string>& overrides) {
    RunConfig cfg = load_config(config_path, overrides);
    // the grid supplies epsilon per cell
    if (!cfg.has("dst.epsilon")) cfg.apply_override("dst.epsilon=0.5");
    const MlpSpec model = model_from_config(cfg);
    const TaskSpec pre_task = task_from_config(cfg, model, /*with_shift=*/false);
    const TaskSpec fine_task = task_from_config(cfg, model, /*with_shift=*/true);
    const PretrainConfig pre = pretrain_from_config(cfg);
    TrainConfig base = train_from_config(cfg);
    base.method = TrainMethod::dst;

    const auto lrs = cfg.get_double_list("sweep.lrs");
    const auto epsilons = cfg.get_double_list("sweep.epsilons");
    const auto seeds = cfg.get_seed_list("sweep.seeds");
    for (double e : epsilons)
        if (!(e > 0.0 && e <= 1.0)) throw ConfigError("sweep.epsilons entries must be in (0, 1]");
    for (double lr : lrs)
        if (!(lr > 0.0)) throw ConfigError("sweep.lrs entries must be positive");

    const auto cells = lr_epsilon_sweep(model, pre_task, fine_task, pre, base, lrs,
                                        epsilons, seeds);

    std::filesystem::create_directories(out_dir);
    const std::string csv_path = out_dir + "/sweep.csv";
    std::ofstream out(csv_path);
    if (!out) throw IoError("cannot write '" + csv_path + "'");
    out << "lr,epsilon,seed,final_holdout_loss\n";
    for (const auto& c : cells)
        out << c.learning_rate << "," << c.epsilon << "," << c.seed << ","
            << c.final_holdout_loss << "\n";

    // stdout summary: per-epsilon argmin learning rate of the seed-mean loss
    std::printf("epsilon,best_lr,mean_loss\n");
    for (double eps : epsilons) {
        double best_lr = 0.0, best_mean = 0.0;
        bool first = true;
        for (double lr : lrs) {
            double sum = 0.0;
            size_t count = 0;
            for (const auto& c : cells)
                if (c.epsilon == eps && c.learning_rate == lr) {
                    sum += c.final_holdout_loss;
                    ++count;
                }
            const double mean = sum / static_cast<double>(count);
            if (first || mean < best_mean) {
                best_mean = mean;
                best_lr = lr;
                first = false;
            }
        }
        std::printf("%g,%g,%.6g\n", eps, best_lr, best_mean);
    }
    std::printf("wrote %s\n", csv_path.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dynamic subset tuning toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "run", seed_path, delta_path, model_path, out_path;
    std::string granularity = "per_module_and_layer";
    std::vector<std::string> overrides, delta_paths;
    int64_t repetitions = 5;

    auto* pre = app.add_subcommand("pretrain", "train a seed model on a synthetic task");
    pre->add_option("--config", config_path, "run config file")->required();
    pre->add_option("--out", out_dir, "output directory");
    pre->add_option("--set", overrides, "override config keys (key=value)");

    auto* fin = app.add_subcommand("finetune", "fine-tune from a seed checkpoint");
    fin->add_option("--config", config_path, "run config file")->required();
    fin->add_option("--seed", seed_path, "seed .dstc checkpoint")->required();
    fin->add_option("--out", out_dir, "output directory");
    fin->add_option("--set", overrides, "override config keys (key=value)");

    auto* app_cmd = app.add_subcommand("apply", "materialize seed + delta into a checkpoint");
    app_cmd->add_option("--seed", seed_path, "seed .dstc")->required();
    app_cmd->add_option("--delta", delta_path, "delta .dstd")->required();
    app_cmd->add_option("--out", out_path, "output .dstc")->required();

    auto* diff_cmd = app.add_subcommand("diff", "sparse delta between a model and its seed");
    diff_cmd->add_option("--seed", seed_path, "seed .dstc")->required();
    diff_cmd->add_option("--model", model_path, "fine-tuned .dstc")->required();
    diff_cmd->add_option("--out", out_path, "output .dstd")->required();

    auto* ovl = app.add_subcommand("overlap", "subset overlap matrix across deltas");
    ovl->add_option("deltas", delta_paths, "delta .dstd files")->required();

    auto* stats = app.add_subcommand("stats", "per-silo distribution of a delta");
    stats->add_option("--delta", delta_path, "delta .dstd")->required();
    stats->add_option("--seed", seed_path, "seed .dstc")->required();
    stats->add_option("--granularity", granularity, "none|per_module|per_module_and_layer");

    auto* bench = app.add_subcommand("bench", "dense-apply and on-the-fly read timings");
    bench->add_option("--seed", seed_path, "seed .dstc")->required();
    bench->add_option("--reps", repetitions, "timing repetitions");
    bench->add_option("deltas", delta_paths, "delta .dstd files")->required();

    auto* swp = app.add_subcommand("sweep", "learning-rate x epsilon grid experiment");
    swp->add_option("--config", config_path, "run config file")->required();
    swp->add_option("--out", out_dir, "output directory");
    swp->add_option("--set", overrides, "override config keys (key=value)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (pre->parsed()) return cmd_pretrain(config_path, out_dir, overrides);
        if (fin->parsed()) return cmd_finetune(config_path, seed_path, out_dir, overrides);
        if (app_cmd->parsed()) return cmd_apply(seed_path, delta_path, out_path);
        if (diff_cmd->parsed()) return cmd_diff(seed_path, model_path, out_path);
        if (ovl->parsed()) return cmd_overlap(delta_paths);
        if (stats->parsed()) return cmd_stats(delta_path, seed_path, granularity);
        if (bench->parsed()) return cmd_bench(seed_path, delta_paths, repetitions);
        if (swp->parsed()) return cmd_sweep(config_path, out_dir, overrides);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const DataError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
