#include "dst/task.hpp"

#include <cmath>
#include <stdexcept>

#include "dst/rng.hpp"

namespace dst {

const char* to_string(TaskKind k) {
    return k == TaskKind::teacher_regression ? "teacher_regression" : "blob_classification";
}

TaskKind task_kind_from_string(std::string_view text) {
    if (text == "teacher_regression") return TaskKind::teacher_regression;
    if (text == "blob_classification") return TaskKind::blob_classification;
    throw std::invalid_argument("unknown task kind '" + std::string(text) + "'");
}

uint64_t sub_seed(uint64_t base, uint64_t stream) {
    uint64_t state = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
    return splitmix64_next(state);
}

MlpSpec teacher_spec(const TaskSpec& task) {
    MlpSpec spec;
    spec.widths = {task.input_dim, task.teacher_hidden, task.output_dim};
    spec.activation = Activation::tanh_fn;
    spec.init_seed = sub_seed(task.rng_seed, 0);
    return spec;
}

namespace {

// k distinct draws from [0, n) via partial Fisher-Yates
std::vector<size_t> sample_without_replacement(size_t n, size_t k, Xoshiro256& rng) {
    std::vector<size_t> pool(n);
    for (size_t i = 0; i < n; ++i) pool[i] = i;
    for (size_t i = 0; i < k; ++i) {
        const size_t j = i + static_cast<size_t>(rng.below(n - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
}

void apply_weight_shift(ParamVector& params, double fraction, double scale,
                        uint64_t seed) {
    if (fraction <= 0.0) return;
    std::vector<size_t> weight_indices;
    for (const auto& g : params.layout.groups())
        if (g.module_kind == "weight")
            for (size_t i = g.offset; i < g.offset + g.length; ++i)
                weight_indices.push_back(i);
    const auto k = static_cast<size_t>(
        std::ceil(fraction * static_cast<double>(weight_indices.size())));
    Xoshiro256 rng(seed);
    const auto picks = sample_without_replacement(weight_indices.size(), k, rng);
    for (size_t p : picks) {
        const size_t idx = weight_indices[p];
        params.values[idx] += static_cast<float>(scale * rng.normal());
    }
}

}  // namespace

ParamVector teacher_params(const TaskSpec& task) {
    ParamVector params = init_mlp(teacher_spec(task));
    // Teacher biases come from the same stream so targets are not centered.
    Xoshiro256 rng(sub_seed(task.rng_seed, 4));
    for (const auto& g : params.layout.groups())
        if (g.module_kind == "bias")
            for (size_t i = g.offset; i < g.offset + g.length; ++i)
                params.values[i] = static_cast<float>(0.1 * rng.normal());
    apply_weight_shift(params, task.shift_fraction, task.shift_scale, task.shift_seed);
    return params;
}

Dataset gen_task(const TaskSpec& task) {
    if (task.samples == 0) throw std::invalid_argument("gen_task: zero samples");
    if (task.input_dim == 0 || task.output_dim == 0)
        throw std::invalid_argument("gen_task: zero input/output dimension");

    Dataset ds;
    ds.inputs = Matrix(task.samples, task.input_dim);
    ds.targets = Matrix(task.samples, task.output_dim);

    if (task.kind == TaskKind::teacher_regression) {
        Xoshiro256 data_rng(sub_seed(task.rng_seed, 1));
        for (double& v : ds.inputs.data) v = data_rng.normal();

        const MlpSpec teacher = teacher_spec(task);
        const ParamVector weights = teacher_params(task);
        ds.targets = mlp_forward(teacher, weights, ds.inputs);

        Xoshiro256 noise_rng(sub_seed(task.rng_seed, 2));
        if (task.noise_scale != 0.0)
            for (double& v : ds.targets.data) v += task.noise_scale * noise_rng.normal();
        return ds;
    }

    // blob_classification: output_dim classes, one-hot targets, inputs are
    // class mean + noise_scale * N(0, I)
    const size_t classes = task.output_dim;
    Matrix means(classes, task.input_dim);
    Xoshiro256 mean_rng(sub_seed(task.rng_seed, 3));
    for (double& v : means.data) v = task.class_spread * mean_rng.normal();

    if (task.shift_fraction > 0.0) {
        Xoshiro256 shift_rng(task.shift_seed);
        const auto k = static_cast<size_t>(
            std::ceil(task.shift_fraction * static_cast<double>(means.data.size())));
        const auto picks = sample_without_replacement(means.data.size(), k, shift_rng);
        for (size_t p : picks) means.data[p] += task.shift_scale * shift_rng.normal();
    }

    Xoshiro256 data_rng(sub_seed(task.rng_seed, 1));
    for (size_t r = 0; r < task.samples; ++r) {
        const size_t c = r % classes;
        for (size_t i = 0; i < task.input_dim; ++i)
            ds.inputs.at(r, i) = means.at(c, i) + task.noise_scale * data_rng.normal();
        ds.targets.at(r, c) = 1.0;
    }
    return ds;
}

}  // namespace dst
