#pragma once

#include <cstdint>
#include <string_view>

#include "dst/mlp.hpp"
#include "dst/param_store.hpp"

namespace dst {

enum class TaskKind { teacher_regression, blob_classification };

const char* to_string(TaskKind k);
TaskKind task_kind_from_string(std::string_view text);

// Synthetic transfer tasks. The fine-tune variant of a task is the same spec
// with shift_fraction > 0: a fraction of the teacher weights (or class mean
// entries) is perturbed, so a seed model trained on the unshifted task is
// near-correct and small update subsets suffice.
struct TaskSpec {
    TaskKind kind = TaskKind::teacher_regression;
    size_t input_dim = 16;
    size_t output_dim = 8;
    size_t samples = 2048;
    double noise_scale = 0.05;  // target noise (regression) / within-class std (blobs)
    uint64_t rng_seed = 11;

    size_t teacher_hidden = 32;  // teacher_regression: teacher is [in, hidden, out]
    double class_spread = 3.0;   // blob_classification: scale of class means

    double shift_fraction = 0.0;
    double shift_scale = 0.0;
    uint64_t shift_seed = 1;
};

struct Dataset {
    Matrix inputs;
    Matrix targets;
};

// Derives independent deterministic streams from one seed.
uint64_t sub_seed(uint64_t base, uint64_t stream);

MlpSpec teacher_spec(const TaskSpec& task);

// Teacher parameters, with the shift applied when shift_fraction > 0.
// Only weight-kind parameters are shifted.
ParamVector teacher_params(const TaskSpec& task);

Dataset gen_task(const TaskSpec& task);

}  // namespace dst
