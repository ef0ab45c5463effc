#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "dst/param_store.hpp"

namespace dst {

// Row-major double matrix; the harness computes in double and keeps the
// canonical parameters in float32.
struct Matrix {
    size_t rows = 0;
    size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(size_t r, size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
    double& at(size_t r, size_t c) { return data[r * cols + c]; }
    double at(size_t r, size_t c) const { return data[r * cols + c]; }
};

enum class Activation { tanh_fn, relu };
enum class LossKind { mse, cross_entropy };

const char* to_string(Activation a);
Activation activation_from_string(std::string_view text);
const char* to_string(LossKind k);
LossKind loss_kind_from_string(std::string_view text);

// Dense MLP: widths[0] inputs, widths.back() outputs, activation on hidden
// layers, linear output. Layer l contributes groups "layer{l}.weight"
// (row-major [out][in]) and "layer{l}.bias".
struct MlpSpec {
    std::vector<size_t> widths;
    Activation activation = Activation::tanh_fn;
    uint64_t init_seed = 1;

    size_t layer_count() const { return widths.empty() ? 0 : widths.size() - 1; }
    size_t param_count() const;
    void validate() const;
};

ParamLayout mlp_layout(const MlpSpec& spec);

// Xavier-uniform weights, zero biases; deterministic from init_seed.
ParamVector init_mlp(const MlpSpec& spec);

// Exact widening float32 -> double, in layout order.
std::vector<double> widen(const ParamVector& params);

struct ForwardCache {
    std::vector<Matrix> pre;  // z per layer
    std::vector<Matrix> act;  // a per layer; act[0] is the input batch
};

Matrix mlp_forward(const MlpSpec& spec, std::span<const double> params,
                   const Matrix& inputs, ForwardCache* cache = nullptr);
Matrix mlp_forward(const MlpSpec& spec, const ParamVector& params, const Matrix& inputs);

double mlp_loss(const MlpSpec& spec, std::span<const double> params, const Matrix& inputs,
                const Matrix& targets, LossKind loss);

struct LossGrad {
    double loss = 0.0;
    std::vector<double> grads;  // d(mean loss)/d(param), flattened in layout order
};

LossGrad mlp_backward(const MlpSpec& spec, std::span<const double> params,
                      const Matrix& inputs, const Matrix& targets, LossKind loss);

}  // namespace dst
