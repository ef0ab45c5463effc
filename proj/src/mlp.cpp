#include "dst/mlp.hpp"

#include <cmath>
#include <stdexcept>

#include "dst/rng.hpp"

namespace dst {

const char* to_string(Activation a) {
    return a == Activation::tanh_fn ? "tanh" : "relu";
}

Activation activation_from_string(std::string_view text) {
    if (text == "tanh") return Activation::tanh_fn;
    if (text == "relu") return Activation::relu;
    throw std::invalid_argument("unknown activation '" + std::string(text) + "'");
}

const char* to_string(LossKind k) {
    return k == LossKind::mse ? "mse" : "cross_entropy";
}

LossKind loss_kind_from_string(std::string_view text) {
    if (text == "mse") return LossKind::mse;
    if (text == "cross_entropy") return LossKind::cross_entropy;
    throw std::invalid_argument("unknown loss '" + std::string(text) + "'");
}

void MlpSpec::validate() const {
    if (widths.size() < 2)
        throw std::invalid_argument("MLP needs at least input and output widths");
    for (size_t w : widths)
        if (w == 0) throw std::invalid_argument("MLP layer width must be positive");
}

size_t MlpSpec::param_count() const {
    size_t n = 0;
    for (size_t l = 0; l + 1 < widths.size(); ++l) n += widths[l] * widths[l + 1] + widths[l + 1];
    return n;
}

ParamLayout mlp_layout(const MlpSpec& spec) {
    spec.validate();
    std::vector<LayoutGroup> groups;
    size_t offset = 0;
    for (size_t l = 0; l + 1 < spec.widths.size(); ++l) {
        const size_t in = spec.widths[l];
        const size_t out = spec.widths[l + 1];
        groups.push_back({"layer" + std::to_string(l) + ".weight", "weight",
                          static_cast<uint32_t>(l), offset, in * out});
        offset += in * out;
        groups.push_back({"layer" + std::to_string(l) + ".bias", "bias",
                          static_cast<uint32_t>(l), offset, out});
        offset += out;
    }
    return ParamLayout(std::move(groups));
}

ParamVector init_mlp(const MlpSpec& spec) {
    ParamVector params;
    params.layout = mlp_layout(spec);
    params.values.assign(params.layout.size(), 0.0f);
    Xoshiro256 rng(spec.init_seed);
    size_t offset = 0;
    for (size_t l = 0; l + 1 < spec.widths.size(); ++l) {
        const size_t in = spec.widths[l];
        const size_t out = spec.widths[l + 1];
        const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
        for (size_t i = 0; i < in * out; ++i)
            params.values[offset + i] = static_cast<float>(rng.uniform(-limit, limit));
        offset += in * out + out;  // biases stay zero
    }
    return params;
}

std::vector<double> widen(const ParamVector& params) {
    return {params.values.begin(), params.values.end()};
}

namespace {

double activate(Activation a, double z) {
    return a == Activation::tanh_fn ? std::tanh(z) : (z > 0.0 ? z : 0.0);
}

// derivative expressed via cached pre-activation z and activation value y
double activate_grad(Activation a, double z, double y) {
    return a == Activation::tanh_fn ? 1.0 - y * y : (z > 0.0 ? 1.0 : 0.0);
}

void check_shapes(const MlpSpec& spec, std::span<const double> params,
                  const Matrix& inputs) {
    spec.validate();
    if (params.size() != spec.param_count())
        throw std::invalid_argument("parameter count " + std::to_string(params.size()) +
                                    " does not match MLP spec (" +
                                    std::to_string(spec.param_count()) + ")");
    if (inputs.cols != spec.widths.front())
        throw std::invalid_argument("input dim " + std::to_string(inputs.cols) +
                                    " does not match MLP input width " +
                                    std::to_string(spec.widths.front()));
}

struct LayerView {
    const double* w;  // [out][in]
    const double* b;
    size_t in, out;
};

LayerView layer_view(const MlpSpec& spec, std::span<const double> params, size_t l,
                     size_t offset) {
    const size_t in = spec.widths[l];
    const size_t out = spec.widths[l + 1];
    return {params.data() + offset, params.data() + offset + in * out, in, out};
}

double loss_from_outputs(const Matrix& outputs, const Matrix& targets, LossKind loss,
                         Matrix* dloss_dz) {
    if (targets.rows != outputs.rows || targets.cols != outputs.cols)
        throw std::invalid_argument("target shape does not match network output shape");
    const auto batch = static_cast<double>(outputs.rows);
    double total = 0.0;
    if (dloss_dz) *dloss_dz = Matrix(outputs.rows, outputs.cols);

    if (loss == LossKind::mse) {
        for (size_t r = 0; r < outputs.rows; ++r)
            for (size_t c = 0; c < outputs.cols; ++c) {
                const double e = outputs.at(r, c) - targets.at(r, c);
                total += 0.5 * e * e;
                if (dloss_dz) dloss_dz->at(r, c) = e / batch;
            }
        return total / batch;
    }

    // cross_entropy: softmax over the output logits, targets as (one-hot or
    // soft) distributions
    if (outputs.cols < 2)
        throw std::invalid_argument("cross_entropy requires at least 2 outputs");
    for (size_t r = 0; r < outputs.rows; ++r) {
        double mx = outputs.at(r, 0);
        for (size_t c = 1; c < outputs.cols; ++c) mx = std::max(mx, outputs.at(r, c));
        double sum_exp = 0.0;
        for (size_t c = 0; c < outputs.cols; ++c) sum_exp += std::exp(outputs.at(r, c) - mx);
        const double log_z = mx + std::log(sum_exp);
        double target_mass = 0.0;
        for (size_t c = 0; c < outputs.cols; ++c) {
            total -= targets.at(r, c) * (outputs.at(r, c) - log_z);
            target_mass += targets.at(r, c);
        }
        if (dloss_dz)
            for (size_t c = 0; c < outputs.cols; ++c) {
                const double p = std::exp(outputs.at(r, c) - log_z);
                dloss_dz->at(r, c) = (p * target_mass - targets.at(r, c)) / batch;
            }
    }
    return total / batch;
}

}  // namespace

Matrix mlp_forward(const MlpSpec& spec, std::span<const double> params,
                   const Matrix& inputs, ForwardCache* cache) {
    check_shapes(spec, params, inputs);
    const size_t layers = spec.layer_count();
    if (cache) {
        cache->pre.assign(layers, {});
        cache->act.assign(layers + 1, {});
        cache->act[0] = inputs;
    }

    Matrix current = inputs;
    size_t offset = 0;
    for (size_t l = 0; l < layers; ++l) {
        const LayerView lv = layer_view(spec, params, l, offset);
        offset += lv.in * lv.out + lv.out;
        Matrix z(current.rows, lv.out);
        for (size_t r = 0; r < current.rows; ++r)
            for (size_t j = 0; j < lv.out; ++j) {
                double acc = lv.b[j];
                const double* wrow = lv.w + j * lv.in;
                for (size_t i = 0; i < lv.in; ++i) acc += wrow[i] * current.at(r, i);
                z.at(r, j) = acc;
            }
        if (cache) cache->pre[l] = z;
        const bool is_output = l + 1 == layers;
        if (!is_output)
            for (double& v : z.data) v = activate(spec.activation, v);
        if (cache) cache->act[l + 1] = z;
        current = std::move(z);
    }
    return current;
}

Matrix mlp_forward(const MlpSpec& spec, const ParamVector& params, const Matrix& inputs) {
    const auto wide = widen(params);
    return mlp_forward(spec, wide, inputs);
}

double mlp_loss(const MlpSpec& spec, std::span<const double> params, const Matrix& inputs,
                const Matrix& targets, LossKind loss) {
    const Matrix outputs = mlp_forward(spec, params, inputs);
    return loss_from_outputs(outputs, targets, loss, nullptr);
}

LossGrad mlp_backward(const MlpSpec& spec, std::span<const double> params,
                      const Matrix& inputs, const Matrix& targets, LossKind loss) {
    ForwardCache cache;
    const Matrix outputs = mlp_forward(spec, params, inputs, &cache);

    LossGrad out;
    Matrix delta;  // d(loss)/d(z) for the layer being processed
    out.loss = loss_from_outputs(outputs, targets, loss, &delta);
    out.grads.assign(params.size(), 0.0);

    const size_t layers = spec.layer_count();
    std::vector<size_t> offsets(layers);
    size_t offset = 0;
    for (size_t l = 0; l < layers; ++l) {
        offsets[l] = offset;
        offset += spec.widths[l] * spec.widths[l + 1] + spec.widths[l + 1];
    }

    for (size_t l = layers; l-- > 0;) {
        const LayerView lv = layer_view(spec, params, l, offsets[l]);
        const Matrix& a_in = cache.act[l];
        double* gw = out.grads.data() + offsets[l];
        double* gb = gw + lv.in * lv.out;

        for (size_t r = 0; r < delta.rows; ++r)
            for (size_t j = 0; j < lv.out; ++j) {
                const double d = delta.at(r, j);
                if (d == 0.0) continue;
                double* gwrow = gw + j * lv.in;
                for (size_t i = 0; i < lv.in; ++i) gwrow[i] += d * a_in.at(r, i);
                gb[j] += d;
            }

        if (l == 0) break;
        Matrix prev_delta(delta.rows, lv.in);
        for (size_t r = 0; r < delta.rows; ++r)
            for (size_t i = 0; i < lv.in; ++i) {
                double acc = 0.0;
                for (size_t j = 0; j < lv.out; ++j)
                    acc += lv.w[j * lv.in + i] * delta.at(r, j);
                prev_delta.at(r, i) =
                    acc * activate_grad(spec.activation, cache.pre[l - 1].at(r, i),
                                        cache.act[l].at(r, i));
            }
        delta = std::move(prev_delta);
    }
    return out;
}

}  // namespace dst
