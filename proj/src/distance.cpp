#include "dst/distance.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace dst {

namespace {
constexpr double kDenomFloor = 1e-12;
}

const char* to_string(DistanceKind kind) {
    switch (kind) {
        case DistanceKind::absolute: return "absolute";
        case DistanceKind::relative: return "relative";
        case DistanceKind::inverse_relative: return "inverse_relative";
    }
    return "?";
}

DistanceKind distance_kind_from_string(std::string_view text) {
    if (text == "absolute") return DistanceKind::absolute;
    if (text == "relative") return DistanceKind::relative;
    if (text == "inverse_relative") return DistanceKind::inverse_relative;
    throw std::invalid_argument("unknown distance kind '" + std::string(text) + "'");
}

std::vector<double> score(DistanceKind kind, std::span<const float> theta_hat,
                          std::span<const float> seed) {
    if (theta_hat.size() != seed.size())
        throw std::invalid_argument("score: length mismatch (" +
                                    std::to_string(theta_hat.size()) + " vs " +
                                    std::to_string(seed.size()) + ")");
    std::vector<double> delta(seed.size());
    for (size_t i = 0; i < seed.size(); ++i) {
        const double s = seed[i];
        const double t = theta_hat[i];
        if (std::isnan(s) || std::isnan(t))
            throw std::invalid_argument("score: NaN input at index " + std::to_string(i));
        const double u = s - t;
        switch (kind) {
            case DistanceKind::absolute:
                delta[i] = std::abs(u);
                break;
            case DistanceKind::relative:
                delta[i] = std::abs(u) / std::max(std::abs(s), kDenomFloor);
                break;
            case DistanceKind::inverse_relative:
                delta[i] = std::abs(s * u);
                break;
        }
    }
    return delta;
}

std::vector<double> score(DistanceKind kind, const ParamVector& theta_hat,
                          const SeedSnapshot& seed) {
    return score(kind, std::span<const float>(theta_hat.values), seed.values());
}

void normalize_scores(std::span<double> delta, const ParamLayout& layout,
                      std::span<const float> seed, const NormalizationMode& mode) {
    if (mode.kind == NormalizationMode::Kind::none) return;
    if (delta.size() != layout.size() || seed.size() != layout.size())
        throw std::invalid_argument("normalize_scores: length mismatch against layout");

    // Merge layout groups at the requested granularity.
    std::map<std::string, std::vector<const LayoutGroup*>> merged;
    for (const auto& g : layout.groups()) {
        std::string key = mode.granularity == NormGranularity::per_module
                              ? g.module_kind
                              : g.module_kind + "@" + std::to_string(g.layer_index);
        merged[key].push_back(&g);
    }

    for (const auto& [key, groups] : merged) {
        size_t count = 0;
        for (const auto* g : groups) count += g->length;
        if (count == 0) continue;

        double divisor;
        if (mode.kind == NormalizationMode::Kind::size) {
            divisor = static_cast<double>(count);
        } else {
            double sum_abs = 0.0;
            for (const auto* g : groups)
                for (size_t i = g->offset; i < g->offset + g->length; ++i)
                    sum_abs += std::abs(static_cast<double>(seed[i]));
            divisor = std::max(sum_abs / static_cast<double>(count), kDenomFloor);
        }
        for (const auto* g : groups)
            for (size_t i = g->offset; i < g->offset + g->length; ++i) delta[i] /= divisor;
    }
}

}  // namespace dst
