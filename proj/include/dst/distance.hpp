#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "dst/param_store.hpp"

namespace dst {

// Component-wise distance between the fully updated parameters and the seed.
// absolute:         |seed_i - theta_hat_i|
// relative:         |seed_i - theta_hat_i| / max(|seed_i|, 1e-12)
// inverse_relative: |seed_i * (seed_i - theta_hat_i)|
enum class DistanceKind { absolute, relative, inverse_relative };

const char* to_string(DistanceKind kind);
DistanceKind distance_kind_from_string(std::string_view text);

enum class NormGranularity { per_module, per_module_and_layer };

struct NormalizationMode {
    enum class Kind { none, size, mean };
    Kind kind = Kind::none;
    NormGranularity granularity = NormGranularity::per_module;
};

// Distance vector over all n components; all outputs finite and >= 0.
std::vector<double> score(DistanceKind kind, std::span<const float> theta_hat,
                          std::span<const float> seed);
std::vector<double> score(DistanceKind kind, const ParamVector& theta_hat,
                          const SeedSnapshot& seed);

// In-place normalization of the distance vector. size: divide by the
// parameter count of the component's group; mean: divide by mean(|seed|)
// over the group (clamped at 1e-12); none: no-op.
void normalize_scores(std::span<double> delta, const ParamLayout& layout,
                      std::span<const float> seed, const NormalizationMode& mode);

}  // namespace dst
