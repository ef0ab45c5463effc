#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dst/param_store.hpp"

namespace dst {

enum class SiloScheme { none, per_module, per_module_and_layer };

const char* to_string(SiloScheme scheme);
SiloScheme silo_scheme_from_string(std::string_view text);

struct IndexRange {
    size_t begin = 0;
    size_t end = 0;  // half-open
    size_t size() const { return end - begin; }
};

struct Silo {
    std::string id;
    std::vector<IndexRange> ranges;  // ascending, non-adjacent merged not required
    size_t size = 0;
};

// Mutually exclusive, jointly exhaustive division of [0, n).
struct SiloPartition {
    std::vector<Silo> silos;
    SiloScheme scheme = SiloScheme::none;
    size_t total = 0;
};

// none -> one silo "ALL"; per_module -> one silo per module_kind;
// per_module_and_layer -> one silo per (module_kind, layer_index), with id
// "kind@layer". Silo order follows first appearance in the layout.
SiloPartition build_partition(const ParamLayout& layout, SiloScheme scheme);

// Checks disjointness and coverage of [0, n); names the first duplicated or
// missing index on failure.
void validate_partition(const SiloPartition& partition, size_t n);

// Per-silo free-parameter budget: round-half-to-even(epsilon * |S|).
size_t silo_budget(size_t silo_size, double epsilon);

}  // namespace dst
