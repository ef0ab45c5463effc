#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "dst/optimizer.hpp"
#include "dst/param_store.hpp"
#include "dst/partition.hpp"

namespace dst {

// |a ∩ b| / |a|. Asymmetric when the sets differ in size; a must be
// non-empty, both must be sorted unique.
double overlap(std::span<const size_t> a, std::span<const size_t> b);

// M[i][j] = overlap(subsets[i], subsets[j]); diagonal 1.0.
std::vector<std::vector<double>> overlap_matrix(
    const std::vector<std::vector<size_t>>& subsets);

// Fraction of the subset falling in each silo of the given granularity:
// |subset ∩ silo| / |silo|.
std::map<std::string, double> module_distribution(std::span<const size_t> subset,
                                                  const ParamLayout& layout,
                                                  SiloScheme granularity);

struct ChurnSeries {
    std::vector<int64_t> steps;
    std::vector<double> vs_first;     // overlap(subset_t, subset_0)
    std::vector<double> vs_previous;  // overlap(subset_t, subset_{t-1}); 1.0 at t=0
};

// Subset-evolution series from checkpointed step records. Every record must
// carry its full subset.
ChurnSeries churn_series(const std::vector<DstStepRecord>& records);

}  // namespace dst
