#include "dst/analysis.hpp"

#include <algorithm>
#include <stdexcept>

namespace dst {

double overlap(std::span<const size_t> a, std::span<const size_t> b) {
    if (a.empty()) throw std::invalid_argument("overlap: first subset is empty");
    size_t common = 0;
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) {
            ++common;
            ++i;
            ++j;
        } else if (a[i] < b[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    return static_cast<double>(common) / static_cast<double>(a.size());
}

std::vector<std::vector<double>> overlap_matrix(
    const std::vector<std::vector<size_t>>& subsets) {
    for (size_t i = 0; i < subsets.size(); ++i)
        if (subsets[i].empty())
            throw std::invalid_argument("overlap_matrix: subset " + std::to_string(i) +
                                        " is empty");
    std::vector<std::vector<double>> m(subsets.size(),
                                       std::vector<double>(subsets.size(), 0.0));
    for (size_t i = 0; i < subsets.size(); ++i)
        for (size_t j = 0; j < subsets.size(); ++j)
            m[i][j] = i == j ? 1.0 : overlap(subsets[i], subsets[j]);
    return m;
}

std::map<std::string, double> module_distribution(std::span<const size_t> subset,
                                                  const ParamLayout& layout,
                                                  SiloScheme granularity) {
    const SiloPartition partition = build_partition(layout, granularity);
    std::map<std::string, double> out;
    for (const auto& silo : partition.silos) {
        size_t hits = 0;
        for (const auto& range : silo.ranges) {
            auto lo = std::lower_bound(subset.begin(), subset.end(), range.begin);
            auto hi = std::lower_bound(subset.begin(), subset.end(), range.end);
            hits += static_cast<size_t>(hi - lo);
        }
        out[silo.id] = silo.size == 0
                           ? 0.0
                           : static_cast<double>(hits) / static_cast<double>(silo.size);
    }
    return out;
}

ChurnSeries churn_series(const std::vector<DstStepRecord>& records) {
    ChurnSeries out;
    for (size_t t = 0; t < records.size(); ++t) {
        const auto& rec = records[t];
        if (rec.subset.size() != rec.selected_count)
            throw std::invalid_argument(
                "churn_series: record for step " + std::to_string(rec.step) +
                " does not carry its full subset");
        out.steps.push_back(rec.step);
        out.vs_first.push_back(t == 0 ? 1.0 : overlap(rec.subset, records[0].subset));
        out.vs_previous.push_back(t == 0 ? 1.0 : overlap(rec.subset, records[t - 1].subset));
    }
    return out;
}

}  // namespace dst
