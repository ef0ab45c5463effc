#include "dst/partition.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace dst {

const char* to_string(SiloScheme scheme) {
    switch (scheme) {
        case SiloScheme::none: return "none";
        case SiloScheme::per_module: return "per_module";
        case SiloScheme::per_module_and_layer: return "per_module_and_layer";
    }
    return "?";
}

SiloScheme silo_scheme_from_string(std::string_view text) {
    if (text == "none") return SiloScheme::none;
    if (text == "per_module") return SiloScheme::per_module;
    if (text == "per_module_and_layer") return SiloScheme::per_module_and_layer;
    throw std::invalid_argument("unknown silo scheme '" + std::string(text) + "'");
}

SiloPartition build_partition(const ParamLayout& layout, SiloScheme scheme) {
    SiloPartition out;
    out.scheme = scheme;
    out.total = layout.size();

    if (scheme == SiloScheme::none) {
        Silo all;
        all.id = "ALL";
        if (layout.size() > 0) all.ranges.push_back({0, layout.size()});
        all.size = layout.size();
        out.silos.push_back(std::move(all));
        return out;
    }

    // silo key -> position in out.silos, keyed by first appearance
    std::map<std::string, size_t> index;
    for (const auto& g : layout.groups()) {
        std::string id = scheme == SiloScheme::per_module
                             ? g.module_kind
                             : g.module_kind + "@" + std::to_string(g.layer_index);
        auto [it, inserted] = index.emplace(id, out.silos.size());
        if (inserted) out.silos.push_back(Silo{id, {}, 0});
        Silo& silo = out.silos[it->second];
        if (g.length > 0) {
            silo.ranges.push_back({g.offset, g.offset + g.length});
            silo.size += g.length;
        }
    }
    return out;
}

void validate_partition(const SiloPartition& partition, size_t n) {
    std::vector<IndexRange> all;
    for (const auto& s : partition.silos)
        all.insert(all.end(), s.ranges.begin(), s.ranges.end());
    std::sort(all.begin(), all.end(),
              [](const IndexRange& a, const IndexRange& b) { return a.begin < b.begin; });

    size_t cursor = 0;
    for (const auto& r : all) {
        if (r.begin < cursor)
            throw std::invalid_argument("partition overlap at index " +
                                        std::to_string(r.begin));
        if (r.begin > cursor)
            throw std::invalid_argument("partition gap at index " + std::to_string(cursor));
        cursor = r.end;
    }
    if (cursor < n)
        throw std::invalid_argument("partition gap at index " + std::to_string(cursor));
    if (cursor > n)
        throw std::invalid_argument("partition covers index " + std::to_string(cursor - 1) +
                                    " beyond size " + std::to_string(n));
}

size_t silo_budget(size_t silo_size, double epsilon) {
    if (!(epsilon > 0.0) || epsilon > 1.0)
        throw std::invalid_argument("epsilon must be in (0, 1], got " +
                                    std::to_string(epsilon));
    const double x = epsilon * static_cast<double>(silo_size);
    const double fl = std::floor(x);
    const double frac = x - fl;
    // Tolerance absorbs representation error in epsilon*size so that e.g.
    // 0.1 * 45 still counts as an exact half.
    const double tol = 1e-9 * std::max(1.0, x);
    double k;
    if (std::abs(frac - 0.5) <= tol)
        k = std::fmod(fl, 2.0) == 0.0 ? fl : fl + 1.0;
    else
        k = frac > 0.5 ? fl + 1.0 : fl;
    return static_cast<size_t>(k);
}

}  // namespace dst
