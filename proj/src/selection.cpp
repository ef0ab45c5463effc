#include "dst/selection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dst {

const char* to_string(SelectionMode::Kind kind) {
    return kind == SelectionMode::Kind::exact_topk ? "exact_topk" : "iterative";
}

SelectionMode::Kind selection_kind_from_string(std::string_view text) {
    if (text == "exact_topk") return SelectionMode::Kind::exact_topk;
    if (text == "iterative") return SelectionMode::Kind::iterative;
    throw std::invalid_argument("unknown selection mode '" + std::string(text) + "'");
}

double ThresholdState::get(const std::string& silo_id) const {
    auto it = thresholds_.find(silo_id);
    if (it == thresholds_.end())
        throw std::invalid_argument("threshold state has no entry for silo '" + silo_id + "'");
    return it->second;
}

void ThresholdState::set(const std::string& silo_id, double q) {
    if (!(q > 0.0))
        throw std::invalid_argument("threshold for silo '" + silo_id +
                                    "' must be positive, got " + std::to_string(q));
    thresholds_[silo_id] = q;
}

std::vector<size_t> topk_exact(std::span<const double> delta, size_t k) {
    if (k > delta.size())
        throw std::invalid_argument("topk_exact: k=" + std::to_string(k) +
                                    " exceeds silo size " + std::to_string(delta.size()));
    std::vector<size_t> order(delta.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    if (k == 0) return {};
    const auto larger = [&delta](size_t a, size_t b) {
        return delta[a] > delta[b] || (delta[a] == delta[b] && a < b);
    };
    if (k < order.size())
        std::nth_element(order.begin(), order.begin() + static_cast<ptrdiff_t>(k) - 1,
                         order.end(), larger);
    order.resize(k);
    std::sort(order.begin(), order.end());
    return order;
}

double count_above(std::span<const double> delta, double q) {
    if (delta.empty()) throw std::invalid_argument("count_above: empty distance vector");
    size_t count = 0;
    for (double d : delta) count += d > q ? 1 : 0;
    return static_cast<double>(count) / static_cast<double>(delta.size());
}

double refine_threshold(double q_prev, std::span<const double> delta, double epsilon,
                        int m, double r) {
    if (!(q_prev > 0.0))
        throw std::invalid_argument("refine_threshold: q_prev must be positive");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("refine_threshold: epsilon must be in (0, 1)");
    if (m < 1) throw std::invalid_argument("refine_threshold: m must be >= 1");
    if (!(r > 1.0)) throw std::invalid_argument("refine_threshold: r must be > 1");

    double q_lo = q_prev / r;
    double q_mi = q_prev;
    double q_hi = r * q_prev;
    for (int k = 0; k < m; ++k) {
        if (count_above(delta, q_mi) > epsilon)
            q_lo = q_mi;
        else
            q_hi = q_mi;
        q_mi = (q_lo + q_hi) / 2.0;
    }
    const double err_lo = std::abs(count_above(delta, q_lo) - epsilon);
    const double err_hi = std::abs(count_above(delta, q_hi) - epsilon);
    return err_lo < err_hi ? q_lo : q_hi;
}

namespace {

// Threshold q with {delta > q} equal to the exact top-k set (up to ties):
// the largest unselected value, clamped positive for the q_S > 0 invariant.
double bootstrap_threshold(std::vector<double>& values, size_t k) {
    const size_t n = values.size();
    if (k == 0) {
        const double mx = n == 0 ? 0.0 : *std::max_element(values.begin(), values.end());
        return mx > 0.0 ? mx : 1.0;
    }
    if (k >= n) {
        double smallest_positive = 0.0;
        for (double v : values)
            if (v > 0.0 && (smallest_positive == 0.0 || v < smallest_positive))
                smallest_positive = v;
        return smallest_positive > 0.0 ? smallest_positive / 2.0 : 1.0;
    }
    std::nth_element(values.begin(), values.begin() + static_cast<ptrdiff_t>(k),
                     values.end(), std::greater<double>());
    const double boundary = values[k];  // (k+1)-th largest
    if (boundary > 0.0) return boundary;
    std::nth_element(values.begin(), values.begin() + static_cast<ptrdiff_t>(k) - 1,
                     values.end(), std::greater<double>());
    const double smallest_selected = values[k - 1];
    return smallest_selected > 0.0 ? smallest_selected / 2.0 : 1.0;
}

std::vector<size_t> silo_global_indices(const Silo& silo) {
    std::vector<size_t> out;
    out.reserve(silo.size);
    for (const auto& r : silo.ranges)
        for (size_t i = r.begin; i < r.end; ++i) out.push_back(i);
    return out;
}

}  // namespace

SelectionResult select(std::span<const double> delta, const SiloPartition& partition,
                       double epsilon, const SelectionMode& mode,
                       const ThresholdState& state) {
    if (delta.size() != partition.total)
        throw std::invalid_argument("select: distance vector length " +
                                    std::to_string(delta.size()) +
                                    " does not match partition size " +
                                    std::to_string(partition.total));
    if (mode.kind == SelectionMode::Kind::iterative && epsilon >= 1.0)
        throw std::invalid_argument("select: iterative mode requires epsilon < 1");

    SelectionResult result;
    result.state = state;

    for (const auto& silo : partition.silos) {
        SiloSelection stat;
        stat.silo_id = silo.id;
        stat.silo_size = silo.size;
        stat.budget = silo_budget(silo.size, epsilon);
        if (silo.size == 0) {
            result.silos.push_back(std::move(stat));
            continue;
        }

        const std::vector<size_t> global = silo_global_indices(silo);
        std::vector<double> local(silo.size);
        for (size_t i = 0; i < global.size(); ++i) local[i] = delta[global[i]];

        if (mode.kind == SelectionMode::Kind::exact_topk) {
            const auto picked = topk_exact(local, stat.budget);
            for (size_t li : picked) result.indices.push_back(global[li]);
            stat.selected = picked.size();
            std::vector<double> scratch = local;
            stat.threshold = bootstrap_threshold(scratch, stat.budget);
        } else {
            double q;
            if (result.state.initialized(silo.id)) {
                q = refine_threshold(result.state.get(silo.id), local, epsilon,
                                     mode.iterations, mode.fluctuation);
            } else {
                std::vector<double> scratch = local;
                q = bootstrap_threshold(scratch, stat.budget);
            }
            for (size_t i = 0; i < local.size(); ++i)
                if (local[i] > q) {
                    result.indices.push_back(global[i]);
                    ++stat.selected;
                }
            stat.threshold = q;
            result.state.set(silo.id, q);
        }
        result.silos.push_back(std::move(stat));
    }

    std::sort(result.indices.begin(), result.indices.end());
    return result;
}

}  // namespace dst
