#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "dst/partition.hpp"

namespace dst {

struct SelectionMode {
    enum class Kind { exact_topk, iterative };
    Kind kind = Kind::exact_topk;
    int iterations = 3;       // m
    double fluctuation = 2.0; // r: assumed max per-step change factor of q_S
};

const char* to_string(SelectionMode::Kind kind);
SelectionMode::Kind selection_kind_from_string(std::string_view text);

// Per-silo running threshold q_S carried between training steps.
class ThresholdState {
  public:
    bool initialized(const std::string& silo_id) const {
        return thresholds_.count(silo_id) > 0;
    }
    double get(const std::string& silo_id) const;
    void set(const std::string& silo_id, double q);
    const std::map<std::string, double>& thresholds() const { return thresholds_; }

  private:
    std::map<std::string, double> thresholds_;
};

// Exactly the k largest-delta positions (silo-local indices), ties at the
// boundary broken by smaller index. Returned sorted ascending.
std::vector<size_t> topk_exact(std::span<const double> delta, size_t k);

// Fraction of components strictly greater than q.
double count_above(std::span<const double> delta, double q);

// Bisection refinement of the previous step's threshold on [q_prev/r, r*q_prev].
// First probe is q_prev itself; returns whichever bracket end realizes a
// fraction closer to epsilon.
double refine_threshold(double q_prev, std::span<const double> delta, double epsilon,
                        int m, double r);

struct SiloSelection {
    std::string silo_id;
    size_t silo_size = 0;
    size_t budget = 0;    // round-half-even(epsilon * |S|)
    size_t selected = 0;  // realized count (== budget in exact mode)
    double threshold = 0.0;
};

struct SelectionResult {
    std::vector<size_t> indices;  // global flat indices, sorted ascending
    ThresholdState state;
    std::vector<SiloSelection> silos;
};

// Per-silo selection over the full distance vector. Exact mode fills each
// silo's budget via topk_exact; iterative mode thresholds with
// refine_threshold, bootstrapping uninitialized silos from the exact top-k
// boundary value.
SelectionResult select(std::span<const double> delta, const SiloPartition& partition,
                       double epsilon, const SelectionMode& mode,
                       const ThresholdState& state);

}  // namespace dst
