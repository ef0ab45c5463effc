#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "dst/param_store.hpp"

namespace dst {

struct DeltaEntry {
    uint64_t index = 0;
    float value = 0.0f;

    friend bool operator==(const DeltaEntry&, const DeltaEntry&) = default;
};

// Sparse record of the parameters that differ from the seed. Stores absolute
// new values so restoration is bitwise exact.
struct SubsetDelta {
    uint64_t model_size = 0;  // n
    std::vector<DeltaEntry> entries;  // strictly increasing indices
    uint64_t seed_checksum = 0;
    double epsilon = 0.0;      // metadata from the producing run; 0 if unknown
    uint8_t distance_tag = 0;  // DistanceKind as stored in DSTD
    uint8_t scheme_tag = 0;    // SiloScheme as stored in DSTD

    friend bool operator==(const SubsetDelta&, const SubsetDelta&) = default;
};

SubsetDelta diff(const SeedSnapshot& seed, const ParamVector& model);

// Materializes seed + delta. Refuses a delta whose seed_checksum does not
// match this seed.
ParamVector apply(const SeedSnapshot& seed, const SubsetDelta& delta);

// Read view over seed + delta without materializing a dense copy.
// Per-read cost is O(log |entries|).
class DeltaView {
  public:
    DeltaView(const SeedSnapshot& seed, const SubsetDelta& delta);

    float operator[](size_t i) const {
        auto it = std::lower_bound(indices_.begin(), indices_.end(), i);
        if (it != indices_.end() && *it == i)
            return values_[static_cast<size_t>(it - indices_.begin())];
        return seed_[i];
    }
    size_t size() const { return seed_.size(); }

  private:
    std::span<const float> seed_;
    std::vector<uint64_t> indices_;
    std::vector<float> values_;
};

// Multi-subset serving: look up the task's delta and hand the caller a view
// equivalent to apply(seed, deltas[task_id]).
void apply_onthefly(const SeedSnapshot& seed,
                    const std::map<std::string, SubsetDelta>& deltas,
                    const std::string& task_id,
                    const std::function<void(const DeltaView&)>& consumer);

// DSTD byte codec; round-trips bit-exactly.
std::vector<uint8_t> serialize(const SubsetDelta& delta);
SubsetDelta deserialize(std::span<const uint8_t> bytes);

void save_delta(const SubsetDelta& delta, const std::string& path);
SubsetDelta load_delta(const std::string& path);

}  // namespace dst
