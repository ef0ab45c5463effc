#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace dst {

// One named contiguous slice of the flat parameter space, e.g. the weight
// matrix of layer 2. module_kind/layer_index drive siloing; name is unique.
struct LayoutGroup {
    std::string name;
    std::string module_kind;
    uint32_t layer_index = 0;
    size_t offset = 0;
    size_t length = 0;
};

class ParamLayout {
  public:
    ParamLayout() = default;
    // Validates contiguity, strictly increasing offsets and name uniqueness.
    explicit ParamLayout(std::vector<LayoutGroup> groups);

    const std::vector<LayoutGroup>& groups() const { return groups_; }
    size_t size() const { return total_; }  // n
    bool empty() const { return total_ == 0; }

    // Group that covers flat index i; throws if out of range.
    const LayoutGroup& group_at(size_t index) const;

  private:
    std::vector<LayoutGroup> groups_;
    size_t total_ = 0;
};

struct ParamVector {
    std::vector<float> values;
    ParamLayout layout;

    size_t size() const { return values.size(); }
};

// Immutable copy of the pre-trained parameters; the reset target for every
// DST step and the reference point for deltas.
class SeedSnapshot {
  public:
    explicit SeedSnapshot(const ParamVector& params);

    std::span<const float> values() const { return values_; }
    const ParamLayout& layout() const { return layout_; }
    uint64_t checksum() const { return checksum_; }
    size_t size() const { return values_.size(); }

  private:
    std::vector<float> values_;
    ParamLayout layout_;
    uint64_t checksum_;
};

uint64_t fnv1a64(const uint8_t* data, size_t len);

// FNV-1a 64 over the little-endian byte serialization of the values.
uint64_t checksum(std::span<const float> values);

// Indices where params differ from the seed, compared bitwise on the float
// representation. Sorted ascending.
std::vector<size_t> subset_indices(const ParamVector& params, const SeedSnapshot& seed);

// DSTC checkpoint I/O. seed_checksum is stored in the trailer; zero means
// the file itself is a seed.
void save_checkpoint(const ParamVector& params, const std::string& path,
                     uint64_t seed_checksum = 0);

struct LoadedCheckpoint {
    ParamVector params;
    uint64_t seed_checksum = 0;
};
LoadedCheckpoint load_checkpoint(const std::string& path);

}  // namespace dst
