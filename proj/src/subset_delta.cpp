#include "dst/subset_delta.hpp"

#include <algorithm>
#include <bit>
#include <cstring>

#include "codec_util.hpp"
#include "dst/errors.hpp"

namespace dst {

namespace {
constexpr uint8_t kMagic[4] = {'D', 'S', 'T', 'D'};
constexpr uint32_t kVersion = 1;
}  // namespace

SubsetDelta diff(const SeedSnapshot& seed, const ParamVector& model) {
    if (model.size() != seed.size())
        throw std::invalid_argument("diff: length mismatch (" + std::to_string(model.size()) +
                                    " vs " + std::to_string(seed.size()) + ")");
    SubsetDelta delta;
    delta.model_size = seed.size();
    delta.seed_checksum = seed.checksum();
    const auto sv = seed.values();
    for (size_t i = 0; i < sv.size(); ++i)
        if (std::bit_cast<uint32_t>(model.values[i]) != std::bit_cast<uint32_t>(sv[i]))
            delta.entries.push_back({static_cast<uint64_t>(i), model.values[i]});
    return delta;
}

namespace {

void check_compatible(const SeedSnapshot& seed, const SubsetDelta& delta) {
    if (delta.seed_checksum != seed.checksum())
        throw DataError("delta was built against a different seed (delta checksum " +
                        std::to_string(delta.seed_checksum) + ", seed checksum " +
                        std::to_string(seed.checksum()) + ")");
    if (delta.model_size != seed.size())
        throw DataError("delta model size " + std::to_string(delta.model_size) +
                        " does not match seed size " + std::to_string(seed.size()));
    for (const auto& e : delta.entries)
        if (e.index >= seed.size())
            throw DataError("delta entry index " + std::to_string(e.index) +
                            " out of range for model of size " + std::to_string(seed.size()));
}

}  // namespace

ParamVector apply(const SeedSnapshot& seed, const SubsetDelta& delta) {
    check_compatible(seed, delta);
    ParamVector out;
    out.layout = seed.layout();
    out.values.assign(seed.values().begin(), seed.values().end());
    for (const auto& e : delta.entries) out.values[e.index] = e.value;
    return out;
}

DeltaView::DeltaView(const SeedSnapshot& seed, const SubsetDelta& delta)
    : seed_(seed.values()) {
    check_compatible(seed, delta);
    indices_.reserve(delta.entries.size());
    values_.reserve(delta.entries.size());
    for (const auto& e : delta.entries) {
        indices_.push_back(e.index);
        values_.push_back(e.value);
    }
}

void apply_onthefly(const SeedSnapshot& seed,
                    const std::map<std::string, SubsetDelta>& deltas,
                    const std::string& task_id,
                    const std::function<void(const DeltaView&)>& consumer) {
    auto it = deltas.find(task_id);
    if (it == deltas.end())
        throw std::invalid_argument("apply_onthefly: unknown task '" + task_id + "'");
    consumer(DeltaView(seed, it->second));
}

std::vector<uint8_t> serialize(const SubsetDelta& delta) {
    detail::ByteWriter w;
    w.bytes(kMagic, 4);
    w.u32(kVersion);
    w.u64(delta.model_size);
    w.u64(delta.entries.size());
    w.u64(delta.seed_checksum);
    w.f64(delta.epsilon);
    w.u8(delta.distance_tag);
    w.u8(delta.scheme_tag);
    for (const auto& e : delta.entries) {
        w.u64(e.index);
        w.f32(e.value);
    }
    return w.buf;
}

SubsetDelta deserialize(std::span<const uint8_t> bytes) {
    detail::ByteReader r(bytes, "DSTD");
    if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0)
        throw DataError("DSTD: bad magic");
    r.str(4);
    const uint32_t version = r.u32();
    if (version != kVersion)
        throw DataError("DSTD: unsupported version " + std::to_string(version));

    SubsetDelta delta;
    delta.model_size = r.u64();
    const uint64_t count = r.u64();
    delta.seed_checksum = r.u64();
    delta.epsilon = r.f64();
    delta.distance_tag = r.u8();
    delta.scheme_tag = r.u8();
    if (count > r.remaining() / 12)  // each entry is 12 bytes
        throw DataError("DSTD: declared " + std::to_string(count) +
                        " entries but only " + std::to_string(r.remaining()) +
                        " bytes remain");
    delta.entries.reserve(count);
    for (uint64_t i = 0; i < count; ++i) {
        DeltaEntry e;
        e.index = r.u64();
        e.value = r.f32();
        if (!delta.entries.empty() && e.index <= delta.entries.back().index)
            throw DataError("DSTD: entry indices not strictly increasing at position " +
                            std::to_string(i));
        if (e.index >= delta.model_size)
            throw DataError("DSTD: entry index " + std::to_string(e.index) +
                            " out of range for model size " +
                            std::to_string(delta.model_size));
        delta.entries.push_back(e);
    }
    r.expect_end();
    return delta;
}

void save_delta(const SubsetDelta& delta, const std::string& path) {
    detail::write_file_bytes(path, serialize(delta));
}

SubsetDelta load_delta(const std::string& path) {
    const auto bytes = detail::read_file_bytes(path);
    try {
        return deserialize(bytes);
    } catch (const DataError& e) {
        throw DataError(std::string(e.what()) + " [" + path + "]");
    }
}

}  // namespace dst
