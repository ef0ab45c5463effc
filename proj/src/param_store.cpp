#include "dst/param_store.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <unordered_set>

#include "codec_util.hpp"
#include "dst/errors.hpp"

namespace dst {

namespace {
constexpr uint8_t kMagic[4] = {'D', 'S', 'T', 'C'};
constexpr uint32_t kVersion = 1;
}  // namespace

ParamLayout::ParamLayout(std::vector<LayoutGroup> groups) : groups_(std::move(groups)) {
    size_t expected_offset = 0;
    std::unordered_set<std::string> names;
    for (const auto& g : groups_) {
        if (g.offset != expected_offset)
            throw std::invalid_argument("layout group '" + g.name +
                                        "' not contiguous: offset " +
                                        std::to_string(g.offset) + ", expected " +
                                        std::to_string(expected_offset));
        if (!names.insert(g.name).second)
            throw std::invalid_argument("duplicate layout group name '" + g.name + "'");
        expected_offset += g.length;
    }
    total_ = expected_offset;
}

const LayoutGroup& ParamLayout::group_at(size_t index) const {
    for (const auto& g : groups_)
        if (index >= g.offset && index < g.offset + g.length) return g;
    throw std::out_of_range("flat index " + std::to_string(index) +
                            " outside layout of size " + std::to_string(total_));
}

SeedSnapshot::SeedSnapshot(const ParamVector& params)
    : values_(params.values),
      layout_(params.layout),
      checksum_(dst::checksum(values_)) {
    if (params.values.size() != params.layout.size())
        throw std::invalid_argument("parameter vector length " +
                                    std::to_string(params.values.size()) +
                                    " does not match layout size " +
                                    std::to_string(params.layout.size()));
}

uint64_t fnv1a64(const uint8_t* data, size_t len) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (size_t i = 0; i < len; ++i) {
        h ^= data[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

uint64_t checksum(std::span<const float> values) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (float f : values) {
        const uint32_t bits = std::bit_cast<uint32_t>(f);
        for (int b = 0; b < 4; ++b) {
            h ^= static_cast<uint8_t>(bits >> (8 * b));
            h *= 0x100000001b3ULL;
        }
    }
    return h;
}

std::vector<size_t> subset_indices(const ParamVector& params, const SeedSnapshot& seed) {
    if (params.size() != seed.size())
        throw std::invalid_argument("subset_indices: length mismatch (" +
                                    std::to_string(params.size()) + " vs " +
                                    std::to_string(seed.size()) + ")");
    std::vector<size_t> out;
    const auto sv = seed.values();
    for (size_t i = 0; i < sv.size(); ++i)
        if (std::bit_cast<uint32_t>(params.values[i]) != std::bit_cast<uint32_t>(sv[i]))
            out.push_back(i);
    return out;
}

void save_checkpoint(const ParamVector& params, const std::string& path,
                     uint64_t seed_checksum) {
    if (params.values.size() != params.layout.size())
        throw std::invalid_argument("save_checkpoint: vector/layout size mismatch");
    for (const auto& g : params.layout.groups())
        for (size_t i = g.offset; i < g.offset + g.length; ++i)
            if (!std::isfinite(params.values[i]))
                throw std::invalid_argument("save_checkpoint: non-finite value in group '" +
                                            g.name + "' at flat index " + std::to_string(i));

    detail::ByteWriter w;
    w.bytes(kMagic, 4);
    w.u32(kVersion);
    w.u32(static_cast<uint32_t>(params.layout.groups().size()));
    for (const auto& g : params.layout.groups()) {
        w.u16(static_cast<uint16_t>(g.name.size()));
        w.bytes(g.name.data(), g.name.size());
        w.u16(static_cast<uint16_t>(g.module_kind.size()));
        w.bytes(g.module_kind.data(), g.module_kind.size());
        w.u32(g.layer_index);
        w.u64(g.length);
    }
    for (float f : params.values) w.f32(f);
    w.u64(seed_checksum);
    detail::write_file_bytes(path, w.buf);
}

LoadedCheckpoint load_checkpoint(const std::string& path) {
    const auto bytes = detail::read_file_bytes(path);
    detail::ByteReader r(bytes, "DSTC " + path);

    if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0)
        throw DataError("DSTC " + path + ": bad magic");
    r.str(4);
    const uint32_t version = r.u32();
    if (version != kVersion)
        throw DataError("DSTC " + path + ": unsupported version " + std::to_string(version));

    const uint32_t group_count = r.u32();
    std::vector<LayoutGroup> groups;
    groups.reserve(group_count);
    size_t offset = 0;
    for (uint32_t i = 0; i < group_count; ++i) {
        LayoutGroup g;
        g.name = r.str(r.u16());
        g.module_kind = r.str(r.u16());
        g.layer_index = r.u32();
        g.length = r.u64();
        g.offset = offset;
        offset += g.length;
        groups.push_back(std::move(g));
    }

    LoadedCheckpoint out;
    out.params.layout = ParamLayout(std::move(groups));
    const size_t n = out.params.layout.size();
    if (n > (r.remaining() - std::min<size_t>(r.remaining(), 8)) / 4)
        throw DataError("DSTC " + path + ": declared " + std::to_string(n) +
                        " parameters but file is truncated");
    out.params.values.resize(n);
    for (size_t i = 0; i < n; ++i) out.params.values[i] = r.f32();
    out.seed_checksum = r.u64();
    r.expect_end();
    return out;
}

namespace detail {

std::vector<uint8_t> read_file_bytes(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw IoError("cannot open '" + path + "' for reading");
    std::fseek(f, 0, SEEK_END);
    const long size = std::ftell(f);
    std::fseek(f, 0, SEEK_SET);
    std::vector<uint8_t> bytes(size > 0 ? static_cast<size_t>(size) : 0);
    const size_t got = bytes.empty() ? 0 : std::fread(bytes.data(), 1, bytes.size(), f);
    std::fclose(f);
    if (got != bytes.size()) throw IoError("short read from '" + path + "'");
    return bytes;
}

void write_file_bytes(const std::string& path, std::span<const uint8_t> bytes) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    const size_t put = bytes.empty() ? 0 : std::fwrite(bytes.data(), 1, bytes.size(), f);
    const bool flush_ok = std::fclose(f) == 0;
    if (put != bytes.size() || !flush_ok) throw IoError("short write to '" + path + "'");
}

}  // namespace detail

}  // namespace dst
