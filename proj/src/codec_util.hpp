#pragma once

// Internal little-endian byte codec shared by the DSTC and DSTD formats.

#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <vector>

#include "dst/errors.hpp"

namespace dst::detail {

struct ByteWriter {
    std::vector<uint8_t> buf;

    void u8(uint8_t v) { buf.push_back(v); }
    void u16(uint16_t v) {
        buf.push_back(static_cast<uint8_t>(v));
        buf.push_back(static_cast<uint8_t>(v >> 8));
    }
    void u32(uint32_t v) {
        for (int i = 0; i < 4; ++i) buf.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }
    void u64(uint64_t v) {
        for (int i = 0; i < 8; ++i) buf.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }
    void f32(float v) { u32(std::bit_cast<uint32_t>(v)); }
    void f64(double v) { u64(std::bit_cast<uint64_t>(v)); }
    void bytes(const void* data, size_t len) {
        const auto* p = static_cast<const uint8_t*>(data);
        buf.insert(buf.end(), p, p + len);
    }
};

class ByteReader {
  public:
    ByteReader(std::span<const uint8_t> data, std::string context)
        : data_(data), context_(std::move(context)) {}

    uint8_t u8() { return take(1)[0]; }
    uint16_t u16() {
        auto p = take(2);
        return static_cast<uint16_t>(p[0] | (uint16_t(p[1]) << 8));
    }
    uint32_t u32() {
        auto p = take(4);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= uint32_t(p[i]) << (8 * i);
        return v;
    }
    uint64_t u64() {
        auto p = take(8);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= uint64_t(p[i]) << (8 * i);
        return v;
    }
    float f32() { return std::bit_cast<float>(u32()); }
    double f64() { return std::bit_cast<double>(u64()); }
    std::string str(size_t len) {
        auto p = take(len);
        return std::string(reinterpret_cast<const char*>(p.data()), len);
    }

    size_t remaining() const { return data_.size() - pos_; }

    void expect_end() const {
        if (pos_ != data_.size())
            throw DataError(context_ + ": " + std::to_string(data_.size() - pos_) +
                            " trailing bytes");
    }

  private:
    std::span<const uint8_t> take(size_t len) {
        if (pos_ + len > data_.size())
            throw DataError(context_ + ": truncated (wanted " + std::to_string(len) +
                            " bytes at offset " + std::to_string(pos_) + ")");
        auto out = data_.subspan(pos_, len);
        pos_ += len;
        return out;
    }

    std::span<const uint8_t> data_;
    size_t pos_ = 0;
    std::string context_;
};

std::vector<uint8_t> read_file_bytes(const std::string& path);
void write_file_bytes(const std::string& path, std::span<const uint8_t> bytes);

}  // namespace dst::detail
