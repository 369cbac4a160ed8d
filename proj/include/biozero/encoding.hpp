#ifndef BIOZERO_ENCODING_HPP_
#define BIOZERO_ENCODING_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "biozero/group.hpp"

namespace biozero {

/// Big-endian binary writer for the normative file formats.
class ByteWriter {
public:
    void u8(uint8_t v) { buf_.push_back(v); }
    void u32(uint32_t v) {
        for (int i = 3; i >= 0; --i) buf_.push_back(uint8_t(v >> (8 * i)));
    }
    void u64(uint64_t v) {
        for (int i = 7; i >= 0; --i) buf_.push_back(uint8_t(v >> (8 * i)));
    }
    void bytes(std::span<const uint8_t> b) { buf_.insert(buf_.end(), b.begin(), b.end()); }
    void var_bytes(std::span<const uint8_t> b) {
        u32(uint32_t(b.size()));
        bytes(b);
    }
    void element(const GroupParams& params, const GroupElement& e) {
        auto enc = params.encode_element(e);
        bytes(enc);
    }
    void scalar(const GroupParams& params, const Scalar& s) {
        auto enc = params.encode_scalar(s);
        bytes(enc);
    }

    const std::vector<uint8_t>& data() const { return buf_; }
    std::vector<uint8_t> take() { return std::move(buf_); }

private:
    std::vector<uint8_t> buf_;
};

/// Bounds-checked reader; all failures surface as DecodeError.
class ByteReader {
public:
    explicit ByteReader(std::span<const uint8_t> data) : data_(data) {}

    uint8_t u8() { return take(1)[0]; }
    uint32_t u32() {
        auto b = take(4);
        return (uint32_t(b[0]) << 24) | (uint32_t(b[1]) << 16) | (uint32_t(b[2]) << 8) | b[3];
    }
    uint64_t u64() {
        uint64_t v = 0;
        auto b = take(8);
        for (int i = 0; i < 8; ++i) v = (v << 8) | b[i];
        return v;
    }
    std::vector<uint8_t> bytes(size_t n) {
        auto s = take(n);
        return std::vector<uint8_t>(s.begin(), s.end());
    }
    std::vector<uint8_t> var_bytes(size_t max_len = 1u << 24) {
        uint32_t n = u32();
        if (n > max_len) throw DecodeError("length field too large");
        return bytes(n);
    }
    GroupElement element(const GroupParams& params) {
        return params.decode_element(take(params.element_bytes()));
    }
    Scalar scalar(const GroupParams& params) {
        return params.decode_scalar(take(params.scalar_bytes()));
    }
    void expect_magic(std::span<const uint8_t> magic, const char* what) {
        auto got = take(magic.size());
        for (size_t i = 0; i < magic.size(); ++i) {
            if (got[i] != magic[i]) throw DecodeError(std::string("bad magic for ") + what);
        }
    }
    bool done() const { return pos_ == data_.size(); }
    size_t remaining() const { return data_.size() - pos_; }

private:
    std::span<const uint8_t> take(size_t n) {
        if (n > data_.size() - pos_) throw DecodeError("truncated input");
        auto s = data_.subspan(pos_, n);
        pos_ += n;
        return s;
    }

    std::span<const uint8_t> data_;
    size_t pos_ = 0;
};

}  // namespace biozero

#endif  // BIOZERO_ENCODING_HPP_
