#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "pseudo_rl/core/matrix.hpp"

namespace pseudo_rl {

// Raw little-endian records. Doubles are written as their IEEE-754 bit
// patterns so a write/read cycle is bit-exact.

class BinaryWriter {
public:
    explicit BinaryWriter(std::ostream& out) : out_(out) {}

    void magic(std::string_view tag, std::uint32_t version);
    void u8(std::uint8_t v);
    void u32(std::uint32_t v);
    void u64(std::uint64_t v);
    void f64(double v);
    void str(std::string_view s);
    void matrix(const Matrix& m);

private:
    void raw(const void* p, std::size_t n);
    std::ostream& out_;
};

class BinaryReader {
public:
    explicit BinaryReader(std::istream& in) : in_(in) {}

    /// Reads and checks a tag; returns the stored version.
    std::uint32_t magic(std::string_view tag);
    std::uint8_t u8();
    std::uint32_t u32();
    std::uint64_t u64();
    double f64();
    std::string str();
    Matrix matrix();

private:
    void raw(void* p, std::size_t n);
    std::istream& in_;
};

} // namespace pseudo_rl
