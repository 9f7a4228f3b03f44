#include "pseudo_rl/core/binary_io.hpp"

#include <bit>
#include <cstring>
#include <vector>

namespace pseudo_rl {

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

void BinaryWriter::raw(const void* p, std::size_t n)
{
    out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
    if (!out_) throw IntegrityError("binary write failed");
}

void BinaryWriter::magic(std::string_view tag, std::uint32_t version)
{
    raw(tag.data(), tag.size());
    u32(version);
}

void BinaryWriter::u8(std::uint8_t v) { raw(&v, 1); }
void BinaryWriter::u32(std::uint32_t v) { raw(&v, sizeof v); }
void BinaryWriter::u64(std::uint64_t v) { raw(&v, sizeof v); }
void BinaryWriter::f64(double v) { raw(&v, sizeof v); }

void BinaryWriter::str(std::string_view s)
{
    u64(s.size());
    raw(s.data(), s.size());
}

void BinaryWriter::matrix(const Matrix& m)
{
    u64(m.rows());
    u64(m.cols());
    if (!m.empty()) raw(m.data(), m.size() * sizeof(double));
}

void BinaryReader::raw(void* p, std::size_t n)
{
    in_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) {
        throw IntegrityError("binary read: unexpected end of stream");
    }
}

std::uint32_t BinaryReader::magic(std::string_view tag)
{
    std::string got(tag.size(), '\0');
    raw(got.data(), got.size());
    if (got != tag) {
        throw IntegrityError("binary read: expected tag '" + std::string(tag) + "'");
    }
    return u32();
}

std::uint8_t BinaryReader::u8()
{
    std::uint8_t v = 0;
    raw(&v, 1);
    return v;
}

std::uint32_t BinaryReader::u32()
{
    std::uint32_t v = 0;
    raw(&v, sizeof v);
    return v;
}

std::uint64_t BinaryReader::u64()
{
    std::uint64_t v = 0;
    raw(&v, sizeof v);
    return v;
}

double BinaryReader::f64()
{
    double v = 0;
    raw(&v, sizeof v);
    return v;
}

std::string BinaryReader::str()
{
    const auto n = u64();
    if (n > (1u << 20)) throw IntegrityError("binary read: implausible string length");
    std::string s(n, '\0');
    raw(s.data(), n);
    return s;
}

Matrix BinaryReader::matrix()
{
    const auto rows = u64();
    const auto cols = u64();
    if (rows != 0 && cols > (std::uint64_t{1} << 32) / rows) {
        throw IntegrityError("binary read: implausible matrix shape");
    }
    std::vector<double> data(rows * cols);
    if (!data.empty()) raw(data.data(), data.size() * sizeof(double));
    return Matrix(rows, cols, std::move(data));
}

} // namespace pseudo_rl
