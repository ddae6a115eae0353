#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "vortexdiff/grid.hpp"

namespace vortexdiff {

/**
 * VXF1 binary field dump, all little-endian:
 *
 *   offset  size  field
 *   0       4     magic "VXF1"
 *   4       4     version (u32) = 1
 *   8       4     n (u32)
 *   12      8     extent (f64)
 *   20      8     time (f64)
 *   28      1     kind (u8): 0 = complex rho12, 1 = real rho22
 *   29      ...   payload, row-major f64; (re, im) pairs for complex
 */
inline constexpr std::uint32_t kVxfVersion = 1;
inline constexpr std::size_t kVxfHeaderBytes = 29;

enum class FieldKind : std::uint8_t { Complex = 0, Real = 1 };

struct FieldDump {
    double time = 0.0;
    std::variant<ComplexField2D, RealField2D> field;

    FieldKind kind() const { return field.index() == 0 ? FieldKind::Complex : FieldKind::Real; }
    const GridSpec& grid() const;
};

std::vector<std::byte> encode_vxf(const ComplexField2D& f, double time);
std::vector<std::byte> encode_vxf(const RealField2D& f, double time);

/// Throws IoError: NotVxf, BadVersion, Truncated or SizeMismatch.
FieldDump decode_vxf(std::span<const std::byte> bytes);

void write_vxf(const std::filesystem::path& path, const ComplexField2D& f, double time);
void write_vxf(const std::filesystem::path& path, const RealField2D& f, double time);
FieldDump read_vxf(const std::filesystem::path& path);

/// CSV with columns x,y,re,im (complex) or x,y,value (real), 17 significant
/// digits. `comment` lines are prefixed with "# ".
void write_field_csv(const std::filesystem::path& path, const ComplexField2D& f, const std::string& comment = {});
void write_field_csv(const std::filesystem::path& path, const RealField2D& f, const std::string& comment = {});

/// Reads a CSV produced by write_field_csv. The grid is reconstructed from
/// the coordinate columns.
FieldDump read_field_csv(const std::filesystem::path& path);

/// "%.17g" formatting shared by every CSV writer.
std::string format_double(double v);

/// Writes bytes to a file, creating parent directories. Throws IoError.
void write_file(const std::filesystem::path& path, std::span<const std::byte> bytes);
void write_file(const std::filesystem::path& path, const std::string& text);
std::vector<std::byte> read_file(const std::filesystem::path& path);

}  // namespace vortexdiff
