#include "vortexdiff/field_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "vortexdiff/errors.hpp"

namespace vortexdiff {

namespace {

static_assert(sizeof(double) == 8);

template <typename T>
void put(std::vector<std::byte>& out, T value) {
    std::byte raw[sizeof(T)];
    std::memcpy(raw, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(std::begin(raw), std::end(raw));
    out.insert(out.end(), std::begin(raw), std::end(raw));
}

template <typename T>
T get(std::span<const std::byte> bytes, std::size_t offset) {
    std::byte raw[sizeof(T)];
    std::memcpy(raw, bytes.data() + offset, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(std::begin(raw), std::end(raw));
    T value;
    std::memcpy(&value, raw, sizeof(T));
    return value;
}

std::vector<std::byte> header(const GridSpec& g, double time, FieldKind kind, std::size_t payload_doubles) {
    std::vector<std::byte> out;
    out.reserve(kVxfHeaderBytes + payload_doubles * 8);
    for (char c : {'V', 'X', 'F', '1'}) out.push_back(static_cast<std::byte>(c));
    put<std::uint32_t>(out, kVxfVersion);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(g.n()));
    put<double>(out, g.extent());
    put<double>(out, time);
    out.push_back(static_cast<std::byte>(kind));
    return out;
}

}  // namespace

const GridSpec& FieldDump::grid() const {
    return std::visit([](const auto& f) -> const GridSpec& { return f.grid; }, field);
}

std::vector<std::byte> encode_vxf(const ComplexField2D& f, double time) {
    auto out = header(f.grid, time, FieldKind::Complex, 2 * f.values.size());
    for (const cplx& z : f.values) {
        put<double>(out, z.real());
        put<double>(out, z.imag());
    }
    return out;
}

std::vector<std::byte> encode_vxf(const RealField2D& f, double time) {
    auto out = header(f.grid, time, FieldKind::Real, f.values.size());
    for (double v : f.values) put<double>(out, v);
    return out;
}

FieldDump decode_vxf(std::span<const std::byte> bytes) {
    if (bytes.size() < 4 || std::memcmp(bytes.data(), "VXF1", 4) != 0) {
        throw IoError(IoErrorCode::NotVxf, "not a VXF file");
    }
    if (bytes.size() < kVxfHeaderBytes) throw IoError(IoErrorCode::Truncated, "VXF header truncated");
    const auto version = get<std::uint32_t>(bytes, 4);
    if (version != kVxfVersion) {
        throw IoError(IoErrorCode::BadVersion, "unsupported VXF version " + std::to_string(version));
    }
    const auto n = get<std::uint32_t>(bytes, 8);
    const double extent = get<double>(bytes, 12);
    const double time = get<double>(bytes, 20);
    const auto kind_byte = std::to_integer<std::uint8_t>(bytes[28]);
    if (kind_byte > 1) throw IoError(IoErrorCode::NotVxf, "not a VXF file: unknown field kind");
    const FieldKind kind = static_cast<FieldKind>(kind_byte);

    GridSpec grid = [&] {
        try {
            return make_grid(static_cast<int>(n), extent);
        } catch (const std::invalid_argument& e) {
            throw IoError(IoErrorCode::SizeMismatch, std::string("VXF header: ") + e.what());
        }
    }();
    const std::size_t per_sample = kind == FieldKind::Complex ? 2 : 1;
    const std::size_t expected = kVxfHeaderBytes + grid.size() * per_sample * 8;
    if (bytes.size() < expected) {
        throw IoError(IoErrorCode::Truncated, "VXF payload truncated: expected " + std::to_string(expected) +
                                                  " bytes, got " + std::to_string(bytes.size()));
    }
    if (bytes.size() > expected) {
        throw IoError(IoErrorCode::SizeMismatch, "VXF payload longer than n^2 samples");
    }

    std::size_t off = kVxfHeaderBytes;
    if (kind == FieldKind::Complex) {
        ComplexField2D f(grid);
        for (auto& z : f.values) {
            z = {get<double>(bytes, off), get<double>(bytes, off + 8)};
            off += 16;
        }
        return {time, std::move(f)};
    }
    RealField2D f(grid);
    for (auto& v : f.values) {
        v = get<double>(bytes, off);
        off += 8;
    }
    return {time, std::move(f)};
}

void write_file(const std::filesystem::path& path, std::span<const std::byte> bytes) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(IoErrorCode::OpenFailed, "cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError(IoErrorCode::WriteFailed, "write failed: " + path.string());
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    write_file(path, std::as_bytes(std::span(text.data(), text.size())));
}

std::vector<std::byte> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(IoErrorCode::OpenFailed, "cannot open " + path.string());
    std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::vector<std::byte> out(raw.size());
    std::memcpy(out.data(), raw.data(), raw.size());
    return out;
}

void write_vxf(const std::filesystem::path& path, const ComplexField2D& f, double time) {
    write_file(path, encode_vxf(f, time));
}

void write_vxf(const std::filesystem::path& path, const RealField2D& f, double time) {
    write_file(path, encode_vxf(f, time));
}

FieldDump read_vxf(const std::filesystem::path& path) { return decode_vxf(read_file(path)); }

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string comment_block(const std::string& comment) {
    std::string out;
    std::istringstream lines(comment);
    std::string line;
    while (std::getline(lines, line)) out += "# " + line + "\n";
    return out;
}

}  // namespace

void write_field_csv(const std::filesystem::path& path, const ComplexField2D& f, const std::string& comment) {
    std::string text = comment_block(comment) + "x,y,re,im\n";
    const GridSpec& g = f.grid;
    for (int iy = 0; iy < g.n(); ++iy) {
        for (int ix = 0; ix < g.n(); ++ix) {
            const cplx z = f.at(ix, iy);
            text += format_double(g.coord(ix)) + ',' + format_double(g.coord(iy)) + ',' +
                    format_double(z.real()) + ',' + format_double(z.imag()) + '\n';
        }
    }
    write_file(path, text);
}

void write_field_csv(const std::filesystem::path& path, const RealField2D& f, const std::string& comment) {
    std::string text = comment_block(comment) + "x,y,value\n";
    const GridSpec& g = f.grid;
    for (int iy = 0; iy < g.n(); ++iy) {
        for (int ix = 0; ix < g.n(); ++ix) {
            text += format_double(g.coord(ix)) + ',' + format_double(g.coord(iy)) + ',' +
                    format_double(f.at(ix, iy)) + '\n';
        }
    }
    write_file(path, text);
}

FieldDump read_field_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(IoErrorCode::OpenFailed, "cannot open " + path.string());
    std::string line;
    std::string columns;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        columns = line;
        break;
    }
    const bool complex = columns == "x,y,re,im";
    if (!complex && columns != "x,y,value") throw IoError(IoErrorCode::BadCsv, "unrecognized field CSV header");

    std::vector<double> xs, ys, a, b;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        std::string cell;
        std::vector<double> cells;
        while (std::getline(row, cell, ',')) {
            // strtod rather than stod: subnormals must round-trip, not throw.
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (cell.empty() || end != cell.c_str() + cell.size()) {
                throw IoError(IoErrorCode::BadCsv, "bad number in field CSV: " + cell);
            }
            cells.push_back(v);
        }
        if (cells.size() != (complex ? 4u : 3u)) throw IoError(IoErrorCode::BadCsv, "wrong column count");
        xs.push_back(cells[0]);
        ys.push_back(cells[1]);
        a.push_back(cells[2]);
        if (complex) b.push_back(cells[3]);
    }
    const auto n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(xs.size()))));
    if (n < 2 || static_cast<std::size_t>(n) * n != xs.size()) {
        throw IoError(IoErrorCode::SizeMismatch, "field CSV is not square");
    }
    const double dx = xs[1] - xs[0];
    GridSpec grid = [&] {
        try {
            return make_grid(n, -xs[0]);
        } catch (const std::invalid_argument& e) {
            throw IoError(IoErrorCode::SizeMismatch, e.what());
        }
    }();
    if (std::abs(dx - grid.dx()) > 1e-9 * grid.dx()) throw IoError(IoErrorCode::BadCsv, "irregular coordinates");
    if (complex) {
        ComplexField2D f(grid);
        for (std::size_t i = 0; i < a.size(); ++i) f.values[i] = {a[i], b[i]};
        return {0.0, std::move(f)};
    }
    return {0.0, RealField2D(grid, std::move(a))};
}

}  // namespace vortexdiff
