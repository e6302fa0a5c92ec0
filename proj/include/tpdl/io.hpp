#pragma once

// Artifact writers.  Everything goes through a temp-file-plus-rename so partially
// written outputs can never be mistaken for results, and all floats use a fixed
// round-trip format so identical runs produce identical bytes.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "tpdl/errors.hpp"
#include "tpdl/field.hpp"

namespace tpdl {

// Shortest decimal string that parses back to exactly the same double.
inline std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline void atomic_write_file(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open '" + tmp + "' for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("short write to '" + tmp + "'");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot rename '" + tmp + "' to '" + path + "'");
}

// CSV with '#'-prefixed provenance header lines, then a column header, then rows.
class CsvBuilder {
public:
    void comment(const std::string& line) { head_ += "# " + line + "\n"; }
    void header(const std::vector<std::string>& cols) { body_ += join(cols); }
    void row(const std::vector<std::string>& cells) { body_ += join(cells); }
    std::string str() const { return head_ + body_; }

private:
    static std::string join(const std::vector<std::string>& cells) {
        std::string line;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) line += ',';
            line += cells[i];
        }
        line += '\n';
        return line;
    }
    std::string head_, body_;
};

// Flat binary field snapshot: magic, M, box length, field name, precision flag,
// then M^3 complex values (k-contiguous), single or double precision.
inline void write_field_snapshot(const std::string& path, const Grid& g,
                                 const std::string& name, const ScalarField& data,
                                 bool single_precision) {
    if (data.size() != g.size()) throw ConfigError("snapshot: field size does not match grid");
    std::string out;
    out.reserve(40 + data.size() * (single_precision ? 8 : 16));
    out.append("TPDLFLD0", 8);
    const std::int32_t m = g.points_per_axis;
    out.append(reinterpret_cast<const char*>(&m), 4);
    const double L = g.box_length;
    out.append(reinterpret_cast<const char*>(&L), 8);
    char nm[16] = {};
    std::strncpy(nm, name.c_str(), 15);
    out.append(nm, 16);
    const std::int32_t flag = single_precision ? 64 : 128; // bits per complex value
    out.append(reinterpret_cast<const char*>(&flag), 4);
    if (single_precision) {
        for (const auto& v : data) {
            const float re = static_cast<float>(v.real()), im = static_cast<float>(v.imag());
            out.append(reinterpret_cast<const char*>(&re), 4);
            out.append(reinterpret_cast<const char*>(&im), 4);
        }
    } else {
        for (const auto& v : data) {
            const double re = v.real(), im = v.imag();
            out.append(reinterpret_cast<const char*>(&re), 8);
            out.append(reinterpret_cast<const char*>(&im), 8);
        }
    }
    atomic_write_file(path, out);
}

struct FieldSnapshot {
    Grid grid;
    std::string name;
    ScalarField data;
};

inline FieldSnapshot read_field_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open snapshot '" + path + "'");
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, "TPDLFLD0", 8) != 0)
        throw std::runtime_error("bad snapshot magic in '" + path + "'");
    std::int32_t m = 0, flag = 0;
    double L = 0.0;
    char nm[16];
    in.read(reinterpret_cast<char*>(&m), 4);
    in.read(reinterpret_cast<char*>(&L), 8);
    in.read(nm, 16);
    in.read(reinterpret_cast<char*>(&flag), 4);
    if (!in) throw std::runtime_error("truncated snapshot header in '" + path + "'");
    FieldSnapshot snap;
    snap.grid = Grid(L, m);
    snap.name.assign(nm, strnlen(nm, 16));
    snap.data.resize(snap.grid.size());
    if (flag == 64) {
        for (auto& v : snap.data) {
            float re, im;
            in.read(reinterpret_cast<char*>(&re), 4);
            in.read(reinterpret_cast<char*>(&im), 4);
            v = {re, im};
        }
    } else if (flag == 128) {
        for (auto& v : snap.data) {
            double re, im;
            in.read(reinterpret_cast<char*>(&re), 8);
            in.read(reinterpret_cast<char*>(&im), 8);
            v = {re, im};
        }
    } else {
        throw std::runtime_error("bad precision flag in '" + path + "'");
    }
    if (!in) throw std::runtime_error("truncated snapshot data in '" + path + "'");
    return snap;
}

} // namespace tpdl
