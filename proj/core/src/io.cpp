#include "wkam/io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace wkam {

namespace {

constexpr char kMagic[8] = {'W', 'K', 'A', 'M', 'T', 'B', 'L', '1'};

void write_u32(std::ostream& out, uint32_t v) {
    unsigned char buf[4];
    for (int i = 0; i < 4; ++i) buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    out.write(reinterpret_cast<const char*>(buf), 4);
}

uint32_t read_u32(std::istream& in) {
    unsigned char buf[4];
    in.read(reinterpret_cast<char*>(buf), 4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(buf[i]) << (8 * i);
    return v;
}

void write_f64(std::ostream& out, double v) {
    uint64_t bits;
    std::memcpy(&bits, &v, 8);
    unsigned char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xff);
    out.write(reinterpret_cast<const char*>(buf), 8);
}

double read_f64(std::istream& in) {
    unsigned char buf[8];
    in.read(reinterpret_cast<char*>(buf), 8);
    uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<uint64_t>(buf[i]) << (8 * i);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

void write_string(std::ostream& out, const std::string& s) {
    write_u32(out, static_cast<uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string read_string(std::istream& in) {
    uint32_t len = read_u32(in);
    std::string s(len, '\0');
    in.read(s.data(), len);
    return s;
}

void write_header(std::ostream& out, const SpatialGrid& grid, const CohomologyClass& c,
                  int substeps, uint32_t payload_kind,
                  const std::map<std::string, double>& extra) {
    out.write(kMagic, 8);
    write_u32(out, 1);  // format version
    write_u32(out, payload_kind);
    write_u32(out, static_cast<uint32_t>(grid.dim));
    write_u32(out, static_cast<uint32_t>(grid.sizes[0]));
    write_u32(out, static_cast<uint32_t>(grid.sizes[1]));
    write_u32(out, static_cast<uint32_t>(substeps));
    write_f64(out, c[0]);
    write_f64(out, c[1]);
    write_u32(out, static_cast<uint32_t>(extra.size()));
    for (const auto& [key, value] : extra) {
        write_string(out, key);
        write_f64(out, value);
    }
}

struct Header {
    SpatialGrid grid;
    CohomologyClass c;
    int substeps = 0;
    uint32_t payload_kind = 0;
    std::map<std::string, double> extra;
};

Header read_header(std::istream& in) {
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kMagic, 8) != 0)
        throw WkamError("bad table file magic");
    uint32_t version = read_u32(in);
    if (version != 1) throw WkamError("unsupported table file version");
    Header h;
    h.payload_kind = read_u32(in);
    int dim = static_cast<int>(read_u32(in));
    int n0 = static_cast<int>(read_u32(in));
    int n1 = static_cast<int>(read_u32(in));
    h.grid = dim == 1 ? SpatialGrid(n0) : SpatialGrid(n0, n1);
    h.substeps = static_cast<int>(read_u32(in));
    double c0 = read_f64(in);
    double c1 = read_f64(in);
    h.c = dim == 1 ? CohomologyClass(c0) : CohomologyClass(c0, c1);
    uint32_t n_extra = read_u32(in);
    for (uint32_t i = 0; i < n_extra; ++i) {
        std::string key = read_string(in);
        h.extra[key] = read_f64(in);
    }
    if (!in) throw WkamError("truncated table file header");
    return h;
}

}  // namespace

void write_table(const std::string& path, const TableFile& file) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw WkamError("cannot open " + path + " for writing");
    write_header(out, file.grid, file.c, file.substeps, 2, file.extra);
    for (double v : file.table) write_f64(out, v);
    if (!out) throw WkamError("write failure on " + path);
}

TableFile read_table(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw WkamError("cannot open " + path);
    Header h = read_header(in);
    if (h.payload_kind != 2) throw WkamError("not a pair table: " + path);
    TableFile file;
    file.grid = h.grid;
    file.c = h.c;
    file.substeps = h.substeps;
    file.extra = h.extra;
    size_t count = static_cast<size_t>(h.grid.count()) * h.grid.count();
    file.table.resize(count);
    for (size_t i = 0; i < count; ++i) file.table[i] = read_f64(in);
    if (!in) throw WkamError("truncated table file " + path);
    return file;
}

void write_grid_function(const std::string& path, const GridFunction& u,
                         const std::map<std::string, double>& extra) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw WkamError("cannot open " + path + " for writing");
    CohomologyClass zero = u.grid.dim == 2 ? CohomologyClass(0.0, 0.0) : CohomologyClass(0.0);
    write_header(out, u.grid, zero, 0, 1, extra);
    for (double v : u.values) write_f64(out, v);
    if (!out) throw WkamError("write failure on " + path);
}

GridFunction read_grid_function(const std::string& path, std::map<std::string, double>* extra) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw WkamError("cannot open " + path);
    Header h = read_header(in);
    if (h.payload_kind != 1) throw WkamError("not a grid function: " + path);
    GridFunction u(h.grid);
    for (double& v : u.values) v = read_f64(in);
    if (!in) throw WkamError("truncated table file " + path);
    if (extra) *extra = h.extra;
    return u;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) throw WkamError("cannot open " + path + " for writing");
    for (size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << "\n";
    out << std::setprecision(17);
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
    }
    if (!out) throw WkamError("write failure on " + path);
}

std::string config_hash(const std::string& canonical_text) {
    uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : canonical_text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << h;
    return out.str();
}

}  // namespace wkam
