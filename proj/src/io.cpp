#include "kramers/io.hpp"
#include "kramers/errors.hpp"

#include <openssl/evp.h>

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>

namespace kramers::io {

namespace {

void put_le(double v, unsigned char* out)
{
    std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) out[b] = static_cast<unsigned char>((bits >> (8 * b)) & 0xff);
}

double get_le(const unsigned char* in)
{
    std::uint64_t bits = 0;
    for (int b = 7; b >= 0; --b) bits = (bits << 8) | in[b];
    return std::bit_cast<double>(bits);
}

std::string read_file(const fs::path& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace

std::string sha256_hex(const void* data, std::size_t n)
{
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), data, n) != 1 || EVP_DigestFinal_ex(ctx.get(), md, &len) != 1)
        throw Error("sha256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 15]);
    }
    return out;
}

std::string sha256_file(const fs::path& path)
{
    const auto s = read_file(path);
    return sha256_hex(s.data(), s.size());
}

json grid_to_json(const GridSpec& g)
{
    return json{{"Lx", g.Lx}, {"Nx", g.Nx}, {"Pmax", g.Pmax}, {"Np", g.Np}, {"d", g.d}, {"x_min", g.x_min}};
}

GridSpec grid_from_json(const json& j)
{
    GridSpec g;
    g.Lx = j.at("Lx").get<double>();
    g.Nx = j.at("Nx").get<int>();
    g.Pmax = j.at("Pmax").get<double>();
    g.Np = j.at("Np").get<int>();
    g.d = j.value("d", 1);
    g.x_min = j.value("x_min", 0.0);
    return g;
}

std::vector<unsigned char> snapshot_bytes(const WaveField& phi)
{
    std::vector<unsigned char> bytes(phi.values.size() * 16);
    for (std::size_t k = 0; k < phi.values.size(); ++k) {
        put_le(phi.values[k].real(), bytes.data() + 16 * k);
        put_le(phi.values[k].imag(), bytes.data() + 16 * k + 8);
    }
    return bytes;
}

SnapshotFiles write_snapshot(const fs::path& base, const WaveField& phi, const json& extra)
{
    SnapshotFiles out;
    out.bin = base;
    out.bin += ".bin";
    out.sidecar = base;
    out.sidecar += ".json";
    const auto bytes = snapshot_bytes(phi);
    out.sha256 = sha256_hex(bytes.data(), bytes.size());
    write_text_atomic(out.bin, std::string(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
    json side = {
        {"format", "float64-le interleaved re,im; x-major (index = ix*Np + jp)"},
        {"grid", grid_to_json(phi.grid->spec())},
        {"hbar", phi.grid->hbar()},
        {"t", phi.t},
        {"sha256", out.sha256},
        {"data", out.bin.filename().string()},
    };
    for (auto it = extra.begin(); it != extra.end(); ++it) side[it.key()] = it.value();
    write_json_atomic(out.sidecar, side);
    return out;
}

WaveField read_snapshot(const fs::path& path)
{
    fs::path sidecar = path, bin = path;
    if (path.extension() == ".bin") {
        sidecar.replace_extension(".json");
    } else if (path.extension() == ".json") {
        bin.replace_extension(".bin");
    } else {
        sidecar += ".json";
        bin += ".bin";
    }
    const json side = read_json(sidecar);
    const GridSpec spec = grid_from_json(side.at("grid"));
    auto grid = make_grid(spec, side.at("hbar").get<double>());
    const auto raw = read_file(bin);
    if (raw.size() != grid->size() * 16) throw ShapeError("snapshot " + bin.string() + " has the wrong size");
    if (side.contains("sha256") && sha256_hex(raw.data(), raw.size()) != side["sha256"].get<std::string>())
        throw ValidationError("snapshot " + bin.string() + " fails its checksum");
    WaveField phi = zeros_wave(grid, side.value("t", 0.0));
    const auto* b = reinterpret_cast<const unsigned char*>(raw.data());
    for (std::size_t k = 0; k < phi.values.size(); ++k) phi.values[k] = {get_le(b + 16 * k), get_le(b + 16 * k + 8)};
    return phi;
}

std::string format_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(const fs::path& path, const std::vector<std::string>& header, const std::vector<std::vector<double>>& columns)
{
    if (header.size() != columns.size()) throw ValidationError("write_csv: header/column count mismatch");
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (const auto& c : columns)
        if (c.size() != rows) throw ValidationError("write_csv: ragged columns");
    std::string out;
    for (std::size_t k = 0; k < header.size(); ++k) out += (k ? "," : "") + header[k];
    out += '\n';
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t k = 0; k < columns.size(); ++k) {
            if (k) out += ',';
            out += format_double(columns[k][r]);
        }
        out += '\n';
    }
    write_text_atomic(path, out);
}

void write_series_csv(const fs::path& path, const MetricSeries& series)
{
    write_csv(path, {"t", series.label.empty() ? "value" : series.label}, {series.times, series.values});
}

std::vector<std::vector<double>> read_csv_columns(const fs::path& path, std::vector<std::string>* header)
{
    std::istringstream in(read_file(path));
    std::string line;
    std::vector<std::vector<double>> cols;
    if (!std::getline(in, line)) return cols;
    std::vector<std::string> names;
    {
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) names.push_back(cell);
    }
    cols.resize(names.size());
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        std::size_t k = 0;
        while (std::getline(ls, cell, ',') && k < cols.size()) cols[k++].push_back(std::stod(cell));
    }
    if (header) *header = names;
    return cols;
}

void write_text_atomic(const fs::path& path, const std::string& text)
{
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw Error("cannot write " + tmp.string());
        f.write(text.data(), static_cast<std::streamsize>(text.size()));
        if (!f) throw Error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

void write_json_atomic(const fs::path& path, const json& j)
{
    write_text_atomic(path, j.dump(2) + "\n");
}

json read_json(const fs::path& path)
{
    const auto s = read_file(path);
    try {
        return json::parse(s);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

OutputSet::OutputSet(fs::path root) : root_(std::move(root))
{
    fs::create_directories(root_);
}

void OutputSet::add(const std::string& rel)
{
    const auto sha = sha256_file(root_ / rel);
    for (auto& f : files_)
        if (f.first == rel) {
            f.second = sha;
            return;
        }
    files_.emplace_back(rel, sha);
}

json OutputSet::entries() const
{
    json arr = json::array();
    for (const auto& [rel, sha] : files_) arr.push_back({{"path", rel}, {"sha256", sha}});
    return arr;
}

} // namespace kramers::io
