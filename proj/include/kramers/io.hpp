#pragma once

#include "kramers/metrics.hpp"
#include "kramers/phase_field.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace kramers::io {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string sha256_hex(const void* data, std::size_t n);
std::string sha256_file(const fs::path& path);

// Little-endian float64 interleaved (re, im), x-major; <base>.bin plus <base>.json sidecar.
struct SnapshotFiles {
    fs::path bin;
    fs::path sidecar;
    std::string sha256;
};

std::vector<unsigned char> snapshot_bytes(const WaveField& phi);
SnapshotFiles write_snapshot(const fs::path& base, const WaveField& phi, const json& extra = json::object());
WaveField read_snapshot(const fs::path& path);

json grid_to_json(const GridSpec& g);
GridSpec grid_from_json(const json& j);

std::string format_double(double v);
// columns of equal length; CSV with '.', 17 significant digits, LF
void write_csv(const fs::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);
void write_series_csv(const fs::path& path, const MetricSeries& series);
std::vector<std::vector<double>> read_csv_columns(const fs::path& path, std::vector<std::string>* header = nullptr);

void write_text_atomic(const fs::path& path, const std::string& text);
void write_json_atomic(const fs::path& path, const json& j);
json read_json(const fs::path& path);

// Files written under one output root, with their checksums.
class OutputSet {
public:
    explicit OutputSet(fs::path root);

    const fs::path& root() const { return root_; }
    fs::path path(const std::string& rel) const { return root_ / rel; }
    void add(const std::string& rel);  // hashes the file now
    json entries() const;

private:
    fs::path root_;
    std::vector<std::pair<std::string, std::string>> files_;
};

} // namespace kramers::io
