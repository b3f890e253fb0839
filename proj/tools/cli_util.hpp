#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace densemap::cli {

inline constexpr const char* kToolVersion = "0.1.0";

/// FNV-1a 64-bit digest of a file's bytes, as 16 hex characters.
/// Non-cryptographic; identifies inputs in run manifests.
std::string fnv1a_file_digest(const std::string& path);

/// Fixed—format a double for CSV/JSON side files ("%.10g").
std::string format_number(double v);

/// frame_000123 style stem for a frame id.
std::string frame_stem(std::int64_t frame_id);

/// Files in `dir` with the given extension (".pgm", ".dmf"), sorted by
/// filename; returns stem -> full path. Throws IoError when the directory
/// does not exist.
std::map<std::string, std::string> list_by_stem(const std::string& dir,
                                                const std::string& extension);

/// Frame id parsed from the digits after the last '_' of a stem.
std::int64_t frame_id_from_stem(const std::string& stem);

/// Stems present in both maps, sorted; throws ValidationError when empty or
/// when either side has an unmatched stem.
std::vector<std::string> paired_stems(const std::map<std::string, std::string>& a,
                                      const std::map<std::string, std::string>& b,
                                      const std::string& what_a,
                                      const std::string& what_b);

/// Effective run configuration for the manifest plus the hashes of every
/// consumed input file.
struct ManifestBuilder {
    std::string command;
    nlohmann::json config = nlohmann::json::object();
    nlohmann::json inputs = nlohmann::json::object();
    std::uint64_t seed = 0;

    void add_input(const std::string& path);
    void add_input_dir(const std::string& dir, const std::string& extension);
    /// Write <dir>/manifest.json (trailing slash optional).
    void write_beside_dir(const std::string& out_dir) const;
    /// Write <file>.manifest.json next to a file output.
    void write_beside_file(const std::string& out_file) const;
    std::string to_json() const;
};

/// Seed resolution: explicit flag/config value beats the DENSEMAP_SEED
/// environment variable beats the default.
std::uint64_t resolve_seed(std::optional<std::uint64_t> explicit_seed,
                           std::uint64_t fallback = 1);

/// Pre-scan argv for "--config <file>" and load it; a manifest file (object
/// with a "config" member) is unwrapped to its config. Returns an empty
/// object when absent.
nlohmann::json load_config_arg(const std::vector<std::string>& args);

template <typename T>
void cfg_get(const nlohmann::json& cfg, const char* key, T& var) {
    if (cfg.contains(key)) var = cfg.at(key).get<T>();
}

/// Run fn(i) for i in [0, n) on up to `jobs` threads. Exceptions from
/// workers are rethrown (first one wins). jobs <= 1 runs inline.
void parallel_for(std::int64_t n, int jobs,
                  const std::function<void(std::int64_t)>& fn);

/// Simple CSV emitter: header row, data rows, aggregate row last.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);
    void add_row(const std::vector<std::string>& cells);
    void write(const std::string& path) const;
    std::string to_string() const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

void ensure_directory(const std::string& dir);

} // namespace densemap::cli
