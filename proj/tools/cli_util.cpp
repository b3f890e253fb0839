#include "cli_util.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "densemap/errors.hpp"

namespace fs = std::filesystem;

namespace densemap::cli {

std::string fnv1a_file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("manifest: cannot open input " + path + " for hashing");
    std::uint64_t hash = 0xCBF29CE484222325ULL;
    char buf[1 << 16];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        const std::streamsize n = in.gcount();
        for (std::streamsize i = 0; i < n; ++i) {
            hash ^= static_cast<unsigned char>(buf[i]);
            hash *= 0x100000001B3ULL;
        }
        if (!in) break;
    }
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(hash));
    return hex;
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::string frame_stem(std::int64_t frame_id) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "frame_%06lld",
                  static_cast<long long>(frame_id));
    return buf;
}

std::map<std::string, std::string> list_by_stem(const std::string& dir,
                                                const std::string& extension) {
    if (!fs::is_directory(dir))
        throw IoError("expected a directory at " + dir);
    std::map<std::string, std::string> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const fs::path& p = entry.path();
        if (p.extension() != extension) continue;
        out[p.stem().string()] = p.string();
    }
    return out;
}

std::int64_t frame_id_from_stem(const std::string& stem) {
    const auto us = stem.find_last_of('_');
    const std::string digits = us == std::string::npos ? stem : stem.substr(us + 1);
    if (digits.empty() ||
        digits.find_first_not_of("0123456789") != std::string::npos)
        throw ValidationError("cannot parse a frame id from stem '" + stem + "'");
    return std::stoll(digits);
}

std::vector<std::string> paired_stems(const std::map<std::string, std::string>& a,
                                      const std::map<std::string, std::string>& b,
                                      const std::string& what_a,
                                      const std::string& what_b) {
    std::vector<std::string> stems;
    for (const auto& [stem, path] : a) {
        if (b.count(stem)) {
            stems.push_back(stem);
        } else {
            throw ValidationError("no " + what_b + " file pairs with " + what_a +
                                  " stem '" + stem + "'");
        }
    }
    for (const auto& [stem, path] : b)
        if (!a.count(stem))
            throw ValidationError("no " + what_a + " file pairs with " + what_b +
                                  " stem '" + stem + "'");
    if (stems.empty())
        throw ValidationError("no paired " + what_a + "/" + what_b + " files found");
    return stems;
}

void ManifestBuilder::add_input(const std::string& path) {
    inputs[path] = fnv1a_file_digest(path);
}

void ManifestBuilder::add_input_dir(const std::string& dir,
                                    const std::string& extension) {
    for (const auto& [stem, path] : list_by_stem(dir, extension)) add_input(path);
}

std::string ManifestBuilder::to_json() const {
    nlohmann::json j;
    j["command"] = command;
    j["config"] = config;
    j["inputs"] = inputs;
    j["version"] = kToolVersion;
    j["seed"] = seed;
    return j.dump(2);
}

void ManifestBuilder::write_beside_dir(const std::string& out_dir) const {
    const fs::path p = fs::path(out_dir) / "manifest.json";
    std::ofstream out(p, std::ios::trunc);
    if (!out) throw IoError("manifest: cannot write " + p.string());
    out << to_json() << "\n";
}

void ManifestBuilder::write_beside_file(const std::string& out_file) const {
    const std::string p = out_file + ".manifest.json";
    std::ofstream out(p, std::ios::trunc);
    if (!out) throw IoError("manifest: cannot write " + p);
    out << to_json() << "\n";
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> explicit_seed,
                           std::uint64_t fallback) {
    if (explicit_seed) return *explicit_seed;
    if (const char* env = std::getenv("DENSEMAP_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw ValidationError(std::string("DENSEMAP_SEED is not a number: ") +
                                  env);
        }
    }
    return fallback;
}

nlohmann::json load_config_arg(const std::vector<std::string>& args) {
    for (std::size_t i = 0; i + 1 < args.size(); ++i) {
        if (args[i] != "--config") continue;
        std::ifstream in(args[i + 1]);
        if (!in) throw IoError("config: cannot open " + args[i + 1]);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw FormatError("config: " + args[i + 1] + " is not valid JSON: " +
                              e.what());
        }
        if (j.is_object() && j.contains("config") && j["config"].is_object())
            return j["config"]; // manifest file: re-run its effective config
        return j;
    }
    return nlohmann::json::object();
}

void parallel_for(std::int64_t n, int jobs,
                  const std::function<void(std::int64_t)>& fn) {
    if (n <= 0) return;
    if (jobs <= 1 || n == 1) {
        for (std::int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;
    auto worker = [&]() {
        for (;;) {
            const std::int64_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> threads;
    const int n_threads = std::min<std::int64_t>(jobs, n);
    threads.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

CsvWriter::CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvWriter::add_row(const std::vector<std::string>& cells) {
    if (cells.size() != header_.size())
        throw ValidationError("csv: row has " + std::to_string(cells.size()) +
                              " cells, header has " + std::to_string(header_.size()));
    rows_.push_back(cells);
}

std::string CsvWriter::to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < header_.size(); ++i)
        os << (i ? "," : "") << header_[i];
    os << "\n";
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
        os << "\n";
    }
    return os.str();
}

void CsvWriter::write(const std::string& path) const {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("csv: cannot write " + path);
    out << to_string();
    if (!out) throw IoError("csv: write failure on " + path);
}

void ensure_directory(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
        throw IoError("cannot create output directory " + dir);
}

} // namespace densemap::cli
