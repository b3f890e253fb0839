#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "densemap/errors.hpp"

namespace densemap::cli {

/// Parse args (subcommand name first) against the app. Returns false when
/// help was requested and printed; converts parse failures into
/// ValidationError so dispatch maps them to exit code 1.
inline bool parse_app(CLI::App& app, const std::vector<std::string>& args,
                      std::ostream& out) {
    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return false;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return false;
    } catch (const CLI::ParseError& e) {
        throw ValidationError(std::string(e.what()) + "\n" + app.help());
    }
    return true;
}

} // namespace densemap::cli
