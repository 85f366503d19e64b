#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace fbsdde {

/// Everything needed to regenerate an output file. The canonical command
/// lists every resolved setting, so re-running it reproduces the file byte
/// for byte (the worker count is left out on purpose: results do not
/// depend on it).
struct RunManifest {
    std::string subcommand;
    std::string spec_path;
    std::vector<std::pair<std::string, std::string>> settings;   ///< flag name (no dashes), value
    std::string output_dir;
    std::string timestamp;
    std::uint64_t seed = 0;

    std::string command_line() const;

    /// '#'-prefixed header lines, each ending in '\n'.
    std::string header() const;
};

/// Current UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp_now();

}  // namespace fbsdde
