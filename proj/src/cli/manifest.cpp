#include "src/cli/manifest.hpp"

#include <chrono>
#include <ctime>

namespace fbsdde {

namespace {

std::string quote_if_needed(const std::string& s) {
    if (!s.empty() && s.find_first_of(" \t'\"\\$") == std::string::npos) return s;
    std::string out = "'";
    for (char c : s) {
        if (c == '\'') out += "'\\''";
        else out += c;
    }
    return out + "'";
}

}  // namespace

std::string RunManifest::command_line() const {
    std::string cmd = "fbsdde " + subcommand + " " + quote_if_needed(spec_path);
    for (const auto& [flag, value] : settings) {
        cmd += " --" + flag;
        if (!value.empty()) cmd += " " + quote_if_needed(value);
    }
    cmd += " --out " + quote_if_needed(output_dir);
    cmd += " --timestamp " + timestamp;
    return cmd;
}

std::string RunManifest::header() const {
    std::string out;
    out += "# command: " + command_line() + "\n";
    out += "# subcommand: " + subcommand + "\n";
    out += "# spec: " + spec_path + "\n";
    for (const auto& [flag, value] : settings) {
        out += "# setting: " + flag + "=" + (value.empty() ? "true" : value) + "\n";
    }
    out += "# out: " + output_dir + "\n";
    out += "# timestamp: " + timestamp + "\n";
    out += "# seed: " + std::to_string(seed) + "\n";
    return out;
}

std::string utc_timestamp_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace fbsdde
