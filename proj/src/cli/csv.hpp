#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "src/cli/manifest.hpp"

namespace fbsdde {

using CsvRow = std::vector<std::string>;

std::string csv_cell(double v);
std::string csv_cell(const std::optional<double>& v);   ///< empty when absent

/// Manifest comment lines, then the header row, then the rows. Throws
/// Error(InvalidArgument) if the file cannot be written.
void write_csv(const std::filesystem::path& path, const RunManifest& manifest,
               const CsvRow& header, const std::vector<CsvRow>& rows);

}  // namespace fbsdde
