#include "src/cli/csv.hpp"

#include <fstream>

#include "src/support/error.hpp"
#include "src/support/format.hpp"

namespace fbsdde {

std::string csv_cell(double v) { return format_number(v); }

std::string csv_cell(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

namespace {

void append_row(std::string& out, const CsvRow& row) {
    for (std::size_t k = 0; k < row.size(); ++k) {
        if (k) out += ',';
        out += row[k];
    }
    out += '\n';
}

}  // namespace

void write_csv(const std::filesystem::path& path, const RunManifest& manifest,
               const CsvRow& header, const std::vector<CsvRow>& rows) {
    std::string text = manifest.header();
    append_row(text, header);
    for (const auto& r : rows) append_row(text, r);

    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
    os << text;
    if (!os) throw Error(ErrorCode::InvalidArgument, "failed writing " + path.string());
}

}  // namespace fbsdde
