#pragma once

#include <string>
#include <utility>
#include <vector>

namespace ruinkit {

/// One rectangular result set: numeric rows under named columns, plus ordered
/// string metadata (command, model description, seed, ...) that the JSON
/// rendering carries verbatim. Rendering is deterministic byte for byte.
struct Table {
    std::string command;
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

/// Comma-delimited, '.' decimal separator, LF line endings, 15 significant
/// digits; first line is the column header.
std::string render_csv(const Table& table);

/// Schema "ruinkit.output.v1": {schema, command, meta, columns, rows}.
std::string render_json(const Table& table);

/// Formats one number the way the writers do (shortest of %.15g).
std::string format_number(double v);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace ruinkit
