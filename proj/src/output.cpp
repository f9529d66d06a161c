#include "ruinkit/output.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace ruinkit {

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

std::string render_csv(const Table& table) {
    std::string out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) out += ',';
        out += table.columns[i];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size())
            throw std::logic_error("table row width does not match its header");
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_number(row[i]);
        }
        out += '\n';
    }
    return out;
}

std::string render_json(const Table& table) {
    nlohmann::ordered_json j;
    j["schema"] = "ruinkit.output.v1";
    j["command"] = table.command;
    auto& meta = j["meta"] = nlohmann::ordered_json::object();
    for (const auto& [key, value] : table.meta) meta[key] = value;
    j["columns"] = table.columns;
    auto& rows = j["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size())
            throw std::logic_error("table row width does not match its header");
        rows.push_back(row);
    }
    return j.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace ruinkit
