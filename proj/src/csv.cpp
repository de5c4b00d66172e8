#include "flexagg/csv.hpp"

#include "flexagg/error.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace flexagg::csv {

std::string format_number(double value) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", value);
    return buf;
}

std::vector<std::string> split_record(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        auto field = line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
        while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
        while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
        out.emplace_back(field);
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::size_t Table::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw InvalidArgument("missing CSV column '" + std::string(name) + "'");
}

Table read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path.string(), "cannot open for reading");
    Table t;
    std::string line;
    if (!std::getline(in, line)) throw IoError(path.string(), "empty CSV file");
    t.header = split_record(line);
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        t.rows.push_back(split_record(line));
        if (t.rows.back().size() != t.header.size())
            throw IoError(path.string(), "row " + std::to_string(t.rows.size()) + " has " +
                                             std::to_string(t.rows.back().size()) + " fields, expected " +
                                             std::to_string(t.header.size()));
    }
    return t;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path.string(), "cannot open for writing");
    out << content;
    out.flush();
    if (!out) throw IoError(path.string(), "write failed");
}

double parse_double(const std::string& field) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (field.empty() || end != field.c_str() + field.size() || errno == ERANGE)
        throw InvalidArgument("not a number: '" + field + "'");
    return v;
}

}  // namespace flexagg::csv
