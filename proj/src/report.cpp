#include "heli/report.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>

#include "heli/errors.hpp"

namespace heli {

std::string config_hash(const std::map<std::string, std::string>& options) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ull;
        }
    };
    for (const auto& [k, v] : options) {
        mix(k);
        mix("=");
        mix(v);
        mix("\n");
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvWriter::add_row(const std::vector<double>& row) {
    if (row.size() != columns_.size())
        throw InvalidParams("CsvWriter: row width does not match header");
    rows_.push_back(row);
}

std::string CsvWriter::render() const {
    std::string out;
    for (std::size_t c = 0; c < columns_.size(); ++c) {
        if (c) out += ',';
        out += columns_[c];
    }
    out += '\n';
    for (const auto& row : rows_) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += format_double(row[c]);
        }
        out += '\n';
    }
    return out;
}

void CsvWriter::write(const std::string& path) const {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw FormatError("CsvWriter: cannot open " + path);
    const std::string body = render();
    os.write(body.data(), static_cast<std::streamsize>(body.size()));
}

void write_gnuplot_script(const std::string& script_path, const std::string& csv_path,
                          const std::vector<std::string>& columns, const std::string& title,
                          bool loglog) {
    std::ofstream os(script_path, std::ios::binary | std::ios::trunc);
    if (!os) throw FormatError("write_gnuplot_script: cannot open " + script_path);
    os << "set datafile separator ','\n";
    os << "set key autotitle columnhead\n";
    os << "set title '" << title << "'\n";
    if (loglog) os << "set logscale xy\n";
    os << "plot ";
    for (std::size_t c = 1; c < columns.size(); ++c) {
        if (c > 1) os << ", ";
        os << "'" << csv_path << "' using 1:" << (c + 1) << " with linespoints";
    }
    os << "\n";
}

} // namespace heli
