#ifndef HELI_REPORT_HPP
#define HELI_REPORT_HPP

#include <map>
#include <string>
#include <vector>

namespace heli {

inline constexpr const char* kToolVersion = "1.0.0";

/// FNV-1a 64 over the canonical "key=value\n" rendering of the options.
std::string config_hash(const std::map<std::string, std::string>& options);

/// Column-stable CSV writer: header row then data rows, '%.17g' doubles.
class CsvWriter {
  public:
    explicit CsvWriter(std::vector<std::string> columns);
    void add_row(const std::vector<double>& row);
    void write(const std::string& path) const;
    std::string render() const;

  private:
    std::vector<std::string> columns_;
    std::vector<std::vector<double>> rows_;
};

std::string format_double(double v);

/// Writes a gnuplot script that plots each value column of the CSV against
/// the first column on log-log axes.
void write_gnuplot_script(const std::string& script_path, const std::string& csv_path,
                          const std::vector<std::string>& columns, const std::string& title,
                          bool loglog = true);

} // namespace heli

#endif
