#ifndef AVC_CSV_HPP
#define AVC_CSV_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace avc {

// fixed 9-significant-digit decimal rendering used in all CSV output
std::string format_double(double v);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const; // -1 when absent
};

CsvTable read_csv(std::istream& is);
CsvTable read_csv_file(const std::string& path);

// deterministic single-chart SVG: one polyline per y column
void emit_plot(const std::string& csv_path, const std::string& svg_path,
               const std::string& x_column, const std::vector<std::string>& y_columns,
               bool log_y = false);

} // namespace avc

#endif
