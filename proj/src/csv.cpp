#include "avc/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "avc/errors.hpp"

namespace avc {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

int CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

namespace {
std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}
} // namespace

CsvTable read_csv(std::istream& is) {
    CsvTable t;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto cells = split_line(line);
        if (t.header.empty()) {
            t.header = std::move(cells);
        } else {
            if (cells.size() != t.header.size())
                throw ConfigError("csv row " + std::to_string(lineno) + " has " +
                                  std::to_string(cells.size()) + " cells, header has " +
                                  std::to_string(t.header.size()));
            t.rows.push_back(std::move(cells));
        }
    }
    if (t.header.empty()) throw ConfigError("csv: missing header row");
    return t;
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open csv file: " + path);
    return read_csv(f);
}

namespace {

constexpr double kW = 640, kH = 400;
constexpr double kML = 62, kMR = 16, kMT = 16, kMB = 44;

std::string coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

const char* kColors[] = {"#1f6fb2", "#d1495b", "#3a7d44", "#8c5383", "#c88a2a", "#4c4c4c"};

} // namespace

void emit_plot(const std::string& csv_path, const std::string& svg_path,
               const std::string& x_column, const std::vector<std::string>& y_columns,
               bool log_y) {
    CsvTable t = read_csv_file(csv_path);
    const int xc = t.column(x_column);
    if (xc < 0) throw ConfigError("plot: no column named " + x_column);
    std::vector<int> ycs;
    for (const auto& y : y_columns) {
        const int c = t.column(y);
        if (c < 0) throw ConfigError("plot: no column named " + y);
        ycs.push_back(c);
    }
    if (ycs.empty()) throw ConfigError("plot: at least one y column required");

    auto parse_cell = [](const std::string& s, std::size_t row) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw ConfigError("plot: row " + std::to_string(row + 2) +
                              ": cell \"" + s + "\" is not a number");
        }
    };

    // gather series; log scale drops nonpositive values
    struct Pt { double x, y; };
    std::vector<std::vector<Pt>> series(ycs.size());
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool any = false;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const double x = parse_cell(t.rows[r][xc], r);
        for (std::size_t sidx = 0; sidx < ycs.size(); ++sidx) {
            double y = parse_cell(t.rows[r][ycs[sidx]], r);
            if (log_y) {
                if (y <= 0) continue;
                y = std::log10(y);
            }
            series[sidx].push_back({x, y});
            if (!any) {
                xmin = xmax = x;
                ymin = ymax = y;
                any = true;
            } else {
                xmin = std::min(xmin, x);
                xmax = std::max(xmax, x);
                ymin = std::min(ymin, y);
                ymax = std::max(ymax, y);
            }
        }
    }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;

    auto px = [&](double x) { return kML + (x - xmin) / (xmax - xmin) * (kW - kML - kMR); };
    auto py = [&](double y) { return kH - kMB - (y - ymin) / (ymax - ymin) * (kH - kMT - kMB); };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" "
           "viewBox=\"0 0 640 400\">\n";
    svg += "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
    // axes
    svg += "<line x1=\"" + coord(kML) + "\" y1=\"" + coord(kH - kMB) + "\" x2=\"" +
           coord(kW - kMR) + "\" y2=\"" + coord(kH - kMB) +
           "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    svg += "<line x1=\"" + coord(kML) + "\" y1=\"" + coord(kMT) + "\" x2=\"" + coord(kML) +
           "\" y2=\"" + coord(kH - kMB) + "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    // ticks
    for (int k = 0; k <= 4; ++k) {
        const double xv = xmin + (xmax - xmin) * k / 4.0;
        const double yv = ymin + (ymax - ymin) * k / 4.0;
        svg += "<line x1=\"" + coord(px(xv)) + "\" y1=\"" + coord(kH - kMB) + "\" x2=\"" +
               coord(px(xv)) + "\" y2=\"" + coord(kH - kMB + 5) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + coord(px(xv)) + "\" y=\"" + coord(kH - kMB + 18) +
               "\" font-size=\"11\" text-anchor=\"middle\">" + tick_label(xv) + "</text>\n";
        svg += "<line x1=\"" + coord(kML - 5) + "\" y1=\"" + coord(py(yv)) + "\" x2=\"" +
               coord(kML) + "\" y2=\"" + coord(py(yv)) + "\" stroke=\"black\"/>\n";
        const std::string ylab =
            log_y ? ("1e" + tick_label(yv)) : tick_label(yv);
        svg += "<text x=\"" + coord(kML - 8) + "\" y=\"" + coord(py(yv) + 4) +
               "\" font-size=\"11\" text-anchor=\"end\">" + ylab + "</text>\n";
    }
    // axis titles
    svg += "<text x=\"" + coord((kML + kW - kMR) / 2) + "\" y=\"" + coord(kH - 8) +
           "\" font-size=\"12\" text-anchor=\"middle\">" + x_column + "</text>\n";
    // series
    for (std::size_t sidx = 0; sidx < series.size(); ++sidx) {
        const char* color = kColors[sidx % 6];
        if (!series[sidx].empty()) {
            std::string pts;
            for (const auto& p : series[sidx]) {
                if (!pts.empty()) pts += " ";
                pts += coord(px(p.x)) + "," + coord(py(p.y));
            }
            svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
                   "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
        }
        // legend entry
        const double ly = kMT + 14 * static_cast<double>(sidx);
        svg += "<rect x=\"" + coord(kW - kMR - 150) + "\" y=\"" + coord(ly) +
               "\" width=\"10\" height=\"3\" fill=\"" + color + "\"/>\n";
        svg += "<text x=\"" + coord(kW - kMR - 135) + "\" y=\"" + coord(ly + 5) +
               "\" font-size=\"11\">" + y_columns[sidx] + "</text>\n";
    }
    svg += "</svg>\n";

    std::ofstream out(svg_path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file: " + svg_path);
    out << svg;
}

} // namespace avc
