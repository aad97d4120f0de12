#include "finmet/csv.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

#include "finmet/errors.hpp"

namespace finmet::csv {

std::string format_double(double value) {
    char buf[40];
    // try increasing precision until the value round-trips exactly
    for (int prec = 9; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, value);
        double back = 0.0;
        std::from_chars(buf, buf + std::char_traits<char>::length(buf), back);
        if (back == value) break;
    }
    return buf;
}

Writer::Writer(const std::string& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary), path_(path), width_(header.size()) {
    if (!out_) throw io_error("cannot open " + path + " for writing");
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out_ << ',';
        out_ << header[i];
    }
    out_ << '\n';
}

void Writer::row(const std::vector<Cell>& cells) {
    if (cells.size() != width_) {
        throw io_error(path_ + ": row has " + std::to_string(cells.size()) +
                       " cells, header has " + std::to_string(width_));
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        if (const auto* s = std::get_if<std::string>(&cells[i])) {
            out_ << *s;
        } else if (const auto* d = std::get_if<double>(&cells[i])) {
            out_ << format_double(*d);
        } else {
            out_ << std::get<long>(cells[i]);
        }
    }
    out_ << '\n';
}

void Writer::close() {
    out_.close();
    if (out_.fail()) throw io_error("failed writing " + path_);
}

std::size_t Table::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw io_error("csv: missing column \"" + name + "\"");
}

Table read(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open " + path);
    Table t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (line.back() == ',') cells.push_back("");
        if (first) {
            t.header = std::move(cells);
            first = false;
        } else {
            t.rows.push_back(std::move(cells));
        }
    }
    if (first) throw io_error(path + ": empty csv");
    return t;
}

double to_double(const std::string& cell, const std::string& context) {
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
    auto [p, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc()) throw io_error(context + ": cannot parse number \"" + cell + "\"");
    return value;
}

}  // namespace finmet::csv
