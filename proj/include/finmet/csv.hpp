#ifndef FINMET_CSV_HPP
#define FINMET_CSV_HPP

#include <fstream>
#include <string>
#include <variant>
#include <vector>

namespace finmet::csv {

using Cell = std::variant<std::string, double, long>;

// Shortest representation that round-trips the double exactly.
std::string format_double(double value);

// Deterministic writer: fixed formatting, no locale, LF line endings.
class Writer {
  public:
    Writer(const std::string& path, const std::vector<std::string>& header);
    void row(const std::vector<Cell>& cells);
    void close();

  private:
    std::ofstream out_;
    std::string path_;
    std::size_t width_;
};

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const;  // throws io_error if absent
};

Table read(const std::string& path);

double to_double(const std::string& cell, const std::string& context);

}  // namespace finmet::csv

#endif
