#include "finmet/touchstone.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "finmet/csv.hpp"
#include "finmet/errors.hpp"

namespace finmet {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

enum class Format { ri, ma, db };

}  // namespace

S21Trace read_touchstone(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path);

    double f_scale = 1e9;  // touchstone default unit is GHz
    Format fmt = Format::ma;
    bool have_option = false;
    std::vector<double> values;
    std::string line;
    while (std::getline(in, line)) {
        const auto bang = line.find('!');
        if (bang != std::string::npos) line.erase(bang);
        std::size_t i = 0;
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i == line.size()) continue;
        if (line[i] == '#') {
            if (have_option) continue;  // later option lines are ignored in v1
            have_option = true;
            std::stringstream ss(line.substr(i + 1));
            std::string tok;
            while (ss >> tok) {
                const std::string t = lower(tok);
                if (t == "hz") f_scale = 1.0;
                else if (t == "khz") f_scale = 1e3;
                else if (t == "mhz") f_scale = 1e6;
                else if (t == "ghz") f_scale = 1e9;
                else if (t == "ri") fmt = Format::ri;
                else if (t == "ma") fmt = Format::ma;
                else if (t == "db") fmt = Format::db;
                else if (t == "s") { /* parameter type */ }
                else if (t == "r") { ss >> tok; /* reference impedance */ }
                else {
                    throw io_error(path + ": unsupported touchstone option \"" + tok + "\"");
                }
            }
            continue;
        }
        std::stringstream ss(line.substr(i));
        double v;
        while (ss >> v) values.push_back(v);
    }

    // 2-port records: f, S11, S21, S12, S22 as value pairs (9 numbers)
    if (values.empty() || values.size() % 9 != 0) {
        throw io_error(path + ": expected two-port records of 9 numbers, got " +
                       std::to_string(values.size()) + " values");
    }
    S21Trace trace;
    constexpr double deg = std::numbers::pi / 180.0;
    for (std::size_t k = 0; k < values.size(); k += 9) {
        trace.f_hz.push_back(values[k] * f_scale);
        const double a = values[k + 3], b = values[k + 4];
        switch (fmt) {
            case Format::ri: trace.s21.emplace_back(a, b); break;
            case Format::ma: trace.s21.push_back(std::polar(a, b * deg)); break;
            case Format::db: trace.s21.push_back(std::polar(std::pow(10.0, a / 20.0), b * deg)); break;
        }
    }
    trace.validate();
    return trace;
}

S21Trace read_trace_csv(const std::string& path) {
    const csv::Table t = csv::read(path);
    const std::size_t cf = t.column("freq_hz");
    const std::size_t cre = t.column("re");
    const std::size_t cim = t.column("im");
    S21Trace trace;
    for (const auto& row : t.rows) {
        trace.f_hz.push_back(csv::to_double(row[cf], path));
        trace.s21.emplace_back(csv::to_double(row[cre], path), csv::to_double(row[cim], path));
    }
    trace.validate();
    return trace;
}

S21Trace read_trace(const std::string& path) {
    const std::string low = lower(path);
    if (low.ends_with(".s2p") || low.ends_with(".snp") || low.ends_with(".ts")) {
        return read_touchstone(path);
    }
    if (low.ends_with(".csv")) return read_trace_csv(path);
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path);
    char first = 0;
    in >> first;
    if (first == '#' || first == '!') return read_touchstone(path);
    return read_trace_csv(path);
}

void write_trace_csv(const S21Trace& trace, const std::string& path) {
    csv::Writer w(path, {"freq_hz", "re", "im"});
    for (std::size_t i = 0; i < trace.f_hz.size(); ++i) {
        w.row({trace.f_hz[i], trace.s21[i].real(), trace.s21[i].imag()});
    }
    w.close();
}

}  // namespace finmet
