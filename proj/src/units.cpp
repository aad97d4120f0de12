#include "finmet/units.hpp"

#include <cctype>
#include <charconv>
#include <map>
#include <vector>

#include "finmet/errors.hpp"

namespace finmet::units {

namespace {

// factors are decimal powers so unit application can stay bit-exact with
// the equivalent literal (e.g. "219 nm" parses to exactly 219e-9)
struct UnitEntry {
    const char* symbol;
    int exponent10;
};

const std::vector<UnitEntry>& table(Dim dim) {
    static const std::vector<UnitEntry> none = {};
    static const std::vector<UnitEntry> length = {
        {"m", 0},  {"cm", -2}, {"mm", -3}, {"um", -6},
        {"µm", -6}, {"nm", -9}, {"pm", -12}, {"A", -10},
    };
    static const std::vector<UnitEntry> area = {
        {"m^2", 0}, {"m2", 0}, {"cm^2", -4}, {"mm^2", -6},
        {"um^2", -12}, {"µm^2", -12}, {"nm^2", -18},
    };
    static const std::vector<UnitEntry> voltage = {
        {"V", 0}, {"mV", -3}, {"uV", -6}, {"µV", -6},
    };
    static const std::vector<UnitEntry> capacitance = {
        {"F", 0}, {"mF", -3}, {"uF", -6}, {"nF", -9},
        {"pF", -12}, {"fF", -15}, {"aF", -18},
    };
    static const std::vector<UnitEntry> inductance = {
        {"H", 0}, {"mH", -3}, {"uH", -6}, {"nH", -9}, {"pH", -12},
    };
    static const std::vector<UnitEntry> frequency = {
        {"Hz", 0}, {"kHz", 3}, {"MHz", 6}, {"GHz", 9}, {"THz", 12},
    };
    static const std::vector<UnitEntry> energy_ev = {
        {"eV", 0}, {"meV", -3}, {"ueV", -6}, {"µeV", -6},
    };
    static const std::vector<UnitEntry> temperature = {
        {"K", 0}, {"mK", -3}, {"uK", -6},
    };
    static const std::vector<UnitEntry> resistance = {
        {"ohm", 0}, {"Ohm", 0}, {"kohm", 3}, {"Mohm", 6},
    };
    static const std::vector<UnitEntry> resistance_area = {
        {"ohm.m^2", 0}, {"ohm.m2", 0}, {"ohm.um^2", -12}, {"ohm.µm^2", -12},
    };
    static const std::vector<UnitEntry> time = {
        {"s", 0}, {"ms", -3}, {"us", -6}, {"µs", -6}, {"ns", -9}, {"ps", -12},
    };
    switch (dim) {
        case Dim::dimensionless: return none;
        case Dim::length: return length;
        case Dim::area: return area;
        case Dim::voltage: return voltage;
        case Dim::capacitance: return capacitance;
        case Dim::inductance: return inductance;
        case Dim::frequency: return frequency;
        case Dim::energy_ev: return energy_ev;
        case Dim::temperature: return temperature;
        case Dim::resistance: return resistance;
        case Dim::resistance_area: return resistance_area;
        case Dim::time: return time;
    }
    return none;
}

}  // namespace

const char* base_symbol(Dim dim) {
    switch (dim) {
        case Dim::dimensionless: return "";
        case Dim::length: return "m";
        case Dim::area: return "m^2";
        case Dim::voltage: return "V";
        case Dim::capacitance: return "F";
        case Dim::inductance: return "H";
        case Dim::frequency: return "Hz";
        case Dim::energy_ev: return "eV";
        case Dim::temperature: return "K";
        case Dim::resistance: return "ohm";
        case Dim::resistance_area: return "ohm.m^2";
        case Dim::time: return "s";
    }
    return "";
}

double parse_quantity(const std::string& text, Dim dim, const std::string& context) {
    size_t pos = 0;
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    size_t num_end = pos;
    size_t exp_begin = std::string::npos;  // position of 'e'/'E' in the number
    while (num_end < text.size()) {
        char c = text[num_end];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '+' || c == '-' ||
            c == 'e' || c == 'E') {
            // 'e'/'E' only counts as exponent when followed by digit or sign
            if ((c == 'e' || c == 'E')) {
                if (!(num_end + 1 < text.size() &&
                      (std::isdigit(static_cast<unsigned char>(text[num_end + 1])) ||
                       text[num_end + 1] == '+' || text[num_end + 1] == '-'))) {
                    break;
                }
                exp_begin = num_end;
            }
            ++num_end;
        } else {
            break;
        }
    }
    double value = 0.0;
    auto [p, ec] = std::from_chars(text.data() + pos, text.data() + num_end, value);
    if (ec != std::errc() || p != text.data() + num_end || num_end == pos) {
        throw config_error(context + ": cannot parse number in \"" + text + "\"");
    }
    size_t unit_begin = num_end;
    while (unit_begin < text.size() && std::isspace(static_cast<unsigned char>(text[unit_begin])))
        ++unit_begin;
    size_t unit_end = text.size();
    while (unit_end > unit_begin && std::isspace(static_cast<unsigned char>(text[unit_end - 1])))
        --unit_end;
    std::string unit = text.substr(unit_begin, unit_end - unit_begin);
    if (unit.empty()) return value;  // bare number: SI base unit
    if (dim == Dim::dimensionless) {
        throw config_error(context + ": dimensionless quantity cannot carry unit \"" + unit + "\"");
    }
    for (const auto& entry : table(dim)) {
        if (unit != entry.symbol) continue;
        if (entry.exponent10 == 0) return value;
        // fold the unit's decimal exponent into the text so the result is
        // the correctly rounded decimal, identical to the literal
        long exp10 = entry.exponent10;
        std::string mantissa;
        if (exp_begin != std::string::npos) {
            long text_exp = 0;
            size_t digits = exp_begin + 1;
            if (digits < num_end && text[digits] == '+') ++digits;  // from_chars rejects '+'
            std::from_chars(text.data() + digits, text.data() + num_end, text_exp);
            exp10 += text_exp;
            mantissa = text.substr(pos, exp_begin - pos);
        } else {
            mantissa = text.substr(pos, num_end - pos);
        }
        const std::string combined = mantissa + "e" + std::to_string(exp10);
        double out = 0.0;
        std::from_chars(combined.data(), combined.data() + combined.size(), out);
        return out;
    }
    throw config_error(context + ": unknown unit \"" + unit + "\" (expected a " +
                       base_symbol(dim) + std::string("-compatible unit)"));
}

}  // namespace finmet::units
