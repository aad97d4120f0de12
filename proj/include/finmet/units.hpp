#ifndef FINMET_UNITS_HPP
#define FINMET_UNITS_HPP

#include <string>

namespace finmet::units {

// Dimension of a config quantity. Bare numbers are taken in the SI base unit
// of the dimension; strings carry an explicit unit, e.g. "219 nm" or "2 nH".
enum class Dim {
    dimensionless,
    length,
    area,
    voltage,
    capacitance,
    inductance,
    frequency,
    energy_ev,   // stored in electron-volts, not joules
    temperature,
    resistance,
    resistance_area,  // ohm m^2
    time,
};

// Base unit symbol for error messages ("m", "F", ...).
const char* base_symbol(Dim dim);

// Parses "<number> <unit>" (unit optional) into the dimension's base unit.
// Throws config_error on unknown units or units of the wrong dimension;
// `context` names the offending config key in the message.
double parse_quantity(const std::string& text, Dim dim, const std::string& context);

}  // namespace finmet::units

#endif
