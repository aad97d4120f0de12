#ifndef FINMET_CONSTANTS_HPP
#define FINMET_CONSTANTS_HPP

// CODATA 2018 values, SI units.
namespace finmet::phys {

inline constexpr double eps0 = 8.8541878128e-12;    // F/m
inline constexpr double elem_charge = 1.602176634e-19;  // C
inline constexpr double planck_h = 6.62607015e-34;   // J s
inline constexpr double hbar = 1.054571817e-34;      // J s
inline constexpr double boltzmann_k = 1.380649e-23;  // J/K
inline constexpr double electron_mass = 9.1093837015e-31;  // kg
inline constexpr double flux_quantum = 2.067833848e-15;    // Wb, h/2e

inline constexpr double ev_to_joule = elem_charge;

}  // namespace finmet::phys

#endif
