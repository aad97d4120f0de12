#ifndef FINMET_TOUCHSTONE_HPP
#define FINMET_TOUCHSTONE_HPP

#include <string>

#include "finmet/resonator.hpp"

namespace finmet {

// Two-port Touchstone v1 reader; only S21 is kept. Accepts HZ/KHZ/MHZ/GHZ
// frequency units and RI/MA/DB formats, e.g. "# HZ S RI R 50".
S21Trace read_touchstone(const std::string& path);

// CSV with columns freq_hz, re, im.
S21Trace read_trace_csv(const std::string& path);

// Dispatches on extension (.s2p/.snp -> Touchstone) with a content sniff
// fallback.
S21Trace read_trace(const std::string& path);

void write_trace_csv(const S21Trace& trace, const std::string& path);

}  // namespace finmet

#endif
