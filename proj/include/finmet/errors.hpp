#ifndef FINMET_ERRORS_HPP
#define FINMET_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace finmet {

// Error categories map one-to-one onto CLI exit codes and C-API status codes.
enum class errc {
    ok = 0,
    internal = 1,
    config = 2,       // bad config, bad arguments, violated preconditions
    convergence = 3,  // solver/fit did not converge or is ill-conditioned
    io = 4,           // file system, parse failures
};

class error : public std::runtime_error {
  public:
    error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    errc code() const noexcept { return code_; }

  private:
    errc code_;
};

struct config_error : error {
    explicit config_error(const std::string& what) : error(errc::config, what) {}
};

// Invalid physical inputs (non-positive lengths, out-of-range fractions, ...).
struct domain_error : error {
    explicit domain_error(const std::string& what) : error(errc::config, what) {}
};

// Grid too coarse for the smallest feature.
struct resolution_error : error {
    explicit resolution_error(const std::string& what) : error(errc::config, what) {}
};

// Grid would exceed the node budget.
struct resource_error : error {
    explicit resource_error(const std::string& what) : error(errc::config, what) {}
};

struct convergence_error : error {
    convergence_error(const std::string& what, double residual)
        : error(errc::convergence, what), residual(residual) {}
    double residual;
};

// Independent capacitance estimates disagree beyond tolerance.
struct consistency_error : error {
    explicit consistency_error(const std::string& what) : error(errc::convergence, what) {}
};

// Nearly singular linear system (e.g. parallel participation vectors).
struct conditioning_error : error {
    explicit conditioning_error(const std::string& what) : error(errc::convergence, what) {}
};

struct fit_error : error {
    fit_error(const std::string& what, double residual)
        : error(errc::convergence, what), residual(residual) {}
    double residual;
};

struct io_error : error {
    explicit io_error(const std::string& what) : error(errc::io, what) {}
};

}  // namespace finmet

#endif
