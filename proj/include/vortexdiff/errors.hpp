#pragma once

#include <stdexcept>
#include <string>

namespace vortexdiff {

// Process exit codes used by the CLI.
enum class ExitCode : int {
    Ok = 0,
    Config = 2,
    Numeric = 3,
    Io = 4,
};

/// Invalid or inconsistent scenario configuration. `line` is 1-based, 0 when
/// the error is semantic rather than tied to a source line.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

/// Failure inside a numerical routine (stability bound, ill-posed request).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Explicit time step above the stability limit of the 5-point stencil.
class CflViolation : public NumericError {
public:
    CflViolation(double dt, double max_dt)
        : NumericError("explicit step dt=" + std::to_string(dt) +
                       " violates the stability bound; maximum admissible dt=" +
                       std::to_string(max_dt)),
          max_dt_(max_dt) {}
    double max_dt() const noexcept { return max_dt_; }

private:
    double max_dt_;
};

/// Requested inversion of classical diffusion. Carries the amplification the
/// inverse would apply to the highest resolved wavenumber; nothing is computed.
class IrreversibleError : public NumericError {
public:
    explicit IrreversibleError(double log10_amplification);
    double log10_amplification() const noexcept { return log10_amplification_; }
    /// May be +inf when the factor exceeds the double range.
    double amplification() const noexcept;

private:
    double log10_amplification_;
};

enum class IoErrorCode {
    OpenFailed,
    NotVxf,
    BadVersion,
    Truncated,
    SizeMismatch,
    BadCsv,
    WriteFailed,
};

class IoError : public std::runtime_error {
public:
    IoError(IoErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    IoErrorCode code() const noexcept { return code_; }

private:
    IoErrorCode code_;
};

const char* to_string(IoErrorCode code);

}  // namespace vortexdiff
