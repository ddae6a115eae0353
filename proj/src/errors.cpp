#include "vortexdiff/errors.hpp"

#include <cmath>
#include <cstdio>

namespace vortexdiff {

namespace {

std::string irreversible_message(double log10_amp) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "irreversible: amplification factor 10^%.6g on the highest resolved wavenumber",
                  log10_amp);
    return buf;
}

}  // namespace

IrreversibleError::IrreversibleError(double log10_amplification)
    : NumericError(irreversible_message(log10_amplification)),
      log10_amplification_(log10_amplification) {}

double IrreversibleError::amplification() const noexcept {
    return std::pow(10.0, log10_amplification_);
}

const char* to_string(IoErrorCode code) {
    switch (code) {
        case IoErrorCode::OpenFailed: return "open_failed";
        case IoErrorCode::NotVxf: return "not_vxf";
        case IoErrorCode::BadVersion: return "bad_version";
        case IoErrorCode::Truncated: return "truncated";
        case IoErrorCode::SizeMismatch: return "size_mismatch";
        case IoErrorCode::BadCsv: return "bad_csv";
        case IoErrorCode::WriteFailed: return "write_failed";
    }
    return "unknown";
}

}  // namespace vortexdiff
