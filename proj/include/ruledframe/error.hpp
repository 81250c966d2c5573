#pragma once

#include <stdexcept>
#include <string>

namespace ruledframe {

enum class ErrorKind {
    Domain,            // parameter outside an interval
    UnsupportedOrder,  // derivative order > 3
    Regularity,        // curve speed vanishes
    Tolerance,         // quadrature did not converge
    Input,             // malformed argument (non-orthonormal frame, bad kind, ...)
    FrameUndefined,    // Frenet frame undefined on most of the curve
    Indeterminate,     // slant-helix ratio undefined on an interval
    SingularPoint,     // surface normal or a closed-form denominator vanishes
    Unsupported,       // operation not defined for this surface kind
    Output,            // output directory or file not writable
};

inline const char* to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::UnsupportedOrder: return "unsupported-order";
    case ErrorKind::Regularity: return "regularity";
    case ErrorKind::Tolerance: return "tolerance";
    case ErrorKind::Input: return "input";
    case ErrorKind::FrameUndefined: return "frame-undefined";
    case ErrorKind::Indeterminate: return "indeterminate";
    case ErrorKind::SingularPoint: return "singular-point";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::Output: return "output";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + " error: " + what), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace ruledframe
