#pragma once

#include "error.hpp"

#include <algorithm>
#include <cctype>
#include <string>
#include <string_view>

namespace ruledframe {

/// Which frame vectors build the base curve and the ruling:
/// TN1: (T+N1)/sqrt2 + v N2, TN2: (T+N2)/sqrt2 + v N1, N1N2: (N1+N2)/sqrt2 + v T.
enum class SurfaceKind { TN1, TN2, N1N2, GENERIC };

inline const char* to_string(SurfaceKind kind)
{
    switch (kind) {
    case SurfaceKind::TN1: return "tn1";
    case SurfaceKind::TN2: return "tn2";
    case SurfaceKind::N1N2: return "n1n2";
    case SurfaceKind::GENERIC: return "generic";
    }
    return "unknown";
}

inline SurfaceKind parse_surface_kind(std::string_view text)
{
    std::string s(text);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (s == "tn1")
        return SurfaceKind::TN1;
    if (s == "tn2")
        return SurfaceKind::TN2;
    if (s == "n1n2")
        return SurfaceKind::N1N2;
    if (s == "generic")
        return SurfaceKind::GENERIC;
    throw Error(ErrorKind::Input, "unknown surface kind '" + std::string(text) + "'");
}

inline bool is_named(SurfaceKind kind) { return kind != SurfaceKind::GENERIC; }

} // namespace ruledframe
