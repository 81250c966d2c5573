#pragma once

#include "closedform.hpp"
#include "frames.hpp"
#include "numeric.hpp"
#include "surface_kind.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ruledframe {

/// chi(s, v) = c(s) + v X(s) sampled on the bishop grid (named kinds) or on an
/// explicit grid (GENERIC).
struct RuledSurface {
    SurfaceKind kind = SurfaceKind::GENERIC;
    std::optional<BishopData> bishop;
    UniformGrid grid;
    std::vector<Vec3> base, ruling;
    std::vector<Vec3> base_slope, ruling_slope;  // d/ds, used to interpolate GENERIC samples
    Interval v_range;
    bool singular_line = false;  // N1N2 with 0 inside v_range

    std::size_t size() const { return grid.count; }
    Interval s_range() const { return grid.range(); }
};

struct SurfaceJet {
    Vec3 point, s, v, ss, sv, vv;
};

enum class JetMode { ClosedForm, Numeric };

inline const char* to_string(JetMode mode) { return mode == JetMode::ClosedForm ? "closed_form" : "numeric"; }

inline constexpr double kSingularFloor = 1e-9;

namespace detail {

inline std::pair<Vec3, Vec3> base_and_ruling(const Frame& f, SurfaceKind kind)
{
    switch (kind) {
    case SurfaceKind::TN1: return {(f.t + f.n1) * kHalfSqrt2, f.n2};
    case SurfaceKind::TN2: return {(f.t + f.n2) * kHalfSqrt2, f.n1};
    case SurfaceKind::N1N2: return {(f.n1 + f.n2) * kHalfSqrt2, f.t};
    default: throw Error(ErrorKind::Input, "surface kind needs an explicit base and ruling");
    }
}

inline Vec3 in_frame(const Frame& f, const Vec3& c) { return c[0] * f.t + c[1] * f.n1 + c[2] * f.n2; }

inline std::pair<Vec3, Vec3> base_and_ruling_at(const RuledSurface& surf, double s)
{
    if (surf.bishop)
        return base_and_ruling(surf.bishop->at(s).frame, surf.kind);
    const auto [i, u] = surf.grid.locate(s);
    if (u == 0.0)
        return {surf.base[i], surf.ruling[i]};
    const double h = surf.grid.step;
    const std::size_t j = i + 1;
    return {hermite<Vec3>(surf.base[i], surf.base_slope[i], surf.base[j], surf.base_slope[j], h, u),
            hermite<Vec3>(surf.ruling[i], surf.ruling_slope[i], surf.ruling[j], surf.ruling_slope[j], h, u)};
}

inline Vec3 point_unchecked(const RuledSurface& surf, double s, double v)
{
    const auto [c, x] = base_and_ruling_at(surf, s);
    return c + v * x;
}

inline void check_range(const RuledSurface& surf, double s, double v)
{
    if (!surf.s_range().contains(s, 1e-9 * surf.grid.step))
        throw Error(ErrorKind::Domain, "s = " + std::to_string(s) + " outside the surface grid");
    if (!surf.v_range.contains(v, 1e-12 * (1.0 + std::abs(v))))
        throw Error(ErrorKind::Domain, "v = " + std::to_string(v) + " outside the ruling range");
}

inline void check_v_range(Interval v_range)
{
    if (v_range.degenerate())
        throw Error(ErrorKind::Input, "ruling range must be non-degenerate");
}

} // namespace detail

inline RuledSurface build_surface(const BishopData& bishop, SurfaceKind kind, Interval v_range)
{
    if (!is_named(kind))
        throw Error(ErrorKind::Input, "build_surface needs tn1, tn2 or n1n2; use make_generic_surface");
    detail::check_v_range(v_range);
    if (bishop.size() < static_cast<std::size_t>(fd::kOneSidedPoints))
        throw Error(ErrorKind::Input, "bishop data has too few samples");
    RuledSurface out;
    out.kind = kind;
    out.bishop = bishop;
    out.grid = bishop.grid;
    out.v_range = v_range;
    out.singular_line = kind == SurfaceKind::N1N2 && v_range.contains(0.0);
    out.base.reserve(bishop.size());
    out.ruling.reserve(bishop.size());
    for (std::size_t i = 0; i < bishop.size(); ++i) {
        const auto [c, x] = detail::base_and_ruling(bishop.frame(i), kind);
        out.base.push_back(c);
        out.ruling.push_back(x);
    }
    out.base_slope = fd::sample_derivatives(out.base, out.grid.step, 1);
    out.ruling_slope = fd::sample_derivatives(out.ruling, out.grid.step, 1);
    return out;
}

/// Ruled surface from explicit base and ruling samples on a uniform grid.
inline RuledSurface make_generic_surface(UniformGrid grid, std::vector<Vec3> base, std::vector<Vec3> ruling,
                                         Interval v_range)
{
    detail::check_v_range(v_range);
    if (base.size() != grid.count || ruling.size() != grid.count)
        throw Error(ErrorKind::Input, "base and ruling sample counts must match the grid");
    if (grid.count < static_cast<std::size_t>(fd::kOneSidedPoints))
        throw Error(ErrorKind::Input, "at least eight samples are needed");
    RuledSurface out;
    out.kind = SurfaceKind::GENERIC;
    out.grid = grid;
    out.v_range = v_range;
    out.base = std::move(base);
    out.ruling = std::move(ruling);
    out.base_slope = fd::sample_derivatives(out.base, grid.step, 1);
    out.ruling_slope = fd::sample_derivatives(out.ruling, grid.step, 1);
    return out;
}

inline Vec3 surface_point(const RuledSurface& surf, double s, double v)
{
    detail::check_range(surf, s, v);
    return detail::point_unchecked(surf, s, v);
}

/// Frame, curvatures and their derivatives at s (named kinds only).
inline BishopData::Sample bishop_sample(const RuledSurface& surf, double s)
{
    if (!surf.bishop)
        throw Error(ErrorKind::Unsupported, "generic surfaces carry no frame field");
    return surf.bishop->at(s);
}

inline closedform::BishopJet1 jet1(const BishopData::Sample& b) { return {b.k1, b.k2, b.dk1, b.dk2}; }

inline SurfaceJet surface_jet(const RuledSurface& surf, double s, double v, JetMode mode)
{
    detail::check_range(surf, s, v);
    SurfaceJet j;
    if (mode == JetMode::ClosedForm) {
        if (!is_named(surf.kind) || !surf.bishop)
            throw Error(ErrorKind::Unsupported, "closed-form jets exist only for tn1, tn2 and n1n2");
        const auto b = surf.bishop->at(s);
        const auto p = closedform::partials(jet1(b), v, surf.kind);
        j.point = detail::in_frame(b.frame, p.base) + v * detail::in_frame(b.frame, p.v);
        j.s = detail::in_frame(b.frame, p.s);
        j.ss = detail::in_frame(b.frame, p.ss);
        j.v = detail::in_frame(b.frame, p.v);
        j.sv = detail::in_frame(b.frame, p.sv);
        j.vv = Vec3::Zero();
        return j;
    }
    const Interval range = surf.s_range();
    const double h = surf.grid.step;
    constexpr double dv = 0.5;
    auto at_v = [&](double vv) { return [&surf, vv](double x) { return detail::point_unchecked(surf, x, vv); }; };
    auto ruling = [&surf, v](double x) {
        return Vec3((detail::point_unchecked(surf, x, v + dv) - detail::point_unchecked(surf, x, v - dv)) / (2 * dv));
    };
    j.point = detail::point_unchecked(surf, s, v);
    j.s = fd::function_derivative(at_v(v), s, range, h, 1);
    j.ss = fd::function_derivative(at_v(v), s, range, h, 2);
    j.v = ruling(s);
    j.sv = fd::function_derivative(ruling, s, range, h, 1);
    j.vv = Vec3::Zero();  // affine in v by construction
    return j;
}

/// chi_s x chi_v, or a singular-point error when it is shorter than the floor.
inline Vec3 normal_direction(const SurfaceJet& j, double floor = kSingularFloor)
{
    const Vec3 c = j.s.cross(j.v);
    if (!(c.norm() >= floor))
        throw Error(ErrorKind::SingularPoint, "|chi_s x chi_v| = " + std::to_string(c.norm()));
    return c;
}

/// Numeric mode normalizes chi_s x chi_v; closed-form mode evaluates the
/// reference normal and applies the per-kind orientation factor so both agree.
inline Vec3 unit_normal(const RuledSurface& surf, double s, double v, JetMode mode)
{
    const SurfaceJet j = surface_jet(surf, s, v, mode);
    const Vec3 c = normal_direction(j);
    if (mode == JetMode::Numeric)
        return c.normalized();
    const auto b = surf.bishop->at(s);
    const Vec3 coeff = closedform::normal_coefficients(jet1(b), v, surf.kind);
    return closedform::normal_orientation(surf.kind, v) * detail::in_frame(b.frame, coeff);
}

} // namespace ruledframe
