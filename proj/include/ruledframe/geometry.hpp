#pragma once

#include "closedform.hpp"
#include "numeric.hpp"
#include "smarandache.hpp"

#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ruledframe {

struct FundamentalForms {
    double E = 0, F = 0, G = 0;
    double L = 0, M = 0, N = 0;

    double discriminant() const { return E * G - F * F; }
};

using closedform::CurvaturePair;

inline constexpr double kFormFloor = 1e-18;
inline constexpr double kDefaultKappaEps = 1e-6;
inline constexpr double kStrictionFloor = 1e-10;

inline FundamentalForms fundamental_forms(const SurfaceJet& j, const Vec3& n)
{
    return {j.s.dot(j.s), j.s.dot(j.v), j.v.dot(j.v), j.ss.dot(n), j.sv.dot(n), j.vv.dot(n)};
}

inline CurvaturePair curvatures(const FundamentalForms& f)
{
    const double d = f.discriminant();
    if (!(d > kFormFloor))
        throw Error(ErrorKind::SingularPoint, "degenerate first fundamental form, EG - F^2 = " + std::to_string(d));
    return {(f.L * f.N - f.M * f.M) / d, (f.E * f.N - 2 * f.M * f.F + f.L * f.G) / (2 * d)};
}

enum class PointClass { Elliptic, Hyperbolic, Parabolic, PlanarPoint, Singular };

inline constexpr std::array<PointClass, 5> kAllPointClasses = {PointClass::Elliptic, PointClass::Hyperbolic,
                                                                PointClass::Parabolic, PointClass::PlanarPoint,
                                                                PointClass::Singular};

inline const char* to_string(PointClass c)
{
    switch (c) {
    case PointClass::Elliptic: return "elliptic";
    case PointClass::Hyperbolic: return "hyperbolic";
    case PointClass::Parabolic: return "parabolic";
    case PointClass::PlanarPoint: return "planar-point";
    case PointClass::Singular: return "singular";
    }
    return "unknown";
}

/// Integer code used in grid and mesh exports; singular is the sentinel -1.
inline int point_class_code(PointClass c)
{
    return c == PointClass::Singular ? -1 : static_cast<int>(c);
}

inline PointClass classify_point(double K, double H, double kappa_eps)
{
    if (K > kappa_eps)
        return PointClass::Elliptic;
    if (K < -kappa_eps)
        return PointClass::Hyperbolic;
    return std::abs(H) <= kappa_eps ? PointClass::PlanarPoint : PointClass::Parabolic;
}

struct PointAnalysis {
    FundamentalForms forms;
    Vec3 normal = Vec3::Zero();
    double K = 0.0;
    double H = 0.0;
    PointClass point_class = PointClass::Singular;
};

/// Forms, normal and curvatures at (s, v). The normal is chi_s x chi_v
/// normalized, so H carries that orientation in both modes.
inline PointAnalysis analyze_point(const RuledSurface& surf, double s, double v, JetMode mode = JetMode::Numeric,
                                   double kappa_eps = kDefaultKappaEps)
{
    const SurfaceJet j = surface_jet(surf, s, v, mode);
    PointAnalysis out;
    out.normal = normal_direction(j).normalized();
    out.forms = fundamental_forms(j, out.normal);
    const auto kh = curvatures(out.forms);
    out.K = kh.K;
    out.H = kh.H;
    out.point_class = classify_point(out.K, out.H, kappa_eps);
    return out;
}

struct PointSample {
    double s = 0.0;
    double v = 0.0;
    bool singular = false;
    PointAnalysis analysis;
};

/// s-major evaluation of a rectangular grid; singular points are flagged
/// instead of raising.
inline std::vector<PointSample> evaluate_grid(const RuledSurface& surf, std::span<const double> s_values,
                                              std::span<const double> v_values, JetMode mode = JetMode::Numeric,
                                              double kappa_eps = kDefaultKappaEps)
{
    std::vector<PointSample> out;
    out.reserve(s_values.size() * v_values.size());
    for (double s : s_values) {
        for (double v : v_values) {
            PointSample p{s, v, false, {}};
            try {
                p.analysis = analyze_point(surf, s, v, mode, kappa_eps);
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::SingularPoint)
                    throw;
                p.singular = true;
                p.analysis.point_class = PointClass::Singular;
            }
            out.push_back(p);
        }
    }
    return out;
}

struct SurfaceReport {
    SurfaceKind kind = SurfaceKind::GENERIC;
    bool developable = false;
    bool minimal = false;
    std::optional<double> cmc;
    std::array<std::size_t, 5> histogram{};  // indexed like kAllPointClasses
    double max_abs_K = 0.0;
    double max_abs_H = 0.0;
    double min_H = 0.0;
    double max_H = 0.0;
    double mean_H = 0.0;
    std::size_t regular_points = 0;
    std::vector<std::pair<double, double>> singular_points;

    std::size_t count(PointClass c) const { return histogram[static_cast<std::size_t>(c)]; }
};

inline SurfaceReport summarize(SurfaceKind kind, std::span<const PointSample> samples, double kappa_eps)
{
    SurfaceReport r;
    r.kind = kind;
    double sum = 0.0;
    r.min_H = INFINITY;
    r.max_H = -INFINITY;
    for (const auto& p : samples) {
        ++r.histogram[static_cast<std::size_t>(p.analysis.point_class)];
        if (p.singular) {
            r.singular_points.emplace_back(p.s, p.v);
            continue;
        }
        ++r.regular_points;
        r.max_abs_K = std::max(r.max_abs_K, std::abs(p.analysis.K));
        r.max_abs_H = std::max(r.max_abs_H, std::abs(p.analysis.H));
        r.min_H = std::min(r.min_H, p.analysis.H);
        r.max_H = std::max(r.max_H, p.analysis.H);
        sum += p.analysis.H;
    }
    if (r.regular_points == 0) {
        r.min_H = r.max_H = 0.0;
        return r;
    }
    r.mean_H = sum / static_cast<double>(r.regular_points);
    r.developable = r.max_abs_K <= kappa_eps;
    r.minimal = r.max_abs_H <= kappa_eps;
    if (r.max_H - r.min_H <= kappa_eps && std::abs(r.mean_H) > 10 * kappa_eps)
        r.cmc = r.mean_H;
    return r;
}

inline SurfaceReport classify_surface(const RuledSurface& surf, std::span<const double> s_values,
                                      std::span<const double> v_values, double kappa_eps = kDefaultKappaEps,
                                      JetMode mode = JetMode::Numeric)
{
    const auto samples = evaluate_grid(surf, s_values, v_values, mode, kappa_eps);
    return summarize(surf.kind, samples, kappa_eps);
}

/// Striction curve c - (<c', X'> / |X'|^2) X on the surface grid; samples
/// with |X'|^2 below the floor are masked.
struct StrictionCurve {
    UniformGrid grid;
    std::vector<Vec3> points;
    std::vector<double> offset;  // signed distance along the ruling from the base curve
    std::vector<bool> valid;
    bool all_masked = false;
};

inline StrictionCurve striction_curve(const RuledSurface& surf, double floor = kStrictionFloor)
{
    StrictionCurve out;
    out.grid = surf.grid;
    const std::size_t n = surf.size();
    out.points.resize(n);
    out.offset.assign(n, 0.0);
    out.valid.assign(n, false);
    std::size_t good = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3& dc = surf.base_slope[i];
        const Vec3& dx = surf.ruling_slope[i];
        const double q = dx.squaredNorm();
        out.points[i] = surf.base[i];
        if (q < floor)
            continue;
        out.offset[i] = -dc.dot(dx) / q;
        out.points[i] = surf.base[i] + out.offset[i] * surf.ruling[i];
        out.valid[i] = true;
        ++good;
    }
    out.all_masked = good == 0;
    return out;
}

namespace detail {

/// True when every node of the finite-difference stencil at i is unmasked.
inline bool stencil_clean(const std::vector<bool>& valid, std::size_t i)
{
    for (int off : fd::stencil_offsets(i, valid.size()))
        if (!valid[static_cast<std::size_t>(static_cast<long>(i) + off)])
            return false;
    return true;
}

} // namespace detail

struct StrictionDefect {
    double max_relative = 0.0;  // max |<g', X'>| / (max(|g'|, |c'|) |X'|)
    double max_absolute = 0.0;
    double at_s = 0.0;
    std::size_t checked = 0;
};

/// Checks <g', X'> = 0 with g' from finite differences of the striction
/// samples, at samples whose whole stencil is valid and lies well away from
/// zeros of X' (where the offset has a pole).
inline StrictionDefect striction_defect(const StrictionCurve& st, const RuledSurface& surf,
                                        double pole_clearance = 10.0)
{
    StrictionDefect d;
    const double h = st.grid.step;
    const auto ddx = fd::sample_derivatives(surf.ruling_slope, h, 1);
    for (std::size_t i = 0; i < st.points.size(); ++i) {
        if (!st.valid[i] || !detail::stencil_clean(st.valid, i))
            continue;
        // distance to the nearest zero of X', to first order
        if (surf.ruling_slope[i].norm() < pole_clearance * h * ddx[i].norm())
            continue;
        const Vec3 dg = fd::sample_derivative(std::span<const Vec3>(st.points), h, i, 1);
        const Vec3& dx = surf.ruling_slope[i];
        const double a = std::abs(dg.dot(dx));
        // the striction curve may be stationary, so the base speed also sets the scale
        const double scale = std::max(dg.norm(), surf.base_slope[i].norm()) * dx.norm();
        const double rel = scale > 0 ? a / scale : 0.0;
        ++d.checked;
        d.max_absolute = std::max(d.max_absolute, a);
        if (rel > d.max_relative) {
            d.max_relative = rel;
            d.at_s = st.grid.at(i);
        }
    }
    return d;
}

/// kappa_n = <c'', n>, kappa_g = <n x t, t'>, tau_g = <n x n', t'> along the
/// base curve c at fixed v, where t is the unit tangent of c (c is generally
/// not unit speed) and n the numeric surface normal at (s, v).
struct CurveOnSurfaceInvariants {
    UniformGrid grid;
    double v = 0.0;
    std::vector<double> normal_curvature, geodesic_curvature, geodesic_torsion;
    std::vector<bool> valid;
};

inline CurveOnSurfaceInvariants base_curve_invariants(const RuledSurface& surf, double v_eval,
                                                      double regular_floor = 1e-9)
{
    if (!surf.v_range.contains(v_eval, 1e-12 * (1.0 + std::abs(v_eval))))
        throw Error(ErrorKind::Domain, "v = " + std::to_string(v_eval) + " outside the ruling range");
    const std::size_t n = surf.size();
    const double h = surf.grid.step;
    const auto dd = fd::sample_derivatives(surf.base, h, 2);

    std::vector<Vec3> tangent(n, Vec3::Zero()), normal(n, Vec3::Zero());
    std::vector<bool> ok(n, true);
    for (std::size_t i = 0; i < n; ++i) {
        const double speed = surf.base_slope[i].norm();
        if (speed < regular_floor) {
            ok[i] = false;
            continue;
        }
        tangent[i] = surf.base_slope[i] / speed;
        try {
            normal[i] = unit_normal(surf, surf.grid.at(i), v_eval, JetMode::Numeric);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::SingularPoint)
                throw;
            ok[i] = false;
        }
    }
    // a cusp of the base curve flips the unit tangent between neighbours
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (ok[i] && ok[i + 1] && tangent[i].dot(tangent[i + 1]) < 0) {
            ok[i] = false;
            ok[i + 1] = false;
        }
    const auto dt = fd::sample_derivatives(tangent, h, 1);
    const auto dn = fd::sample_derivatives(normal, h, 1);

    CurveOnSurfaceInvariants out;
    out.grid = surf.grid;
    out.v = v_eval;
    out.normal_curvature.assign(n, 0.0);
    out.geodesic_curvature.assign(n, 0.0);
    out.geodesic_torsion.assign(n, 0.0);
    out.valid.assign(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        if (!ok[i] || !detail::stencil_clean(ok, i))
            continue;
        out.valid[i] = true;
        out.normal_curvature[i] = dd[i].dot(normal[i]);
        out.geodesic_curvature[i] = normal[i].cross(tangent[i]).dot(dt[i]);
        out.geodesic_torsion[i] = normal[i].cross(dn[i]).dot(dt[i]);
    }
    return out;
}

} // namespace ruledframe
