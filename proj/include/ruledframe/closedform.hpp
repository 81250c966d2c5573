#pragma once

#include "error.hpp"
#include "numeric.hpp"
#include "surface_kind.hpp"

#include <cmath>
#include <string>

/// Closed-form expressions for the three frame-built ruled
/// surfaces, as functions of (k1, k2, k1', k2', v). Vector results are
/// coefficient triples in the (T, N1, N2) basis. Expressions are transcribed
/// verbatim, including terms that look like misprints; compare them with the
/// numeric pipeline rather than trusting them.
namespace ruledframe::closedform {

inline constexpr double kDenominatorFloor = 1e-10;

struct BishopJet1 {
    double k1 = 0.0, k2 = 0.0, dk1 = 0.0, dk2 = 0.0;

    double kappa() const { return std::hypot(k1, k2); }
};

struct CurvaturePair {
    double K = 0.0;
    double H = 0.0;
};

namespace detail {

inline void require_above_floor(double den, const char* what)
{
    if (!(std::abs(den) >= kDenominatorFloor))
        throw Error(ErrorKind::SingularPoint, std::string(what) + " denominator below floor");
}

} // namespace detail

/// k1^2 + v^2 k2^2 + sqrt2 v k1 k2
inline double tn1_radicand(const BishopJet1& j, double v)
{
    return j.k1 * j.k1 + v * v * j.k2 * j.k2 + kSqrt2 * v * j.k1 * j.k2;
}

/// k2^2 + v^2 k1^2 + sqrt2 v k1 k2
inline double tn2_radicand(const BishopJet1& j, double v)
{
    return j.k2 * j.k2 + v * v * j.k1 * j.k1 + kSqrt2 * v * j.k1 * j.k2;
}

inline CurvaturePair tn1_K_H(const BishopJet1& j, double v)
{
    const double den = tn1_radicand(j, v);
    detail::require_above_floor(den, "tn1 curvature");
    const double q = j.k1 * j.k2 / den;
    const double num = j.k1 * j.k2 * j.k2 * (1 - 2 * v * v) + v * j.k2 * (j.dk1 * kSqrt2 - 2 * j.k1 * j.k1 * kSqrt2)
        - v * j.k1 * j.dk2 * kSqrt2 - 2 * j.k1 * j.k1 * j.k1;
    return {-0.5 * q * q, num / (4 * std::pow(den, 1.5))};
}

inline CurvaturePair tn2_K_H(const BishopJet1& j, double v)
{
    const double den = tn2_radicand(j, v);
    detail::require_above_floor(den, "tn2 curvature");
    const double q = j.k1 * j.k2 / den;
    const double num = j.k2 * j.k1 * j.k1 * (1 - 2 * v * v) + v * j.k1 * (j.dk2 * kSqrt2 - 2 * j.k2 * j.k2 * kSqrt2)
        - v * j.k2 * j.dk1 * kSqrt2 - 2 * j.k2 * j.k2 * j.k2;
    return {-0.5 * q * q, num / (4 * std::pow(den, 1.5))};
}

inline CurvaturePair n1n2_K_H(const BishopJet1& j, double v)
{
    const double kappa = j.kappa();
    detail::require_above_floor(2 * v * kappa * kappa * kappa, "n1n2 mean curvature");
    return {0.0, (j.dk1 * j.k2 - j.k1 * j.dk2) / (2 * v * kappa * kappa * kappa)};
}

inline CurvaturePair K_H(const BishopJet1& j, double v, SurfaceKind kind)
{
    switch (kind) {
    case SurfaceKind::TN1: return tn1_K_H(j, v);
    case SurfaceKind::TN2: return tn2_K_H(j, v);
    case SurfaceKind::N1N2: return n1n2_K_H(j, v);
    default: throw Error(ErrorKind::Unsupported, "no closed form for generic surfaces");
    }
}

/// Unit normal as (T, N1, N2) coefficients.
inline Vec3 normal_coefficients(const BishopJet1& j, double v, SurfaceKind kind)
{
    switch (kind) {
    case SurfaceKind::TN1: {
        const double rad = tn1_radicand(j, v);
        detail::require_above_floor(rad, "tn1 normal");
        return Vec3(kSqrt2 * j.k1, kSqrt2 * j.k1 + 2 * v * j.k2, 0.0) / (2 * std::sqrt(rad));
    }
    case SurfaceKind::TN2: {
        const double rad = tn2_radicand(j, v);
        detail::require_above_floor(rad, "tn2 normal");
        return -Vec3(kSqrt2 * j.k2, 0.0, kSqrt2 * j.k2 + 2 * v * j.k1) / (2 * std::sqrt(rad));
    }
    case SurfaceKind::N1N2: {
        const double kappa = j.kappa();
        detail::require_above_floor(kappa, "n1n2 normal");
        return Vec3(0.0, j.k2, -j.k1) / kappa;
    }
    default: throw Error(ErrorKind::Unsupported, "no closed form for generic surfaces");
    }
}

/// Sign relating the closed-form normal to chi_s x chi_v.
inline double normal_orientation(SurfaceKind kind, double v)
{
    if (kind == SurfaceKind::N1N2)
        return v < 0 ? -1.0 : 1.0;
    return 1.0;
}

/// Sign relating the closed-form mean curvature to the one computed with the
/// chi_s x chi_v normal.
inline double mean_curvature_orientation(SurfaceKind kind, double v)
{
    switch (kind) {
    case SurfaceKind::TN2: return -1.0;
    case SurfaceKind::N1N2: return v < 0 ? -1.0 : 1.0;
    default: return 1.0;
    }
}

/// Partial derivatives of chi(s, v) in the frame basis; chi_vv = 0.
struct Partials {
    Vec3 base;  // the base curve, c(s)
    Vec3 s, ss, v, sv;
};

inline Partials partials(const BishopJet1& j, double v, SurfaceKind kind)
{
    const double r = kHalfSqrt2;
    const double k1 = j.k1, k2 = j.k2, d1 = j.dk1, d2 = j.dk2;
    const double kk = k1 * k1 + k2 * k2;
    switch (kind) {
    case SurfaceKind::TN1: {
        const double a = r * k1 + v * k2;
        return {Vec3(r, r, 0), Vec3(-a, r * k1, r * k2),
                Vec3(-r * (kk + d1) - v * d2, r * d1 - a * k1, r * d2 - a * k2), Vec3(0, 0, 1), Vec3(-k2, 0, 0)};
    }
    case SurfaceKind::TN2: {
        const double a = r * k2 + v * k1;
        return {Vec3(r, 0, r), Vec3(-a, r * k1, r * k2),
                Vec3(-r * (kk + d2) - v * d1, r * d1 - a * k1, r * d2 - a * k2), Vec3(0, 1, 0), Vec3(-k1, 0, 0)};
    }
    case SurfaceKind::N1N2: {
        const double a = r * (k1 + k2);
        return {Vec3(0, r, r), Vec3(-a, v * k1, v * k2),
                Vec3(-(v * kk + r * (d1 + d2)), v * d1 - a * k1, v * d2 - a * k2), Vec3(1, 0, 0),
                Vec3(0, k1, k2)};
    }
    default: throw Error(ErrorKind::Unsupported, "no closed form for generic surfaces");
    }
}

/// Striction offset along the ruling: the stated coefficient and the one
/// obtained from -<c', X'> / |X'|^2.
struct StrictionCoefficients {
    double stated = 0.0;  // -k1 k2 / sqrt2
    double derived = 0.0;
    bool derived_valid = true;
};

inline StrictionCoefficients striction(const BishopJet1& j, SurfaceKind kind, double floor = 1e-10)
{
    StrictionCoefficients out;
    switch (kind) {
    case SurfaceKind::TN1:
        out.stated = -j.k1 * j.k2 / kSqrt2;
        out.derived_valid = j.k2 * j.k2 >= floor;
        out.derived = out.derived_valid ? -j.k1 / (kSqrt2 * j.k2) : 0.0;
        return out;
    case SurfaceKind::TN2:
        out.stated = -j.k1 * j.k2 / kSqrt2;
        out.derived_valid = j.k1 * j.k1 >= floor;
        out.derived = out.derived_valid ? -j.k2 / (kSqrt2 * j.k1) : 0.0;
        return out;
    case SurfaceKind::N1N2: return out;
    default: throw Error(ErrorKind::Unsupported, "no closed form for generic surfaces");
    }
}

/// Normal curvature, geodesic curvature and geodesic torsion of the base
/// curve, with the intermediate coefficient triples of the derivation:
/// `tangent_derivative` is the derivative of the base curve's unit tangent,
/// `normal_derivative` that of the surface normal.
struct CurveInvariants {
    double normal_curvature = 0.0;
    double geodesic_curvature = 0.0;
    double geodesic_torsion = 0.0;
    Vec3 tangent_derivative = Vec3::Zero();
    Vec3 normal_derivative = Vec3::Zero();
};

inline Vec3 tn1_tangent_derivative(const BishopJet1& j)
{
    const double k1 = j.k1, k2 = j.k2, d1 = j.dk1, d2 = j.dk2;
    const double base = k2 * k2 + 2 * k1 * k1;
    detail::require_above_floor(base, "tn1 tangent");
    return Vec3(-k2 * k2 * (k2 * k2 + 3 * k1 * k1) - 2 * k1 * k1 * k1 * k1 + k2 * (k1 * d2 - k2 * d1),
                -k1 * k1 * (k2 * k2 + 2 * k1 * k1) + k2 * (k2 * d1 - k1 * d2),
                k1 * (-k2 * k2 * k2 - 2 * (k2 * k1 * k1 - k1 * d2 + k2 * d1)))
        / std::pow(base, 1.5);
}

inline Vec3 tn1_normal_derivative(const BishopJet1& j, double v)
{
    const double k1 = j.k1, k2 = j.k2, d1 = j.dk1, d2 = j.dk2;
    const double rad = tn1_radicand(j, v);
    detail::require_above_floor(rad, "tn1 normal derivative");
    return Vec3(d1 * k2 * v * (k2 * v * kSqrt2 + k1) - k1 * d2 * v * (k2 * kSqrt2 * v + k1)
                    - k1 * k2 * k2 * v * (3 * k1 * v * kSqrt2 + 2 * k2 * v * v) - k1 * k1 * k1 * (k1 * kSqrt2 + 4 * k2 * v),
                k1 * (k1 * k2 * k2 * kSqrt2 * v * v + 2 * k2 * k1 * k1 * v - k2 * d1 * v + k1 * k1 * k1 * kSqrt2 + k1 * d2 * v),
                k1 * k2 * kSqrt2 * rad)
        / (2 * std::pow(rad, 1.5));
}

inline Vec3 tn2_tangent_derivative(const BishopJet1& j)
{
    const double k1 = j.k1, k2 = j.k2, d1 = j.dk1, d2 = j.dk2;
    const double base = 2 * k2 * k2 + k1 * k1;
    detail::require_above_floor(base, "tn2 tangent");
    return Vec3(k1 * (d1 * k2 - d2 * k1) - 2 * k2 * k2 * k2 * k2 - 3 * k1 * k1 * k2 * k2 - k1 * k1 * k1 * k1,
                k2 * (2 * (d1 * k2 - d2 * k1) - 2 * k2 * k2 * k1 - k1 * k1 * k1),
                k1 * (d2 * k1 - d1 * k2) - 2 * k2 * k2 * k2 * k2 - k1 * k1 * k2 * k2)
        / std::pow(base, 1.5);
}

inline Vec3 tn2_normal_derivative(const BishopJet1& j, double v)
{
    const double k1 = j.k1, k2 = j.k2, d1 = j.dk1;
    const double rad = tn2_radicand(j, v);
    detail::require_above_floor(rad, "tn2 normal derivative");
    // the first and third entries keep the transcribed "k1 k2" where "k1 k2'" is expected
    return Vec3((kSqrt2 * k1 * v + k2) * (d1 * k2 - k1 * k2) * v + k1 * k1 * k2 * v * v * (3 * k2 * kSqrt2 + 2 * k1 * v)
                    + k2 * k2 * k2 * (k2 * kSqrt2 + 4 * k1 * v),
                -k1 * k2 * kSqrt2 * rad,
                k2 * (-k2 * kSqrt2 * (k1 * k1 * v * v + k2 * k2) - v * (2 * k1 * k2 * k2 - k1 * k2 + d1 * k2)))
        / (2 * std::pow(rad, 1.5));
}

inline CurveInvariants tn1_curve_invariants(const BishopJet1& j, double v)
{
    const double k1 = j.k1, k2 = j.k2, d1 = j.dk1, d2 = j.dk2;
    const double rad = tn1_radicand(j, v);
    detail::require_above_floor(rad, "tn1 curve invariants");
    const double root = std::sqrt(rad);
    CurveInvariants out;
    out.tangent_derivative = tn1_tangent_derivative(j);
    out.normal_derivative = tn1_normal_derivative(j, v);
    const Vec3& eta = out.tangent_derivative;
    const Vec3& lam = out.normal_derivative;
    out.normal_curvature =
        (k1 * (d2 + k1 * k1 + k2 * k1 + (kSqrt2 * v + 1) * k2 * k2) - d1 * (k2 * kSqrt2 * v + k1)) / (2 * root);
    out.geodesic_curvature = (k1 * k1 * kSqrt2 * (k2 * k2 * v * kSqrt2 - d2) + k1 * kSqrt2 * (2 * k2 * k2 * k2 + d1 * k2)
                              + k2 * (4 * k2 * k2 * k2 * v + k1 * k1 * k1 * kSqrt2))
        / (2 * (2 * k2 * k2 + k1 * k1) * root);
    out.geodesic_torsion = (eta[0] * lam[2] * (kSqrt2 * k1 + 2 * k2 * v) - eta[2] * lam[0] * (k1 * kSqrt2 + 2 * k2 * v)
                            + k1 * kSqrt2 * (eta[2] * lam[1] - lam[2] * eta[1]))
        / (2 * root);
    return out;
}

inline CurveInvariants tn2_curve_invariants(const BishopJet1& j, double v)
{
    const double k1 = j.k1, k2 = j.k2, d1 = j.dk1, d2 = j.dk2;
    const double rad = tn2_radicand(j, v);
    detail::require_above_floor(rad, "tn2 curve invariants");
    const double root = std::sqrt(rad);
    CurveInvariants out;
    out.tangent_derivative = tn2_tangent_derivative(j);
    out.normal_derivative = tn2_normal_derivative(j, v);
    const Vec3& om = out.tangent_derivative;
    const Vec3& al = out.normal_derivative;
    out.normal_curvature = (k1 * v * kSqrt2 * (k2 * k2 - d2) + k2 * (k1 * k1 + 2 * k2 * k2)) / (2 * root);
    out.geodesic_curvature = (2 * (d1 * k2 - k1 * d2) * (kSqrt2 * k2 + k1 * v) - k1 * k2 * kSqrt2 * (2 * k2 * k2 + k1 * k1)
                              - 2 * k1 * k1 * v * (k1 * k1 + 4 * k2 * k2))
        / (2 * (2 * k2 * k2 + k1 * k1) * root);
    out.geodesic_torsion =
        ((al[1] * om[0] - al[0] * om[1]) * (k2 * kSqrt2 + 2 * k1 * v) + k2 * kSqrt2 * (al[2] * om[1] - al[1] * om[2]))
        / (2 * root);
    return out;
}

inline CurveInvariants n1n2_curve_invariants(const BishopJet1& j)
{
    CurveInvariants out;
    out.geodesic_curvature = -j.kappa();
    return out;
}

inline CurveInvariants curve_invariants(const BishopJet1& j, double v, SurfaceKind kind)
{
    switch (kind) {
    case SurfaceKind::TN1: return tn1_curve_invariants(j, v);
    case SurfaceKind::TN2: return tn2_curve_invariants(j, v);
    case SurfaceKind::N1N2: return n1n2_curve_invariants(j);
    default: throw Error(ErrorKind::Unsupported, "no closed form for generic surfaces");
    }
}

} // namespace ruledframe::closedform
