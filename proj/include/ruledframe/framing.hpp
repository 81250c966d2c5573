#pragma once

#include "curve.hpp"
#include "frames.hpp"
#include "numeric.hpp"

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace ruledframe {

inline constexpr double kDefaultKappaFloor = 1e-7;

namespace detail {

/// Any unit vector orthogonal to t.
inline Vec3 some_normal(const Vec3& t)
{
    const Vec3 seed = std::abs(t.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    return (seed - seed.dot(t) * t).normalized();
}

} // namespace detail

/// Frenet apparatus of a unit-speed curve. tau = <N', B> with N' from finite
/// differences of the sampled normal.
inline FrenetData frenet_frame(const ArcLengthCurve& curve, double kappa_floor = kDefaultKappaFloor)
{
    const std::size_t n = curve.size();
    FrenetData f;
    f.grid = curve.grid;
    f.anchor_index = curve.anchor_index;
    f.tangent.resize(n);
    f.normal.resize(n);
    f.binormal.resize(n);
    f.curvature.resize(n);
    f.degenerate.resize(n);

    std::size_t bad = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3 t = curve.d1[i].normalized();
        // drop the tangential part that remains from the resampling
        const Vec3 acc = curve.d2[i] - curve.d2[i].dot(t) * t;
        const double k = acc.norm();
        f.tangent[i] = t;
        f.curvature[i] = k;
        f.degenerate[i] = k < kappa_floor;
        if (f.degenerate[i]) {
            ++bad;
            f.normal[i] = detail::some_normal(t);
        } else {
            f.normal[i] = acc / k;
        }
        f.binormal[i] = t.cross(f.normal[i]);
    }
    if (2 * bad > n)
        throw Error(ErrorKind::FrameUndefined,
                    "curvature below " + std::to_string(kappa_floor) + " on " + std::to_string(bad) + " of " +
                        std::to_string(n) + " samples");

    const auto dn = fd::sample_derivatives(f.normal, f.grid.step, 1);
    f.torsion.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        f.torsion[i] = f.degenerate[i] ? 0.0 : dn[i].dot(f.binormal[i]);
    return f;
}

/// Bishop frame from the Frenet frame: theta = theta0 + integral of tau from
/// the anchor sample, N1 = cos N - sin B, N2 = sin N + cos B.
inline BishopData bishop_from_frenet(const FrenetData& frenet, double theta0 = 0.0)
{
    const std::size_t n = frenet.size();
    const double h = frenet.grid.step;
    // trapezoid with the end correction term, using tau' at the nodes
    const auto dtau = fd::sample_derivatives(frenet.torsion, h, 1);
    auto increment = [&](std::size_t a, std::size_t b) {
        return 0.5 * h * (frenet.torsion[a] + frenet.torsion[b]) - h * h / 12.0 * (dtau[b] - dtau[a]);
    };

    BishopData b;
    b.grid = frenet.grid;
    b.anchor_index = frenet.anchor_index;
    b.degenerate = frenet.degenerate;
    b.theta.assign(n, theta0);
    for (std::size_t i = b.anchor_index + 1; i < n; ++i)
        b.theta[i] = b.theta[i - 1] + increment(i - 1, i);
    for (std::size_t i = b.anchor_index; i-- > 0;)
        b.theta[i] = b.theta[i + 1] - increment(i, i + 1);

    b.tangent = frenet.tangent;
    b.normal1.resize(n);
    b.normal2.resize(n);
    b.k1.resize(n);
    b.k2.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double c = std::cos(b.theta[i]);
        const double s = std::sin(b.theta[i]);
        b.normal1[i] = c * frenet.normal[i] - s * frenet.binormal[i];
        b.normal2[i] = s * frenet.normal[i] + c * frenet.binormal[i];
        b.k1[i] = frenet.curvature[i] * c;
        b.k2[i] = frenet.curvature[i] * s;
    }
    b.update_curvature_derivatives();
    return b;
}

/// Rotation-minimizing transport of n1_initial (given at the anchor sample)
/// along the sampled curve by the double-reflection method.
inline BishopData bishop_parallel_transport(const ArcLengthCurve& curve, const Vec3& n1_initial)
{
    const std::size_t n = curve.size();
    const std::size_t a = curve.anchor_index;
    const Vec3 t0 = curve.d1[a].normalized();
    if (std::abs(n1_initial.norm() - 1.0) > 1e-8)
        throw Error(ErrorKind::Input, "initial N1 is not a unit vector");
    if (std::abs(n1_initial.dot(t0)) > 1e-10)
        throw Error(ErrorKind::Input, "initial N1 is not orthogonal to T at the anchor");

    std::vector<Vec3> tangent(n), r(n);
    for (std::size_t i = 0; i < n; ++i)
        tangent[i] = curve.d1[i].normalized();

    auto step = [&](std::size_t from, std::size_t to) {
        const Vec3 v1 = curve.point[to] - curve.point[from];
        const double c1 = v1.squaredNorm();
        Vec3 rl = r[from];
        Vec3 tl = tangent[from];
        if (c1 > 0) {
            rl -= (2.0 / c1) * v1.dot(rl) * v1;
            tl -= (2.0 / c1) * v1.dot(tl) * v1;
        }
        const Vec3 v2 = tangent[to] - tl;
        const double c2 = v2.squaredNorm();
        Vec3 next = rl;
        if (c2 > 1e-300)
            next -= (2.0 / c2) * v2.dot(rl) * v2;
        r[to] = (next - next.dot(tangent[to]) * tangent[to]).normalized();
    };
    r[a] = n1_initial;
    for (std::size_t i = a + 1; i < n; ++i)
        step(i - 1, i);
    for (std::size_t i = a; i-- > 0;)
        step(i + 1, i);

    BishopData b;
    b.grid = curve.grid;
    b.anchor_index = a;
    b.tangent = tangent;
    b.normal1 = r;
    b.normal2.resize(n);
    b.k1.resize(n);
    b.k2.resize(n);
    b.theta.resize(n);
    b.degenerate.assign(n, false);
    double last = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        b.normal2[i] = tangent[i].cross(r[i]);
        b.k1[i] = curve.d2[i].dot(r[i]);
        b.k2[i] = curve.d2[i].dot(b.normal2[i]);
        if (std::hypot(b.k1[i], b.k2[i]) > kDefaultKappaFloor)
            last = std::atan2(b.k2[i], b.k1[i]);
        b.theta[i] = last;
    }
    unwrap_angles(b.theta);
    b.update_curvature_derivatives();
    return b;
}

/// Same frame field with theta shifted by a constant: (N1, N2) and (k1, k2)
/// rotate by delta.
inline BishopData rotate_gauge(BishopData b, double delta)
{
    const double c = std::cos(delta);
    const double s = std::sin(delta);
    for (std::size_t i = 0; i < b.size(); ++i) {
        const Vec3 n1 = b.normal1[i];
        const Vec3 n2 = b.normal2[i];
        b.normal1[i] = c * n1 - s * n2;
        b.normal2[i] = s * n1 + c * n2;
        const double k1 = b.k1[i];
        const double k2 = b.k2[i];
        b.k1[i] = c * k1 - s * k2;
        b.k2[i] = s * k1 + c * k2;
        b.theta[i] += delta;
    }
    b.update_curvature_derivatives();
    return b;
}

struct SlantHelixResult {
    bool slant = false;
    bool swapped = false;  // ratio taken as k2/k1
    double mean_ratio = 0.0;
    double total_variation = 0.0;
    double max_deviation = 0.0;  // largest |ratio - mean|
    double at_s = 0.0;
};

/// k1/k2 constant along the grid (k2/k1 when k1 stays further from zero).
inline SlantHelixResult slant_helix_test(const BishopData& bishop, double rel_tol, double zero_floor = 1e-8)
{
    const std::size_t n = bishop.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        auto flat = [&](std::size_t j) {
            return std::abs(bishop.k1[j]) < zero_floor && std::abs(bishop.k2[j]) < zero_floor;
        };
        if (flat(i) && flat(i + 1))
            throw Error(ErrorKind::Indeterminate,
                        "k1 and k2 both vanish near s = " + std::to_string(bishop.grid.at(i)));
    }
    double min1 = INFINITY, min2 = INFINITY;
    for (std::size_t i = 0; i < n; ++i) {
        min1 = std::min(min1, std::abs(bishop.k1[i]));
        min2 = std::min(min2, std::abs(bishop.k2[i]));
    }
    SlantHelixResult out;
    out.swapped = min1 > min2;
    const auto& num = out.swapped ? bishop.k2 : bishop.k1;
    const auto& den = out.swapped ? bishop.k1 : bishop.k2;

    std::vector<double> ratio(n);
    double mean = 0.0, mean_abs = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = std::abs(den[i]) < zero_floor ? std::copysign(zero_floor, den[i]) : den[i];
        ratio[i] = num[i] / d;
        mean += ratio[i];
        mean_abs += std::abs(ratio[i]);
    }
    mean /= static_cast<double>(n);
    mean_abs /= static_cast<double>(n);
    for (std::size_t i = 0; i + 1 < n; ++i)
        out.total_variation += std::abs(ratio[i + 1] - ratio[i]);
    for (std::size_t i = 0; i < n; ++i) {
        const double dev = std::abs(ratio[i] - mean);
        if (dev > out.max_deviation) {
            out.max_deviation = dev;
            out.at_s = bishop.grid.at(i);
        }
    }
    out.mean_ratio = mean;
    out.slant = out.total_variation <= rel_tol * mean_abs;
    return out;
}

inline bool planarity_test(const FrenetData& frenet, double abs_tol)
{
    for (std::size_t i = 0; i < frenet.size(); ++i)
        if (!frenet.degenerate[i] && std::abs(frenet.torsion[i]) > abs_tol)
            return false;
    return true;
}

/// Frame dump: s, T, N1, N2, k1, k2, theta at 17 significant digits.
inline void write_frame_csv(std::ostream& os, const BishopData& b)
{
    os << "s,Tx,Ty,Tz,N1x,N1y,N1z,N2x,N2y,N2z,k1,k2,theta\n";
    char buf[32];
    auto put = [&](double x, char sep) {
        std::snprintf(buf, sizeof buf, "%.17g", x);
        os << buf << sep;
    };
    for (std::size_t i = 0; i < b.size(); ++i) {
        put(b.grid.at(i), ',');
        for (const Vec3* v : {&b.tangent[i], &b.normal1[i], &b.normal2[i]})
            for (int c = 0; c < 3; ++c)
                put((*v)[c], ',');
        put(b.k1[i], ',');
        put(b.k2[i], ',');
        put(b.theta[i], '\n');
    }
}

} // namespace ruledframe
