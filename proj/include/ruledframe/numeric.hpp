#pragma once

#include "error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <type_traits>
#include <vector>

namespace ruledframe {

using Vec3 = Eigen::Vector3d;

inline constexpr double kSqrt2 = std::numbers::sqrt2;
inline constexpr double kHalfSqrt2 = std::numbers::sqrt2 / 2.0;

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    bool contains(double x, double slack = 0.0) const { return x >= lo - slack && x <= hi + slack; }
    bool degenerate() const { return !(hi > lo); }
};

/// Uniform sample grid x_i = start + i * step, i in [0, count).
struct UniformGrid {
    double start = 0.0;
    double step = 0.0;
    std::size_t count = 0;

    double at(std::size_t i) const { return start + static_cast<double>(i) * step; }
    double end() const { return at(count - 1); }
    Interval range() const { return {start, end()}; }

    static UniformGrid over(Interval range, std::size_t count)
    {
        if (count < 2)
            throw Error(ErrorKind::Input, "a grid needs at least two samples");
        return {range.lo, range.length() / static_cast<double>(count - 1), count};
    }

    /// Nearest node index to x (clamped).
    std::size_t nearest(double x) const
    {
        const double r = std::round((x - start) / step);
        return static_cast<std::size_t>(std::clamp(r, 0.0, static_cast<double>(count - 1)));
    }

    /// Interval index i and fraction in [0,1] with x = at(i) + frac * step.
    /// Fractions within 1e-9 of a node snap to it.
    std::pair<std::size_t, double> locate(double x) const
    {
        double u = (x - start) / step;
        const double r = std::round(u);
        if (std::abs(u - r) < 1e-9)
            u = r;
        u = std::clamp(u, 0.0, static_cast<double>(count - 1));
        auto i = static_cast<std::size_t>(std::floor(u));
        if (i >= count - 1)
            i = count - 2;
        return {i, u - static_cast<double>(i)};
    }
};

inline std::vector<double> linspace(double lo, double hi, std::size_t n)
{
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    for (std::size_t i = 0; i < n; ++i)
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return out;
}

namespace fd {

/// Finite-difference weights for the derivatives 0..max_order at x0 over the
/// nodes x (Fornberg's recursion). Returns weights[order][node].
inline std::vector<std::vector<double>> fornberg_weights(double x0, std::span<const double> x, int max_order)
{
    const std::size_t n = x.size();
    const auto m = static_cast<std::size_t>(max_order);
    std::vector<std::vector<double>> c(m + 1, std::vector<double>(n, 0.0));
    double c1 = 1.0;
    double c4 = x[0] - x0;
    c[0][0] = 1.0;
    for (std::size_t i = 1; i < n; ++i) {
        const std::size_t mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i] - x0;
        for (std::size_t j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (std::size_t k = mn; k >= 1; --k)
                    c[k][i] = c1 * (static_cast<double>(k) * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for (std::size_t k = mn; k >= 1; --k)
                c[k][j] = (c4 * c[k][j] - static_cast<double>(k) * c[k - 1][j]) / c3;
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    return c;
}

inline constexpr int kCentralHalfWidth = 3;  // 7-point central stencils
inline constexpr int kOneSidedPoints = 8;

/// Integer node offsets for a derivative stencil around node i of an n-sample
/// grid: central when it fits, otherwise eight consecutive nodes inside the grid.
inline std::vector<int> stencil_offsets(std::size_t i, std::size_t n)
{
    const auto ii = static_cast<long>(i);
    const auto nn = static_cast<long>(n);
    std::vector<int> off;
    if (ii - kCentralHalfWidth >= 0 && ii + kCentralHalfWidth <= nn - 1) {
        for (int k = -kCentralHalfWidth; k <= kCentralHalfWidth; ++k)
            off.push_back(k);
        return off;
    }
    const long width = std::min<long>(kOneSidedPoints, nn);
    long first = std::clamp<long>(ii - width / 2, 0, nn - width);
    for (long k = 0; k < width; ++k)
        off.push_back(static_cast<int>(first + k - ii));
    return off;
}

/// Same offset pattern for a continuous point x in [lo, hi] with spacing h:
/// central if x +- 3h stays inside, otherwise the stencil slides inward.
inline std::vector<double> stencil_offsets(double x, Interval range, double h)
{
    const double slack = 1e-9 * h;
    std::vector<double> off;
    if (x - kCentralHalfWidth * h >= range.lo - slack && x + kCentralHalfWidth * h <= range.hi + slack) {
        for (int k = -kCentralHalfWidth; k <= kCentralHalfWidth; ++k)
            off.push_back(k);
        return off;
    }
    const double below = std::floor((x - range.lo) / h + 1e-9);
    double first = -std::min(below, kOneSidedPoints / 2.0);
    const double above = std::floor((range.hi - x) / h + 1e-9);
    if (first + (kOneSidedPoints - 1) > above)
        first = above - (kOneSidedPoints - 1);
    for (int k = 0; k < kOneSidedPoints; ++k)
        off.push_back(first + k);
    return off;
}

/// order-th derivative of uniformly sampled data at node i.
template <class T>
T sample_derivative(std::span<const T> f, double h, std::size_t i, int order)
{
    if (f.size() < static_cast<std::size_t>(kOneSidedPoints))
        throw Error(ErrorKind::Input, "at least eight samples are needed for finite differences");
    const auto off = stencil_offsets(i, f.size());
    std::vector<double> x(off.begin(), off.end());
    const auto w = fornberg_weights(0.0, x, order);
    T acc = f[i] * 0.0;
    for (std::size_t k = 0; k < off.size(); ++k)
        acc += f[static_cast<std::size_t>(static_cast<long>(i) + off[k])] * w[static_cast<std::size_t>(order)][k];
    return acc / std::pow(h, order);
}

template <class T>
std::vector<T> sample_derivatives(std::span<const T> f, double h, int order)
{
    std::vector<T> out;
    out.reserve(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        out.push_back(sample_derivative(f, h, i, order));
    return out;
}

template <class T>
std::vector<T> sample_derivatives(const std::vector<T>& f, double h, int order)
{
    return sample_derivatives(std::span<const T>(f), h, order);
}

/// order-th derivative of g at x using nodes x + k h restricted to range.
template <class F>
auto function_derivative(F&& g, double x, Interval range, double h, int order)
{
    const auto off = stencil_offsets(x, range, h);
    const auto w = fornberg_weights(0.0, off, order);
    using R = std::decay_t<decltype(g(x))>;
    R acc = g(x + off[0] * h) * w[static_cast<std::size_t>(order)][0];
    for (std::size_t k = 1; k < off.size(); ++k)
        acc += g(x + off[k] * h) * w[static_cast<std::size_t>(order)][k];
    return R(acc / std::pow(h, order));
}

} // namespace fd

/// Cubic Hermite interpolation on [x_i, x_i + h] at fraction u.
template <class T>
T hermite(const T& p0, const T& m0, const T& p1, const T& m1, double h, double u)
{
    const double u2 = u * u;
    const double u3 = u2 * u;
    return p0 * (2 * u3 - 3 * u2 + 1) + m0 * (h * (u3 - 2 * u2 + u)) + p1 * (-2 * u3 + 3 * u2)
        + m1 * (h * (u3 - u2));
}

/// Adaptive Simpson quadrature; throws a tolerance error when the recursion
/// depth is exhausted before the local error estimate meets the budget.
class AdaptiveSimpson {
public:
    explicit AdaptiveSimpson(double tol, int max_depth = 48) : tol_(tol), max_depth_(max_depth) {}

    template <class F>
    double operator()(F&& f, double a, double b) const
    {
        if (a == b)
            return 0.0;
        const double fa = f(a);
        const double fb = f(b);
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        const double whole = (b - a) / 6.0 * (fa + 4 * fm + fb);
        return recurse(f, a, b, fa, fm, fb, whole, tol_, max_depth_);
    }

private:
    template <class F>
    double recurse(F& f, double a, double b, double fa, double fm, double fb, double whole, double tol,
                   int depth) const
    {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m);
        const double rm = 0.5 * (m + b);
        const double flm = f(lm);
        const double frm = f(rm);
        const double left = (m - a) / 6.0 * (fa + 4 * flm + fm);
        const double right = (b - m) / 6.0 * (fm + 4 * frm + fb);
        const double delta = left + right - whole;
        if (std::abs(delta) <= 15.0 * tol)
            return left + right + delta / 15.0;
        if (depth <= 0)
            throw Error(ErrorKind::Tolerance, "adaptive Simpson did not converge");
        return recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    }

    double tol_;
    int max_depth_;
};

/// Monotone piecewise-cubic (Fritsch-Carlson) interpolant of y(x), x strictly increasing.
class MonotoneCubic {
public:
    MonotoneCubic(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y))
    {
        const std::size_t n = x_.size();
        if (n < 2 || y_.size() != n)
            throw Error(ErrorKind::Input, "monotone cubic needs matching tables of size >= 2");
        std::vector<double> delta(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i)
            delta[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
        slope_.assign(n, 0.0);
        slope_[0] = delta[0];
        slope_[n - 1] = delta[n - 2];
        for (std::size_t i = 1; i + 1 < n; ++i)
            slope_[i] = (delta[i - 1] * delta[i] <= 0) ? 0.0 : 0.5 * (delta[i - 1] + delta[i]);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (delta[i] == 0) {
                slope_[i] = slope_[i + 1] = 0;
                continue;
            }
            const double a = slope_[i] / delta[i];
            const double b = slope_[i + 1] / delta[i];
            const double r = a * a + b * b;
            if (r > 9.0) {
                const double t = 3.0 / std::sqrt(r);
                slope_[i] = t * a * delta[i];
                slope_[i + 1] = t * b * delta[i];
            }
        }
    }

    double operator()(double xq) const
    {
        const auto it = std::upper_bound(x_.begin(), x_.end(), xq);
        std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
        i = std::min(i, x_.size() - 2);
        const double h = x_[i + 1] - x_[i];
        return hermite(y_[i], slope_[i], y_[i + 1], slope_[i + 1], h, (xq - x_[i]) / h);
    }

private:
    std::vector<double> x_, y_, slope_;
};

/// Shift a[i] by multiples of 2*pi so that neighbours never jump by more than pi.
inline void unwrap_angles(std::vector<double>& a)
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t i = 1; i < a.size(); ++i) {
        const double d = a[i] - a[i - 1];
        a[i] -= two_pi * std::round(d / two_pi);
    }
}

} // namespace ruledframe
