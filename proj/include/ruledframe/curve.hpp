#pragma once

#include "frames.hpp"
#include "numeric.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ruledframe {

/// A space curve over a closed parameter interval. Derivatives up to order 3
/// come from registered closures when present, otherwise from central
/// differences of the next lower registered derivative.
class ParamCurve {
public:
    using Evaluator = std::function<Vec3(double)>;

    ParamCurve(std::string label, Interval domain, Evaluator point, std::array<Evaluator, 3> derivatives = {},
               std::optional<double> anchor = std::nullopt)
        : label_(std::move(label)), domain_(domain), eval_{std::move(point), std::move(derivatives[0]),
                                                           std::move(derivatives[1]), std::move(derivatives[2])},
          anchor_(anchor)
    {
        if (!eval_[0])
            throw Error(ErrorKind::Input, "curve '" + label_ + "' has no evaluator");
        if (domain_.degenerate())
            throw Error(ErrorKind::Input, "curve '" + label_ + "' has an empty domain");
        if (anchor_ && !domain_.contains(*anchor_))
            throw Error(ErrorKind::Input, "anchor outside the domain of '" + label_ + "'");
    }

    const std::string& label() const { return label_; }
    const Interval& domain() const { return domain_; }

    /// Parameter value that maps to arclength s = 0: the explicit anchor, else
    /// t = 0 when it lies in the domain, else the domain start.
    double anchor() const
    {
        if (anchor_)
            return *anchor_;
        return domain_.contains(0.0) ? 0.0 : domain_.lo;
    }

    bool has_analytic(int order) const { return order >= 0 && order <= 3 && static_cast<bool>(eval_[order]); }

    Vec3 evaluate(double t, int order = 0) const
    {
        if (order < 0 || order > 3)
            throw Error(ErrorKind::UnsupportedOrder, "derivative order " + std::to_string(order) + " (max 3)");
        if (!domain_.contains(t, 1e-12 * (1.0 + std::abs(t))))
            throw Error(ErrorKind::Domain, "t = " + std::to_string(t) + " outside the domain of '" + label_ + "'");
        return raw(std::clamp(t, domain_.lo, domain_.hi), order);
    }

    /// Central-difference step for parameter t.
    static double fd_step(double t)
    {
        return std::max(1e-4, std::cbrt(std::numeric_limits<double>::epsilon()) * std::abs(t));
    }

private:
    Vec3 raw(double t, int order) const
    {
        if (eval_[order])
            return eval_[order](t);
        int base = order - 1;
        while (!eval_[base])
            --base;
        const int m = order - base;
        // third differences lose more to roundoff, so they take a wider step
        const double h = fd_step(t) * (m == 3 ? 10.0 : 1.0);
        std::vector<double> nodes{-2, -1, 0, 1, 2};
        // keep the stencil inside the domain
        double shift = 0.0;
        if (t + nodes.front() * h < domain_.lo)
            shift = std::ceil((domain_.lo - t) / h) - nodes.front();
        else if (t + nodes.back() * h > domain_.hi)
            shift = std::floor((domain_.hi - t) / h) - nodes.back();
        for (double& x : nodes)
            x += shift;
        const auto w = fd::fornberg_weights(0.0, nodes, m);
        Vec3 acc = Vec3::Zero();
        for (std::size_t k = 0; k < nodes.size(); ++k)
            acc += w[static_cast<std::size_t>(m)][k] * eval_[base](t + nodes[k] * h);
        return acc / std::pow(h, m);
    }

    std::string label_;
    Interval domain_;
    std::array<Evaluator, 4> eval_;
    std::optional<double> anchor_;
};

namespace builtin {

/// (a cos t, a sin t, b t); unit speed when a^2 + b^2 = 1.
inline ParamCurve helix(double a, double b, Interval domain)
{
    return ParamCurve(
        "helix", domain, [a, b](double t) { return Vec3(a * std::cos(t), a * std::sin(t), b * t); },
        {[a, b](double t) { return Vec3(-a * std::sin(t), a * std::cos(t), b); },
         [a](double t) { return Vec3(-a * std::cos(t), -a * std::sin(t), 0.0); },
         [a](double t) { return Vec3(a * std::sin(t), -a * std::cos(t), 0.0); }});
}

/// The unit-speed helix (sqrt2/2)(cos s, sin s, s) on [-pi, pi].
inline ParamCurve example_helix()
{
    return helix(kHalfSqrt2, kHalfSqrt2, {-std::numbers::pi, std::numbers::pi});
}

inline ParamCurve circle(double radius, Interval domain)
{
    return ParamCurve(
        "circle", domain, [radius](double t) { return Vec3(radius * std::cos(t), radius * std::sin(t), 0.0); },
        {[radius](double t) { return Vec3(-radius * std::sin(t), radius * std::cos(t), 0.0); },
         [radius](double t) { return Vec3(-radius * std::cos(t), -radius * std::sin(t), 0.0); },
         [radius](double t) { return Vec3(radius * std::sin(t), -radius * std::cos(t), 0.0); }});
}

inline ParamCurve line(const Vec3& origin, const Vec3& direction, Interval domain)
{
    return ParamCurve(
        "line", domain, [origin, direction](double t) -> Vec3 { return origin + t * direction; },
        {[direction](double) -> Vec3 { return direction; }, [](double) -> Vec3 { return Vec3::Zero(); },
         [](double) -> Vec3 { return Vec3::Zero(); }});
}

/// (t, a t^2, 0)
inline ParamCurve parabola(double a, Interval domain)
{
    return ParamCurve(
        "parabola", domain, [a](double t) { return Vec3(t, a * t * t, 0.0); },
        {[a](double t) { return Vec3(1.0, 2 * a * t, 0.0); }, [a](double) { return Vec3(0.0, 2 * a, 0.0); },
         [](double) -> Vec3 { return Vec3::Zero(); }});
}

/// (sin t + 2 sin 2t, cos t - 2 cos 2t, -sin 3t)
inline ParamCurve trefoil(Interval domain)
{
    using std::cos;
    using std::sin;
    return ParamCurve(
        "trefoil", domain,
        [](double t) { return Vec3(sin(t) + 2 * sin(2 * t), cos(t) - 2 * cos(2 * t), -sin(3 * t)); },
        {[](double t) { return Vec3(cos(t) + 4 * cos(2 * t), -sin(t) + 4 * sin(2 * t), -3 * cos(3 * t)); },
         [](double t) { return Vec3(-sin(t) - 8 * sin(2 * t), -cos(t) + 8 * cos(2 * t), 9 * sin(3 * t)); },
         [](double t) { return Vec3(-cos(t) - 16 * cos(2 * t), sin(t) - 16 * sin(2 * t), 27 * cos(3 * t)); }});
}

} // namespace builtin

/// Unit-speed resampling of a curve on a uniform arclength grid. Grid values
/// are arclength measured from the curve's anchor, so s = 0 maps to anchor().
struct ArcLengthCurve {
    ParamCurve source;
    UniformGrid grid;
    std::vector<double> param;
    std::vector<Vec3> point, d1, d2, d3;
    double length = 0.0;
    std::size_t anchor_index = 0;

    std::size_t size() const { return grid.count; }

    double max_speed_defect() const
    {
        double worst = 0.0;
        for (const auto& v : d1)
            worst = std::max(worst, std::abs(v.norm() - 1.0));
        return worst;
    }
};

namespace detail {

/// Arclength derivatives from parameter derivatives r1, r2, r3 (chain rule).
inline std::array<Vec3, 3> to_arclength(const Vec3& r1, const Vec3& r2, const Vec3& r3)
{
    const double sigma = r1.norm();
    const double s1 = r1.dot(r2) / sigma;
    const double s2 = (r2.squaredNorm() + r1.dot(r3)) / sigma - r1.dot(r2) * r1.dot(r2) / (sigma * sigma * sigma);
    const double sg2 = sigma * sigma;
    const double sg3 = sg2 * sigma;
    const double sg4 = sg3 * sigma;
    const double sg5 = sg4 * sigma;
    Vec3 g1 = r1 / sigma;
    Vec3 g2 = r2 / sg2 - r1 * (s1 / sg3);
    Vec3 g3 = r3 / sg3 - r2 * (3 * s1 / sg4) - r1 * (s2 / sg4) + r1 * (3 * s1 * s1 / sg5);
    return {g1, g2, g3};
}

} // namespace detail

inline ArcLengthCurve reparametrize_arclength(const ParamCurve& curve, std::size_t n_samples, double quad_tol)
{
    if (n_samples < 16)
        throw Error(ErrorKind::Input, "reparametrization needs at least 16 samples");
    if (!(quad_tol > 0))
        throw Error(ErrorKind::Input, "quadrature tolerance must be positive");

    auto speed = [&curve](double t) {
        const double v = curve.evaluate(t, 1).norm();
        if (!(v >= 1e-10))
            throw Error(ErrorKind::Regularity,
                        "speed " + std::to_string(v) + " at t = " + std::to_string(t) + " on '" + curve.label() + "'");
        return v;
    };

    const Interval dom = curve.domain();
    const std::size_t table = std::max<std::size_t>(4 * n_samples, 256);
    const auto tt = linspace(dom.lo, dom.hi, table + 1);
    const AdaptiveSimpson quad(quad_tol / static_cast<double>(table));
    std::vector<double> cum(table + 1, 0.0);
    for (std::size_t j = 0; j < table; ++j)
        cum[j + 1] = cum[j] + quad(speed, tt[j], tt[j + 1]);
    const double total = cum.back();

    // cumulative length at any t: table value plus the remainder of the cell
    auto length_to = [&](double t) {
        auto it = std::upper_bound(tt.begin(), tt.end(), t);
        std::size_t j = it == tt.begin() ? 0 : static_cast<std::size_t>(it - tt.begin()) - 1;
        j = std::min(j, table - 1);
        return cum[j] + quad(speed, tt[j], t);
    };

    const double anchor_len = length_to(curve.anchor());
    const MonotoneCubic inverse(cum, tt);

    ArcLengthCurve out{curve, {-anchor_len, total / static_cast<double>(n_samples - 1), n_samples}, {}, {}, {}, {}, {},
                       total, 0};
    out.param.resize(n_samples);
    out.point.resize(n_samples);
    out.d1.resize(n_samples);
    out.d2.resize(n_samples);
    out.d3.resize(n_samples);

    for (std::size_t i = 0; i < n_samples; ++i) {
        double t;
        if (i == 0) {
            t = dom.lo;
        } else if (i + 1 == n_samples) {
            t = dom.hi;
        } else {
            const double target = static_cast<double>(i) * out.grid.step;
            t = inverse(target);
            for (int it = 0; it < 30; ++it) {
                const double f = length_to(t) - target;
                const double dt = f / speed(t);
                t = std::clamp(t - dt, dom.lo, dom.hi);
                if (std::abs(f) < 1e-14 * std::max(1.0, total))
                    break;
            }
        }
        out.param[i] = t;
        out.point[i] = curve.evaluate(t, 0);
        const auto g = detail::to_arclength(curve.evaluate(t, 1), curve.evaluate(t, 2), curve.evaluate(t, 3));
        if (!(curve.evaluate(t, 1).norm() >= 1e-10))
            throw Error(ErrorKind::Regularity, "curve '" + curve.label() + "' is singular at t = " + std::to_string(t));
        out.d1[i] = g[0];
        out.d2[i] = g[1];
        out.d3[i] = g[2];
    }
    out.anchor_index = out.grid.nearest(0.0);
    return out;
}

/// Bishop curvatures k1(s), k2(s) over an arclength interval.
class CurvatureProfile {
public:
    using Fn = std::function<double(double)>;

    CurvatureProfile(Fn k1, Fn k2, Interval range) : k1_(std::move(k1)), k2_(std::move(k2)), range_(range)
    {
        if (!k1_ || !k2_ || range_.degenerate())
            throw Error(ErrorKind::Input, "curvature profile needs two functions over a non-empty interval");
    }

    static CurvatureProfile constant(double k1, double k2, Interval range)
    {
        return {[k1](double) { return k1; }, [k2](double) { return k2; }, range};
    }

    /// Sampled (s, k1, k2) table, linearly interpolated.
    static CurvatureProfile from_table(std::vector<double> s, std::vector<double> k1, std::vector<double> k2)
    {
        if (s.size() < 2 || k1.size() != s.size() || k2.size() != s.size())
            throw Error(ErrorKind::Input, "curvature table needs >= 2 rows of (s, k1, k2)");
        for (std::size_t i = 0; i + 1 < s.size(); ++i)
            if (!(s[i + 1] > s[i]))
                throw Error(ErrorKind::Input, "curvature table s values must be strictly increasing");
        auto xs = std::make_shared<const std::vector<double>>(std::move(s));
        auto lerp = [xs](std::shared_ptr<const std::vector<double>> ys) {
            return [xs, ys](double q) {
                const auto& x = *xs;
                auto it = std::upper_bound(x.begin(), x.end(), q);
                std::size_t i = it == x.begin() ? 0 : static_cast<std::size_t>(it - x.begin()) - 1;
                i = std::min(i, x.size() - 2);
                const double u = (q - x[i]) / (x[i + 1] - x[i]);
                return (1 - u) * (*ys)[i] + u * (*ys)[i + 1];
            };
        };
        const Interval range{xs->front(), xs->back()};
        return {lerp(std::make_shared<const std::vector<double>>(std::move(k1))),
                lerp(std::make_shared<const std::vector<double>>(std::move(k2))), range};
    }

    const Interval& range() const { return range_; }

    std::pair<double, double> operator()(double s) const
    {
        if (!range_.contains(s, 1e-12 * (1.0 + std::abs(s))))
            throw Error(ErrorKind::Domain, "s = " + std::to_string(s) + " outside the curvature profile");
        const double a = k1_(s);
        const double b = k2_(s);
        if (!std::isfinite(a) || !std::isfinite(b))
            throw Error(ErrorKind::Input, "non-finite curvature at s = " + std::to_string(s));
        return {a, b};
    }

private:
    Fn k1_, k2_;
    Interval range_;
};

struct SynthesizedCurve {
    ArcLengthCurve curve;
    BishopData bishop;
};

namespace detail {

struct BishopState {
    Vec3 p, t, n1, n2;

    BishopState operator+(const BishopState& o) const { return {p + o.p, t + o.t, n1 + o.n1, n2 + o.n2}; }
    BishopState operator*(double h) const { return {p * h, t * h, n1 * h, n2 * h}; }
};

inline BishopState bishop_rhs(const CurvatureProfile& profile, double s, const BishopState& y)
{
    const auto [k1, k2] = profile(s);
    return {y.t, k1 * y.n1 + k2 * y.n2, -k1 * y.t, -k2 * y.t};
}

/// Classical RK4 over [s, s + span] in `steps` equal steps with Gram-Schmidt
/// re-orthonormalization after each step.
inline BishopState integrate_bishop(const CurvatureProfile& profile, double s, BishopState y, double span, int steps)
{
    if (span == 0.0)
        return y;
    const double h = span / steps;
    for (int k = 0; k < steps; ++k) {
        const double s0 = s + k * h;
        const auto a = bishop_rhs(profile, s0, y);
        const auto b = bishop_rhs(profile, s0 + 0.5 * h, y + a * (0.5 * h));
        const auto c = bishop_rhs(profile, s0 + 0.5 * h, y + b * (0.5 * h));
        const auto d = bishop_rhs(profile, s0 + h, y + c * h);
        y = y + (a + b * 2.0 + c * 2.0 + d) * (h / 6.0);
        Frame f{y.t, y.n1, y.n2};
        f.reorthonormalize();
        y.t = f.t;
        y.n1 = f.n1;
        y.n2 = f.n2;
    }
    return y;
}

} // namespace detail

/// Integrates T' = k1 N1 + k2 N2, N1' = -k1 T, N2' = -k2 T, gamma' = T from
/// the initial frame and point at s_range.lo.
inline SynthesizedCurve curve_from_bishop_curvatures(const CurvatureProfile& profile, const Frame& initial_frame,
                                                     const Vec3& initial_point, Interval s_range,
                                                     std::size_t n_samples, int substeps = 8)
{
    if (initial_frame.orthonormality_defect() > 1e-10)
        throw Error(ErrorKind::Input, "initial frame is not orthonormal and right-handed");
    if (n_samples < 64)
        throw Error(ErrorKind::Input, "curve synthesis needs at least 64 samples");
    if (s_range.degenerate() || !profile.range().contains(s_range.lo, 1e-12) ||
        !profile.range().contains(s_range.hi, 1e-12))
        throw Error(ErrorKind::Domain, "synthesis interval outside the curvature profile");
    if (substeps < 1)
        throw Error(ErrorKind::Input, "substeps must be positive");

    const UniformGrid grid = UniformGrid::over(s_range, n_samples);
    auto nodes = std::make_shared<std::vector<detail::BishopState>>();
    nodes->reserve(n_samples);
    nodes->push_back({initial_point, initial_frame.t, initial_frame.n1, initial_frame.n2});
    for (std::size_t i = 1; i < n_samples; ++i)
        nodes->push_back(detail::integrate_bishop(profile, grid.at(i - 1), nodes->back(), grid.step, substeps));

    // continuous evaluation: integrate from the node at or below s
    auto state_at = [nodes, grid, profile, substeps](double s) {
        const auto [i, u] = grid.locate(s);
        if (u == 1.0)
            return (*nodes)[i + 1];
        return detail::integrate_bishop(profile, grid.at(i), (*nodes)[i], u * grid.step, substeps);
    };
    ParamCurve source(
        "bishop_profile", s_range, [state_at](double s) { return state_at(s).p; },
        {[state_at](double s) { return state_at(s).t; },
         [state_at, profile](double s) -> Vec3 {
             const auto y = state_at(s);
             const auto [k1, k2] = profile(s);
             return k1 * y.n1 + k2 * y.n2;
         },
         {}},
        s_range.lo);

    SynthesizedCurve out{ArcLengthCurve{source, grid, {}, {}, {}, {}, {}, s_range.length(), 0}, BishopData{}};
    BishopData& b = out.bishop;
    b.grid = grid;
    b.anchor_index = 0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        const auto& y = (*nodes)[i];
        const auto [k1, k2] = profile(grid.at(i));
        b.tangent.push_back(y.t);
        b.normal1.push_back(y.n1);
        b.normal2.push_back(y.n2);
        b.k1.push_back(k1);
        b.k2.push_back(k2);
        b.degenerate.push_back(false);
    }
    b.update_curvature_derivatives();

    // theta: angle of the principal normal measured from N1, held where kappa vanishes
    double last = 0.0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        if (std::hypot(b.k1[i], b.k2[i]) > 1e-7)
            last = std::atan2(b.k2[i], b.k1[i]);
        b.theta.push_back(last);
    }
    unwrap_angles(b.theta);

    ArcLengthCurve& c = out.curve;
    c.param.resize(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
        const auto& y = (*nodes)[i];
        c.param[i] = grid.at(i);
        c.point.push_back(y.p);
        c.d1.push_back(y.t);
        c.d2.push_back(b.k1[i] * y.n1 + b.k2[i] * y.n2);
        c.d3.push_back(b.dk1[i] * y.n1 + b.dk2[i] * y.n2 - (b.k1[i] * b.k1[i] + b.k2[i] * b.k2[i]) * y.t);
    }
    return out;
}

} // namespace ruledframe
