#include <ruledframe/curve.hpp>
#include <ruledframe/framing.hpp>
#include <ruledframe/geometry.hpp>
#include <ruledframe/smarandache.hpp>

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

using namespace ruledframe;
using Catch::Approx;

namespace {

constexpr double r = kHalfSqrt2;
constexpr double pi = std::numbers::pi;

ErrorKind kind_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error raised");
    return ErrorKind::Input;
}

const BishopData& helix_bishop()
{
    static const BishopData b =
        bishop_from_frenet(frenet_frame(reparametrize_arclength(builtin::example_helix(), 401, 1e-12)));
    return b;
}

// Quadratic curvatures whose jet at s = 0 is (k1, k2, k1', k2') = (0.37, -0.61, 0.23, 0.41).
const SynthesizedCurve& jet_curve()
{
    static const SynthesizedCurve c = curve_from_bishop_curvatures(
        CurvatureProfile([](double s) { return 0.37 + 0.23 * s - 0.15 * s * s; },
                         [](double s) { return -0.61 + 0.41 * s + 0.1 * s * s; }, {-1, 1}),
        Frame{}, Vec3::Zero(), {-1, 1}, 801);
    return c;
}

std::size_t middle(const BishopData& b) { return b.size() / 2; }

} // namespace

TEST_CASE("n1n2 fundamental forms along the helix")
{
    const auto surf = build_surface(helix_bishop(), SurfaceKind::N1N2, {-1, 1});
    for (double s : {-2.0, 0.0, 1.5})
        for (double v : {-0.6, 0.4}) {
            const auto a = analyze_point(surf, s, v);
            const auto b = bishop_sample(surf, s);
            CHECK(a.forms.G == Approx(1.0).margin(1e-10));
            CHECK(a.forms.F == Approx(-(b.k1 + b.k2) * r).margin(1e-8));
            CHECK(a.forms.discriminant() == Approx(v * v * 0.5).margin(1e-8));
            CHECK(a.forms.N == 0.0);
            CHECK(std::abs(a.K) < 1e-8);
            CHECK(a.H == Approx(-1 / (2 * std::abs(v))).epsilon(1e-6));
        }
}

TEST_CASE("flat strip has vanishing second form")
{
    const UniformGrid g{0.0, 0.1, 21};
    std::vector<Vec3> base, ruling;
    for (std::size_t i = 0; i < g.count; ++i) {
        base.push_back(Vec3(g.at(i), 0, 0));
        ruling.push_back(Vec3(0, 1, 0));
    }
    const auto strip = make_generic_surface(g, base, ruling, {-1, 1});
    const auto a = analyze_point(strip, 1.0, 0.5);
    CHECK(std::abs(a.forms.L) < 1e-9);
    CHECK(std::abs(a.forms.M) < 1e-9);
    CHECK(a.forms.N == 0.0);
    CHECK(a.point_class == PointClass::PlanarPoint);
}

TEST_CASE("degenerate first form is reported as singular")
{
    CHECK(kind_of([] { curvatures(FundamentalForms{1, 1, 1, 0, 0, 0}); }) == ErrorKind::SingularPoint);
}

TEST_CASE("tn1 curvature at the helix origin")
{
    const auto surf = build_surface(helix_bishop(), SurfaceKind::TN1, {-1, 1});
    for (double v : {-0.5, 0.0, 0.5}) {
        const auto a = analyze_point(surf, 0.0, v);
        CHECK(std::abs(a.K) < 1e-9);
        CHECK(a.H == Approx(-0.5 - kSqrt2 * v / 4).margin(1e-8));
        CHECK(a.point_class == PointClass::Parabolic);
    }
}

TEST_CASE("numeric curvatures reproduce the reference jet values")
{
    const auto& c = jet_curve();
    const std::size_t m = middle(c.bishop);
    REQUIRE(c.bishop.grid.at(m) == Approx(0.0).margin(1e-12));
    CHECK(c.bishop.dk1[m] == Approx(0.23).margin(1e-10));
    CHECK(c.bishop.dk2[m] == Approx(0.41).margin(1e-10));

    const auto tn1 = build_surface(c.bishop, SurfaceKind::TN1, {-1, 1});
    const auto tn2 = build_surface(c.bishop, SurfaceKind::TN2, {-1, 1});
    const auto n1n2 = build_surface(c.bishop, SurfaceKind::N1N2, {-1, 1});

    auto a = analyze_point(tn1, 0.0, 0.3);
    CHECK(a.K == Approx(-4.5727344651508846).epsilon(1e-6));
    CHECK(a.H == Approx(-0.5080745115752899).epsilon(1e-6));
    a = analyze_point(tn1, 0.0, -0.7);
    CHECK(a.K == Approx(-0.0864921195635965).epsilon(1e-6));
    CHECK(a.H == Approx(0.015743075561368215).epsilon(1e-5));

    // tn2 with the chi_s x chi_v normal has the opposite mean curvature sign
    a = analyze_point(tn2, 0.0, 0.3);
    CHECK(a.K == Approx(-0.3056652494727514).epsilon(1e-6));
    CHECK(a.H == Approx(-0.6327633128462504).epsilon(1e-6));
    a = analyze_point(tn2, 0.0, -0.7);
    CHECK(a.K == Approx(-0.058011452765803315).epsilon(1e-6));
    CHECK(a.H == Approx(-0.20199972307472253).epsilon(1e-6));

    a = analyze_point(n1n2, 0.0, 0.3);
    CHECK(std::abs(a.K) < 1e-9);
    CHECK(a.H == Approx(-1.3401546807542033).epsilon(1e-6));
    a = analyze_point(n1n2, 0.0, -0.7);
    CHECK(a.H == Approx(-0.5743520060375158).epsilon(1e-6));
}

TEST_CASE("base-curve invariants reproduce the reference jet values")
{
    const auto& c = jet_curve();
    const std::size_t m = middle(c.bishop);
    struct Case {
        SurfaceKind kind;
        double v, kn, kg, tg;
    };
    // kappa_n and kappa_g taken with the chi_s x chi_v normal
    const Case cases[] = {
        {SurfaceKind::TN1, 0.3, -0.48149216963036545, 0.7386410221368149, 1.097348189535281},
        {SurfaceKind::TN2, 0.3, -0.5057189439229507, 0.6842499090802417, 0.6092304117561086},
        {SurfaceKind::N1N2, 0.3, 0.0, -0.7134423592694786, 0.0},
        {SurfaceKind::TN1, -0.7, -0.12404909783835143, 1.153401980942139, 0.2833136697361955},
        {SurfaceKind::TN2, -0.7, -0.3216107981323955, 0.7704448126797964, 0.3472870588748551},
    };
    for (const auto& k : cases) {
        INFO(to_string(k.kind) << " v = " << k.v);
        const auto surf = build_surface(c.bishop, k.kind, {-1, 1});
        const auto inv = base_curve_invariants(surf, k.v);
        REQUIRE(inv.valid[m]);
        CHECK(inv.normal_curvature[m] == Approx(k.kn).margin(1e-6));
        CHECK(inv.geodesic_curvature[m] == Approx(k.kg).margin(1e-6));
        CHECK(inv.geodesic_torsion[m] == Approx(k.tg).margin(1e-5));
    }
}

TEST_CASE("base-curve invariants in special cases")
{
    SECTION("tn1 with k1 = 0 has no normal curvature")
    {
        const auto syn = curve_from_bishop_curvatures(
            CurvatureProfile([](double) { return 0.0; }, [](double s) { return 0.5 + 0.2 * std::sin(s); }, {0, 3}),
            Frame{}, Vec3::Zero(), {0, 3}, 301);
        const auto inv = base_curve_invariants(build_surface(syn.bishop, SurfaceKind::TN1, {-1, 1}), 0.5);
        for (std::size_t i = 0; i < inv.valid.size(); ++i)
            if (inv.valid[i])
                CHECK(std::abs(inv.normal_curvature[i]) < 1e-8);
    }
    SECTION("n1n2 on the helix: kappa_g = -kappa for v > 0")
    {
        const auto inv = base_curve_invariants(build_surface(helix_bishop(), SurfaceKind::N1N2, {-1, 1}), 0.5);
        std::size_t checked = 0;
        for (std::size_t i = 0; i < inv.valid.size(); ++i) {
            if (!inv.valid[i])
                continue;
            ++checked;
            CHECK(std::abs(inv.normal_curvature[i]) < 1e-8);
            CHECK(inv.geodesic_curvature[i] == Approx(-r).margin(1e-6));
            CHECK(std::abs(inv.geodesic_torsion[i]) < 1e-6);
        }
        CHECK(checked > 380);
    }
    SECTION("v outside the ruling range")
    {
        const auto surf = build_surface(helix_bishop(), SurfaceKind::TN1, {-1, 1});
        CHECK(kind_of([&] { base_curve_invariants(surf, 2.0); }) == ErrorKind::Domain);
    }
}

TEST_CASE("point classification")
{
    CHECK(classify_point(0.5, 0.0, 1e-6) == PointClass::Elliptic);
    CHECK(classify_point(-0.5, 0.0, 1e-6) == PointClass::Hyperbolic);
    CHECK(classify_point(1e-9, 0.3, 1e-6) == PointClass::Parabolic);
    CHECK(classify_point(1e-9, -1e-8, 1e-6) == PointClass::PlanarPoint);
    CHECK(point_class_code(PointClass::Singular) == -1);
    CHECK(point_class_code(PointClass::Elliptic) == 0);
    CHECK(std::string(to_string(PointClass::PlanarPoint)) == "planar-point");
}

TEST_CASE("reversing the normal flips H and keeps K")
{
    const auto surf = build_surface(helix_bishop(), SurfaceKind::TN2, {-1, 1});
    const auto j = surface_jet(surf, 1.0, 0.4, JetMode::Numeric);
    const Vec3 n = normal_direction(j).normalized();
    const auto a = curvatures(fundamental_forms(j, n));
    const auto b = curvatures(fundamental_forms(j, -n));
    CHECK(a.K == Approx(b.K).epsilon(1e-14));
    CHECK(a.H == Approx(-b.H).epsilon(1e-14));
}

TEST_CASE("striction curves")
{
    SECTION("n1n2 striction is the base curve")
    {
        const auto surf = build_surface(helix_bishop(), SurfaceKind::N1N2, {-1, 1});
        const auto st = striction_curve(surf);
        for (std::size_t i = 0; i < st.points.size(); ++i)
            CHECK((st.points[i] - surf.base[i]).norm() < 1e-9);
    }
    SECTION("tn1 on the helix is masked where k2 vanishes")
    {
        const auto& b = helix_bishop();
        const auto surf = build_surface(b, SurfaceKind::TN1, {-1, 1});
        const auto st = striction_curve(surf);
        CHECK_FALSE(st.valid[b.anchor_index]);
        CHECK(st.valid[b.anchor_index + 20]);
        CHECK_FALSE(st.all_masked);
        const auto d = striction_defect(st, surf);
        CHECK(d.checked > 350);
        CHECK(d.max_relative < 1e-4);
    }
    SECTION("hyperboloid of one sheet: striction is the waist circle")
    {
        // base curve lifted off the waist along the ruling (-sin s, cos s, 1)
        const UniformGrid g = UniformGrid::over({0, 2 * pi}, 257);
        std::vector<Vec3> base, ruling;
        for (std::size_t i = 0; i < g.count; ++i) {
            const double s = g.at(i);
            const Vec3 x(-std::sin(s), std::cos(s), 1.0);
            ruling.push_back(x);
            base.push_back(Vec3(std::cos(s), std::sin(s), 0.0) + 0.5 * x);
        }
        const auto surf = make_generic_surface(g, base, ruling, {-1, 1});
        const auto st = striction_curve(surf);
        for (std::size_t i = 0; i < st.points.size(); ++i) {
            REQUIRE(st.valid[i]);
            CHECK(std::abs(st.points[i].z()) < 1e-8);
            CHECK(st.points[i].head<2>().norm() == Approx(1.0).margin(1e-8));
            CHECK(st.offset[i] == Approx(-0.5).margin(1e-8));
        }
        // brute force: the point of the ruling at s closest to the ruling at s + ds
        auto ruling_at = [](double s) -> Vec3 { return Vec3(-std::sin(s), std::cos(s), 1.0); };
        auto base_at = [&](double s) -> Vec3 { return Vec3(std::cos(s), std::sin(s), 0.0) + 0.5 * ruling_at(s); };
        const double ds = 1e-5;
        for (std::size_t i = 0; i < g.count; i += 16) {
            const double s = g.at(i);
            const Vec3 q = base_at(s + ds);
            const Vec3 d = ruling_at(s + ds).normalized();
            auto dist = [&](double v) {
                const Vec3 w = base_at(s) + v * ruling_at(s) - q;
                return (w - w.dot(d) * d).norm();
            };
            double best = -1.0;
            for (double v : linspace(-1, 1, 2001))
                if (dist(v) < dist(best))
                    best = v;
            double lo = best - 1e-3, hi = best + 1e-3;
            for (int it = 0; it < 100; ++it) {
                const double a = lo + (hi - lo) / 3, b = hi - (hi - lo) / 3;
                if (dist(a) < dist(b))
                    hi = b;
                else
                    lo = a;
            }
            const Vec3 oracle = base_at(s) + 0.5 * (lo + hi) * ruling_at(s);
            CHECK((oracle - st.points[i]).norm() < 1e-4);
        }
    }
    SECTION("constant ruling masks everything")
    {
        const UniformGrid g{0.0, 0.1, 21};
        std::vector<Vec3> base, ruling;
        for (std::size_t i = 0; i < g.count; ++i) {
            base.push_back(Vec3(g.at(i), 0, 0));
            ruling.push_back(Vec3(0, 1, 0));
        }
        CHECK(striction_curve(make_generic_surface(g, base, ruling, {-1, 1})).all_masked);
    }
}

TEST_CASE("surface classification")
{
    const auto v_all = linspace(-1, 1, 21);
    std::vector<double> v_n1n2;
    for (double v : v_all)
        if (std::abs(v) >= 0.05)
            v_n1n2.push_back(v);

    SECTION("slant helix gives a minimal developable n1n2 surface")
    {
        const auto syn = curve_from_bishop_curvatures(CurvatureProfile::constant(0.4, 0.4, {0, 2 * pi}), Frame{},
                                                      Vec3::Zero(), {0, 2 * pi}, 401);
        const auto surf = build_surface(syn.bishop, SurfaceKind::N1N2, {-1, 1});
        const auto rep = classify_surface(surf, linspace(0, 2 * pi, 41), v_n1n2);
        CHECK(rep.developable);
        CHECK(rep.minimal);
        CHECK_FALSE(rep.cmc);
        CHECK(rep.singular_points.empty());
        CHECK(rep.count(PointClass::PlanarPoint) == rep.regular_points);
    }
    SECTION("circle gives a developable tn1 surface with H = -1/2")
    {
        const auto al = reparametrize_arclength(builtin::circle(1.0, {-pi, pi}), 401, 1e-12);
        const auto surf = build_surface(bishop_from_frenet(frenet_frame(al)), SurfaceKind::TN1, {-1, 1});
        const auto rep = classify_surface(surf, linspace(-pi, pi, 41), v_all);
        CHECK(rep.developable);
        CHECK_FALSE(rep.minimal);
        REQUIRE(rep.cmc);
        CHECK(*rep.cmc == Approx(-0.5).margin(1e-6));
        CHECK(rep.count(PointClass::Parabolic) == rep.regular_points);
    }
    SECTION("helix tn1 surface is not developable")
    {
        const auto surf = build_surface(helix_bishop(), SurfaceKind::TN1, {-1, 1});
        const auto rep = classify_surface(surf, linspace(-pi, pi, 41), v_all);
        CHECK_FALSE(rep.developable);
        CHECK_FALSE(rep.minimal);
        CHECK_FALSE(rep.cmc);
        CHECK(rep.count(PointClass::Hyperbolic) > 0);
        CHECK(rep.count(PointClass::Elliptic) == 0);
        CHECK(rep.regular_points + rep.singular_points.size() == 41 * 21);
    }
    SECTION("helix n1n2 over the full lattice flags the base curve as singular")
    {
        const auto surf = build_surface(helix_bishop(), SurfaceKind::N1N2, {-1, 1});
        const auto rep = classify_surface(surf, linspace(-pi, pi, 41), v_all);
        CHECK(rep.singular_points.size() == 41);
        for (const auto& [s, v] : rep.singular_points)
            CHECK(v == Approx(0.0).margin(1e-12));
        CHECK(rep.max_abs_K < 1e-8);
    }
}
