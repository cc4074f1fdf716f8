#include "echoloc/error.hpp"
#include "echoloc/geometry.hpp"

#include "helpers.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace echoloc;
using testing_support::uniform;

TEST_SUITE("core_geometry")
{
    TEST_CASE("hyperbolic distance reference values")
    {
        const HPoint i{0, 1};
        CHECK(hyperbolic_distance(i, i) == 0.0);
        CHECK(hyperbolic_distance(i, {0, 2}) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
        CHECK(hyperbolic_distance(i, {1, 1}) == doctest::Approx(std::acosh(1.5)).epsilon(1e-14));
        CHECK(std::acosh(1.5) == doctest::Approx(0.962424).epsilon(1e-6));
    }

    TEST_CASE("hyperbolic distance matches arc-length integration along the geodesic")
    {
        CHECK(hyperbolic_distance({0, 1}, {0, 2}) == doctest::Approx(oracle::geodesic_length_numeric({0, 1}, {0, 2})).epsilon(1e-10));
        CHECK(hyperbolic_distance({0, 1}, {1, 1}) == doctest::Approx(oracle::geodesic_length_numeric({0, 1}, {1, 1})).epsilon(1e-10));
        for (int k = 0; k < 20; ++k) {
            const HPoint z = testing_support::random_hpoint(), w = testing_support::random_hpoint();
            CHECK(hyperbolic_distance(z, w) == doctest::Approx(oracle::geodesic_length_numeric(z.z(), w.z())).epsilon(1e-8));
        }
    }

    TEST_CASE("hyperbolic distance rejects points off the half-plane")
    {
        CHECK_THROWS_AS(hyperbolic_distance({0, 1}, {0, -1}), DomainError);
        CHECK_THROWS_AS(hyperbolic_distance({0, 0}, {0, 1}), DomainError);
        CHECK_THROWS_AS(make_hpoint(0, 0), DomainError);
    }

    TEST_CASE("distance is symmetric and satisfies the triangle inequality")
    {
        for (int k = 0; k < 1000; ++k) {
            const HPoint x = testing_support::random_hpoint(), y = testing_support::random_hpoint(), z = testing_support::random_hpoint();
            const double xy = hyperbolic_distance(x, y), yx = hyperbolic_distance(y, x);
            CHECK(std::abs(xy - yx) <= 1e-10 * std::max(1.0, xy));
            CHECK(hyperbolic_distance(x, z) <= xy + hyperbolic_distance(y, z) + 1e-10);
        }
    }

    TEST_CASE("mobius action reference values")
    {
        const HPoint i{0, 1};
        const HPoint a = mobius_apply(MobiusElement::identity(), i);
        CHECK(a.re == 0.0);
        CHECK(a.im == 1.0);
        const HPoint b = mobius_apply(make_mobius(1, 1, 0, 1), i);
        CHECK(b.re == doctest::Approx(1.0));
        CHECK(b.im == doctest::Approx(1.0));
        const HPoint c = mobius_apply(make_mobius(2, 0, 0, 0.5), i);
        CHECK(c.re == doctest::Approx(0.0));
        CHECK(c.im == doctest::Approx(4.0));
        CHECK(hyperbolic_distance(i, c) == doctest::Approx(std::log(4.0)));
    }

    TEST_CASE("determinant is validated")
    {
        CHECK_THROWS_AS(make_mobius(2, 0, 0, 1), DomainError);
        CHECK_NOTHROW(make_mobius(1, 1e-13, 0, 1));
    }

    TEST_CASE("group words act isometrically")
    {
        const auto spec = genus2_octagon();
        std::vector<MobiusElement> letters;
        for (const auto& g : spec.generators) {
            letters.push_back(g);
            letters.push_back(g.inverse());
        }
        for (int k = 0; k < 200; ++k) {
            MobiusElement w = MobiusElement::identity();
            const int len = 1 + static_cast<int>(uniform(0, 6));
            for (int j = 0; j < len; ++j) w = w * letters[static_cast<std::size_t>(uniform(0, 8)) % 8];
            const HPoint x = testing_support::random_hpoint(), y = testing_support::random_hpoint();
            const double d0 = hyperbolic_distance(x, y);
            const double d1 = hyperbolic_distance(mobius_apply(w, x), mobius_apply(w, y));
            CHECK(std::abs(d0 - d1) <= 1e-9 * std::max(1.0, d0));
        }
    }

    TEST_CASE("octagon generators satisfy the surface relation")
    {
        const auto g = genus2_octagon().generators;
        REQUIRE(g.size() == 4);
        const MobiusElement rel = g[0] * g[1].inverse() * g[2] * g[3].inverse() * g[0].inverse() * g[1] * g[2].inverse() * g[3];
        CHECK(rel.same_isometry(MobiusElement::identity(), 1e-9));
        for (const auto& h : g) {
            CHECK(std::abs(h.det() - 1.0) <= 1e-12);
            CHECK(2 * std::acosh(std::abs(h.trace()) / 2) == doctest::Approx(2 * std::acosh(1 + std::sqrt(2.0))).epsilon(1e-12));
        }
    }

    TEST_CASE("sign canonicalization and words")
    {
        const MobiusElement g = make_mobius(-2, 0, 0, -0.5, {1, -2});
        const MobiusElement c = g.canonical();
        CHECK(c.a == 2.0);
        CHECK(c.d == 0.5);
        CHECK(g.same_isometry(c));
        CHECK(format_word(g.word) == "aB");
        CHECK(format_word(g.inverse().word) == "bA");
        CHECK(format_word({}) == "e");
    }

    TEST_CASE("disk conversion round trip")
    {
        for (int k = 0; k < 50; ++k) {
            const HPoint z = testing_support::random_hpoint();
            const HPoint back = from_disk(to_disk(z));
            CHECK(back.re == doctest::Approx(z.re).epsilon(1e-10));
            CHECK(back.im == doctest::Approx(z.im).epsilon(1e-10));
        }
        CHECK(hyperbolic_distance({0, 1}, polar_from_i(0.7, 1.3)) == doctest::Approx(0.7).epsilon(1e-12));
    }

    TEST_CASE("klein canonicalization reference values")
    {
        const auto k = make_klein(2, 1);
        Point p = klein_canonicalize({0.7, 0.0}, k);
        CHECK(p.x1 == 0.0);
        CHECK(p.x2 == 0.0);
        p = klein_canonicalize({0.0, 0.6}, k);
        CHECK(p.x2 == doctest::Approx(0.1).epsilon(1e-14));
        p = klein_canonicalize({0.3, 0.95}, k);
        CHECK(p.x2 == doctest::Approx(0.05).epsilon(1e-13));
    }

    TEST_CASE("klein canonicalization agrees with an orbit brute force")
    {
        const auto k = make_klein(2, 1);
        for (int t = 0; t < 200; ++t) {
            const double x2 = uniform(0, 1);
            const double c = klein_canonicalize({0, x2}, k).x2;
            CHECK(c >= 0.0);
            CHECK(c <= 0.25);
            // c must be one of the orbit points {+-x2 + j/2 mod 1}.
            double closest = 1.0;
            for (int s : {-1, 1})
                for (int j = -4; j <= 4; ++j) {
                    const double y = std::fmod(s * x2 + 0.5 * j + 10.0, 1.0);
                    closest = std::min({closest, std::abs(y - c), std::abs(y - 1.0 - c)});
                }
            CHECK(closest <= 1e-12);
        }
    }

    TEST_CASE("klein canonicalization is idempotent and orbit-constant")
    {
        const auto k = make_klein(2, 1);
        // Dyadic grid: every orbit operation is exact, so equality is exact.
        for (int i = 0; i < 64; ++i) {
            const double x2 = i / 64.0;
            const Point c = klein_canonicalize({0.25, x2}, k);
            CHECK(klein_canonicalize(c, k).x2 == c.x2);
            for (int j = 0; j < 8; ++j) {
                double y = x2;
                if (j & 1) y = -y;
                if (j & 2) y += 0.5;
                if (j & 4) y += 1.0;
                CHECK(klein_canonicalize(reduce(Point{0.1 * j, y}, k), k).x2 == c.x2);
            }
        }
        for (int t = 0; t < 200; ++t) {
            const double x2 = uniform(0, 1);
            const Point c = klein_canonicalize({0, x2}, k);
            CHECK(klein_canonicalize(c, k).x2 == c.x2);
            CHECK(std::abs(klein_canonicalize(reduce(Point{0.3, 0.5 - x2}, k), k).x2 - c.x2) <= 1e-15);
            CHECK(std::abs(klein_canonicalize(reduce(Point{0.3, x2 + 0.5}, k), k).x2 - c.x2) <= 1e-15);
        }
    }

    TEST_CASE("point reduction uses the glide on Klein bottles")
    {
        const auto k = make_klein(2, 1);
        const Point p = reduce(Point{1.3, 0.2}, k);
        CHECK(p.x1 == doctest::Approx(0.3));
        CHECK(p.x2 == doctest::Approx(0.8));
        const auto t = make_torus(1, 1);
        const Point q = reduce(Point{-0.25, 3.5}, t);
        CHECK(q.x1 == 0.75);
        CHECK(q.x2 == 0.5);
        CHECK(area(FlatSpec{k}) == 1.0);
        CHECK_THROWS_AS(make_klein(0, 1), DomainError);
        CHECK_THROWS_AS(make_torus(1, -1), DomainError);
    }

    TEST_CASE("conjugation moves the basepoint and generators together")
    {
        const auto spec = genus2_octagon();
        const MobiusElement h = make_mobius(2, 1, 1, 1);
        const auto conj = conjugate(spec, h);
        const HPoint hx = mobius_apply(h, spec.basepoint_lift);
        CHECK(conj.basepoint_lift.re == doctest::Approx(hx.re));
        CHECK(conj.basepoint_lift.im == doctest::Approx(hx.im));
        for (std::size_t k = 0; k < spec.generators.size(); ++k) {
            const double d0 = hyperbolic_distance(spec.basepoint_lift, mobius_apply(spec.generators[k], spec.basepoint_lift));
            const double d1 = hyperbolic_distance(conj.basepoint_lift, mobius_apply(conj.generators[k], conj.basepoint_lift));
            CHECK(d0 == doctest::Approx(d1).epsilon(1e-10));
        }
    }
}
