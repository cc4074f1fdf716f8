#include "echoloc/echo.hpp"
#include "echoloc/error.hpp"
#include "echoloc/flat_spectrum.hpp"
#include "echoloc/loops.hpp"

#include "helpers.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace echoloc;
using testing_support::uniform;

namespace {

const std::vector<double> kSchedule{100, 200, 400, 800};

// Exact data wide enough for every window the detector builds at (r, eps).
SpectralData torus_data(Point x, double r, double eps, Profile profile, int halvings = 0)
{
    std::vector<Window> windows;
    for (int k = 0; k <= halvings; ++k) windows.push_back(make_window(profile, r, eps / (1 << k), Weight::SqrtT));
    return exact_spectral_data(make_torus(1, 1), x, kSchedule, windows);
}

DetectionResult detect_torus(double r, double eps, Profile profile, int halvings = 0)
{
    const Point x{0.3, 0.6};
    DetectOptions opts;
    opts.profile = profile;
    opts.epsilon_halvings = halvings;
    return detect_multiplicity(torus_data(x, r, eps, profile, halvings), r, eps, kSchedule, Weight::SqrtT, opts);
}

} // namespace

TEST_SUITE("echo_analysis")
{
    TEST_CASE("unit torus multiplicity at r = 1")
    {
        const auto res = detect_torus(1.0, 0.2, Profile::CompactBump);
        CHECK(res.estimate == doctest::Approx(4.0).epsilon(0.1 / 4));
        CHECK(res.converged);
        CHECK(res.lambda_max == 800.0);
        CHECK(res.epsilon == 0.2);
        CHECK(res.per_lambda.size() == 4);
    }

    TEST_CASE("window in a gap of the loop table")
    {
        const auto res = detect_torus(1.2, 0.15, Profile::CompactBump);
        CHECK(std::abs(res.estimate) < 0.1);
        CHECK(res.converged);
    }

    TEST_CASE("every torus loop length up to 3")
    {
        const FlatDeckSpec deck{DeckKind::TorusLattice, 1, 1};
        const LoopTable table = looping_times(deck, {0, 0}, 3.0);
        REQUIRE(table.entries.size() == 6);
        for (std::size_t i = 0; i < table.entries.size(); ++i) {
            const double r = table.entries[i].length;
            double gap = r;
            if (i > 0) gap = std::min(gap, r - table.entries[i - 1].length);
            gap = std::min(gap, i + 1 < table.entries.size() ? table.entries[i + 1].length - r : std::sqrt(10.0) - r);
            const auto res = detect_torus(r, 0.45 * gap, Profile::GaussianBump);
            CAPTURE(r);
            CHECK(std::abs(res.estimate - table.entries[i].multiplicity) < 0.1);
            CHECK(res.converged);
        }
    }

    TEST_CASE("gap windows read zero")
    {
        for (const double r : {1.2, 1.7, 2.1, 2.5}) {
            const auto res = detect_torus(r, 0.08, Profile::GaussianBump);
            CAPTURE(r);
            CHECK(std::abs(res.estimate) < 0.1);
        }
    }

    TEST_CASE("epsilon halving agrees with the first pass")
    {
        const auto res = detect_torus(1.0, 0.3, Profile::CompactBump, 1);
        CHECK(res.epsilon == 0.15);
        CHECK(res.converged);
        CHECK(res.estimate == doctest::Approx(4.0).epsilon(0.1 / 4));
    }

    TEST_CASE("short schedules never converge")
    {
        const Point x{0.3, 0.6};
        const Window w = make_window(Profile::CompactBump, 1.0, 0.2, Weight::SqrtT);
        const auto data = exact_spectral_data(make_torus(1, 1), x, {100.0}, {w});
        const auto res = detect_multiplicity(data, 1.0, 0.2, {100.0}, Weight::SqrtT);
        CHECK_FALSE(res.converged);
        CHECK_FALSE(res.warnings.empty());
        CHECK_THROWS_AS(detect_multiplicity(data, 1.0, 0.2, {}, Weight::SqrtT), DomainError);
        CHECK_THROWS_AS(detect_multiplicity(data, -1.0, 0.2, {100.0}, Weight::SqrtT), DomainError);
    }

    TEST_CASE("straddling window is flagged")
    {
        // Support [0.9, 1.5] holds both 1 and sqrt 2.
        const auto res = detect_torus(1.2, 0.3, Profile::CompactBump);
        CHECK_FALSE(res.converged);
    }

    TEST_CASE("synthetic octagon data returns every tabulated multiplicity")
    {
        const auto spec = genus2_octagon();
        const HPoint x{0, 1};
        const LoopTable table = looping_times(spec, x, 5.0);
        REQUIRE(table.entries.size() == 4);
        for (std::size_t i = 0; i < table.entries.size(); ++i) {
            const double r = table.entries[i].length;
            double gap = r;
            if (i > 0) gap = std::min(gap, r - table.entries[i - 1].length);
            if (i + 1 < table.entries.size()) gap = std::min(gap, table.entries[i + 1].length - r);
            const double eps = std::min(0.1, 0.45 * gap);
            const Window w = make_window(Profile::CompactBump, r, eps, Weight::SqrtSinh);
            const auto data = synthesize_spectral_from_geometric(spec, x, kSchedule, {w});
            const auto res = detect_multiplicity(data, r, eps, kSchedule, Weight::SqrtSinh);
            CAPTURE(r);
            CHECK(res.estimate == doctest::Approx(table.entries[i].multiplicity).epsilon(1e-10));
            CHECK(res.converged);
        }
        CHECK(table.entries[0].multiplicity == 8);
    }

    TEST_CASE("synthetic data off the systolic axes")
    {
        const auto spec = genus2_octagon();
        const HPoint x = polar_from_i(0.35, 0.7);
        const LoopTable table = looping_times(spec, x, 4.5);
        REQUIRE_FALSE(table.entries.empty());
        const double r = table.entries.front().length;
        const double gap = table.entries.size() > 1 ? table.entries[1].length - r : 0.2;
        const double eps = std::min(0.1, 0.45 * gap);
        const Window w = make_window(Profile::CompactBump, r, eps, Weight::SqrtSinh);
        const auto res = detect_multiplicity(synthesize_spectral_from_geometric(spec, x, kSchedule, {w}), r, eps, kSchedule, Weight::SqrtSinh);
        CHECK(res.estimate == doctest::Approx(table.entries.front().multiplicity).epsilon(1e-10));
    }

    TEST_CASE("synthetic data for an empty window is zero")
    {
        const Window w = make_window(Profile::CompactBump, 2.0, 0.5, Weight::SqrtSinh);
        const auto data = synthesize_spectral_from_geometric(genus2_octagon(), {0, 1}, kSchedule, {w});
        REQUIRE(data.samples.size() == 4);
        for (const auto& s : data.samples) CHECK(s.value == std::complex<double>(0, 0));
        CHECK(data.source == SpectralSource::SyntheticFromGeometric);
        CHECK_THROWS_AS(smoothed_wave_spectral(data, 150.0, w), ContractError);
    }

    TEST_CASE("synthetic data does not depend on the lift")
    {
        const auto spec = genus2_octagon();
        const HPoint x = polar_from_i(0.2, 1.1);
        const Window w = make_window(Profile::CompactBump, 4.4, 0.6, Weight::SqrtSinh);
        const auto a = synthesize_spectral_from_geometric(spec, x, kSchedule, {w});
        const MobiusElement h = make_mobius(1.3, 0.4, -0.2, (1 + 0.4 * -0.2) / 1.3);
        const auto b = synthesize_spectral_from_geometric(conjugate(spec, h), mobius_apply(h, x), kSchedule, {w});
        REQUIRE(a.samples.size() == b.samples.size());
        for (std::size_t i = 0; i < a.samples.size(); ++i) CHECK(std::abs(a.samples[i].value - b.samples[i].value) < 1e-8);
    }

    TEST_CASE("curvature classes")
    {
        CHECK(classify_curvature(0.0, 1e-3) == CurvatureClass::FlatTorusKlein);
        CHECK(classify_curvature(1.0, 1e-3) == CurvatureClass::SpherePP);
        CHECK(classify_curvature(-1.0, 1e-3) == CurvatureClass::HyperbolicQuotient);
        CHECK(classify_curvature(1e-3, 1e-3) == CurvatureClass::FlatTorusKlein);
        CHECK(to_string(CurvatureClass::HyperbolicQuotient) == "HyperbolicQuotient");
    }

    TEST_CASE("flat presets classify as flat")
    {
        const std::vector<FlatSpec> presets{make_torus(1, 1), make_torus(2, 1), make_klein(2, 1), make_klein(2, 2), make_klein(4, 1)};
        for (const auto& spec : presets) {
            for (int k = 0; k < 3; ++k) {
                const Point x = reduce(Point{uniform(0, 4), uniform(0, 2)}, spec);
                CHECK(classify_curvature(curvature_estimate(spec, x), 1e-3) == CurvatureClass::FlatTorusKlein);
            }
        }
    }

    TEST_CASE("torus level sums are constant")
    {
        std::vector<Point> pts;
        for (int k = 0; k < 10; ++k) pts.push_back({uniform(0, 1), uniform(0, 1)});
        const auto res = constancy_test(make_torus(1, 1), 50, pts);
        CHECK(res.constant);
        CHECK_THROWS_AS(constancy_test(make_torus(1, 1), 50, {{0, 0}}), DomainError);
    }

    TEST_CASE("klein witnesses")
    {
        const auto a = constancy_test(make_klein(2, 2), 4, {{0, 0}, {0, 0.5}});
        CHECK_FALSE(a.constant);
        CHECK(a.witness_level == doctest::Approx(oracle::pi).epsilon(1e-14));
        CHECK(a.value_p == doctest::Approx(1.0));
        CHECK(a.value_q == doctest::Approx(0.0));

        const auto b = constancy_test(make_klein(2, 1), 7, {{0, 0}, {0, 0.25}});
        CHECK_FALSE(b.constant);
        CHECK(b.witness_level == doctest::Approx(2 * oracle::pi).epsilon(1e-14));
        CHECK(b.p.x2 == 0.0);
        CHECK(b.q.x2 == 0.25);

        for (const auto& spec : {make_klein(2, 1), make_klein(2, 2), make_klein(4, 1)}) {
            const auto r = constancy_test(spec, 2 * oracle::pi / spec.b + 1e-9, {{0, 0}, {0, spec.b / 4}});
            CHECK_FALSE(r.constant);
            CHECK(r.witness_level <= 2 * oracle::pi / spec.b + 1e-9);
        }
    }

    TEST_CASE("klein level model at 2 pi / b")
    {
        const auto m = klein_level_model(make_klein(2, 1));
        CHECK(m.degenerate);
        CHECK(m.lambda == doctest::Approx(2 * oracle::pi));
        // Constant offset against the quadrature oracle: level sum at cos^2 = 0.
        CHECK(m.offset == doctest::Approx(level_sum(make_klein(2, 1), {0, 0.25}, m.lambda)).epsilon(1e-12));
        CHECK(m.offset + m.scale == doctest::Approx(level_sum(make_klein(2, 1), {0, 0}, m.lambda)).epsilon(1e-12));
        const auto n = klein_level_model(make_klein(2, 2));
        CHECK_FALSE(n.degenerate);
        CHECK(n.offset == 0.0);
        CHECK(n.scale == doctest::Approx(1.0));
    }

    TEST_CASE("klein echolocation examples")
    {
        const auto spec = make_klein(2, 2);
        auto at = [&](double v) { return klein_echolocate(spec, v); };
        CHECK(at(1.0).x1 == 0.0);
        CHECK(at(1.0).x2 == doctest::Approx(0.0));
        CHECK(at(0.0).x2 == doctest::Approx(0.5));
        CHECK(at(0.5).x2 == doctest::Approx(0.25).epsilon(1e-12));
        // Grid scan over [0, b/4] for the point whose level sum is 0.5.
        double best = 0.0, err = INFINITY;
        for (int k = 0; k <= 100000; ++k) {
            const double x2 = 0.5 * k / 100000;
            const double e = std::abs(level_sum(spec, {0, x2}, oracle::pi) - 0.5);
            if (e < err) err = e, best = x2;
        }
        CHECK(at(0.5).x2 == doctest::Approx(best).epsilon(1e-5));
        CHECK_THROWS_AS(at(1.5), DomainError);
        CHECK_THROWS_AS(at(-0.1), DomainError);
        CHECK_THROWS_AS(klein_echolocate(make_klein(2, 1), 1.0), DomainError);
    }

    TEST_CASE("klein echolocation round trip")
    {
        for (const auto& spec : {make_klein(2, 1), make_klein(2, 2), make_klein(4, 1)}) {
            const double lam = 2 * oracle::pi / spec.b;
            for (int k = 0; k < 50; ++k) {
                const Point x = reduce(Point{uniform(0, spec.a), uniform(0, spec.b)}, FlatSpec{spec});
                const Point got = klein_echolocate(spec, [&](double l) { return level_sum(FlatSpec{spec}, x, l); });
                const Point want = klein_canonicalize(x, spec);
                CHECK(got.x1 == want.x1);
                CHECK(std::abs(got.x2 - want.x2) < 1e-9);
                CHECK(std::abs(klein_echolocate(spec, level_sum(FlatSpec{spec}, x, lam)).x2 - want.x2) < 1e-9);
            }
        }
    }
}
