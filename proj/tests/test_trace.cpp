#include "echoloc/error.hpp"
#include "echoloc/flat_spectrum.hpp"
#include "echoloc/loops.hpp"
#include "echoloc/trace.hpp"

#include "helpers.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace echoloc;
using testing_support::uniform;

TEST_SUITE("trace_transforms")
{
    TEST_CASE("heat trace on the unit torus at t = 0.01")
    {
        const FlatSpec t = make_torus(1, 1);
        const TraceValue h = heat_trace(t, {0.3, 0.8}, 0.01);
        CHECK(h.value.imag() == 0.0);
        CHECK(std::abs(4 * oracle::pi * 0.01 * h.value.real() - 1.0) < 1e-9);
        CHECK(h.value.real() == doctest::Approx(oracle::heat_torus_images(1, 1, 0.01)).epsilon(1e-12));
        CHECK(h.truncation_bound < 1e-12);
    }

    TEST_CASE("heat trace matches the method of images")
    {
        for (double t : {0.003, 0.05, 0.4}) {
            CHECK(heat_trace(FlatSpec{make_torus(2, 1)}, {0.1, 0.1}, t).value.real() ==
                doctest::Approx(oracle::heat_torus_images(2, 1, t)).epsilon(1e-11));
            for (double x2 : {0.0, 0.1, 0.37}) {
                const double v = heat_trace(FlatSpec{make_klein(2, 1)}, {0.2, x2}, t).value.real();
                CHECK(v == doctest::Approx(oracle::heat_klein_images(2, 1, x2, t)).epsilon(1e-11));
            }
        }
    }

    TEST_CASE("heat trace at large time sees only the constant mode")
    {
        const TraceValue h = heat_trace(FlatSpec{make_klein(2, 1)}, {0, 0}, 10.0);
        CHECK(h.value.real() == doctest::Approx(1.0).epsilon(1e-12));
    }

    TEST_CASE("heat trace is positive and decreasing at large times")
    {
        const FlatSpec k = make_klein(2, 1);
        double prev = INFINITY;
        for (double t = 0.05; t < 6; t *= 1.5) {
            const double v = heat_trace(k, {0.1, 0.3}, t).value.real();
            CHECK(v > 0.0);
            CHECK(v <= prev);
            prev = v;
        }
    }

    TEST_CASE("heat trace rejects nonpositive time")
    {
        CHECK_THROWS_AS(heat_trace(FlatSpec{make_torus(1, 1)}, {0, 0}, 0.0), DomainError);
        CHECK_THROWS_AS(heat_trace(FlatSpec{make_torus(1, 1)}, {0, 0}, -1.0), DomainError);
    }

    TEST_CASE("small-time limit and flat first-order coefficient")
    {
        const FlatSpec t = make_torus(1, 1);
        for (double s : {0.01, 0.005, 0.0025}) {
            const double v = heat_trace(t, {0.4, 0.4}, s).value.real();
            CHECK(std::abs(4 * oracle::pi * s * v - 1.0) < 1e-9);
        }
    }

    TEST_CASE("curvature vanishes on flat surfaces")
    {
        CHECK(std::abs(curvature_estimate(FlatSpec{make_torus(1, 1)}, {0.2, 0.3})) < 1e-6);
        CHECK(std::abs(curvature_estimate(FlatSpec{make_klein(2, 1)}, {0, 0.3})) < 1e-6);
        const FlatSpec k = make_klein(2, 1);
        double lo = INFINITY, hi = -INFINITY;
        for (int i = 0; i < 5; ++i) {
            const double v = curvature_estimate(k, {uniform(0, 1), uniform(0, 1)});
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        CHECK(hi - lo < 1e-6);
    }

    TEST_CASE("times 0.02, 0.01, 0.005 leave a loop-term bias on the unit torus")
    {
        // exp(-1 / (4 * 0.02)) ~ 4e-6 enters 3 (4 pi t H - 1) / t at the 1e-3 level.
        const FlatSpec t = make_torus(1, 1);
        const double biased = curvature_estimate(t, {0, 0}, {0.02, 0.01, 0.005});
        CHECK(std::abs(biased) > 1e-6);
        CHECK(std::abs(curvature_estimate(t, {0, 0})) < 1e-6);
        const auto times = default_heat_times(t);
        CHECK(times[0] == doctest::Approx(1.0 / 160));
        CHECK(times[2] == doctest::Approx(times[0] / 4));
    }

    TEST_CASE("curvature estimate refuses times beyond the spectral range")
    {
        CHECK_THROWS_AS(curvature_estimate(FlatSpec{make_torus(1, 1)}, {0, 0}, {1e-9, 5e-10, 2.5e-10}), ContractError);
    }

    TEST_CASE("spectral side agrees with the geometric side at lambda 50")
    {
        const FlatSpec t = make_torus(1, 1);
        const Window w = make_window(Profile::CompactBump, 1.0, 0.2, Weight::SqrtT);
        for (const Point x : {Point{0, 0}, Point{0.3, 0.7}}) {
            const double lam = 50;
            const TraceValue s = smoothed_wave_spectral(t, x, lam, w);
            const TraceValue g = geometric_side_flat(deck_of(t), x, lam, w);
            CHECK(std::abs(s.value - g.value) <= 3.0 / std::sqrt(lam));
            CHECK(s.truncation_bound <= 1e-8 + 1e-12);
        }
    }

    TEST_CASE("window with no looping time gives a negligible sum")
    {
        const FlatSpec t = make_torus(1, 1);
        const Window compact = make_window(Profile::CompactBump, 1.2, 0.15, Weight::SqrtT);
        CHECK(std::abs(smoothed_wave_spectral(t, {0.3, 0.7}, 800.0, compact).value) <= 1e-6 * std::sqrt(800.0));
        const Window gauss = make_window(Profile::GaussianBump, 1.2, 0.15, Weight::SqrtT);
        for (double lam : {400.0, 800.0}) CHECK(std::abs(smoothed_wave_spectral(t, {0.3, 0.7}, lam, gauss).value) <= 1e-6 * std::sqrt(lam));
    }

    TEST_CASE("spectral error decays like lambda^-1/2")
    {
        // Remainder O(lambda^-1/2) in absolute terms: ratio sqrt 2 per doubling.
        const FlatSpec t = make_torus(1, 1);
        const Window w = make_window(Profile::CompactBump, 1.0, 0.2, Weight::SqrtT);
        double prev = 0.0;
        for (double lam : {100.0, 200.0, 400.0}) {
            const double err = std::abs(smoothed_wave_spectral(t, {0.3, 0.7}, lam, w).value - geometric_side_flat(deck_of(t), {0.3, 0.7}, lam, w).value);
            if (prev > 0.0) CHECK(prev / err == doctest::Approx(std::sqrt(2.0)).epsilon(0.1));
            CHECK(err * std::sqrt(lam) <= 3.0);
            prev = err;
        }
    }

    TEST_CASE("negative frequency gives the conjugate")
    {
        const FlatSpec t = make_klein(2, 1);
        const Window w = make_window(Profile::GaussianBump, 1.0, 0.3, Weight::SqrtT);
        const SpectralData data = exact_spectral_data(t, {0.1, 0.2}, {60.0}, {w});
        for (double lam : {20.0, 41.5, 60.0}) {
            const auto p = smoothed_wave_spectral(data, lam, w).value;
            const auto m = smoothed_wave_spectral(data, -lam, w).value;
            CHECK(std::abs(m - std::conj(p)) <= 1e-12 * std::max(1.0, std::abs(p)));
        }
    }

    TEST_CASE("splitting the mode sum does not change the result")
    {
        const FlatSpec t = make_torus(1, 1);
        const Window w = make_window(Profile::CompactBump, 1.0, 0.2, Weight::SqrtT);
        const double lam = 120.0;
        const SpectralData full = exact_spectral_data(t, {0.3, 0.7}, {lam}, {w});
        SpectralData even = full, odd = full;
        even.pairs.clear();
        odd.pairs.clear();
        for (std::size_t i = 0; i < full.pairs.size(); ++i) (i % 2 ? odd : even).pairs.push_back(full.pairs[i]);
        const auto whole = smoothed_wave_spectral(full, lam, w).value;
        const auto parts = smoothed_wave_spectral(even, lam, w).value + smoothed_wave_spectral(odd, lam, w).value;
        CHECK(std::abs(whole - parts) < 1e-12 * std::max(1.0, std::abs(whole)));
    }

    TEST_CASE("spectral sum matches per-mode window transforms")
    {
        const FlatSpec k = make_klein(2, 1);
        for (const Profile p : {Profile::GaussianBump, Profile::CompactBump}) {
            const Window w = make_window(p, 1.5, 0.6, Weight::SqrtT);
            const double lam = 12.0;
            const SpectralData data = exact_spectral_data(k, {0.1, 0.4}, {lam}, {w});
            WindowTransform chi(w);
            const double cutoff = spectral_cutoff(data, lam, w);
            std::complex<double> direct{};
            for (const auto& q : data.pairs)
                if (q.lambda <= cutoff) direct += 0.5 * q.density * (chi(lam - q.lambda) + chi(lam + q.lambda));
            CHECK(std::abs(smoothed_wave_spectral(data, lam, w).value - direct) < 1e-8);
        }
    }

    TEST_CASE("insufficient coverage is reported")
    {
        const FlatSpec t = make_torus(1, 1);
        const Window w = make_window(Profile::CompactBump, 1.0, 0.2, Weight::SqrtT);
        const SpectralData small = exact_spectral_data(t, {0, 0}, 150.0);
        CHECK_THROWS_AS(smoothed_wave_spectral(small, 100.0, w), ContractError);
        CHECK_THROWS_AS(smoothed_wave_spectral(t, {0, 0}, -1.0, w), DomainError);
    }
}
