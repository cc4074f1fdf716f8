#pragma once

#include "echoloc/geometry.hpp"
#include "echoloc/window.hpp"

#include <array>
#include <complex>
#include <span>
#include <vector>

namespace echoloc {

/// A smoothed spectral or geometric sum and a bound on what was discarded.
struct TraceValue {
    std::complex<double> value;
    double truncation_bound = 0.0;
};

/// Heat trace at x: sum_j exp(-t lambda_j^2) |e_j(x)|^2, truncated at
/// lambda_j^2 t <= 40; the bound covers every discarded mode.
TraceValue heat_trace(const FlatSpec& spec, Point x, double t);

/// Heat times used by curvature_estimate: {4h, 2h, h} with 4h = s^2 / 160,
/// s the shortest deck translation (min(a, b) on tori, min(a/2, b) on Klein
/// bottles), so loop terms exp(-s^2 / 4t) stay below e^-40.
std::array<double, 3> default_heat_times(const FlatSpec& spec);

/// Richardson limit of 3 (4 pi t H(t) - 1) / t over the times {t0, t0/2, t0/4}
/// (largest first). Throws ContractError("insufficient spectral range") when
/// the heat truncation bounds could move the result by more than 1e-8.
double curvature_estimate(const FlatSpec& spec, Point x);
double curvature_estimate(const FlatSpec& spec, Point x, const std::array<double, 3>& times);

enum class SpectralSource { ExactFlat, SyntheticFromGeometric };

struct SpectralPair {
    double lambda = 0.0;
    double density = 0.0;
};

/// Precomputed smoothed-trace value for one (lambda, window).
struct SyntheticSample {
    double lambda = 0.0;
    Window window;
    std::complex<double> value;
};

/// Spectral measure dN_x as (lambda_j, density) pairs, one pair per exact level,
/// or a table of smoothed traces synthesized from the geometric side.
struct SpectralData {
    SpectralSource source = SpectralSource::ExactFlat;
    std::vector<SpectralPair> pairs;
    /// Every eigenvalue <= coverage is present in `pairs`.
    double coverage = 0.0;
    /// Modes beyond coverage: at most `density_per_point` per lattice point of
    /// (m/a, n/b), counted with lattice_shell_count_bound.
    double lattice_a = 1.0;
    double lattice_b = 1.0;
    double density_per_point = 0.0;
    std::vector<SyntheticSample> samples;
};

SpectralData exact_spectral_data(const FlatSpec& spec, Point x, double coverage);
/// Exact data whose coverage reaches the cutoff of every (lambda, window) pair.
SpectralData exact_spectral_data(const FlatSpec& spec, Point x, const std::vector<double>& lambdas, const std::vector<Window>& windows);

/// Cutoff Lambda >= |lambda| beyond which the tail bound of the smoothed sum is <= tail_tol.
double spectral_cutoff(const SpectralData& data, double lambda, const Window& w, double tail_tol = 1e-8);

/// sum_j (1/2)[chi(lambda - lambda_j) + chi(lambda + lambda_j)] |e_j(x)|^2.
/// For synthetic data returns the stored sample. Throws ContractError
/// ("tail bound violated") if the data do not reach the cutoff.
TraceValue smoothed_wave_spectral(const SpectralData& data, double lambda, const Window& w);
TraceValue smoothed_wave_spectral(const FlatSpec& spec, Point x, double lambda, const Window& w);

} // namespace echoloc
