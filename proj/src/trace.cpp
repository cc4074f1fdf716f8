#include "echoloc/trace.hpp"

#include "echoloc/error.hpp"
#include "echoloc/flat_spectrum.hpp"
#include "echoloc/numeric.hpp"

#include <algorithm>
#include <cmath>

namespace echoloc {

namespace {

constexpr double kHeatExponentCap = 40.0;
constexpr double kAliasTol = 1e-13;
constexpr double kMaxModes = 2e7;

struct TailModel {
    double a;
    double b;
    double per_point;
};

TailModel tail_model(const FlatSpec& spec)
{
    if (const auto* k = std::get_if<FlatKleinSpec>(&spec))
        // Two functions (cos, sin in x1) per lattice point, each <= 8/(ab).
        return {k->a, k->b, 2.0 * max_mode_density(spec)};
    const auto& t = std::get<FlatTorusSpec>(spec);
    return {t.a, t.b, max_mode_density(spec)};
}

/// Bound on sum over modes with lambda_j > cutoff of density * g(lambda_j),
/// for g nonincreasing on [cutoff, inf). Shells in nu = lambda / 2 pi.
template <typename Decay>
double shell_tail(const TailModel& model, double cutoff, Decay g)
{
    const double dnu = 0.25 * std::min(1.0 / model.a, 1.0 / model.b);
    double nu = cutoff / two_pi;
    CompensatedSum total;
    for (int shell = 0; shell < 4'000'000; ++shell) {
        const double term =
            model.per_point * lattice_shell_count_bound(model.a, model.b, nu, nu + dnu) * g(two_pi * nu);
        total += term;
        if (shell > 16 && term < 1e-24 * std::max(1.0, total.value()) + 1e-300) break;
        nu += dnu;
    }
    return total.value();
}

double shortest_translation(const FlatSpec& spec)
{
    if (const auto* k = std::get_if<FlatKleinSpec>(&spec)) return std::min(0.5 * k->a, k->b);
    const auto& t = std::get<FlatTorusSpec>(spec);
    return std::min(t.a, t.b);
}

} // namespace

TraceValue heat_trace(const FlatSpec& spec, Point x, double t)
{
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("heat_trace: t must be positive");
    const double cutoff = std::sqrt(kHeatExponentCap / t);
    const TailModel model = tail_model(spec);
    if (lattice_shell_count_bound(model.a, model.b, 0.0, cutoff / two_pi) > kMaxModes)
        throw ContractError("insufficient spectral range: t too small for explicit mode summation");
    CompensatedSum sum;
    for (const auto& level : level_densities(spec, x, cutoff))
        sum += std::exp(-t * level.lambda * level.lambda) * level.density;
    const double bound = shell_tail(model, cutoff, [t](double lam) { return std::exp(-t * lam * lam); });
    return {sum.value(), bound};
}

std::array<double, 3> default_heat_times(const FlatSpec& spec)
{
    const double s = shortest_translation(spec);
    const double t0 = s * s / 160.0;
    return {t0, 0.5 * t0, 0.25 * t0};
}

double curvature_estimate(const FlatSpec& spec, Point x) { return curvature_estimate(spec, x, default_heat_times(spec)); }

double curvature_estimate(const FlatSpec& spec, Point x, const std::array<double, 3>& times)
{
    std::array<double, 3> f{};
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double t = times[i];
        const TraceValue h = heat_trace(spec, x, t);
        f[i] = 3.0 * (4.0 * pi * t * h.value.real() - 1.0) / t;
        worst = std::max(worst, 12.0 * pi * h.truncation_bound);
    }
    // Richardson weights (8, -6, 1)/3 for halving steps; |weights| sum to 5.
    if (5.0 * worst > 1e-8) throw ContractError("insufficient spectral range");
    const double r1 = 2.0 * f[1] - f[0];
    const double r2 = 2.0 * f[2] - f[1];
    return (4.0 * r2 - r1) / 3.0;
}

SpectralData exact_spectral_data(const FlatSpec& spec, Point x, double coverage)
{
    SpectralData data;
    data.source = SpectralSource::ExactFlat;
    data.coverage = coverage;
    for (const auto& level : level_densities(spec, x, coverage)) data.pairs.push_back({level.lambda, level.density});
    const TailModel model = tail_model(spec);
    data.lattice_a = model.a;
    data.lattice_b = model.b;
    data.density_per_point = model.per_point;
    return data;
}

SpectralData exact_spectral_data(const FlatSpec& spec, Point x, const std::vector<double>& lambdas, const std::vector<Window>& windows)
{
    const SpectralData probe = exact_spectral_data(spec, x, 0.0);
    double coverage = 0.0;
    for (const auto& w : windows)
        for (const double lambda : lambdas) coverage = std::max(coverage, spectral_cutoff(probe, lambda, w));
    return exact_spectral_data(spec, x, coverage);
}

double spectral_cutoff(const SpectralData& data, double lambda, const Window& w, double tail_tol)
{
    const WindowTransform transform(w);
    const TailModel model{data.lattice_a, data.lattice_b, data.density_per_point};
    const double lam = std::abs(lambda);
    auto tail = [&](double cutoff) {
        return shell_tail(model, cutoff, [&](double lj) { return transform.envelope(lj - lam); });
    };
    double pad = 4.0 / w.width;
    int doublings = 0;
    while (tail(lam + pad) > tail_tol) {
        pad *= 2.0;
        if (++doublings > 24) throw ContractError("tail bound violated: no finite cutoff reaches the tail budget");
    }
    // Tighten by bisection between pad/2 and pad.
    double lo = doublings == 0 ? 0.0 : 0.5 * pad, hi = pad;
    for (int i = 0; i < 12; ++i) {
        const double mid = 0.5 * (lo + hi);
        (tail(lam + mid) > tail_tol ? lo : hi) = mid;
    }
    return lam + hi;
}

TraceValue smoothed_wave_spectral(const SpectralData& data, double lambda, const Window& w)
{
    if (data.source == SpectralSource::SyntheticFromGeometric) {
        for (const auto& s : data.samples)
            if (s.window == w && std::abs(s.lambda - lambda) <= 1e-12 * std::max(1.0, std::abs(lambda)))
                return {s.value, 0.0};
        throw ContractError("synthetic spectral data has no sample for this lambda and window");
    }
    const double cutoff = spectral_cutoff(data, lambda, w);
    if (cutoff > data.coverage) throw ContractError("tail bound violated: spectral data do not reach the required cutoff");

    const WindowTransform chi(w);
    const TailModel model{data.lattice_a, data.lattice_b, data.density_per_point};
    const double lam = std::abs(lambda);
    const double tail = shell_tail(model, cutoff, [&](double lj) { return chi.envelope(lj - lam); });

    // S = sum_j d_j chi-hat-integral of e^{-i lambda t} cos(lambda_j t): fold the
    // modes into K(t) = sum_j d_j cos(lambda_j t) on a uniform grid, then one
    // trapezoid sum. For step h the trapezoid returns sum_k chi(mu + 2 pi k / h)
    // (Poisson summation), so the aliases k != 0 are bounded by the envelope.
    double total_density = 0.0;
    std::size_t used = 0;
    for (; used < data.pairs.size() && data.pairs[used].lambda <= cutoff; ++used) total_density += data.pairs[used].density;
    const double max_freq = lam + cutoff;
    auto alias_bound = [&](double omega) {
        double b = 0.0;
        for (int k = 1; k <= 64; ++k) b += 2.0 * chi.envelope(k * omega - max_freq);
        return total_density * b;
    };
    double omega = 2.0 * max_freq + 8.0 / w.width;
    while (alias_bound(omega) > kAliasTol) omega *= 1.25;
    const double h0 = two_pi / omega;
    const int intervals = static_cast<int>(std::ceil((w.t_hi() - w.t_lo()) / h0));
    const double h = (w.t_hi() - w.t_lo()) / intervals;
    const double alias = alias_bound(two_pi / h);

    const int n = intervals + 1;
    std::vector<double> kernel(n, 0.0);
    for (std::size_t j = 0; j < used; ++j) {
        const double d = data.pairs[j].density;
        const double lj = data.pairs[j].lambda;
        const std::complex<double> step = std::polar(1.0, lj * h);
        std::complex<double> z;
        for (int k = 0; k < n; ++k) {
            // Re-seed periodically so the rotation recurrence cannot drift.
            z = (k % 32 == 0) ? std::polar(1.0, lj * (w.t_lo() + k * h)) : z * step;
            kernel[k] += d * z.real();
        }
    }
    ComplexSum sum;
    for (int k = 0; k < n; ++k) {
        const double t = w.t_lo() + k * h;
        const double f = w(t);
        if (f == 0.0) continue;
        const double wk = (k == 0 || k == n - 1) ? 0.5 * h : h;
        sum += wk * f * kernel[k] * std::polar(1.0, -lambda * t);
    }
    return {sum.value(), tail + alias};
}

TraceValue smoothed_wave_spectral(const FlatSpec& spec, Point x, double lambda, const Window& w)
{
    if (!(lambda > 0.0)) throw DomainError("smoothed_wave_spectral: lambda must be positive");
    SpectralData probe = exact_spectral_data(spec, x, 0.0);
    const double cutoff = spectral_cutoff(probe, lambda, w);
    return smoothed_wave_spectral(exact_spectral_data(spec, x, cutoff), lambda, w);
}

} // namespace echoloc
