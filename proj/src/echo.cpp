#include "echoloc/echo.hpp"

#include "echoloc/error.hpp"
#include "echoloc/flat_spectrum.hpp"
#include "echoloc/log.hpp"
#include "echoloc/loops.hpp"
#include "echoloc/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace echoloc {

namespace {

constexpr double kStableTol = 0.05;
constexpr double kIntegerTol = 0.1;

struct Pass {
    std::vector<std::complex<double>> values;
    std::complex<double> mean;
    double spread = 0.0;
};

Pass run_pass(const SpectralData& data, const Window& w, double r, const std::vector<double>& schedule)
{
    Pass pass;
    for (const double lambda : schedule) {
        const TraceValue s = smoothed_wave_spectral(data, lambda, w);
        const std::complex<double> phase = std::polar(1.0, -pi / 4.0 + lambda * r);
        pass.values.push_back(2.0 * std::sqrt(two_pi / lambda) * phase * s.value);
    }
    const std::size_t n = pass.values.size();
    const std::size_t first = n / 2;
    std::complex<double> sum{};
    for (std::size_t i = first; i < n; ++i) sum += pass.values[i];
    pass.mean = sum / static_cast<double>(n - first);
    for (std::size_t i = first; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) pass.spread = std::max(pass.spread, std::abs(pass.values[i] - pass.values[j]));
    if (n - first < 2) pass.spread = std::numeric_limits<double>::infinity();
    return pass;
}

} // namespace

DetectionResult detect_multiplicity(const SpectralData& data, double r, double eps, const std::vector<double>& lambda_schedule,
    Weight weight, const DetectOptions& options)
{
    if (!(r > 0.0) || !(eps > 0.0)) throw DomainError("detect_multiplicity: r and eps must be positive");
    if (lambda_schedule.empty()) throw DomainError("detect_multiplicity: empty lambda schedule");
    for (const double l : lambda_schedule)
        if (!(l > 0.0)) throw DomainError("detect_multiplicity: schedule values must be positive");
    if (options.epsilon_halvings < 0) throw DomainError("detect_multiplicity: negative epsilon_halvings");

    DetectionResult result;
    result.r = r;
    result.lambdas = lambda_schedule;
    result.lambda_max = *std::max_element(lambda_schedule.begin(), lambda_schedule.end());

    double e = eps;
    Pass pass, prev;
    for (int level = 0; level <= options.epsilon_halvings; ++level, e *= 0.5) {
        prev = pass;
        pass = run_pass(data, make_window(options.profile, r, e, weight), r, lambda_schedule);
        result.epsilon = e;
    }
    result.per_lambda = pass.values;
    result.estimate = pass.mean.real();

    bool stable = pass.spread <= kStableTol;
    if (options.epsilon_halvings > 0) stable = stable && std::abs(pass.mean - prev.mean) <= kStableTol;
    result.converged = stable && std::abs(result.estimate - std::round(result.estimate)) < kIntegerTol;
    if (lambda_schedule.size() < 4) result.warnings.push_back("schedule too short to judge convergence");
    if (!result.converged && std::abs(pass.mean.imag()) > kIntegerTol)
        result.warnings.push_back("phase drift: window may not isolate a single loop length at r");
    for (const auto& msg : result.warnings) log::info(msg);
    return result;
}

SpectralData synthesize_spectral_from_geometric(const HyperbolicSurfaceSpec& spec, HPoint basepoint,
    const std::vector<double>& lambda_grid, const std::vector<Window>& windows)
{
    SpectralData data;
    data.source = SpectralSource::SyntheticFromGeometric;
    HyperbolicSurfaceSpec at = spec;
    at.basepoint_lift = basepoint;
    for (const auto& w : windows) {
        std::vector<double> distances;
        for (const auto& e : enumerate_deck(at, w.t_hi())) distances.push_back(e.distance);
        for (const double lambda : lambda_grid)
            data.samples.push_back({lambda, w, pre_trace_sum(distances, lambda, w, Curvature::Hyperbolic)});
    }
    return data;
}

std::string_view to_string(CurvatureClass c)
{
    switch (c) {
    case CurvatureClass::SpherePP: return "SpherePP";
    case CurvatureClass::FlatTorusKlein: return "FlatTorusKlein";
    case CurvatureClass::HyperbolicQuotient: return "HyperbolicQuotient";
    }
    return "?";
}

CurvatureClass classify_curvature(double k_hat, double tol)
{
    if (std::abs(k_hat) <= tol) return CurvatureClass::FlatTorusKlein;
    return k_hat > 0.0 ? CurvatureClass::SpherePP : CurvatureClass::HyperbolicQuotient;
}

ConstancyResult constancy_test(const FlatSpec& spec, double lambda_max, const std::vector<Point>& points)
{
    if (points.size() < 2) throw DomainError("constancy_test: need at least two sample points");
    std::vector<Point> reduced;
    for (const auto& p : points) reduced.push_back(reduce(p, spec));

    ConstancyResult result;
    const auto levels = group_levels(flat_modes(spec, lambda_max));
    for (const auto& level : levels) {
        auto sum_at = [&](Point x) {
            CompensatedSum s;
            for (const auto& mode : level.modes) s += mode_density(mode, x, spec);
            return s.value();
        };
        const double v0 = sum_at(reduced[0]);
        for (std::size_t k = 1; k < reduced.size(); ++k) {
            const double vk = sum_at(reduced[k]);
            if (std::abs(vk - v0) > 1e-12 * std::max({1.0, std::abs(v0), std::abs(vk)})) {
                result.constant = false;
                result.witness_level = level.lambda;
                result.p = points[0];
                result.q = points[k];
                result.value_p = v0;
                result.value_q = vk;
                return result;
            }
        }
    }
    return result;
}

KleinLevelModel klein_level_model(const FlatKleinSpec& spec)
{
    KleinLevelModel model;
    model.lambda = two_pi / spec.b;
    const auto levels = group_levels(klein_modes(spec, model.lambda * (1.0 + 1e-9)));
    const LevelGroup* level = nullptr;
    for (const auto& g : levels)
        if (std::abs(g.lambda - model.lambda) <= 1e-9 * model.lambda) level = &g;
    if (level == nullptr) throw ContractError("klein_level_model: level 2 pi / b missing");

    // Everything in the level other than cos(2 pi x2 / b) is x-independent once
    // cos/sin pairs are summed, so it can be read off at any point.
    const Point origin{0.0, 0.0};
    for (const auto& mode : level->modes) {
        const double v = mode_density(mode, origin, spec);
        if (mode.family == ModeFamily::KleinConstRow && mode.n == 1) {
            model.scale = v;
        } else {
            model.offset += v;
            model.degenerate = true;
        }
    }
    return model;
}

Point klein_echolocate(const FlatKleinSpec& spec, double level_sum_value)
{
    const KleinLevelModel model = klein_level_model(spec);
    const double slack = 1e-12 * std::max(1.0, model.offset + model.scale);
    double c = (level_sum_value - model.offset) / model.scale;
    if (!std::isfinite(level_sum_value) || level_sum_value < model.offset - slack || level_sum_value > model.offset + model.scale + slack)
        throw DomainError("inconsistent spectral data");
    c = std::clamp(c, 0.0, 1.0);
    // cos^2(theta) = c with theta in [0, pi/2]; atan2 keeps both ends well conditioned.
    const double theta = std::atan2(std::sqrt(1.0 - c), std::sqrt(c));
    return {0.0, theta * spec.b / two_pi};
}

Point klein_echolocate(const FlatKleinSpec& spec, const std::function<double(double)>& level_sum_at)
{
    return klein_echolocate(spec, level_sum_at(two_pi / spec.b));
}

} // namespace echoloc
