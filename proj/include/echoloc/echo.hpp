#pragma once

#include "echoloc/geometry.hpp"
#include "echoloc/trace.hpp"
#include "echoloc/window.hpp"

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace echoloc {

struct DetectionResult {
    double r = 0.0;
    double estimate = 0.0;
    double lambda_max = 0.0;
    double epsilon = 0.0;
    bool converged = false;
    /// Normalized detector value at each lambda of the schedule (last epsilon level).
    std::vector<double> lambdas;
    std::vector<std::complex<double>> per_lambda;
    std::vector<std::string> warnings;
};

struct DetectOptions {
    Profile profile = Profile::CompactBump;
    /// Extra passes with epsilon halved; the last two passes must agree within 0.05.
    int epsilon_halvings = 0;
};

/// (2 pi)^{1/2} e^{-i pi/4 + i lambda r} lambda^{-1/2} times the smoothed wave
/// trace with window weight(t) rho((t - r)/eps), for each lambda in the
/// schedule; the estimate is the real part of the mean over the upper half of
/// the schedule. The smoothed spectral sum carries a factor 1/2 (cos = half the
/// sum of two exponentials), so the prefactor here is doubled to return m_x(r).
DetectionResult detect_multiplicity(const SpectralData& data, double r, double eps, const std::vector<double>& lambda_schedule,
    Weight weight, const DetectOptions& options = {});

/// Stores geometric_side(spec, x, lambda, w) for every lambda in the grid and
/// every window, tagged SyntheticFromGeometric.
SpectralData synthesize_spectral_from_geometric(const HyperbolicSurfaceSpec& spec, HPoint basepoint,
    const std::vector<double>& lambda_grid, const std::vector<Window>& windows);

enum class CurvatureClass { SpherePP, FlatTorusKlein, HyperbolicQuotient };
std::string_view to_string(CurvatureClass c);

CurvatureClass classify_curvature(double k_hat, double tol);

struct ConstancyResult {
    bool constant = true;
    double witness_level = 0.0;
    Point p;
    Point q;
    double value_p = 0.0;
    double value_q = 0.0;
};

/// Compares closed-form level sums at every level <= lambda_max across the
/// sample points (relative tolerance 1e-12). DomainError for fewer than two points.
ConstancyResult constancy_test(const FlatSpec& spec, double lambda_max, const std::vector<Point>& points);

/// Recovers (0, x2*), x2* in [0, b/4], from the level sum at lambda = 2 pi / b.
/// DomainError("inconsistent spectral data") when the value is unattainable.
Point klein_echolocate(const FlatKleinSpec& spec, double level_sum_value);
Point klein_echolocate(const FlatKleinSpec& spec, const std::function<double(double)>& level_sum_at);

/// Level-sum model at lambda = 2 pi / b: offset + scale cos^2(2 pi x2 / b).
struct KleinLevelModel {
    double lambda = 0.0;
    double offset = 0.0;
    double scale = 0.0;
    bool degenerate = false;
};
KleinLevelModel klein_level_model(const FlatKleinSpec& spec);

} // namespace echoloc
