#pragma once

#include "echoloc/geometry.hpp"
#include "echoloc/rational.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace echoloc {

/// Eigenfunction families. Klein bottle rows follow the complete real basis
///   m = 0:            cos(2 pi n x2 / b),                     n >= 0
///   m even, m > 0:    {cos, sin}(2 pi m x1 / a) cos(2 pi n x2 / b), n >= 0
///   m odd:            {cos, sin}(2 pi m x1 / a) sin(2 pi n x2 / b), n >= 1
/// Torus modes are the complex exponentials exp(2 pi i (m x1/a + n x2/b)),
/// (m, n) in Z^2, each with constant density 1/(ab).
enum class ModeFamily { KleinConstRow, KleinEvenRow, KleinOddRow, TorusMode };

/// Which x1 factor a Klein eigenfunction carries (always Cos for m = 0 and torus modes).
enum class X1Phase { Cos, Sin };

std::string_view to_string(ModeFamily family);

struct EigenMode {
    ModeFamily family = ModeFamily::KleinConstRow;
    int m = 0;
    int n = 0;
    X1Phase phase = X1Phase::Cos;
    double lambda = 0.0;
    /// Exact m^2/a^2 + n^2/b^2 when 1/a^2 and 1/b^2 are rational.
    std::optional<Rational> lambda_sq_rational;
};

/// Modes sharing one exact eigenvalue.
struct LevelGroup {
    double lambda = 0.0;
    std::vector<EigenMode> modes;
};

/// Every Klein eigenfunction with lambda <= lambda_max, sorted by lambda.
/// Negative lambda_max yields an empty list.
std::vector<EigenMode> klein_modes(const FlatKleinSpec& spec, double lambda_max);
std::vector<EigenMode> torus_modes(const FlatTorusSpec& spec, double lambda_max);
std::vector<EigenMode> flat_modes(const FlatSpec& spec, double lambda_max);

/// Pointwise |e_j(x)|^2 of the L^2-normalized eigenfunction described by `mode`.
/// Throws ContractError when the mode family does not belong to the surface.
double mode_density(const EigenMode& mode, Point x, const FlatKleinSpec& spec);
double mode_density(const EigenMode& mode, Point x, const FlatTorusSpec& spec);
double mode_density(const EigenMode& mode, Point x, const FlatSpec& spec);

/// Largest pointwise density any single mode can reach (8/(ab) on Klein bottles,
/// 1/(ab) on tori). Used for tail bounds.
double max_mode_density(const FlatSpec& spec);

/// Groups consecutive modes of a sorted list by exact eigenvalue. When the
/// periods are not rational enough for exact keys, falls back to relative
/// tolerance 1e-12 on lambda^2 and logs a warning.
std::vector<LevelGroup> group_levels(const std::vector<EigenMode>& sorted_modes);

/// N_x(lambda) = sum of |e_j(x)|^2 over lambda_j <= lambda.
double pointwise_weyl(const FlatSpec& spec, Point x, double lambda);

/// Sum of |e_j(x)|^2 over the exact eigenvalue matching lambda0 (relative 1e-9).
/// Throws DomainError("not an eigenvalue") when lambda0 is not in the spectrum.
double level_sum(const FlatSpec& spec, Point x, double lambda0);

/// (lambda, summed density at x) for each level with lambda <= lambda_max.
struct LevelDensity {
    double lambda = 0.0;
    double density = 0.0;
};
std::vector<LevelDensity> level_densities(const FlatSpec& spec, Point x, double lambda_max);

/// Upper bound on #{lattice points (m, n) in Z^2 : r_lo < |(m/a, n/b)| <= r_hi}
/// via cell-area covering; frequencies here are nu = lambda / 2 pi.
double lattice_shell_count_bound(double a, double b, double nu_lo, double nu_hi);

} // namespace echoloc
