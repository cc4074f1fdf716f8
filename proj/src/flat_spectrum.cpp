#include "echoloc/flat_spectrum.hpp"

#include "echoloc/error.hpp"
#include "echoloc/log.hpp"
#include "echoloc/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace echoloc {

namespace {

/// Exact keys m^2/a^2 + n^2/b^2 for one pair of periods.
class SquaredFrequency {
public:
    SquaredFrequency(double a, double b)
        : inv_a2_(1.0 / (a * a))
        , inv_b2_(1.0 / (b * b))
        , exact_a_(rationalize(inv_a2_))
        , exact_b_(rationalize(inv_b2_))
    {
    }

    std::optional<Rational> exact(int m, int n) const
    {
        if (!exact_a_ || !exact_b_) return std::nullopt;
        return weighted_square_sum(m, *exact_a_, n, *exact_b_);
    }

    double lambda(int m, int n, const std::optional<Rational>& key) const
    {
        const double nu2 = key ? key->to_double() : m * (m * inv_a2_) + n * (n * inv_b2_);
        return two_pi * std::sqrt(nu2);
    }

private:
    double inv_a2_;
    double inv_b2_;
    std::optional<Rational> exact_a_;
    std::optional<Rational> exact_b_;
};

int frequency_cap(double period, double lambda_max)
{
    return static_cast<int>(std::floor(period * lambda_max / two_pi)) + 1;
}

bool mode_less(const EigenMode& x, const EigenMode& y)
{
    if (x.lambda != y.lambda) return x.lambda < y.lambda;
    if (x.lambda_sq_rational && y.lambda_sq_rational && !(*x.lambda_sq_rational == *y.lambda_sq_rational))
        return less(*x.lambda_sq_rational, *y.lambda_sq_rational);
    return std::tuple(static_cast<int>(x.family), x.m, x.n, static_cast<int>(x.phase))
        < std::tuple(static_cast<int>(y.family), y.m, y.n, static_cast<int>(y.phase));
}

bool same_level(const EigenMode& x, const EigenMode& y)
{
    if (x.lambda_sq_rational && y.lambda_sq_rational) return *x.lambda_sq_rational == *y.lambda_sq_rational;
    const double p = x.lambda * x.lambda;
    const double q = y.lambda * y.lambda;
    return std::abs(p - q) <= 1e-12 * std::max(p, q);
}

template <typename Spec>
double density_sum(const Spec& spec, Point x, const std::vector<EigenMode>& modes)
{
    CompensatedSum s;
    for (const auto& mode : modes) s += mode_density(mode, x, spec);
    return s.value();
}

} // namespace

std::string_view to_string(ModeFamily family)
{
    switch (family) {
    case ModeFamily::KleinConstRow: return "KleinConstRow";
    case ModeFamily::KleinEvenRow: return "KleinEvenRow";
    case ModeFamily::KleinOddRow: return "KleinOddRow";
    case ModeFamily::TorusMode: return "TorusMode";
    }
    return "?";
}

std::vector<EigenMode> klein_modes(const FlatKleinSpec& spec, double lambda_max)
{
    std::vector<EigenMode> modes;
    if (!(lambda_max >= 0.0)) return modes;
    const SquaredFrequency freq(spec.a, spec.b);
    const int m_cap = frequency_cap(spec.a, lambda_max);
    const int n_cap = frequency_cap(spec.b, lambda_max);
    for (int m = 0; m <= m_cap; ++m) {
        for (int n = (m % 2 == 1 ? 1 : 0); n <= n_cap; ++n) {
            const auto key = freq.exact(m, n);
            const double lambda = freq.lambda(m, n, key);
            if (lambda > lambda_max) break;
            if (m == 0) {
                modes.push_back({ModeFamily::KleinConstRow, m, n, X1Phase::Cos, lambda, key});
            } else {
                const auto family = m % 2 == 0 ? ModeFamily::KleinEvenRow : ModeFamily::KleinOddRow;
                modes.push_back({family, m, n, X1Phase::Cos, lambda, key});
                modes.push_back({family, m, n, X1Phase::Sin, lambda, key});
            }
        }
    }
    std::sort(modes.begin(), modes.end(), mode_less);
    return modes;
}

std::vector<EigenMode> torus_modes(const FlatTorusSpec& spec, double lambda_max)
{
    std::vector<EigenMode> modes;
    if (!(lambda_max >= 0.0)) return modes;
    const SquaredFrequency freq(spec.a, spec.b);
    const int m_cap = frequency_cap(spec.a, lambda_max);
    const int n_cap = frequency_cap(spec.b, lambda_max);
    for (int m = -m_cap; m <= m_cap; ++m) {
        for (int n = -n_cap; n <= n_cap; ++n) {
            const auto key = freq.exact(m, n);
            const double lambda = freq.lambda(m, n, key);
            if (lambda <= lambda_max) modes.push_back({ModeFamily::TorusMode, m, n, X1Phase::Cos, lambda, key});
        }
    }
    std::sort(modes.begin(), modes.end(), mode_less);
    return modes;
}

std::vector<EigenMode> flat_modes(const FlatSpec& spec, double lambda_max)
{
    return std::visit(
        [&](const auto& s) {
            if constexpr (std::is_same_v<std::decay_t<decltype(s)>, FlatKleinSpec>)
                return klein_modes(s, lambda_max);
            else
                return torus_modes(s, lambda_max);
        },
        spec);
}

double mode_density(const EigenMode& mode, Point x, const FlatKleinSpec& spec)
{
    const double ab = spec.a * spec.b;
    const double c2 = [&] {
        const double c = std::cos(two_pi * mode.n * x.x2 / spec.b);
        return c * c;
    }();
    const double x1_factor = [&] {
        const double arg = two_pi * mode.m * x.x1 / spec.a;
        const double v = mode.phase == X1Phase::Cos ? std::cos(arg) : std::sin(arg);
        return v * v;
    }();
    switch (mode.family) {
    case ModeFamily::KleinConstRow:
        return mode.n == 0 ? 2.0 / ab : 4.0 / ab * c2;
    case ModeFamily::KleinEvenRow:
        return mode.n == 0 ? 4.0 / ab * x1_factor : 8.0 / ab * x1_factor * c2;
    case ModeFamily::KleinOddRow: {
        const double s = std::sin(two_pi * mode.n * x.x2 / spec.b);
        return 8.0 / ab * x1_factor * s * s;
    }
    case ModeFamily::TorusMode:
        break;
    }
    throw ContractError("mode_density: torus mode evaluated on a Klein bottle");
}

double mode_density(const EigenMode& mode, Point, const FlatTorusSpec& spec)
{
    if (mode.family != ModeFamily::TorusMode) throw ContractError("mode_density: Klein mode evaluated on a torus");
    return 1.0 / spec.area();
}

double mode_density(const EigenMode& mode, Point x, const FlatSpec& spec)
{
    return std::visit([&](const auto& s) { return mode_density(mode, x, s); }, spec);
}

double max_mode_density(const FlatSpec& spec)
{
    if (const auto* k = std::get_if<FlatKleinSpec>(&spec)) return 8.0 / (k->a * k->b);
    const auto& t = std::get<FlatTorusSpec>(spec);
    return 1.0 / t.area();
}

std::vector<LevelGroup> group_levels(const std::vector<EigenMode>& sorted_modes)
{
    std::vector<LevelGroup> groups;
    bool warned = false;
    for (const auto& mode : sorted_modes) {
        if (!mode.lambda_sq_rational && !warned) {
            log::warn("periods are not rational enough for exact level grouping; using relative tolerance 1e-12");
            warned = true;
        }
        if (!groups.empty() && same_level(groups.back().modes.front(), mode))
            groups.back().modes.push_back(mode);
        else
            groups.push_back({mode.lambda, {mode}});
    }
    return groups;
}

double pointwise_weyl(const FlatSpec& spec, Point x, double lambda)
{
    const auto modes = flat_modes(spec, lambda);
    return std::visit([&](const auto& s) { return density_sum(s, x, modes); }, spec);
}

double level_sum(const FlatSpec& spec, Point x, double lambda0)
{
    const double tol = 1e-9 * std::max(1.0, std::abs(lambda0));
    const auto groups = group_levels(flat_modes(spec, lambda0 + tol));
    for (const auto& g : groups) {
        if (std::abs(g.lambda - lambda0) <= tol)
            return std::visit([&](const auto& s) { return density_sum(s, x, g.modes); }, spec);
    }
    throw DomainError("not an eigenvalue");
}

std::vector<LevelDensity> level_densities(const FlatSpec& spec, Point x, double lambda_max)
{
    std::vector<LevelDensity> out;
    for (const auto& g : group_levels(flat_modes(spec, lambda_max)))
        out.push_back({g.lambda, std::visit([&](const auto& s) { return density_sum(s, x, g.modes); }, spec)});
    return out;
}

double lattice_shell_count_bound(double a, double b, double nu_lo, double nu_hi)
{
    // Lattice (m/a, n/b): cell area 1/(ab), half-diagonal delta. Every lattice
    // point in the shell owns a cell inside the shell widened by delta.
    const double delta = 0.5 * std::sqrt(1.0 / (a * a) + 1.0 / (b * b));
    const double outer = nu_hi + delta;
    const double inner = std::max(0.0, nu_lo - delta);
    return pi * (outer * outer - inner * inner) * a * b;
}

} // namespace echoloc
