#include "echoloc/window.hpp"

#include "echoloc/error.hpp"
#include "echoloc/numeric.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <mutex>
#include <string>

namespace echoloc {

namespace {

constexpr int kPanelPoints = 16;
constexpr int kMaxPanels = 1 << 15;
constexpr int kJetOrder = 24;
constexpr double kGaussianShiftCap = 1.2;

double gaussian_sigma(const Window& w) { return w.width / 8.0; }

// Truncated power series in h with kJetOrder + 1 coefficients.
using Jet = std::array<double, kJetOrder + 1>;

Jet jet_mul(const Jet& x, const Jet& y)
{
    Jet r{};
    for (int i = 0; i <= kJetOrder; ++i)
        for (int j = 0; i + j <= kJetOrder; ++j) r[i + j] += x[i] * y[j];
    return r;
}

Jet jet_reciprocal(const Jet& x)
{
    Jet r{};
    r[0] = 1.0 / x[0];
    for (int k = 1; k <= kJetOrder; ++k) {
        double s = 0.0;
        for (int j = 1; j <= k; ++j) s += x[j] * r[k - j];
        r[k] = -s / x[0];
    }
    return r;
}

// exp of a series with zero constant term.
Jet jet_exp0(const Jet& x)
{
    Jet r{};
    r[0] = 1.0;
    for (int k = 1; k <= kJetOrder; ++k) {
        double s = 0.0;
        for (int j = 1; j <= k; ++j) s += j * x[j] * r[k - j];
        r[k] = s / k;
    }
    return r;
}

Jet jet_sqrt(const Jet& x)
{
    Jet r{};
    r[0] = std::sqrt(x[0]);
    for (int k = 1; k <= kJetOrder; ++k) {
        double s = x[k];
        for (int j = 1; j < k; ++j) s -= r[j] * r[k - j];
        r[k] = s / (2.0 * r[0]);
    }
    return r;
}

// Taylor coefficients of chi-hat(t0 + kappa h) with the factor
// exp(1 - 1/u(t0)) of the compact bump pulled out; returns log of that factor.
double compact_jet(const Window& w, double t0, double kappa, Jet& out)
{
    const double eps = w.width;
    const double s0 = (t0 - w.center) / eps;
    const double ds = kappa / eps;
    Jet u{};
    u[0] = 1.0 - s0 * s0;
    u[1] = -2.0 * s0 * ds;
    u[2] = -ds * ds;
    Jet v = jet_reciprocal(u);
    const double log_factor = 1.0 - v[0];
    Jet arg{};
    for (int k = 1; k <= kJetOrder; ++k) arg[k] = -v[k];
    Jet rho = jet_exp0(arg);

    Jet weight{};
    switch (w.weight) {
    case Weight::None:
        weight[0] = 1.0;
        break;
    case Weight::SqrtT: {
        Jet t{};
        t[0] = t0;
        t[1] = kappa;
        weight = jet_sqrt(t);
        break;
    }
    case Weight::SqrtSinh: {
        Jet sh{};
        double scale = 1.0;
        for (int k = 0; k <= kJetOrder; ++k) {
            sh[k] = (k % 2 == 0 ? std::sinh(t0) : std::cosh(t0)) * scale;
            scale *= kappa / (k + 1);
        }
        weight = jet_sqrt(sh);
        break;
    }
    }
    out = jet_mul(weight, rho);
    return log_factor;
}

} // namespace

std::string_view to_string(Profile p)
{
    return p == Profile::GaussianBump ? "gaussian" : "compact";
}

std::string_view to_string(Weight w)
{
    switch (w) {
    case Weight::None: return "none";
    case Weight::SqrtSinh: return "sqrt_sinh";
    case Weight::SqrtT: return "sqrt_t";
    }
    return "?";
}

double Window::profile_at(double s) const
{
    if (!(std::abs(s) < 1.0)) return profile == Profile::GaussianBump && std::abs(s) == 1.0 ? std::exp(-32.0) : 0.0;
    if (profile == Profile::GaussianBump) return std::exp(-32.0 * s * s);
    return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

double Window::weight_at(double t) const
{
    switch (weight) {
    case Weight::None: return 1.0;
    case Weight::SqrtSinh: return std::sqrt(std::sinh(t));
    case Weight::SqrtT: return std::sqrt(t);
    }
    return 1.0;
}

double Window::operator()(double t) const
{
    if (t < t_lo() || t > t_hi()) return 0.0;
    return weight_at(t) * profile_at((t - center) / width);
}

Window make_window(Profile profile, double center, double width, Weight weight)
{
    if (!(width > 0.0) || !std::isfinite(width) || !std::isfinite(center))
        throw DomainError("window width must be positive");
    if (!(center - width > 0.0)) throw DomainError("window support must stay in t > 0 (center - width > 0)");
    return {profile, center, width, weight};
}

const GaussRule& gauss_legendre(int n)
{
    static std::mutex mutex;
    static std::map<int, GaussRule> rules;
    std::lock_guard lock(mutex);
    auto it = rules.find(n);
    if (it != rules.end()) return it->second;
    GaussRule rule;
    rule.x.resize(n);
    rule.w.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        rule.x[i] = x;
        rule.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rules.emplace(n, std::move(rule)).first->second;
}

std::vector<double> window_derivative_norms(const Window& w, int max_order)
{
    if (w.profile != Profile::CompactBump) throw DomainError("derivative norms are only defined for compact bumps");
    max_order = std::min(max_order, kJetOrder);
    const auto& rule = gauss_legendre(kPanelPoints);
    constexpr int panels = 128;
    const double h = (w.t_hi() - w.t_lo()) / panels;
    std::vector<CompensatedSum> acc(max_order + 1);
    std::vector<double> log_fact(max_order + 1, 0.0);
    for (int k = 1; k <= max_order; ++k) log_fact[k] = log_fact[k - 1] + std::log(static_cast<double>(k));

    for (int p = 0; p < panels; ++p) {
        for (int q = 0; q < kPanelPoints; ++q) {
            const double t0 = w.t_lo() + h * (p + 0.5 * (rule.x[q] + 1.0));
            const double s0 = (t0 - w.center) / w.width;
            const double u0 = 1.0 - s0 * s0;
            if (u0 < 1e-3) continue; // bump and all its derivatives are below e^-900 here
            // Half the distance to the nearest singularity keeps the scaled
            // coefficients of moderate size.
            double kappa = 0.5 * w.width * (1.0 - std::abs(s0));
            if (w.weight != Weight::None) kappa = std::min(kappa, 0.5 * t0);
            Jet jet{};
            const double log_factor = compact_jet(w, t0, kappa, jet);
            const double node_weight = 0.5 * h * rule.w[q];
            for (int k = 0; k <= max_order; ++k) {
                if (jet[k] == 0.0) continue;
                const double log_deriv = log_fact[k] + std::log(std::abs(jet[k])) + log_factor - k * std::log(kappa);
                acc[k] += node_weight * std::exp(log_deriv);
            }
        }
    }
    std::vector<double> norms(max_order + 1);
    for (int k = 0; k <= max_order; ++k) norms[k] = 1.05 * acc[k].value();
    return norms;
}

WindowTransform::WindowTransform(const Window& w, double abs_tol)
    : w_(w)
    , tol_(abs_tol)
{
}

const std::vector<WindowTransform::Node>& WindowTransform::nodes(int panels)
{
    auto it = cache_.find(panels);
    if (it != cache_.end()) return it->second;
    const auto& rule = gauss_legendre(kPanelPoints);
    std::vector<Node> out;
    out.reserve(static_cast<std::size_t>(panels) * kPanelPoints);
    const double h = (w_.t_hi() - w_.t_lo()) / panels;
    for (int p = 0; p < panels; ++p) {
        for (int q = 0; q < kPanelPoints; ++q) {
            const double t = w_.t_lo() + h * (p + 0.5 * (rule.x[q] + 1.0));
            out.push_back({t, 0.5 * h * rule.w[q] * w_(t)});
        }
    }
    return cache_.emplace(panels, std::move(out)).first->second;
}

std::complex<double> WindowTransform::apply(const std::vector<Node>& nodes, double mu) const
{
    ComplexSum s;
    for (const auto& n : nodes) s += n.wf * std::polar(1.0, -n.t * mu);
    return s.value();
}

std::complex<double> WindowTransform::operator()(double mu)
{
    if (w_.profile == Profile::GaussianBump && w_.weight == Weight::None) {
        const double sigma = gaussian_sigma(w_);
        return sigma * std::sqrt(two_pi) * std::exp(-0.5 * sigma * sigma * mu * mu) * std::polar(1.0, -w_.center * mu);
    }
    const double length = w_.t_hi() - w_.t_lo();
    int panels = 8;
    while (panels < kMaxPanels && panels * 12.0 < std::abs(mu) * length) panels *= 2;
    std::complex<double> coarse = apply(nodes(panels), mu);
    double achieved = std::numeric_limits<double>::infinity();
    while (2 * panels <= kMaxPanels) {
        const std::complex<double> fine = apply(nodes(2 * panels), mu);
        achieved = std::abs(fine - coarse);
        if (achieved <= tol_) return fine;
        coarse = fine;
        panels *= 2;
    }
    throw ContractError("window_transform: quadrature did not converge (achieved " + std::to_string(achieved) + ")");
}

double WindowTransform::envelope(double mu) const
{
    const double m = std::abs(mu);
    if (w_.profile == Profile::GaussianBump) {
        const double sigma = gaussian_sigma(w_);
        const double eta_max = kGaussianShiftCap;
        double weight_bound = 1.0;
        switch (w_.weight) {
        case Weight::None: break;
        case Weight::SqrtT: weight_bound = std::pow(w_.t_hi() * w_.t_hi() + eta_max * eta_max, 0.25); break;
        case Weight::SqrtSinh: weight_bound = std::sqrt(std::cosh(w_.t_hi())); break;
        }
        const double eta = std::min(sigma * sigma * m, eta_max);
        return sigma * std::sqrt(two_pi) * weight_bound * std::exp(-eta * m + eta * eta / (2.0 * sigma * sigma));
    }
    if (derivative_norms_.empty()) derivative_norms_ = window_derivative_norms(w_, kJetOrder);
    double best = derivative_norms_[0];
    if (m > 0.0) {
        double power = 1.0;
        for (std::size_t k = 1; k < derivative_norms_.size(); ++k) {
            power *= m;
            best = std::min(best, derivative_norms_[k] / power);
        }
    }
    return best;
}

std::complex<double> window_transform(const Window& w, double mu)
{
    WindowTransform t(w);
    return t(mu);
}

} // namespace echoloc
