#pragma once

#include <complex>
#include <map>
#include <string_view>
#include <vector>

namespace echoloc {

enum class Profile { GaussianBump, CompactBump };
enum class Weight { None, SqrtSinh, SqrtT };

std::string_view to_string(Profile p);
std::string_view to_string(Weight w);

/// Time-side test function chi-hat(t) = weight(t) * rho((t - center) / width),
/// supported in [center - width, center + width] with center - width > 0.
///
/// CompactBump:  rho(s) = exp(1 - 1/(1 - s^2)) on (-1, 1), rho(0) = 1.
/// GaussianBump: rho(s) = exp(-32 s^2), i.e. standard deviation width/8 in t,
///               truncated at 8 standard deviations (|s| = 1). The discarded
///               mass is erfc(4 sqrt 2) ~ 1.2e-15 relative to the bump.
///
/// Frequency side uses chi(mu) = integral chi-hat(t) exp(-i t mu) dt (no 2 pi).
struct Window {
    Profile profile = Profile::CompactBump;
    double center = 1.0;
    double width = 0.2;
    Weight weight = Weight::None;

    double t_lo() const { return center - width; }
    double t_hi() const { return center + width; }

    double profile_at(double s) const;
    double weight_at(double t) const;
    double operator()(double t) const;

    friend bool operator==(const Window&, const Window&) = default;
};

/// Validating constructor: width > 0 and center - width > 0 (keeps the
/// zero-time singularity out of the support).
Window make_window(Profile profile, double center, double width, Weight weight);

/// chi(mu): closed form for an unweighted Gaussian, adaptive composite
/// Gauss-Legendre otherwise (absolute error <= 1e-10; ContractError if not reached).
std::complex<double> window_transform(const Window& w, double mu);

/// Reusable evaluator of chi(mu) and of a decreasing majorant of |chi| on
/// [|mu|, inf). Caches quadrature nodes; not thread-safe.
class WindowTransform {
public:
    explicit WindowTransform(const Window& w, double abs_tol = 1e-10);

    std::complex<double> operator()(double mu);

    /// Upper bound on |chi(nu)| for every |nu| >= |mu|.
    ///   Gaussian: contour shift t -> t - i eta, eta = min(sigma^2 |mu|, 1.2),
    ///             applied to the untruncated bump.
    ///   Compact:  min_k ||chi-hat^(k)||_1 / |mu|^k, k = 0..24, with the
    ///             derivative norms computed from Taylor jets and a 5% margin.
    double envelope(double mu) const;

    const Window& window() const { return w_; }

private:
    struct Node {
        double t;
        double wf;
    };
    const std::vector<Node>& nodes(int panels);
    std::complex<double> apply(const std::vector<Node>& nodes, double mu) const;

    Window w_;
    double tol_;
    std::map<int, std::vector<Node>> cache_;
    // Filled on the first envelope() call.
    mutable std::vector<double> derivative_norms_;
};

/// L1 norms ||d^k/dt^k chi-hat||_1 for k = 0..max_order (compact bumps only).
std::vector<double> window_derivative_norms(const Window& w, int max_order);

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
};
const GaussRule& gauss_legendre(int n);

} // namespace echoloc
