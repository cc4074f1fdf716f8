#pragma once

#include <cstdint>
#include <optional>

namespace echoloc {

/// Reduced fraction num/den with den > 0.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
    friend bool operator==(const Rational&, const Rational&) = default;
};

/// Best rational approximation of x with denominator <= max_den, accepted
/// only if it reproduces x to relative tolerance rel_tol.
std::optional<Rational> rationalize(double x, std::int64_t max_den = 1'000'000, double rel_tol = 1e-12);

/// Exact m^2 p + n^2 q for rationals p, q; nullopt on int64 overflow.
std::optional<Rational> weighted_square_sum(std::int64_t m, const Rational& p, std::int64_t n, const Rational& q);

/// Strict ordering by value (exact, via 128-bit cross multiplication).
bool less(const Rational& x, const Rational& y);

} // namespace echoloc
