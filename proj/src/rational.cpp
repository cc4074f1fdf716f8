#include "echoloc/rational.hpp"

#include <cmath>
#include <limits>

namespace echoloc {

namespace {

using i128 = __int128;

i128 gcd128(i128 x, i128 y)
{
    if (x < 0) x = -x;
    if (y < 0) y = -y;
    while (y != 0) {
        const i128 t = x % y;
        x = y;
        y = t;
    }
    return x;
}

std::optional<Rational> reduce128(i128 num, i128 den)
{
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const i128 g = gcd128(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    constexpr i128 lim = std::numeric_limits<std::int64_t>::max();
    if (num > lim || num < -lim || den > lim) return std::nullopt;
    return Rational{static_cast<std::int64_t>(num), static_cast<std::int64_t>(den)};
}

} // namespace

std::optional<Rational> rationalize(double x, std::int64_t max_den, double rel_tol)
{
    if (!std::isfinite(x)) return std::nullopt;
    const bool negative = x < 0;
    const double target = std::abs(x);
    // Continued-fraction convergents h/k.
    i128 h_prev = 1, h = static_cast<i128>(std::floor(target));
    i128 k_prev = 0, k = 1;
    double rem = target - std::floor(target);
    for (int iter = 0; iter < 64; ++iter) {
        const double approx = static_cast<double>(h) / static_cast<double>(k);
        if (std::abs(approx - target) <= rel_tol * std::max(target, 1e-300)) {
            auto r = reduce128(negative ? -h : h, k);
            return r;
        }
        if (rem < 1e-300) break;
        const double inv = 1.0 / rem;
        const double a = std::floor(inv);
        rem = inv - a;
        if (a > 1e15) break;
        const i128 ai = static_cast<i128>(a);
        const i128 h_next = ai * h + h_prev;
        const i128 k_next = ai * k + k_prev;
        if (k_next > max_den) break;
        h_prev = h;
        h = h_next;
        k_prev = k;
        k = k_next;
    }
    return std::nullopt;
}

std::optional<Rational> weighted_square_sum(std::int64_t m, const Rational& p, std::int64_t n, const Rational& q)
{
    const i128 m2 = static_cast<i128>(m) * m;
    const i128 n2 = static_cast<i128>(n) * n;
    const i128 num = m2 * p.num * q.den + n2 * q.num * p.den;
    const i128 den = static_cast<i128>(p.den) * q.den;
    return reduce128(num, den);
}

bool less(const Rational& x, const Rational& y)
{
    return static_cast<i128>(x.num) * y.den < static_cast<i128>(y.num) * x.den;
}

} // namespace echoloc
