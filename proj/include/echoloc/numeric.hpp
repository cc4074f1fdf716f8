#pragma once

#include <cmath>
#include <complex>

namespace echoloc {

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double two_pi = 2.0 * pi;

/// Neumaier-compensated accumulator. Sums of the same terms agree to a few
/// ulps regardless of how they are partitioned or ordered.
class CompensatedSum {
public:
    void add(double x)
    {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    CompensatedSum& operator+=(double x)
    {
        add(x);
        return *this;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

class ComplexSum {
public:
    void add(std::complex<double> z)
    {
        re_.add(z.real());
        im_.add(z.imag());
    }
    ComplexSum& operator+=(std::complex<double> z)
    {
        add(z);
        return *this;
    }
    std::complex<double> value() const { return {re_.value(), im_.value()}; }

private:
    CompensatedSum re_;
    CompensatedSum im_;
};

/// Euclidean remainder into [0, period).
inline double wrap(double x, double period)
{
    double r = std::fmod(x, period);
    if (r < 0) r += period;
    if (r >= period) r = 0.0;
    return r;
}

} // namespace echoloc
