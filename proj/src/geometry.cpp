#include "echoloc/geometry.hpp"

#include "echoloc/error.hpp"
#include "echoloc/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace echoloc {

namespace {

void require_positive_periods(double a, double b, const char* what)
{
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
        throw DomainError(std::string(what) + ": periods must be positive and finite");
}

} // namespace

FlatTorusSpec make_torus(double a, double b)
{
    require_positive_periods(a, b, "torus");
    return {a, b};
}

FlatKleinSpec make_klein(double a, double b)
{
    require_positive_periods(a, b, "klein bottle");
    return {a, b};
}

double area(const FlatSpec& spec)
{
    return std::visit([](const auto& s) { return s.area(); }, spec);
}

Point reduce(Point x, const FlatTorusSpec& spec) { return {wrap(x.x1, spec.a), wrap(x.x2, spec.b)}; }

Point reduce(Point x, const FlatKleinSpec& spec)
{
    const double half = 0.5 * spec.a;
    const double x1 = wrap(x.x1, half);
    // Number of glide steps taken to land in [0, a/2); odd counts flip x2.
    const double steps = std::round((x.x1 - x1) / half);
    const bool odd = std::fmod(std::abs(steps), 2.0) == 1.0;
    return {x1, wrap(odd ? -x.x2 : x.x2, spec.b)};
}

Point reduce(Point x, const FlatSpec& spec)
{
    return std::visit([&](const auto& s) { return reduce(x, s); }, spec);
}

Point klein_canonicalize(Point x, const FlatKleinSpec& spec)
{
    const Point r = reduce(x, spec);
    double y = wrap(r.x2, 0.5 * spec.b);
    if (y > 0.25 * spec.b) y = 0.5 * spec.b - y;
    return {0.0, y};
}

HPoint make_hpoint(double re, double im)
{
    if (!(im > 0.0) || !std::isfinite(re) || !std::isfinite(im))
        throw DomainError("point must lie in the upper half-plane");
    return {re, im};
}

std::complex<double> to_disk(HPoint z)
{
    const std::complex<double> i(0.0, 1.0);
    return (z.z() - i) / (z.z() + i);
}

HPoint from_disk(std::complex<double> w)
{
    if (!(std::abs(w) < 1.0)) throw DomainError("point must lie in the open unit disk");
    const std::complex<double> i(0.0, 1.0);
    const std::complex<double> z = i * (1.0 + w) / (1.0 - w);
    return {z.real(), z.imag()};
}

HPoint polar_from_i(double distance, double angle)
{
    return from_disk(std::polar(std::tanh(0.5 * distance), angle));
}

double hyperbolic_distance(HPoint z, HPoint w)
{
    if (!(z.im > 0.0) || !(w.im > 0.0)) throw DomainError("hyperbolic_distance: nonpositive imaginary part");
    // 2 asinh(|z - w| / (2 sqrt(Im z Im w))), in extended precision.
    const long double dx = static_cast<long double>(z.re) - w.re;
    const long double dy = static_cast<long double>(z.im) - w.im;
    const long double q = std::sqrt(dx * dx + dy * dy) / (2.0L * std::sqrt(static_cast<long double>(z.im) * w.im));
    return static_cast<double>(2.0L * std::asinh(q));
}

MobiusElement MobiusElement::inverse() const
{
    MobiusElement inv{d, -b, -c, a, {}};
    inv.word.reserve(word.size());
    for (auto it = word.rbegin(); it != word.rend(); ++it) inv.word.push_back(-*it);
    return inv;
}

MobiusElement MobiusElement::canonical() const
{
    MobiusElement g = *this;
    const double first = a != 0.0 ? a : (b != 0.0 ? b : (c != 0.0 ? c : d));
    if (first < 0.0) {
        g.a = -a;
        g.b = -b;
        g.c = -c;
        g.d = -d;
    }
    return g;
}

bool MobiusElement::same_isometry(const MobiusElement& other, double tol) const
{
    const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d), 1.0});
    auto close = [&](double s) {
        return std::abs(a - s * other.a) <= tol * scale && std::abs(b - s * other.b) <= tol * scale
            && std::abs(c - s * other.c) <= tol * scale && std::abs(d - s * other.d) <= tol * scale;
    };
    return close(1.0) || close(-1.0);
}

MobiusElement make_mobius(double a, double b, double c, double d, std::vector<int> word)
{
    MobiusElement g{a, b, c, d, std::move(word)};
    if (!std::isfinite(g.det()) || std::abs(g.det() - 1.0) > 1e-12)
        throw DomainError("mobius element must have determinant 1 (within 1e-12)");
    return g;
}

MobiusElement operator*(const MobiusElement& g, const MobiusElement& h)
{
    MobiusElement p{g.a * h.a + g.b * h.c, g.a * h.b + g.b * h.d, g.c * h.a + g.d * h.c, g.c * h.b + g.d * h.d, {}};
    const double s = 1.0 / std::sqrt(p.det());
    p.a *= s;
    p.b *= s;
    p.c *= s;
    p.d *= s;
    p.word.reserve(g.word.size() + h.word.size());
    p.word = g.word;
    p.word.insert(p.word.end(), h.word.begin(), h.word.end());
    return p;
}

HPoint mobius_apply(const MobiusElement& g, HPoint z)
{
    // Im(gz) = det(g) Im z / |cz + d|^2, computed directly so far-out orbit
    // points keep their accuracy. Extended precision and the stored matrix's
    // own determinant keep the action an isometry for long words.
    using ld = long double;
    const ld x = z.re, y = z.im;
    const ld a = g.a, b = g.b, c = g.c, d = g.d;
    const ld den_re = c * x + d, den_im = c * y;
    const ld num_re = a * x + b, num_im = a * y;
    const ld n2 = den_re * den_re + den_im * den_im;
    const ld det = a * d - b * c;
    return {static_cast<double>((num_re * den_re + num_im * den_im) / n2), static_cast<double>(det * y / n2)};
}

HyperbolicSurfaceSpec make_hyperbolic(std::vector<MobiusElement> generators, HPoint basepoint)
{
    if (generators.empty()) throw DomainError("hyperbolic surface needs at least one generator");
    for (const auto& g : generators)
        if (std::abs(g.det() - 1.0) > 1e-12) throw DomainError("generator determinant differs from 1 by more than 1e-12");
    (void)make_hpoint(basepoint.re, basepoint.im);
    for (std::size_t k = 0; k < generators.size(); ++k) generators[k].word = {static_cast<int>(k) + 1};
    return {std::move(generators), basepoint};
}

HyperbolicSurfaceSpec genus2_octagon(HPoint basepoint)
{
    using cd = std::complex<double>;
    const cd i(0.0, 1.0);
    const double alpha = 1.0 + std::sqrt(2.0);
    const double beta = std::sqrt(2.0 * alpha);
    std::vector<MobiusElement> gens;
    for (int k = 0; k < 4; ++k) {
        // SU(1,1) side-pairing in the disk, conjugated to the half-plane by the
        // Cayley map C = [[1, -i], [1, i]]: M_H = C^-1 M_D C.
        const cd bk = beta * std::polar(1.0, k * pi / 4.0);
        const cd m00 = alpha, m01 = bk, m10 = std::conj(bk), m11 = alpha;
        // C^-1 = 1/(2i) [[i, i], [-1, 1]]
        const cd c00 = 1.0, c01 = -i, c10 = 1.0, c11 = i;
        const cd t00 = m00 * c00 + m01 * c10, t01 = m00 * c01 + m01 * c11;
        const cd t10 = m10 * c00 + m11 * c10, t11 = m10 * c01 + m11 * c11;
        const cd s = 1.0 / (2.0 * i);
        const cd h00 = s * (i * t00 + i * t10), h01 = s * (i * t01 + i * t11);
        const cd h10 = s * (-t00 + t10), h11 = s * (-t01 + t11);
        MobiusElement g{h00.real(), h01.real(), h10.real(), h11.real(), {}};
        const double n = 1.0 / std::sqrt(g.det());
        g.a *= n;
        g.b *= n;
        g.c *= n;
        g.d *= n;
        gens.push_back(g.canonical());
    }
    return make_hyperbolic(std::move(gens), basepoint);
}

HyperbolicSurfaceSpec conjugate(const HyperbolicSurfaceSpec& spec, const MobiusElement& h)
{
    HyperbolicSurfaceSpec out;
    const MobiusElement hinv = h.inverse();
    MobiusElement hh = h;
    hh.word.clear();
    MobiusElement hi = hinv;
    hi.word.clear();
    for (const auto& g : spec.generators) {
        MobiusElement c = hh * g * hi;
        c.word = g.word;
        out.generators.push_back(c.canonical());
    }
    out.basepoint_lift = mobius_apply(h, spec.basepoint_lift);
    return out;
}

std::string format_word(const std::vector<int>& word)
{
    if (word.empty()) return "e";
    std::ostringstream os;
    for (int letter : word) {
        const int k = std::abs(letter);
        if (k >= 1 && k <= 26)
            os << static_cast<char>((letter > 0 ? 'a' : 'A') + k - 1);
        else
            os << "g" << k << (letter < 0 ? "^-1" : "") << ' ';
    }
    return os.str();
}

} // namespace echoloc
