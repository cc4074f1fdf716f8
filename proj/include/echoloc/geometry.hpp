#pragma once

#include <array>
#include <complex>
#include <string>
#include <variant>
#include <vector>

namespace echoloc {

/// A point on a flat surface, in the coordinates of its fundamental rectangle.
struct Point {
    double x1 = 0.0;
    double x2 = 0.0;
};

/// Rectangular torus R^2 / (aZ x bZ).
struct FlatTorusSpec {
    double a = 1.0;
    double b = 1.0;

    double area() const { return a * b; }
};

/// Flat Klein bottle K_{a,b}: the rectangle [0, a/2] x [0, b] with x2 ~ x2 + b
/// and (0, x2) ~ (a/2, -x2). Its orientable double cover is the a x b torus.
struct FlatKleinSpec {
    double a = 2.0;
    double b = 1.0;

    double area() const { return 0.5 * a * b; }
};

using FlatSpec = std::variant<FlatTorusSpec, FlatKleinSpec>;

FlatTorusSpec make_torus(double a, double b);
FlatKleinSpec make_klein(double a, double b);

double area(const FlatSpec& spec);

/// Reduce to the fundamental rectangle with half-open intervals [0, period).
Point reduce(Point x, const FlatTorusSpec& spec);
Point reduce(Point x, const FlatKleinSpec& spec);
Point reduce(Point x, const FlatSpec& spec);

/// Orbit representative (0, x2*) with x2* in [0, b/4] under the isometries
/// generated by horizontal translation, x2 -> -x2 and x2 -> x2 + b/2.
Point klein_canonicalize(Point x, const FlatKleinSpec& spec);

/// A point of the upper half-plane.
struct HPoint {
    double re = 0.0;
    double im = 1.0;

    std::complex<double> z() const { return {re, im}; }
};

HPoint make_hpoint(double re, double im);

/// Poincare half-plane <-> unit disk (i maps to 0).
std::complex<double> to_disk(HPoint z);
HPoint from_disk(std::complex<double> w);

/// The point at hyperbolic distance `distance` from i in direction `angle`
/// (measured in the disk model at its center).
HPoint polar_from_i(double distance, double angle);

double hyperbolic_distance(HPoint z, HPoint w);

/// Element of PSL(2,R) acting by z -> (az + b) / (cz + d), together with the
/// word in the surface generators that produced it (signed 1-based indices,
/// negative for inverses).
struct MobiusElement {
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;
    std::vector<int> word;

    static MobiusElement identity() { return {}; }

    double det() const { return a * d - b * c; }
    double trace() const { return a + d; }

    MobiusElement inverse() const;

    /// Representative of {g, -g} whose first nonzero entry is positive.
    MobiusElement canonical() const;

    /// Matrix equality up to sign, entrywise relative to the entry scale.
    bool same_isometry(const MobiusElement& other, double tol = 1e-9) const;
};

/// Validating constructor: |det - 1| <= 1e-12.
MobiusElement make_mobius(double a, double b, double c, double d, std::vector<int> word = {});

/// Product g*h (apply h first), renormalized to determinant one; words concatenate.
MobiusElement operator*(const MobiusElement& g, const MobiusElement& h);

HPoint mobius_apply(const MobiusElement& g, HPoint z);

/// Compact hyperbolic surface H / Gamma presented by deck-group generators,
/// with a chosen lift of the basepoint.
struct HyperbolicSurfaceSpec {
    std::vector<MobiusElement> generators;
    HPoint basepoint_lift;
};

HyperbolicSurfaceSpec make_hyperbolic(std::vector<MobiusElement> generators, HPoint basepoint);

/// Genus-2 surface group of the regular octagon with angles pi/4: four
/// side-pairings a, b, c, d of the octagon centered at i. Each generator's
/// axis passes through i with translation length 2 arccosh(1 + sqrt 2).
HyperbolicSurfaceSpec genus2_octagon(HPoint basepoint = {});

/// Conjugate presentation: generators h g h^-1 and basepoint h(x).
HyperbolicSurfaceSpec conjugate(const HyperbolicSurfaceSpec& spec, const MobiusElement& h);

/// "aBc" style rendering of a generator word: generator k is the k-th
/// lowercase letter, inverses are uppercase. Empty word renders as "e".
std::string format_word(const std::vector<int>& word);

} // namespace echoloc
