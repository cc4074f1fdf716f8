#pragma once

#include "echoloc/error.hpp"
#include "echoloc/geometry.hpp"
#include "echoloc/trace.hpp"
#include "echoloc/window.hpp"

#include <span>
#include <string>
#include <vector>

namespace echoloc {

/// Deck element gamma != id with its displacement d(x, gamma x).
struct DeckElement {
    MobiusElement element;
    double distance = 0.0;
};

struct EnumerationOptions {
    /// Longest word explored before giving up.
    int max_word_length = 64;
    /// Saturation: this many successive word lengths adding no new orbit point within R.
    int quiet_levels = 2;
};

/// Enumeration hit the word-length cap before saturating; carries what was found.
class SaturationError : public ContractError {
public:
    SaturationError(std::vector<DeckElement> partial, int cap);
    const std::vector<DeckElement>& partial() const { return partial_; }
    int cap() const { return cap_; }

private:
    std::vector<DeckElement> partial_;
    int cap_;
};

/// Every gamma != id with d(x, gamma x) <= R, once each, sorted by distance.
/// Breadth-first over freely reduced words, pruned at R + 2 max_g d(x, g x);
/// distinct elements are told apart by their orbit points (the action is free).
std::vector<DeckElement> enumerate_deck(const HyperbolicSurfaceSpec& spec, double R, const EnumerationOptions& options = {});

struct LoopEntry {
    double length = 0.0;
    int multiplicity = 0;
    std::vector<std::string> words;
};

struct LoopTable {
    double radius = 0.0;
    std::vector<LoopEntry> entries;
    std::vector<std::string> warnings;

    int total_multiplicity() const;
};

/// Lengths within this tolerance form one cluster; closer than 10x this between
/// clusters raises a "near-degenerate lengths" warning.
inline constexpr double kLengthClusterTol = 1e-8;

LoopTable looping_times(const HyperbolicSurfaceSpec& spec, HPoint basepoint, double R, const EnumerationOptions& options = {});

/// Shortest looping time: R starts at 2 and doubles until a loop appears.
double shortest_loop(const HyperbolicSurfaceSpec& spec, HPoint basepoint);

/// 2 arccosh(|tr g| / 2); DomainError("not hyperbolic") when |tr g| <= 2.
double translation_length(const MobiusElement& g);

enum class DeckKind { TorusLattice, KleinGlide };

/// Deck group of a flat surface acting on R^2. KleinGlide elements are
/// (k, l): (x1, x2) -> (x1 + k a/2, (-1)^k x2 + l b).
struct FlatDeckSpec {
    DeckKind kind = DeckKind::TorusLattice;
    double a = 1.0;
    double b = 1.0;
};

FlatDeckSpec deck_of(const FlatSpec& spec);

struct FlatDeckElement {
    int k = 0;
    int l = 0;
    double distance = 0.0;
};

std::vector<FlatDeckElement> enumerate_flat_deck(const FlatDeckSpec& deck, Point x, double R);
LoopTable looping_times(const FlatDeckSpec& deck, Point x, double R);
double shortest_loop(const FlatDeckSpec& deck, Point x);

enum class Curvature { Flat, Hyperbolic };

/// Leading-order pre-trace sum over orbit distances d:
///   (1/2) (2 pi)^{-1/2} lambda^{1/2} sum e^{i pi/4} e^{-i lambda d} A(d) chi-hat(d),
/// with A(d) = 1/sqrt(d) (flat) or 1/sqrt(sinh d) (curvature -1).
std::complex<double> pre_trace_sum(std::span<const double> distances, double lambda, const Window& w, Curvature curvature);

/// Geometric side of the pre-trace formula at a basepoint lift. Enumeration
/// covers the whole window support, so nothing is discarded (bound 0).
TraceValue geometric_side(const HyperbolicSurfaceSpec& spec, HPoint basepoint, double lambda, const Window& w);
TraceValue geometric_side_flat(const FlatDeckSpec& deck, Point x, double lambda, const Window& w);

} // namespace echoloc
