#include "echoloc/loops.hpp"

#include "echoloc/log.hpp"
#include "echoloc/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <unordered_map>

namespace echoloc {

namespace {

constexpr double kBucket = 1e-6;
constexpr double kSamePoint = 1e-6;

/// Orbit points bucketed by distance to the basepoint.
class OrbitIndex {
public:
    explicit OrbitIndex(HPoint base)
        : base_(base)
    {
    }

    /// Inserts p (at distance d from the base) unless an equal point is present.
    bool insert(HPoint p, double d)
    {
        const auto key = static_cast<long long>(std::floor(d / kBucket));
        for (long long k = key - 1; k <= key + 1; ++k) {
            auto it = buckets_.find(k);
            if (it == buckets_.end()) continue;
            for (const HPoint& q : it->second)
                if (hyperbolic_distance(p, q) < kSamePoint) return false;
        }
        buckets_[key].push_back(p);
        return true;
    }

private:
    HPoint base_;
    std::unordered_map<long long, std::vector<HPoint>> buckets_;
};

bool deck_less(const DeckElement& x, const DeckElement& y)
{
    if (x.distance != y.distance) return x.distance < y.distance;
    const MobiusElement p = x.element.canonical(), q = y.element.canonical();
    return std::tie(p.a, p.b, p.c, p.d) < std::tie(q.a, q.b, q.c, q.d);
}

struct Distanced {
    double distance;
    std::string word;
};

LoopTable cluster(std::vector<Distanced> items, double R)
{
    std::stable_sort(items.begin(), items.end(), [](const auto& x, const auto& y) { return x.distance < y.distance; });
    LoopTable table;
    table.radius = R;
    double last = -1.0;
    for (const auto& item : items) {
        if (!table.entries.empty() && item.distance - last <= kLengthClusterTol) {
            auto& e = table.entries.back();
            ++e.multiplicity;
            e.words.push_back(item.word);
        } else {
            table.entries.push_back({item.distance, 1, {item.word}});
        }
        last = item.distance;
    }
    for (std::size_t i = 1; i < table.entries.size(); ++i) {
        const double prev_end = table.entries[i - 1].length;
        if (table.entries[i].length - prev_end < 10.0 * kLengthClusterTol) {
            const std::string msg = "near-degenerate lengths near r = " + std::to_string(table.entries[i].length);
            table.warnings.push_back(msg);
            log::warn(msg);
        }
    }
    return table;
}

} // namespace

SaturationError::SaturationError(std::vector<DeckElement> partial, int cap)
    : ContractError("deck enumeration did not saturate within word length " + std::to_string(cap))
    , partial_(std::move(partial))
    , cap_(cap)
{
}

int LoopTable::total_multiplicity() const
{
    int total = 0;
    for (const auto& e : entries) total += e.multiplicity;
    return total;
}

std::vector<DeckElement> enumerate_deck(const HyperbolicSurfaceSpec& spec, double R, const EnumerationOptions& options)
{
    if (!(R > 0.0)) throw DomainError("enumerate_deck: R must be positive");
    const HPoint x = spec.basepoint_lift;

    std::vector<MobiusElement> letters;
    for (const auto& g : spec.generators) {
        letters.push_back(g);
        letters.push_back(g.inverse());
    }
    double max_step = 0.0;
    for (const auto& g : letters) max_step = std::max(max_step, hyperbolic_distance(x, mobius_apply(g, x)));
    const double prune = R + 2.0 * max_step;

    OrbitIndex seen(x);
    seen.insert(x, 0.0);
    std::vector<DeckElement> found;
    std::vector<MobiusElement> frontier{MobiusElement::identity()};
    int quiet = 0;
    for (int length = 1;; ++length) {
        if (length > options.max_word_length) {
            std::sort(found.begin(), found.end(), deck_less);
            throw SaturationError(std::move(found), options.max_word_length);
        }
        std::vector<MobiusElement> next;
        int added_within_R = 0;
        for (const auto& g : frontier) {
            for (const auto& letter : letters) {
                if (!g.word.empty() && g.word.back() == -letter.word.front()) continue;
                MobiusElement h = g * letter;
                const HPoint p = mobius_apply(h, x);
                const double d = hyperbolic_distance(x, p);
                if (d > prune || !seen.insert(p, d)) continue;
                if (d <= R) {
                    found.push_back({h.canonical(), d});
                    ++added_within_R;
                }
                next.push_back(std::move(h));
            }
        }
        quiet = added_within_R == 0 ? quiet + 1 : 0;
        if (next.empty() || quiet >= options.quiet_levels) break;
        frontier = std::move(next);
    }
    std::sort(found.begin(), found.end(), deck_less);
    return found;
}

LoopTable looping_times(const HyperbolicSurfaceSpec& spec, HPoint basepoint, double R, const EnumerationOptions& options)
{
    HyperbolicSurfaceSpec at = spec;
    at.basepoint_lift = basepoint;
    std::vector<Distanced> items;
    for (const auto& e : enumerate_deck(at, R, options)) items.push_back({e.distance, format_word(e.element.word)});
    return cluster(std::move(items), R);
}

double shortest_loop(const HyperbolicSurfaceSpec& spec, HPoint basepoint)
{
    HyperbolicSurfaceSpec at = spec;
    at.basepoint_lift = basepoint;
    for (double R = 2.0; R <= 64.0; R *= 2.0) {
        const auto elements = enumerate_deck(at, R);
        if (!elements.empty()) return elements.front().distance;
    }
    throw ContractError("shortest_loop: no loop found up to R = 64");
}

double translation_length(const MobiusElement& g)
{
    const double t = std::abs(g.trace());
    if (!(t > 2.0)) throw DomainError("not hyperbolic");
    return 2.0 * std::acosh(0.5 * t);
}

FlatDeckSpec deck_of(const FlatSpec& spec)
{
    if (const auto* k = std::get_if<FlatKleinSpec>(&spec)) return {DeckKind::KleinGlide, k->a, k->b};
    const auto& t = std::get<FlatTorusSpec>(spec);
    return {DeckKind::TorusLattice, t.a, t.b};
}

std::vector<FlatDeckElement> enumerate_flat_deck(const FlatDeckSpec& deck, Point x, double R)
{
    if (!(R > 0.0)) throw DomainError("enumerate_flat_deck: R must be positive");
    std::vector<FlatDeckElement> out;
    const bool klein = deck.kind == DeckKind::KleinGlide;
    const double step1 = klein ? 0.5 * deck.a : deck.a;
    const int k_cap = static_cast<int>(std::floor(R / step1)) + 1;
    const int l_cap = static_cast<int>(std::floor((R + 2.0 * std::abs(x.x2)) / deck.b)) + 1;
    for (int k = -k_cap; k <= k_cap; ++k) {
        for (int l = -l_cap; l <= l_cap; ++l) {
            if (k == 0 && l == 0) continue;
            const double dx = k * step1;
            const double dy = (klein && k % 2 != 0) ? l * deck.b - 2.0 * x.x2 : l * deck.b;
            const double d = std::hypot(dx, dy);
            if (d <= R) out.push_back({k, l, d});
        }
    }
    std::sort(out.begin(), out.end(),
        [](const auto& p, const auto& q) { return std::tie(p.distance, p.k, p.l) < std::tie(q.distance, q.k, q.l); });
    return out;
}

LoopTable looping_times(const FlatDeckSpec& deck, Point x, double R)
{
    std::vector<Distanced> items;
    for (const auto& e : enumerate_flat_deck(deck, x, R))
        items.push_back({e.distance, "(" + std::to_string(e.k) + "," + std::to_string(e.l) + ")"});
    return cluster(std::move(items), R);
}

double shortest_loop(const FlatDeckSpec& deck, Point x)
{
    for (double R = 2.0;; R *= 2.0) {
        const auto elements = enumerate_flat_deck(deck, x, R);
        if (!elements.empty()) return elements.front().distance;
    }
}

std::complex<double> pre_trace_sum(std::span<const double> distances, double lambda, const Window& w, Curvature curvature)
{
    ComplexSum sum;
    for (const double d : distances) {
        const double chi_hat = w(d);
        if (chi_hat == 0.0) continue;
        const double amplitude = curvature == Curvature::Flat ? 1.0 / std::sqrt(d) : 1.0 / std::sqrt(std::sinh(d));
        sum += amplitude * chi_hat * std::polar(1.0, -lambda * d);
    }
    const double prefactor = 0.5 * std::sqrt(lambda / two_pi);
    return prefactor * std::polar(1.0, pi / 4.0) * sum.value();
}

TraceValue geometric_side(const HyperbolicSurfaceSpec& spec, HPoint basepoint, double lambda, const Window& w)
{
    HyperbolicSurfaceSpec at = spec;
    at.basepoint_lift = basepoint;
    std::vector<double> distances;
    for (const auto& e : enumerate_deck(at, w.t_hi())) distances.push_back(e.distance);
    return {pre_trace_sum(distances, lambda, w, Curvature::Hyperbolic), 0.0};
}

TraceValue geometric_side_flat(const FlatDeckSpec& deck, Point x, double lambda, const Window& w)
{
    std::vector<double> distances;
    for (const auto& e : enumerate_flat_deck(deck, x, w.t_hi())) distances.push_back(e.distance);
    return {pre_trace_sum(distances, lambda, w, Curvature::Flat), 0.0};
}

} // namespace echoloc
