#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "permgrow/closure.hpp"
#include "permgrow/errors.hpp"
#include "permgrow/perm.hpp"
#include "permgrow/wordset.hpp"

namespace permgrow {

struct TupleHash {
    std::size_t operator()(const std::vector<Point>& v) const {
        std::size_t h = 0xcbf29ce484222325ULL;
        for (Point x : v) {
            h ^= x;
            h *= 0x100000001b3ULL;
        }
        return h;
    }
};

// The only subgroups the toolkit needs: pointwise / setwise stabilizers of
// explicit point sets inside Sym(n). Membership is O(n); right cosets are
// keyed by image tuples (pointwise) or image sets (setwise).
struct SubgroupDesc {
    enum class Kind { pointwise, setwise, full };
    Kind kind = Kind::full;
    PointSet set;

    static SubgroupDesc pointwise_stab(PointSet s) {
        return SubgroupDesc{Kind::pointwise, std::move(s)};
    }
    static SubgroupDesc setwise_stab(PointSet s) {
        return SubgroupDesc{Kind::setwise, std::move(s)};
    }
    static SubgroupDesc whole_group(Point degree) {
        return SubgroupDesc{Kind::full, PointSet(degree, {})};
    }

    bool contains(const Permutation& g) const {
        switch (kind) {
            case Kind::pointwise: return fixes_pointwise(g, set);
            case Kind::setwise: return stabilizes_setwise(g, set);
            case Kind::full: return true;
        }
        return true;
    }

    // Key identifying the right coset Hg: g, g' share it iff g' g^{-1} in H.
    std::vector<Point> coset_key(const Permutation& g) const {
        std::vector<Point> key;
        switch (kind) {
            case Kind::pointwise:
                for (Point a : set.members()) key.push_back(g.apply(a));
                break;
            case Kind::setwise:
                for (Point a : set.members()) key.push_back(g.apply(a));
                std::sort(key.begin(), key.end());
                break;
            case Kind::full:
                break;
        }
        return key;
    }

    // Coset key of g*a from the key of g.
    std::vector<Point> advance_key(std::vector<Point> key,
                                   const Permutation& g) const {
        for (auto& x : key) x = g.apply(x);
        if (kind == Kind::setwise) std::sort(key.begin(), key.end());
        return key;
    }

    // Structural subgroup comparison for the families in play. Sufficient
    // conditions only; unknown relations raise.
    bool leq(const SubgroupDesc& k) const {
        if (k.kind == Kind::full) return true;
        if (kind == Kind::pointwise && k.kind == Kind::pointwise) {
            for (Point a : k.set.members())
                if (!set.contains(a)) return false;
            return true;
        }
        if (kind == Kind::pointwise && k.kind == Kind::setwise) {
            // fixing set pointwise stabilizes any union of its points and
            // of wholly-fixed complements
            bool inside = true;
            for (Point a : k.set.members())
                if (!set.contains(a)) inside = false;
            if (inside) return true;
            bool comp = true;
            for (Point a = 1; a <= set.degree(); ++a)
                if (!k.set.contains(a) && !set.contains(a)) comp = false;
            return comp;
        }
        if (kind == Kind::setwise && k.kind == Kind::setwise) {
            if (set == k.set) return true;
            return set == k.set.complement();
        }
        return false;
    }
};

struct OrbitRecord {
    Point point = 0;
    PointSet orbit;
    // carrier for each orbit point: apply(carrier.perm, point) == target
    std::map<Point, WordElement> transversal;
    // frontier expansion rounds; <= |orbit| - 1 on transitive closures
    std::size_t rounds = 0;
};

namespace detail {

// Orbit closure under a finite indexed family of word elements.
inline OrbitRecord orbit_of_elements(const std::vector<WordElement>& elems,
                                     Point degree, Point alpha,
                                     GenSetPtr base) {
    if (alpha < 1 || alpha > degree)
        throw ParamError("orbit point " + std::to_string(alpha) +
                         " outside 1.." + std::to_string(degree));
    OrbitRecord rec;
    rec.point = alpha;
    rec.transversal.emplace(alpha, WordElement::identity_of(base));
    std::vector<Point> frontier{alpha};
    std::vector<Point> all{alpha};
    while (!frontier.empty()) {
        std::vector<Point> next;
        for (Point a : frontier) {
            for (const auto& w : elems) {
                Point b = w.perm.apply(a);
                if (rec.transversal.count(b)) continue;
                rec.transversal.emplace(b,
                                        product_bound(rec.transversal.at(a), w));
                next.push_back(b);
                all.push_back(b);
            }
        }
        if (!next.empty()) ++rec.rounds;
        frontier = std::move(next);
    }
    rec.orbit = PointSet(degree, std::move(all));
    return rec;
}

}  // namespace detail

inline OrbitRecord orbit_of(const GenSet& a, Point alpha) {
    auto base = std::make_shared<const GenSet>(a);
    std::vector<WordElement> elems;
    for (std::size_t i = 0; i < a.size(); ++i) {
        WordElement w;
        w.perm = a.generators()[i];
        if (w.perm.is_identity()) {
            w.length_bound = 0;
            w.witness = Word{};
        } else {
            w.length_bound = 1;
            w.witness = Word{static_cast<std::int32_t>(i + 1)};
        }
        w.base = base;
        elems.push_back(std::move(w));
    }
    return detail::orbit_of_elements(elems, a.degree(), alpha, base);
}

inline OrbitRecord orbit_of(const Ball& b, Point alpha) {
    std::vector<WordElement> elems;
    elems.reserve(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) elems.push_back(b.element_at(i));
    return detail::orbit_of_elements(elems, b.degree(), alpha, b.base());
}

// Greedy subset A' of A, |A'| <= |X|-1, with <A'> transitive on X.
// Scan order follows the input; the start point is the smallest point of X
// moved by some generator.
inline std::vector<std::uint32_t> small_transitive_subset(const GenSet& a,
                                                          const PointSet& x) {
    if (x.degree() != a.degree())
        throw DegreeError("small_transitive_subset: degree mismatch");
    if (x.size() <= 1) return {};
    if (orbit_points(a.generators(), x.members().front()) != x.members())
        throw NotTransitiveError("<A> is not transitive on X");

    Point start = 0;
    for (Point p : x.members()) {
        for (const auto& g : a.generators())
            if (g.apply(p) != p) {
                start = p;
                break;
            }
        if (start) break;
    }
    if (!start) throw NotTransitiveError("no generator moves any point of X");

    std::vector<std::uint32_t> chosen;
    std::vector<Permutation> sub;
    auto orbit_size = [&](const std::vector<Permutation>& gens) {
        return orbit_points(gens, start).size();
    };
    std::size_t cur = 1;
    while (cur < x.size()) {
        bool grew = false;
        for (std::uint32_t i = 0; i < a.size(); ++i) {
            sub.push_back(a.generators()[i]);
            std::size_t s = orbit_size(sub);
            if (s > cur) {
                chosen.push_back(i);
                cur = s;
                grew = true;
                break;
            }
            sub.pop_back();
        }
        if (!grew)
            throw NotTransitiveError(
                "orbit growth stalled; <A> not transitive on X");
    }
    if (chosen.size() >= x.size())
        throw InvariantViolation("greedy transitive subset too large");
    return chosen;
}

// Schreier generators: with A symmetric, e in A, and A meeting every coset
// of H in <A>, the set {c a c'^{-1}} subset A^3 n H generates <A> n H.
inline std::vector<WordElement> schreier_generators(const GenSet& a,
                                                    const SubgroupDesc& h) {
    if (!a.symmetric_closed() || !a.contains_identity())
        throw ConventionError("schreier_generators requires A = A^{-1}, e in A");
    auto base = std::make_shared<const GenSet>(a);

    // coset coverage: keys met by A must equal keys met by <A>
    std::unordered_map<std::vector<Point>, std::uint32_t, TupleHash> rep;
    for (std::uint32_t i = 0; i < a.size(); ++i) {
        auto key = h.coset_key(a.generators()[i]);
        if (a.generators()[i].is_identity())
            rep[key] = i;  // identity must represent H's own coset
        else
            rep.emplace(std::move(key), i);
    }
    // coverage: reachable coset keys of <A> via key transitions, compared
    // with the keys met by A itself
    {
        std::unordered_set<std::vector<Point>, TupleHash> reachable;
        std::vector<std::vector<Point>> frontier{
            h.coset_key(Permutation::identity(a.degree()))};
        reachable.insert(frontier[0]);
        while (!frontier.empty()) {
            std::vector<std::vector<Point>> next;
            for (const auto& key : frontier)
                for (const auto& g : a.generators()) {
                    auto nk = h.advance_key(key, g);
                    if (reachable.insert(nk).second) next.push_back(std::move(nk));
                }
            frontier = std::move(next);
        }
        if (reachable.size() != rep.size())
            throw CosetCoverageError("A does not meet every coset of H in <A>");
    }

    auto gen_word = [&](std::uint32_t i, bool inv) {
        WordElement w;
        w.base = base;
        w.perm = inv ? inverse(a.generators()[i]) : a.generators()[i];
        if (a.generators()[i].is_identity()) {
            w.length_bound = 0;
            w.witness = Word{};
        } else {
            w.length_bound = 1;
            w.witness = Word{inv ? -static_cast<std::int32_t>(i + 1)
                                 : static_cast<std::int32_t>(i + 1)};
        }
        return w;
    };

    std::vector<WordElement> out;
    std::unordered_set<Permutation, PermHash> seen;
    for (auto& [key, ci] : rep) {
        (void)key;
        for (std::uint32_t ai = 0; ai < a.size(); ++ai) {
            Permutation ca = compose(a.generators()[ci], a.generators()[ai]);
            std::uint32_t cpi = rep.at(h.coset_key(ca));
            Permutation s = compose(ca, inverse(a.generators()[cpi]));
            if (!h.contains(s))
                throw InvariantViolation("schreier element escapes H");
            if (!seen.insert(s).second) continue;
            WordElement w = product_bound(
                product_bound(gen_word(ci, false), gen_word(ai, false)),
                gen_word(cpi, true));
            out.push_back(std::move(w));
        }
    }
    // deterministic order regardless of hash iteration
    std::sort(out.begin(), out.end(), [](const WordElement& x, const WordElement& y) {
        return x.perm < y.perm;
    });
    return out;
}

// Both sides of the orbit-stabilizer inequalities (3.1) and (3.2), computed
// exactly on a materialized ball; the caller asserts them.
struct OrbitStabReport {
    std::size_t set_size = 0;           // |A|
    std::size_t orbit_size = 0;         // |x^A|
    std::size_t stab_in_products = 0;   // |A A^{-1} n G_x|
    std::size_t stab_in_set = 0;        // |A n G_x|
    std::size_t product_size = 0;       // |A A|
    bool ineq_31 = false;               // (3.1) stab_in_products * orbit >= |A|
    bool ineq_32 = false;               // (3.2) |A A| >= |A n G_x| * |x^A|
};

inline OrbitStabReport check_orbit_stabilizer(const Ball& a,
                                              const std::vector<Point>& x) {
    OrbitStabReport r;
    r.set_size = a.size();
    std::unordered_set<std::vector<Point>, TupleHash> images;
    std::unordered_set<Permutation, PermHash> products, stab_products;
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::vector<Point> img;
        img.reserve(x.size());
        for (Point p : x) img.push_back(a.perm_at(i).apply(p));
        if (img == x) ++r.stab_in_set;
        images.insert(std::move(img));
    }
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) {
            Permutation pj = compose(a.perm_at(i), a.perm_at(j));
            products.insert(pj);
            Permutation p = compose(a.perm_at(i), inverse(a.perm_at(j)));
            bool fixes = true;
            for (Point q : x)
                if (p.apply(q) != q) {
                    fixes = false;
                    break;
                }
            if (fixes) stab_products.insert(std::move(p));
        }
    r.orbit_size = images.size();
    r.product_size = products.size();
    r.stab_in_products = stab_products.size();
    r.ineq_31 = r.stab_in_products * r.orbit_size >= r.set_size;
    r.ineq_32 = r.product_size >= r.stab_in_set * r.orbit_size;
    return r;
}

struct ChainLevel {
    Point alpha = 0;
    std::vector<WordElement> elements;  // distinct images of alpha, fixing earlier points
};

struct StabilizerChain {
    Point degree = 0;
    std::vector<ChainLevel> levels;

    std::vector<Point> points() const {
        std::vector<Point> out;
        for (const auto& l : levels) out.push_back(l.alpha);
        return out;
    }
    std::vector<std::size_t> orbit_sizes() const {
        std::vector<std::size_t> out;
        for (const auto& l : levels) out.push_back(l.elements.size());
        return out;
    }

    void validate() const {
        for (std::size_t i = 0; i < levels.size(); ++i) {
            std::unordered_set<Point> images;
            for (const auto& w : levels[i].elements) {
                for (std::size_t j = 0; j < i; ++j)
                    if (w.perm.apply(levels[j].alpha) != levels[j].alpha)
                        throw InvariantViolation(
                            "chain level element moves an earlier base point");
                if (!images.insert(w.perm.apply(levels[i].alpha)).second)
                    throw InvariantViolation("duplicate image in chain level");
            }
        }
    }
};

// Chain over a materialized set: level i keeps one ball element per distinct
// image of alpha_i among elements fixing alpha_1..alpha_{i-1} pointwise
// (first in BFS order wins).
inline StabilizerChain make_chain(const Ball& a, const std::vector<Point>& points) {
    StabilizerChain chain;
    chain.degree = a.degree();
    {
        std::unordered_set<Point> uniq(points.begin(), points.end());
        if (uniq.size() != points.size())
            throw ParamError("chain points must be distinct");
    }
    std::vector<Point> fixed;
    for (Point alpha : points) {
        ChainLevel level;
        level.alpha = alpha;
        std::unordered_set<Point> images;
        for (std::size_t i = 0; i < a.size(); ++i) {
            const Permutation& g = a.perm_at(i);
            bool ok = true;
            for (Point f : fixed)
                if (g.apply(f) != f) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            if (images.insert(g.apply(alpha)).second)
                level.elements.push_back(a.element_at(i));
        }
        chain.levels.push_back(std::move(level));
        fixed.push_back(alpha);
    }
    chain.validate();
    return chain;
}

// Number of distinct images of (alpha_1..alpha_m) under products
// s_m s_{m-1} ... s_1 over S_1 x ... x S_m. Streams image tuples without
// materializing permutations once the product count passes the limit
// (the tuple route is always used; it is equivalent and cheaper).
inline Big coset_occupancy(const StabilizerChain& chain,
                           std::size_t hard_cap = 50'000'000) {
    if (chain.levels.empty()) return 1;
    Big total = 1;
    for (const auto& l : chain.levels) total *= Big(l.elements.size());
    if (total > hard_cap)
        throw BudgetError("coset occupancy product space too large");

    const std::size_t m = chain.levels.size();
    std::vector<std::size_t> idx(m, 0);
    std::unordered_set<std::vector<Point>, TupleHash> keys;
    for (;;) {
        std::vector<Point> img;
        img.reserve(m);
        for (std::size_t j = 0; j < m; ++j) {
            Point a = chain.levels[j].alpha;
            // product s_m ... s_1 acts: s_m first, then down to s_1
            for (std::size_t t = m; t-- > 0;)
                a = chain.levels[t].elements[idx[t]].perm.apply(a);
            img.push_back(a);
        }
        keys.insert(std::move(img));
        std::size_t j = 0;
        while (j < m && ++idx[j] == chain.levels[j].elements.size()) {
            idx[j] = 0;
            ++j;
        }
        if (j == m) break;
    }
    return Big(keys.size());
}

struct BaseSizeReport {
    bool is_base = false;   // (A A^{-1})_{(Sigma)} == {e}
    double bound = 0.0;     // log_n |A|
    std::size_t sigma_size = 0;
    bool ineq = false;      // |Sigma| >= bound (only meaningful when base)
};

inline BaseSizeReport base_size_bound(const Ball& a, const PointSet& sigma) {
    BaseSizeReport r;
    r.sigma_size = sigma.size();
    bool trivial = true;
    for (std::size_t i = 0; i < a.size() && trivial; ++i)
        for (std::size_t j = 0; j < a.size(); ++j) {
            Permutation p = compose(a.perm_at(i), inverse(a.perm_at(j)));
            if (fixes_pointwise(p, sigma) && !p.is_identity()) {
                trivial = false;
                break;
            }
        }
    r.is_base = trivial;
    r.bound = a.degree() <= 1
                  ? 0.0
                  : std::log(static_cast<double>(a.size())) /
                        std::log(static_cast<double>(a.degree()));
    r.ineq = !r.is_base || static_cast<double>(r.sigma_size) >= r.bound - 1e-12;
    return r;
}

// Projection counts for the coset pigeonhole (subgroup-cosets lemma):
// |pi_{K/H}(A A^{-1} n K)| >= |pi_{G/H}(A)| / |pi_{G/K}(A)|.
struct CosetPigeonholeReport {
    Big proj_G_H = 0;       // cosets of H in G met by A
    Big proj_G_K = 0;       // cosets of K in G met by A
    Big proj_K_H = 0;       // cosets of H inside K met by A A^{-1} n K
    Big elements_in_K = 0;  // |A A^{-1} n K|
    bool ineq = false;
};

inline CosetPigeonholeReport coset_pigeonhole(const Ball& a,
                                              const SubgroupDesc& h,
                                              const SubgroupDesc& k) {
    if (!h.leq(k)) throw ParamError("coset_pigeonhole: H <= K not established");
    CosetPigeonholeReport r;
    std::unordered_set<std::vector<Point>, TupleHash> gh, gk, kh;
    std::unordered_set<Permutation, PermHash> in_k;
    for (std::size_t i = 0; i < a.size(); ++i) {
        gh.insert(h.coset_key(a.perm_at(i)));
        gk.insert(k.coset_key(a.perm_at(i)));
    }
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) {
            Permutation p = compose(a.perm_at(i), inverse(a.perm_at(j)));
            if (!k.contains(p)) continue;
            kh.insert(h.coset_key(p));
            in_k.insert(std::move(p));
        }
    r.proj_G_H = Big(gh.size());
    r.proj_G_K = Big(gk.size());
    r.proj_K_H = Big(kh.size());
    r.elements_in_K = Big(in_k.size());
    r.ineq = r.proj_K_H * r.proj_G_K >= r.proj_G_H;
    return r;
}

}  // namespace permgrow
