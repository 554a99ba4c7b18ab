#pragma once

#include <cstdint>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "permgrow/errors.hpp"
#include "permgrow/perm.hpp"

namespace permgrow {

constexpr std::size_t kClosureCap = 1'000'000;

// Brute-force group closure: repeated multiplication to a fixpoint. This is
// the ground-truth oracle for every "decided by closure at desk scale" step.
// Output order is deterministic (BFS over the input order).
inline std::vector<Permutation> closure(const std::vector<Permutation>& gens,
                                        std::size_t cap = kClosureCap) {
    if (gens.empty()) return {};
    const Point n = gens[0].degree();
    for (const auto& g : gens)
        if (g.degree() != n) throw DegreeError("closure: mixed degrees");
    std::vector<Permutation> elems;
    std::unordered_set<Permutation, PermHash> seen;
    elems.push_back(Permutation::identity(n));
    seen.insert(elems[0]);
    for (std::size_t i = 0; i < elems.size(); ++i) {
        for (const auto& g : gens) {
            Permutation next = compose(elems[i], g);
            if (seen.insert(next).second) {
                if (elems.size() >= cap)
                    throw BudgetError("closure exceeds cap " + std::to_string(cap));
                elems.push_back(std::move(next));
            }
        }
    }
    return elems;
}

inline Big factorial(Point n) {
    Big f = 1;
    for (Point i = 2; i <= n; ++i) f *= i;
    return f;
}

// Orbit of a point under repeated application of a set (equals the orbit
// under the generated group since the group is finite).
inline std::vector<Point> orbit_points(const std::vector<Permutation>& gens,
                                       Point start) {
    std::vector<Point> orb{start};
    std::unordered_set<Point> seen{start};
    for (std::size_t i = 0; i < orb.size(); ++i)
        for (const auto& g : gens) {
            Point b = g.apply(orb[i]);
            if (seen.insert(b).second) orb.push_back(b);
        }
    std::sort(orb.begin(), orb.end());
    return orb;
}

inline std::vector<std::vector<Point>> orbits(
    const std::vector<Permutation>& gens, Point degree) {
    std::vector<bool> done(degree, false);
    std::vector<std::vector<Point>> out;
    for (Point a = 1; a <= degree; ++a) {
        if (done[a - 1]) continue;
        auto orb = orbit_points(gens, a);
        for (Point b : orb) done[b - 1] = true;
        out.push_back(std::move(orb));
    }
    return out;
}

inline bool is_transitive(const std::vector<Permutation>& gens, Point degree) {
    if (degree == 0) return true;
    return orbit_points(gens, 1).size() == degree;
}

// Orbit of an ordered tuple of distinct points.
inline std::vector<std::vector<Point>> tuple_orbit(
    const std::vector<Permutation>& gens, const std::vector<Point>& start) {
    struct VecHash {
        std::size_t operator()(const std::vector<Point>& v) const {
            std::size_t h = 0xcbf29ce484222325ULL;
            for (Point x : v) {
                h ^= x;
                h *= 0x100000001b3ULL;
            }
            return h;
        }
    };
    std::vector<std::vector<Point>> orb{start};
    std::unordered_set<std::vector<Point>, VecHash> seen{start};
    for (std::size_t i = 0; i < orb.size(); ++i)
        for (const auto& g : gens) {
            std::vector<Point> next(orb[i].size());
            for (std::size_t j = 0; j < next.size(); ++j)
                next[j] = g.apply(orb[i][j]);
            if (seen.insert(next).second) orb.push_back(std::move(next));
        }
    return orb;
}

// k-transitivity on a domain: the orbit of one ordered k-tuple of distinct
// domain points must reach all of them.
inline bool is_k_transitive_on(const std::vector<Permutation>& gens,
                               const std::vector<Point>& domain, unsigned k) {
    if (domain.size() < k || k == 0) return domain.size() >= k;
    std::vector<Point> start(domain.begin(), domain.begin() + k);
    Big want = 1;
    for (unsigned i = 0; i < k; ++i) want *= Big(domain.size() - i);
    auto orb = tuple_orbit(gens, start);
    // tuples must also stay inside the domain; reaching the full count
    // forces that when the domain is invariant
    return Big(orb.size()) == want;
}

// Minimal block system of a transitive action containing {a, b}
// (Atkinson's algorithm via union-find).
inline std::vector<Point> minimal_block_classes(
    const std::vector<Permutation>& gens, Point degree, Point a, Point b) {
    std::vector<Point> parent(degree + 1);
    for (Point i = 0; i <= degree; ++i) parent[i] = i;
    auto find = [&](Point x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    std::vector<std::pair<Point, Point>> queue;
    auto unite = [&](Point x, Point y) {
        x = find(x);
        y = find(y);
        if (x == y) return;
        if (x > y) std::swap(x, y);
        parent[y] = x;
        queue.emplace_back(x, y);
    };
    unite(a, b);
    for (std::size_t i = 0; i < queue.size(); ++i) {
        auto [x, y] = queue[i];
        for (const auto& g : gens) unite(g.apply(x), g.apply(y));
    }
    std::vector<Point> cls(degree);
    for (Point i = 1; i <= degree; ++i) cls[i - 1] = find(i);
    return cls;
}

inline bool is_primitive(const std::vector<Permutation>& gens, Point degree) {
    if (!is_transitive(gens, degree)) return false;
    if (degree <= 2) return true;
    for (Point b = 2; b <= degree; ++b) {
        auto cls = minimal_block_classes(gens, degree, 1, b);
        Point root = cls[0];
        bool full = true;
        for (Point i = 1; i <= degree; ++i)
            if (cls[i - 1] != root) {
                full = false;
                break;
            }
        if (!full) return false;  // nontrivial block system found
    }
    return true;
}

// A subgroup of Sym(n) of order >= n!/2 is Alt(n) or Sym(n).
inline bool group_contains_alt(const std::vector<Permutation>& group_elems,
                               Point degree) {
    return Big(group_elems.size()) * 2 >= factorial(degree);
}

// Whether <set> >= Alt(degree). A set of >= n!/2 distinct elements settles it
// without computing the closure.
inline bool generates_at_least_alt(const std::vector<Permutation>& set,
                                   Point degree,
                                   std::size_t cap = kClosureCap) {
    std::unordered_set<Permutation, PermHash> uniq(set.begin(), set.end());
    Big half = factorial(degree) / 2;
    if (Big(uniq.size()) >= half) return true;
    std::vector<Permutation> gens(uniq.begin(), uniq.end());
    return Big(closure(gens, cap).size()) >= half;
}

inline bool group_is_sym(const std::vector<Permutation>& group_elems,
                         Point degree) {
    return Big(group_elems.size()) == factorial(degree);
}

}  // namespace permgrow
