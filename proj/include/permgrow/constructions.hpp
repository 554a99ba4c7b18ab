#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "permgrow/closure.hpp"
#include "permgrow/errors.hpp"
#include "permgrow/orbit.hpp"
#include "permgrow/perm.hpp"
#include "permgrow/wordset.hpp"

namespace permgrow {

// --- 3-cycle certificates -------------------------------------------------

// cycle = [g,h], or [[g,h],h2] when two_step is set. Lengths of builders add
// with multiplicity 2 per commutator level.
struct ThreeCycleCertificate {
    Permutation cycle;
    WordElement g;
    WordElement h;
    std::optional<WordElement> h2;
    bool two_step = false;
    int case_fired = 0;  // 0 = trivializing-set commutator, 1..4 = restriction case analysis
    Big total_length = 0;

    Permutation reevaluate() const {
        Permutation x = commutator(g.perm, h.perm);
        if (two_step) x = commutator(x, h2->perm);
        return x;
    }

    Big expected_length() const {
        Big inner = 2 * g.length_bound + 2 * h.length_bound;
        if (!two_step) return inner;
        return 2 * inner + 2 * h2->length_bound;
    }

    void verify() const {
        if (reevaluate() != cycle)
            throw InvariantViolation("certificate does not reproduce its cycle");
        auto ct = cycle_type(cycle);
        if (ct.lengths != std::vector<Point>{3})
            throw InvariantViolation("certificate element is not a 3-cycle");
        if (total_length != expected_length())
            throw InvariantViolation("certificate length ledger mismatch");
    }

    // The cycle as a word element over the builders' base set.
    WordElement as_word_element() const {
        WordElement inner = product_bound(
            product_bound(inverse_bound(g), inverse_bound(h)),
            product_bound(g, h));
        if (!two_step) return inner;
        return product_bound(
            product_bound(inverse_bound(inner), inverse_bound(*h2)),
            product_bound(inner, *h2));
    }
};

// --- trivial-stabilizer sets (Bochert machinery) ----------------------------

struct TrivialStabSet {
    PointSet delta;
    bool exact_minimum = false;  // exhaustive search (n <= 8) vs greedy
};

namespace detail {

inline bool pointwise_stab_trivial(const std::vector<Permutation>& set,
                                   const std::vector<Point>& delta) {
    for (const auto& g : set) {
        if (g.is_identity()) continue;
        bool fixes = true;
        for (Point a : delta)
            if (g.apply(a) != a) {
                fixes = false;
                break;
            }
        if (fixes) return false;
    }
    return true;
}

// subsets of {1..n} of given size in lexicographic order
inline bool next_combination(std::vector<Point>& c, Point n) {
    const std::size_t k = c.size();
    std::size_t i = k;
    while (i-- > 0) {
        if (c[i] < n - (k - 1 - i)) {
            ++c[i];
            for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
            return true;
        }
    }
    return false;
}

}  // namespace detail

// Smallest (n <= 8: exact; else greedy, then pruned to inclusion-minimal)
// Delta with (A2)_{(Delta)} = {e}, where A2 is a materialized set.
inline TrivialStabSet greedy_trivial_stab_set(const std::vector<Permutation>& a2,
                                              Point n) {
    TrivialStabSet out;
    if (detail::pointwise_stab_trivial(a2, {})) {
        out.delta = PointSet(n, {});
        out.exact_minimum = true;
        return out;
    }
    if (n <= 8) {
        for (Point k = 1; k <= n; ++k) {
            std::vector<Point> c(k);
            std::iota(c.begin(), c.end(), Point{1});
            do {
                if (detail::pointwise_stab_trivial(a2, c)) {
                    out.delta = PointSet(n, c);
                    out.exact_minimum = true;
                    return out;
                }
            } while (detail::next_combination(c, n));
        }
        throw InvariantViolation("no trivializing set although Delta=[n] works");
    }
    // greedy: repeatedly add the first point moved by a surviving element
    std::vector<Point> delta;
    for (;;) {
        const Permutation* bad = nullptr;
        for (const auto& g : a2) {
            if (g.is_identity()) continue;
            bool fixes = true;
            for (Point a : delta)
                if (g.apply(a) != a) {
                    fixes = false;
                    break;
                }
            if (fixes) {
                bad = &g;
                break;
            }
        }
        if (!bad) break;
        for (Point a = 1; a <= n; ++a)
            if (bad->apply(a) != a) {
                delta.push_back(a);
                break;
            }
        std::sort(delta.begin(), delta.end());
    }
    // prune to inclusion-minimal
    for (std::size_t i = 0; i < delta.size();) {
        std::vector<Point> trial = delta;
        trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(i));
        if (detail::pointwise_stab_trivial(a2, trial))
            delta = std::move(trial);
        else
            ++i;
    }
    out.delta = PointSet(n, delta);
    out.exact_minimum = false;
    return out;
}

inline TrivialStabSet greedy_trivial_stab_set(const Ball& a2) {
    return greedy_trivial_stab_set(a2.element_set(), a2.degree());
}

namespace detail {

// First pair of ball elements sharing an image tuple on `pts`; returns the
// non-identity quotient a b^{-1} which fixes `pts` pointwise.
inline std::optional<WordElement> collision_stabilizer(
    const Ball& a, const std::vector<Point>& pts) {
    std::vector<std::pair<std::vector<Point>, std::size_t>> keyed;
    keyed.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::vector<Point> key;
        key.reserve(pts.size());
        for (Point p : pts) key.push_back(a.perm_at(i).apply(p));
        keyed.emplace_back(std::move(key), i);
    }
    std::sort(keyed.begin(), keyed.end());
    for (std::size_t i = 1; i < keyed.size(); ++i) {
        if (keyed[i].first != keyed[i - 1].first) continue;
        auto x = a.element_at(keyed[i - 1].second);
        auto y = a.element_at(keyed[i].second);
        // first collision in sorted order wins
        return product_bound(x, inverse_bound(y));
    }
    return std::nullopt;
}

}  // namespace detail

// The commutator 3-cycle of Bochert's argument: builders g, h found in A^2
// with supp(g) n supp(h) = {delta}; total length <= 8 max element length.
inline ThreeCycleCertificate bochert_three_cycle(const Ball& a) {
    const Point n = a.degree();
    if (n < 5) throw ParamError("bochert_three_cycle requires n >= 5");
    if (Big(a.size()) * factorial(n / 2) <= factorial(n))
        throw TooSmallError("|A| <= n!/(floor(n/2)!)");
    if (!is_primitive(a.element_set(), n))
        throw ParamError("<A> is not primitive");

    // A^2 as a plain element set, for the minimal trivializing Delta
    std::vector<Permutation> a2;
    {
        std::unordered_set<Permutation, PermHash> seen;
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < a.size(); ++j) {
                Permutation p = compose(a.perm_at(i), a.perm_at(j));
                if (seen.insert(p).second) a2.push_back(std::move(p));
            }
    }
    auto tset = greedy_trivial_stab_set(a2, n);
    const PointSet& delta_set = tset.delta;
    const PointSet omega = delta_set.complement();

    auto g = detail::collision_stabilizer(a, omega.members());
    if (!g)
        throw InvariantViolation("no pigeonhole pair over Omega despite k > n/2");
    Point moved = 0;
    for (Point p : delta_set.members())
        if (g->perm.apply(p) != p) {
            moved = p;
            break;
        }
    if (!moved) throw InvariantViolation("stabilizer element fixes all of Delta");

    std::vector<Point> delta_minus;
    for (Point p : delta_set.members())
        if (p != moved) delta_minus.push_back(p);
    auto h = detail::collision_stabilizer(a, delta_minus);
    if (!h)
        throw InvariantViolation("no pigeonhole pair over Delta minus delta");

    // supp(g) n supp(h) = {delta}, asserted before commutating
    auto sg = support(g->perm).members();
    auto sh = support(h->perm).members();
    std::vector<Point> inter;
    std::set_intersection(sg.begin(), sg.end(), sh.begin(), sh.end(),
                          std::back_inserter(inter));
    if (inter != std::vector<Point>{moved})
        throw InvariantViolation("supports do not meet in exactly one point");

    ThreeCycleCertificate cert;
    cert.g = *g;
    cert.h = *h;
    cert.cycle = commutator(g->perm, h->perm);
    cert.total_length = cert.expected_length();
    cert.case_fired = 0;
    cert.verify();
    return cert;
}

// --- spreading a 3-cycle over the conjugation orbit -------------------------

struct SpreadReport {
    std::size_t covered = 0;        // distinct 3-cycles reached
    std::size_t expected = 0;       // n(n-1)(n-2)/3
    std::size_t rounds = 0;
    Big max_conjugator_length = 0;
    Big even_word_bound = 0;        // floor(n/2)(2 conj + base cycle length)
    // conjugator word element per reached 3-cycle
    std::map<Permutation, WordElement> conjugators;
};

inline SpreadReport spread_three_cycles(const ThreeCycleCertificate& x,
                                        const Ball& a) {
    const Point n = a.degree();
    if (!generates_at_least_alt(a.element_set(), n))
        throw ParamError("<A> does not contain Alt(n)");

    SpreadReport rep;
    rep.expected = static_cast<std::size_t>(n) * (n - 1) * (n - 2) / 3;
    rep.conjugators.emplace(x.cycle, WordElement::identity_of(a.base()));
    std::vector<Permutation> frontier{x.cycle};
    while (!frontier.empty()) {
        std::vector<Permutation> next;
        for (const auto& c : frontier)
            for (std::size_t i = 0; i < a.size(); ++i) {
                Permutation cc = conjugate(c, a.perm_at(i));
                if (rep.conjugators.count(cc)) continue;
                rep.conjugators.emplace(
                    cc, product_bound(rep.conjugators.at(c), a.element_at(i)));
                next.push_back(std::move(cc));
            }
        if (!next.empty()) ++rep.rounds;
        frontier = std::move(next);
    }
    rep.covered = rep.conjugators.size();
    if (rep.covered < rep.expected) {
        // locate a missing 3-cycle for the error message
        for (Point i = 1; i <= n; ++i)
            for (Point j = 1; j <= n; ++j)
                for (Point k = 1; k <= n; ++k) {
                    if (i == j || j == k || i == k) continue;
                    auto c = Permutation::from_cycles(
                        "(" + std::to_string(i) + " " + std::to_string(j) + " " +
                            std::to_string(k) + ")",
                        n);
                    if (!rep.conjugators.count(c))
                        throw CoverageError("3-cycle " + c.to_cycle_string() +
                                            " not reached by conjugation");
                }
    }
    for (const auto& [c, w] : rep.conjugators)
        rep.max_conjugator_length = std::max(rep.max_conjugator_length, w.length_bound);
    rep.even_word_bound =
        Big(n / 2) * (2 * rep.max_conjugator_length + x.total_length);
    return rep;
}

// Even permutation as a product of at most floor(n/2) 3-cycles.
inline std::vector<Permutation> three_cycle_decomposition(const Permutation& p) {
    if (!p.is_even()) throw ParamError("permutation is odd");
    std::vector<Permutation> out;
    Permutation s = p;
    const Point n = p.degree();
    while (!s.is_identity()) {
        Point a = 0;
        for (Point i = 1; i <= n; ++i)
            if (s.apply(i) != i) {
                a = i;
                break;
            }
        Point b = s.apply(a);
        if (s.apply(b) != a) {
            // t = (c b a): s·t fixes both a and b
            Point c = s.apply(b);
            auto t = Permutation::from_cycles("(" + std::to_string(c) + " " +
                                                  std::to_string(b) + " " +
                                                  std::to_string(a) + ")",
                                              n);
            out.push_back(inverse(t));
            s = compose(s, t);
        } else {
            // s contains the 2-cycle (a b); merge it with a point of another
            // even-length cycle (one exists by parity), which turns the pair
            // into a single odd-length cycle
            std::vector<Point> kappa(n + 1, 1);
            for (const auto& cc : s.cycles())
                for (Point q : cc) kappa[q] = static_cast<Point>(cc.size());
            Point c = 0;
            for (Point i = 1; i <= n; ++i)
                if (i != a && i != b && s.apply(i) != i && kappa[i] % 2 == 0) {
                    c = i;
                    break;
                }
            if (!c) throw InvariantViolation("odd remainder in even decomposition");
            auto u = Permutation::from_cycles("(" + std::to_string(b) + " " +
                                                  std::to_string(a) + " " +
                                                  std::to_string(c) + ")",
                                              n);
            out.push_back(inverse(u));
            s = compose(s, u);
        }
    }
    // product out[0] out[1] ... equals p (apply out[0] first)
    std::reverse(out.begin(), out.end());
    if (out.size() > n / 2)
        throw InvariantViolation("3-cycle decomposition exceeds floor(n/2)");
    return out;
}

// Witness word for an even permutation: product of conjugated copies of the
// certificate cycle, one per 3-cycle of the decomposition. Length is at most
// floor(n/2) (2 max-conjugator + base certificate length).
inline WordElement express_even(const Permutation& target,
                                const ThreeCycleCertificate& x,
                                const SpreadReport& spread) {
    WordElement base = x.as_word_element();
    WordElement acc = WordElement::identity_of(base.base);
    for (const auto& t : three_cycle_decomposition(target)) {
        auto it = spread.conjugators.find(t);
        if (it == spread.conjugators.end())
            throw CoverageError("3-cycle " + t.to_cycle_string() +
                                " missing from the conjugation orbit");
        acc = product_bound(acc, conjugate_bound(base, it->second));
    }
    if (acc.perm != target)
        throw InvariantViolation("even-word synthesis mismatch");
    return acc;
}

// --- Liebeck-style 3-cycle from a Delta-supported element -------------------

namespace detail {

// first ball element whose restriction to delta equals `target` (a
// permutation of delta in ambient labels); requires delta-invariance
inline std::optional<WordElement> find_with_restriction(
    const Ball& a, const PointSet& delta, const Permutation& target) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        const Permutation& g = a.perm_at(i);
        if (!delta.is_invariant_under(g)) continue;
        bool match = true;
        for (Point p : delta.members())
            if (g.apply(p) != target.apply(p)) {
                match = false;
                break;
            }
        if (match) return a.element_at(i);
    }
    return std::nullopt;
}

inline Permutation ambient_cycle(const std::vector<Point>& pts, Point n) {
    std::string s = "(";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i) s += ' ';
        s += std::to_string(pts[i]);
    }
    s += ')';
    return Permutation::from_cycles(s, n);
}

}  // namespace detail

// Four-case analysis producing a 3-cycle supported in Delta from a
// non-identity g supported in Delta, given that the ball's restrictions
// provide Alt(Delta) (checked at desk scale by closure).
inline ThreeCycleCertificate liebeck_three_cycle(const WordElement& g,
                                                 const Ball& a_prime,
                                                 const PointSet& delta) {
    const Point n = a_prime.degree();
    if (delta.size() < 7) throw TooSmallDeltaError("|Delta| must be >= 7");
    if (!fixes_pointwise(g.perm, delta.complement()))
        throw ParamError("g must fix the complement of Delta pointwise");
    if (fixes_pointwise(g.perm, delta))
        throw ParamError("g must act nontrivially on Delta");

    // Alt(Delta) availability: restrictions of invariant elements generate
    // at least Alt(Delta)
    {
        std::vector<Permutation> restr;
        for (std::size_t i = 0; i < a_prime.size(); ++i)
            if (delta.is_invariant_under(a_prime.perm_at(i)))
                restr.push_back(restrict(a_prime.perm_at(i), delta));
        if (!generates_at_least_alt(restr, static_cast<Point>(delta.size())))
            throw NotFullGroupError("A'|_Delta does not contain Alt(Delta)");
    }

    // cycle structure of g within Delta (ambient labels)
    std::vector<Point> fixed_in_delta;
    for (Point p : delta.members())
        if (g.perm.apply(p) == p) fixed_in_delta.push_back(p);
    auto cycles = g.perm.cycles();  // all within Delta by the precondition

    ThreeCycleCertificate cert;
    cert.g = g;

    auto finish_commutator = [&](const Permutation& target_restriction,
                                 int case_id) {
        auto h = detail::find_with_restriction(a_prime, delta, target_restriction);
        if (!h)
            throw InvariantViolation(
                "no ball element realizes the prescribed restriction");
        cert.h = *h;
        cert.cycle = commutator(cert.g.perm, cert.h.perm);
        cert.case_fired = case_id;
        cert.total_length = cert.expected_length();
    };

    if (fixed_in_delta.size() >= 2) {
        // case 1: 3-cycle through one moved point and two fixed points
        Point alpha = 0;
        for (Point p : delta.members())
            if (g.perm.apply(p) != p) {
                alpha = p;
                break;
            }
        finish_commutator(detail::ambient_cycle(
                              {alpha, fixed_in_delta[0], fixed_in_delta[1]}, n),
                          1);
    } else {
        const std::vector<Point>* long_cycle = nullptr;
        for (const auto& c : cycles)
            if (c.size() >= 4) {
                long_cycle = &c;
                break;
            }
        if (long_cycle) {
            // case 2: cycle (a b g d ...) and h = (a b g) give [g,h] = (a b d)
            const auto& c = *long_cycle;
            finish_commutator(detail::ambient_cycle({c[0], c[1], c[2]}, n), 2);
            if (cert.cycle != detail::ambient_cycle({c[0], c[1], c[3]}, n))
                throw InvariantViolation("case 2 produced an unexpected cycle");
        } else {
            std::vector<const std::vector<Point>*> threes, twos;
            for (const auto& c : cycles) {
                if (c.size() == 3) threes.push_back(&c);
                if (c.size() == 2) twos.push_back(&c);
            }
            if (threes.size() >= 2) {
                // case 3: cycles (a b g), (d e v); h = (a e)(b d g v)
                const auto& c1 = *threes[0];
                const auto& c2 = *threes[1];
                Permutation target = compose(
                    detail::ambient_cycle({c1[0], c2[1]}, n),
                    detail::ambient_cycle({c1[1], c2[0], c1[2], c2[2]}, n));
                finish_commutator(target, 3);
                if (cert.cycle !=
                    detail::ambient_cycle({c2[0], c2[1], c2[2]}, n))
                    throw InvariantViolation("case 3 produced an unexpected cycle");
            } else if (twos.size() >= 2) {
                // case 4: 2-cycles (a b), (g d); first commutator has support
                // {a,b,g,d}, then the case-1 trick applies to it
                const auto& c1 = *twos[0];
                const auto& c2 = *twos[1];
                auto h = detail::find_with_restriction(
                    a_prime, delta,
                    detail::ambient_cycle({c1[0], c1[1], c2[0]}, n));
                if (!h)
                    throw InvariantViolation(
                        "no ball element realizes the prescribed restriction");
                cert.h = *h;
                Permutation c = commutator(g.perm, h->perm);
                std::vector<Point> expected{c1[0], c1[1], c2[0], c2[1]};
                std::sort(expected.begin(), expected.end());
                if (support(c).members() != expected)
                    throw InvariantViolation("case 4 inner support unexpected");
                Point alpha = 0;
                std::vector<Point> fixed2;
                for (Point p : delta.members()) {
                    if (c.apply(p) != p && !alpha) alpha = p;
                    if (c.apply(p) == p) fixed2.push_back(p);
                }
                if (fixed2.size() < 2)
                    throw InvariantViolation("case 4 lacks fixed points");
                auto h2 = detail::find_with_restriction(
                    a_prime, delta,
                    detail::ambient_cycle({alpha, fixed2[0], fixed2[1]}, n));
                if (!h2)
                    throw InvariantViolation(
                        "no ball element realizes the prescribed restriction");
                cert.h2 = *h2;
                cert.two_step = true;
                cert.cycle = commutator(c, h2->perm);
                cert.case_fired = 4;
                cert.total_length = cert.expected_length();
            } else {
                // |Delta| >= 7 makes the four cases exhaustive
                throw InvariantViolation("restriction case analysis fell through");
            }
        }
    }

    cert.verify();
    if (!fixes_pointwise(cert.cycle, delta.complement()))
        throw InvariantViolation("output moves a point outside Delta");
    return cert;
}

// --- small-support elements via prime cycle types ----------------------------

struct PrimeCycleWitness {
    std::vector<Point> primes;  // p1, p2, ..., pk (p1 = 2 used twice)
    Big prime_product = 0;
    Big prime_product_target = 0;
    Point budget = 0;  // 2 p1 + p2 + ... + pk
    WordElement h;
    Point chosen_prime = 0;
    WordElement g;  // h^{|h|/p}
    double budget_sum_lhs = 0;  // sum_i |Gamma_i| log p_i
    double budget_sum_rhs = 0;  // |Gamma| log n
    std::vector<std::size_t> gamma_divisor_counts;  // |Gamma_i| per prime
    std::size_t support_in_gamma = 0;

    void verify(const PointSet& delta, const PointSet& gamma) const {
        if (Big(budget) > Big(delta.size()))
            throw InvariantViolation("prime budget exceeds |Delta|");
        if (prime_product <= prime_product_target)
            throw InvariantViolation("prime product below target");
        Big ord = order(h.perm);
        if (power(h.perm, ord / chosen_prime) != g.perm)
            throw InvariantViolation("g != h^{|h|/p}");
        std::size_t supp = 0;
        for (Point p : gamma.members())
            if (g.perm.apply(p) != p) ++supp;
        if (supp * 4 >= gamma.size())
            throw InvariantViolation("support in Gamma not below |Gamma|/4");
        if (fixes_pointwise(g.perm, delta))
            throw InvariantViolation("g restricted to Delta is trivial");
    }
};

inline std::vector<Point> primes_with_product_above(const Big& target) {
    std::vector<Point> primes;
    Big prod = 1;
    Point candidate = 2;
    while (prod <= target) {
        bool is_prime = candidate >= 2;
        for (Point d = 2; d * d <= candidate; ++d)
            if (candidate % d == 0) {
                is_prime = false;
                break;
            }
        if (is_prime) {
            primes.push_back(candidate);
            prod *= candidate;
        }
        ++candidate;
    }
    return primes;
}

struct SmallSupportOptions {
    // the asymptotic construction needs a product above n^4; desk-scale
    // instances may override the target
    std::optional<Big> prime_product_target;
    std::size_t closure_cap = kClosureCap;
};

inline PrimeCycleWitness small_support_element(const GenSet& h_gens,
                                               const PointSet& delta,
                                               const PointSet& gamma,
                                               SmallSupportOptions opts = {}) {
    const Point n = h_gens.degree();
    if (delta.degree() != n || gamma.degree() != n)
        throw DegreeError("small_support_element: degree mismatch");
    Big target = opts.prime_product_target
                     ? *opts.prime_product_target
                     : Big(n) * Big(n) * Big(n) * Big(n);

    PrimeCycleWitness wit;
    wit.primes = primes_with_product_above(target);
    wit.prime_product_target = target;
    wit.prime_product = 1;
    for (Point p : wit.primes) wit.prime_product *= p;
    wit.budget = wit.primes.front();  // the extra p1 = 2
    for (Point p : wit.primes) wit.budget += p;
    if (wit.budget > delta.size())
        throw DeltaTooSmallError("prime budget " + std::to_string(wit.budget) +
                                 " exceeds |Delta| = " +
                                 std::to_string(delta.size()));

    // Delta must be invariant; Gamma must be an orbit of <H>
    for (const auto& g : h_gens.generators())
        if (!delta.is_invariant_under(g))
            throw ParamError("Delta is not invariant under H");
    {
        auto orb = orbit_points(h_gens.generators(), gamma.members().front());
        if (orb != gamma.members())
            throw ParamError("Gamma is not an orbit of <H>");
    }
    // Alt(Delta) availability on restrictions, decided by closure
    {
        std::vector<Permutation> restr;
        for (const auto& g : h_gens.generators())
            restr.push_back(restrict(g, delta));
        if (!generates_at_least_alt(restr, static_cast<Point>(delta.size()),
                                    opts.closure_cap))
            throw NotFullGroupError("H|_Delta does not contain Alt(Delta)");
    }

    // target cycle type (p1, p1, p2, ..., pk) laid over the sorted points of
    // Delta, everything else in Delta fixed
    Permutation target_restriction;
    {
        std::vector<Point> img(n);
        std::iota(img.begin(), img.end(), Point{1});
        std::size_t pos = 0;
        const auto& pts = delta.members();
        auto lay = [&](Point len) {
            for (Point i = 0; i < len; ++i)
                img[pts[pos + i] - 1] = pts[pos + (i + 1) % len];
            pos += len;
        };
        lay(wit.primes.front());
        for (Point p : wit.primes) lay(p);
        target_restriction = Permutation::from_images(std::move(img));
    }

    // find h in <H> with the prescribed restriction, with a witness word
    GenSet sym = h_gens.symmetric_closed() && h_gens.contains_identity()
                     ? h_gens
                     : h_gens.symmetrized();
    Ball group_ball = Ball::expand(sym, Big(opts.closure_cap), opts.closure_cap);
    if (group_ball.truncated())
        throw BudgetError("group enumeration exceeds closure cap");
    std::optional<WordElement> h;
    for (std::size_t i = 0; i < group_ball.size(); ++i) {
        const Permutation& cand = group_ball.perm_at(i);
        if (!delta.is_invariant_under(cand)) continue;
        bool match = true;
        for (Point p : delta.members())
            if (cand.apply(p) != target_restriction.apply(p)) {
                match = false;
                break;
            }
        if (match) {
            h = group_ball.element_at(i);
            break;
        }
    }
    if (!h)
        throw InvariantViolation(
            "no element realizes the prime cycle type although Alt(Delta) is "
            "available");
    wit.h = *h;

    // divisor orbits over Gamma
    std::vector<Point> kappa(n + 1, 1);
    for (const auto& c : wit.h.perm.cycles())
        for (Point p : c) kappa[p] = static_cast<Point>(c.size());
    wit.gamma_divisor_counts.assign(wit.primes.size(), 0);
    for (std::size_t i = 0; i < wit.primes.size(); ++i)
        for (Point p : gamma.members())
            if (kappa[p] % wit.primes[i] == 0) ++wit.gamma_divisor_counts[i];

    wit.budget_sum_lhs = 0;
    for (std::size_t i = 0; i < wit.primes.size(); ++i)
        wit.budget_sum_lhs += static_cast<double>(wit.gamma_divisor_counts[i]) *
                              std::log(static_cast<double>(wit.primes[i]));
    wit.budget_sum_rhs = static_cast<double>(gamma.size()) *
                         std::log(static_cast<double>(n));
    if (wit.budget_sum_lhs >= wit.budget_sum_rhs)
        throw InvariantViolation("divisor budget sum reaches |Gamma| log n");

    // first prime with a small divisor orbit and a nontrivial power on Delta
    Big ord = order(wit.h.perm);
    for (std::size_t i = 0; i < wit.primes.size(); ++i) {
        if (4 * wit.gamma_divisor_counts[i] >= gamma.size()) continue;
        Permutation cand = power(wit.h.perm, ord / wit.primes[i]);
        if (fixes_pointwise(cand, delta)) continue;
        wit.chosen_prime = wit.primes[i];
        wit.g.perm = std::move(cand);
        break;
    }
    if (!wit.chosen_prime)
        throw HypothesisError(
            "no prime has both a small divisor orbit and a nontrivial power on "
            "Delta");

    wit.g.base = wit.h.base;
    wit.g.length_bound = wit.h.length_bound * (ord / wit.chosen_prime);
    if (ord / wit.chosen_prime <= 1000 && wit.h.witness) {
        Word w;
        const Big reps = ord / wit.chosen_prime;
        for (Big r = 0; r < reps; ++r)
            w.insert(w.end(), wit.h.witness->begin(), wit.h.witness->end());
        wit.g.witness = std::move(w);
    }
    wit.support_in_gamma = 0;
    for (Point p : gamma.members())
        if (wit.g.perm.apply(p) != p) ++wit.support_in_gamma;

    wit.verify(delta, gamma);
    return wit;
}

// --- large orbits and alternating sections ----------------------------------

struct LargeOrbitReport {
    bool bound_met = false;       // |<A>| >= d^n n!
    Big closure_order = 0;
    double threshold = 0;         // d^n n!
    PointSet orbit;               // a witness orbit of length >= d n (if met)
    bool lieb_checked = false;
    bool lieb_holds = false;      // <A>|_Delta is Alt or Sym on the orbit
};

inline LargeOrbitReport large_orbit_check(const Ball& a, double d,
                                          bool check_lieb = true) {
    if (!(d > 0.5 && d < 1)) throw ParamError("d must lie in (0.5, 1)");
    const Point n = a.degree();
    LargeOrbitReport rep;
    auto cl = closure(a.element_set());
    rep.closure_order = Big(cl.size());
    rep.threshold = std::pow(d, n) * factorial(n).convert_to<double>();
    rep.bound_met =
        static_cast<double>(cl.size()) >= rep.threshold - 1e-9;
    if (!rep.bound_met) return rep;

    auto orbs = orbits(a.element_set(), n);
    const std::vector<Point>* best = nullptr;
    for (const auto& o : orbs)
        if (!best || o.size() > best->size()) best = &o;
    if (!best || static_cast<double>(best->size()) < d * n - 1e-9)
        throw InvariantViolation(
            "size hypothesis met but no orbit of length >= d n exists");
    rep.orbit = PointSet(n, *best);

    if (check_lieb) {
        rep.lieb_checked = true;
        std::vector<Permutation> restr;
        for (const auto& g : cl) restr.push_back(restrict(g, rep.orbit));
        std::unordered_set<Permutation, PermHash> uniq(restr.begin(), restr.end());
        Big half = factorial(static_cast<Point>(rep.orbit.size())) / 2;
        rep.lieb_holds = Big(uniq.size()) >= half;
    }
    return rep;
}

struct AltSectionReport {
    PointSet delta;                    // Delta subset Sigma, |Delta| >= d|Sigma|
    std::vector<WordElement> section;  // restrictions generate >= Alt(Delta)
    Big occupancy = 0;                 // distinct image tuples of the chain
    double occupancy_threshold = 0;    // (d n)^m, the operative hypothesis
    bool orbit_condition_met = false;  // every r_i >= d n (informational)
    bool occupancy_waived = false;     // hypothesis failed but was waived
    CosetPigeonholeReport pigeonhole;  // projections into the setwise stabilizer
    double projection_threshold = 0;   // d^m m!
    bool cd_constant_waived = true;    // C(d) of the lemma is not computed
    Big power_radius = 0;              // 16 m^6 (materialized up to fixpoint)
};

// Expands the ball A^r where the elements of `a` act as generators; words
// over the original base are substituted in, so lengths stay honest. A ball
// already closed under expansion is the whole group, so A^r = A.
inline std::vector<WordElement> power_ball_elements(const Ball& a, const Big& r,
                                                    std::size_t cap = kDefaultBallCap) {
    if (a.closed() || r <= 1) {
        std::vector<WordElement> out;
        out.reserve(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a.element_at(i));
        return out;
    }
    GenSet elem_gens(a.degree(), a.element_set());
    Ball p = Ball::expand(elem_gens, r, cap);
    if (p.truncated()) throw BudgetError("power ball exceeds cap");
    std::vector<WordElement> out;
    out.reserve(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        Word over_elems = p.word_at(i);
        WordElement acc = WordElement::identity_of(a.base());
        for (std::int32_t s : over_elems) {
            std::size_t idx = static_cast<std::size_t>(s > 0 ? s : -s) - 1;
            auto base_idx = a.find(elem_gens.generators()[idx]);
            WordElement w = a.element_at(static_cast<std::size_t>(base_idx));
            acc = product_bound(acc, s > 0 ? w : inverse_bound(w));
        }
        out.push_back(std::move(acc));
    }
    return out;
}

// Alt(Delta) inside the setwise stabilizer of the chain's point set,
// following the occupancy -> pigeonhole -> Liebeck route at desk scale.
inline AltSectionReport setwise_alt_section(const Ball& a,
                                            const StabilizerChain& chain,
                                            double d,
                                            bool waive_occupancy = false) {
    const Point n = a.degree();
    if (chain.levels.empty()) throw ParamError("empty chain");
    const std::size_t m = chain.levels.size();

    AltSectionReport rep;
    rep.orbit_condition_met = true;
    for (const auto& l : chain.levels)
        if (static_cast<double>(l.elements.size()) < d * n - 1e-9)
            rep.orbit_condition_met = false;
    // the operative hypothesis is the occupancy bound; C(d) stays waived
    rep.occupancy = coset_occupancy(chain);
    rep.occupancy_threshold = std::pow(d * n, static_cast<double>(m));
    if (rep.occupancy.convert_to<double>() < rep.occupancy_threshold - 1e-9) {
        if (!waive_occupancy)
            throw HypothesisError("coset occupancy below (d n)^m");
        rep.occupancy_waived = true;
    }

    PointSet sigma(n, chain.points());
    rep.power_radius = Big(16) * Big(m) * Big(m) * Big(m) * Big(m) * Big(m) * Big(m);
    auto power_elems = power_ball_elements(a, rep.power_radius);

    // report the pigeonhole projections H = G_(Sigma) <= K = G_Sigma
    rep.pigeonhole = coset_pigeonhole(a, SubgroupDesc::pointwise_stab(sigma),
                                      SubgroupDesc::setwise_stab(sigma));
    double logfact = 0;
    for (std::size_t i = 2; i <= m; ++i) logfact += std::log(static_cast<double>(i));
    rep.projection_threshold =
        std::exp(static_cast<double>(m) * std::log(d) + logfact);

    // search Delta subset Sigma from large to small
    const auto& spts = sigma.members();
    const std::size_t min_size = static_cast<std::size_t>(
        std::ceil(d * static_cast<double>(sigma.size()) - 1e-9));
    for (std::size_t size = sigma.size(); size >= std::max<std::size_t>(min_size, 1);
         --size) {
        // combinations over indices into spts
        std::vector<std::size_t> idx(size);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        for (;;) {
            std::vector<Point> dpts;
            for (std::size_t i : idx) dpts.push_back(spts[i]);
            PointSet delta(n, dpts);
            PointSet rest(n, [&] {
                std::vector<Point> r;
                for (Point p : spts)
                    if (!delta.contains(p)) r.push_back(p);
                return r;
            }());
            // slice: setwise Sigma, pointwise Sigma \ Delta
            std::vector<const WordElement*> slice;
            for (const auto& w : power_elems)
                if (stabilizes_setwise(w.perm, sigma) &&
                    fixes_pointwise(w.perm, rest))
                    slice.push_back(&w);
            std::vector<Permutation> restr;
            for (const auto* w : slice)
                restr.push_back(restrict(w->perm, delta));
            bool ok = delta.size() <= 1 ||
                      generates_at_least_alt(
                          restr, static_cast<Point>(delta.size()));
            if (ok) {
                rep.delta = delta;
                // greedy generating subset of the section
                std::vector<Permutation> acc;
                for (const auto* w : slice) {
                    if (delta.size() <= 1) break;  // Alt(1) is trivial
                    auto r = restrict(w->perm, delta);
                    const std::size_t before =
                        acc.empty() ? 1 : closure(acc).size();
                    acc.push_back(r);
                    const std::size_t after = closure(acc).size();
                    if (after == before) {
                        acc.pop_back();
                        continue;
                    }
                    rep.section.push_back(*w);
                    if (Big(after) * 2 >=
                        factorial(static_cast<Point>(delta.size())))
                        break;
                }
                return rep;
            }
            // next combination of indices
            std::size_t i = size;
            bool more = false;
            while (i-- > 0) {
                if (idx[i] < spts.size() - (size - 1 - i)) {
                    ++idx[i];
                    for (std::size_t j = i + 1; j < size; ++j)
                        idx[j] = idx[j - 1] + 1;
                    more = true;
                    break;
                }
            }
            if (!more) break;
        }
    }
    throw HypothesisError(
        "no subset of Sigma carries an alternating section at this scale");
}

}  // namespace permgrow
