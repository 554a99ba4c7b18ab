#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "permgrow/closure.hpp"
#include "permgrow/numeric.hpp"
#include "permgrow/errors.hpp"
#include "permgrow/orbit.hpp"
#include "permgrow/perm.hpp"
#include "permgrow/rng.hpp"
#include "permgrow/wordset.hpp"

namespace permgrow {

// ceil(N^2 d ln(N/eps)), the l_infinity mixing-time bound for the lazy walk.
inline Big mixing_bound(std::uint64_t n_states, std::uint64_t valency,
                        double eps) {
    if (n_states < 1 || valency < 1) throw ParamError("need N >= 1 and d >= 1");
    if (!(eps > 0 && eps < 1)) throw ParamError("eps must lie in (0, 1)");
    const double v = static_cast<double>(n_states) * static_cast<double>(n_states) *
                     static_cast<double>(valency) *
                     std::log(static_cast<double>(n_states) / eps);
    if (v <= 0) return 0;
    Big b = static_cast<long long>(v);
    if (static_cast<double>(static_cast<long long>(v)) < v) b += 1;
    return b;
}

// Lazy random walk: hold with probability 1/2, otherwise a uniform
// non-identity generator. The generating set must be symmetric.
struct WalkSampler {
    GenSetPtr base;
    Big steps = 0;
    std::uint64_t seed = 0;
    std::string op_id = "walk_sample";

    WalkSampler(GenSetPtr b, Big steps_, std::uint64_t seed_)
        : base(std::move(b)), steps(std::move(steps_)), seed(seed_) {
        if (!base->symmetric_closed())
            throw ConventionError("walk sampler requires a symmetric set");
    }
};

namespace detail {

// one lazy-walk product over an indexed family of word elements
inline WordElement walk_product(const std::vector<WordElement>& elems,
                                const std::vector<std::size_t>& moving,
                                std::uint64_t steps, RngStream& rng,
                                GenSetPtr base, Point degree) {
    Permutation acc = Permutation::identity(degree);
    Word witness;
    Big length = 0;
    bool witness_ok = true;
    for (std::uint64_t s = 0; s < steps; ++s) {
        if (rng.coin()) continue;  // lazy half
        const auto& w = elems[moving[rng.below(moving.size())]];
        acc = compose(acc, w.perm);
        length += w.length_bound;
        if (witness_ok && w.witness)
            witness.insert(witness.end(), w.witness->begin(), w.witness->end());
        else
            witness_ok = false;
    }
    WordElement out;
    out.perm = std::move(acc);
    out.length_bound = length;
    if (witness_ok) out.witness = std::move(witness);
    out.base = std::move(base);
    return out;
}

}  // namespace detail

inline std::vector<WordElement> walk_sample(const WalkSampler& w,
                                            std::size_t count) {
    if (w.steps > Big(100'000'000))
        throw ParamError("walk length too large to materialize; use a cap");
    const std::uint64_t steps = w.steps.convert_to<std::uint64_t>();
    std::vector<WordElement> elems;
    std::vector<std::size_t> moving;
    for (std::size_t i = 0; i < w.base->size(); ++i) {
        WordElement e;
        e.perm = w.base->generators()[i];
        e.base = w.base;
        if (e.perm.is_identity()) {
            e.length_bound = 0;
            e.witness = Word{};
        } else {
            e.length_bound = 1;
            e.witness = Word{static_cast<std::int32_t>(i + 1)};
            moving.push_back(i);
        }
        elems.push_back(std::move(e));
    }
    if (moving.empty()) throw ParamError("no non-identity generators to walk on");
    std::vector<WordElement> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        auto rng = RngStream::derive(w.seed, w.op_id, i);
        out.push_back(detail::walk_product(elems, moving, steps, rng, w.base,
                                           w.base->degree()));
    }
    return out;
}

// --- exact mixing verification on k-tuple actions ---------------------------

struct MixingReport {
    std::size_t n_states = 0;   // N = n!/(n-k)!
    std::size_t valency = 0;    // d
    Big step_bound = 0;         // T = ceil(N^2 d ln(N/eps))
    double eps = 0;
    double max_deviation = 0;   // max |P^T_{xy} - 1/N| over all entries
    bool entries_ok = false;    // every entry within (1 +- eps)/N
    double lambda2 = 0;
    bool lambda2_ok = false;    // lambda2 <= 1 - 1/(N^2 d)
};

namespace detail {

inline std::vector<std::vector<Point>> all_tuples(Point n, unsigned k) {
    std::vector<std::vector<Point>> out;
    std::vector<Point> cur;
    std::vector<bool> used(n + 1, false);
    auto rec = [&](auto&& self) -> void {
        if (cur.size() == k) {
            out.push_back(cur);
            return;
        }
        for (Point p = 1; p <= n; ++p) {
            if (used[p]) continue;
            used[p] = true;
            cur.push_back(p);
            self(self);
            cur.pop_back();
            used[p] = false;
        }
    };
    rec(rec);
    return out;
}

inline std::vector<std::vector<double>> mat_mul(
    const std::vector<std::vector<double>>& a,
    const std::vector<std::vector<double>>& b) {
    const std::size_t n = a.size();
    std::vector<std::vector<double>> c(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k2 = 0; k2 < n; ++k2) {
            const double aik = a[i][k2];
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) c[i][j] += aik * b[k2][j];
        }
    return c;
}

}  // namespace detail

inline MixingReport mixing_verify_small(const GenSet& a_prime, unsigned k,
                                        double eps,
                                        std::size_t max_states = 2000) {
    const Point n = a_prime.degree();
    GenSet sym = a_prime.symmetric_closed() ? a_prime : a_prime.symmetrized();
    std::vector<Permutation> moving;
    for (const auto& g : sym.generators())
        if (!g.is_identity()) moving.push_back(g);
    if (moving.empty()) throw ParamError("no non-identity generators");

    // number of ordered k-tuples of distinct points
    std::uint64_t n_states = 1;
    for (unsigned i = 0; i < k; ++i) n_states *= (n - i);
    if (n_states > max_states)
        throw BudgetError("tuple action too large for dense matrix");

    auto tuples = detail::all_tuples(n, k);
    std::unordered_map<std::vector<Point>, std::size_t, TupleHash> index;
    for (std::size_t i = 0; i < tuples.size(); ++i) index.emplace(tuples[i], i);

    if (!is_k_transitive_on(moving, PointSet::full(n).members(), k))
        throw NotTransitiveError("<A'> is not transitive on k-tuples");

    const std::size_t N = tuples.size();
    const std::size_t d = moving.size();
    std::vector<std::vector<double>> p(N, std::vector<double>(N, 0.0));
    for (std::size_t i = 0; i < N; ++i) {
        p[i][i] += 0.5;
        for (const auto& g : moving) {
            std::vector<Point> img(k);
            for (unsigned j = 0; j < k; ++j) img[j] = g.apply(tuples[i][j]);
            p[i][index.at(img)] += 0.5 / static_cast<double>(d);
        }
    }

    MixingReport rep;
    rep.n_states = N;
    rep.valency = d;
    rep.eps = eps;
    rep.step_bound = mixing_bound(N, d, eps);

    // P^T by binary powering
    std::vector<std::vector<double>> result(N, std::vector<double>(N, 0.0));
    for (std::size_t i = 0; i < N; ++i) result[i][i] = 1.0;
    Big t = rep.step_bound;
    auto sq = p;
    while (t > 0) {
        if ((t & 1) != 0) result = detail::mat_mul(result, sq);
        t >>= 1;
        if (t > 0) sq = detail::mat_mul(sq, sq);
    }
    const double uniform = 1.0 / static_cast<double>(N);
    rep.max_deviation = 0;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j)
            rep.max_deviation =
                std::max(rep.max_deviation, std::abs(result[i][j] - uniform));
    rep.entries_ok = rep.max_deviation <= eps * uniform + 1e-12;

    auto ev = detail::jacobi_eigenvalues(p);
    rep.lambda2 = N > 1 ? ev[1] : ev[0];
    rep.lambda2_ok =
        rep.lambda2 <= 1.0 - 1.0 / (static_cast<double>(N) *
                                    static_cast<double>(N) *
                                    static_cast<double>(d)) +
                           1e-12;
    return rep;
}

// --- random subproducts ------------------------------------------------------

// g = g_1^{r_1} ... g_n^{r_n} with g_i a generator moving i; retried until
// |supp(g)| >= |domain|/2.
inline WordElement random_subproduct_large_support(const GenSet& a,
                                                   std::uint64_t seed,
                                                   const PointSet& domain,
                                                   int max_retries = 64) {
    auto base = std::make_shared<const GenSet>(a);
    std::vector<std::int32_t> mover(a.degree() + 1, 0);
    for (Point p : domain.members()) {
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a.generators()[i].apply(p) != p) {
                mover[p] = static_cast<std::int32_t>(i + 1);
                break;
            }
        if (!mover[p])
            throw NotTransitiveError("no generator moves point " +
                                     std::to_string(p));
    }
    for (int retry = 0; retry < max_retries; ++retry) {
        auto rng = RngStream::derive(seed, "random_subproduct",
                                     static_cast<std::uint64_t>(retry));
        Permutation acc = Permutation::identity(a.degree());
        Word witness;
        for (Point p : domain.members()) {
            if (!rng.coin()) continue;
            acc = compose(acc, a.generators()[mover[p] - 1]);
            witness.push_back(mover[p]);
        }
        std::size_t supp = 0;
        for (Point p : domain.members())
            if (acc.apply(p) != p) ++supp;
        if (2 * supp >= domain.size()) {
            WordElement out;
            out.perm = std::move(acc);
            out.length_bound = witness.size();
            out.witness = std::move(witness);
            out.base = base;
            return out;
        }
    }
    throw RetryExhaustedError("random subproduct never reached |domain|/2 support");
}

inline WordElement random_subproduct_large_support(const GenSet& a,
                                                   std::uint64_t seed) {
    return random_subproduct_large_support(a, seed, PointSet::full(a.degree()));
}

// --- Gilbert-Varshamov style binary code -------------------------------------

struct BinaryCode {
    unsigned k = 0;             // word length
    unsigned min_distance = 0;  // required pairwise distance (> log2 n)
    std::vector<std::uint64_t> words;

    void verify_pairwise() const {
        for (std::size_t i = 0; i < words.size(); ++i)
            for (std::size_t j = i + 1; j < words.size(); ++j)
                if (static_cast<unsigned>(
                        __builtin_popcountll(words[i] ^ words[j])) < min_distance)
                    throw InvariantViolation("code distance violated");
    }
};

// Greedy linear (Varshamov) construction over a deterministic pseudorandom
// candidate stream: each new basis row must keep every nonzero codeword at
// weight >= d. The volume bound guarantees a valid row exists; |V| = 2^m > n.
inline BinaryCode gv_code(std::uint64_t n) {
    if (n < 2) throw ParamError("gv_code requires n >= 2");
    const double l2n = std::log2(static_cast<double>(n));
    BinaryCode code;
    code.k = static_cast<unsigned>(std::ceil(4.404 * l2n));
    if (code.k > 63) throw ParamError("code length exceeds 63 bits");
    code.min_distance = static_cast<unsigned>(std::floor(l2n)) + 1;
    const unsigned m = static_cast<unsigned>(std::floor(l2n)) + 1;  // 2^m > n
    const std::uint64_t mask =
        code.k >= 64 ? ~0ULL : ((1ULL << code.k) - 1);

    std::vector<std::uint64_t> span{0};
    span.reserve(1ULL << m);
    for (unsigned row = 0; row < m; ++row) {
        auto rng = RngStream::derive(0x6776636f6465ULL, "gv_row", row);
        std::optional<std::uint64_t> chosen;
        for (int attempt = 0; attempt < 100000; ++attempt) {
            const std::uint64_t cand = rng.next() & mask;
            bool ok = true;
            for (std::uint64_t c : span)
                if (static_cast<unsigned>(__builtin_popcountll(c ^ cand)) <
                    code.min_distance) {
                    ok = false;
                    break;
                }
            if (ok) {
                chosen = cand;
                break;
            }
        }
        if (!chosen) {
            // exhaustive fallback; the volume bound guarantees success
            for (std::uint64_t cand = 0; cand <= mask && !chosen; ++cand) {
                bool ok = true;
                for (std::uint64_t c : span)
                    if (static_cast<unsigned>(__builtin_popcountll(c ^ cand)) <
                        code.min_distance) {
                        ok = false;
                        break;
                    }
                if (ok) chosen = cand;
            }
            if (!chosen)
                throw InvariantViolation("GV volume bound failed to provide a row");
        }
        const std::size_t old = span.size();
        for (std::size_t i = 0; i < old; ++i) span.push_back(span[i] ^ *chosen);
    }
    code.words = std::move(span);
    if (code.words.size() <= n)
        throw InvariantViolation("code smaller than n + 1 words");
    // linear code: pairwise distances are weights of nonzero codewords
    for (std::size_t i = 1; i < code.words.size(); ++i)
        if (static_cast<unsigned>(__builtin_popcountll(code.words[i])) <
            code.min_distance)
            throw InvariantViolation("nonzero codeword below distance bound");
    return code;
}

// --- generation: few orbits, transitive triples, k-transitive sets ----------

struct WalkInfo {
    std::uint64_t seed = 0;
    Big ell_used = 0;          // practical walk length (a mixing bound)
    // the construction's asymptotic exponent n^{27 log n}, kept for the
    // word-length accounting next to the practical cap actually walked
    double asymptotic_log_ell = 0;
    std::string asymptotic_formula = "n^(27 log n)";
};

struct FewOrbitsResult {
    WordElement g;
    WordElement h;
    std::size_t orbit_count = 0;
    double orbit_bound = 0;  // 175 (log n)^2, reported side by side
    WalkInfo walk;
};

namespace detail {

inline Big practical_walk_length(std::size_t domain_size, std::size_t valency) {
    const std::uint64_t pairs = static_cast<std::uint64_t>(domain_size) *
                                (domain_size > 1 ? domain_size - 1 : 1);
    return mixing_bound(pairs, std::max<std::size_t>(valency, 1),
                        1.0 / static_cast<double>(std::max<std::size_t>(
                                  domain_size, 2)));
}

// lazy walk over an arbitrary indexed family of word elements
inline WordElement walk_over_elements(const std::vector<WordElement>& elems,
                                      const Big& steps, std::uint64_t seed,
                                      const std::string& op_id,
                                      std::uint64_t index, GenSetPtr base,
                                      Point degree) {
    std::vector<std::size_t> moving;
    for (std::size_t i = 0; i < elems.size(); ++i)
        if (!elems[i].perm.is_identity()) moving.push_back(i);
    if (moving.empty()) throw ParamError("no non-identity elements to walk on");
    if (steps > Big(100'000'000)) throw ParamError("walk length too large");
    auto rng = RngStream::derive(seed, op_id, index);
    return walk_product(elems, moving, steps.convert_to<std::uint64_t>(), rng,
                        std::move(base), degree);
}

// random subproduct over a domain from an element family
inline WordElement subproduct_on_domain(const std::vector<WordElement>& elems,
                                        const PointSet& domain,
                                        std::uint64_t seed,
                                        const std::string& op_id,
                                        GenSetPtr base, int max_retries = 64) {
    std::vector<std::int64_t> mover(domain.degree() + 1, -1);
    for (Point p : domain.members()) {
        for (std::size_t i = 0; i < elems.size(); ++i)
            if (elems[i].perm.apply(p) != p) {
                mover[p] = static_cast<std::int64_t>(i);
                break;
            }
        if (mover[p] < 0)
            throw NotTransitiveError("no element moves point " +
                                     std::to_string(p));
    }
    for (int retry = 0; retry < max_retries; ++retry) {
        auto rng = RngStream::derive(seed, op_id,
                                     static_cast<std::uint64_t>(retry));
        WordElement acc = WordElement::identity_of(base);
        for (Point p : domain.members()) {
            if (!rng.coin()) continue;
            acc = product_bound(acc, elems[static_cast<std::size_t>(mover[p])]);
        }
        std::size_t supp = 0;
        for (Point p : domain.members())
            if (acc.perm.apply(p) != p) ++supp;
        if (2 * supp >= domain.size()) return acc;
    }
    throw RetryExhaustedError("random subproduct never reached |domain|/2");
}

inline std::vector<std::vector<Point>> orbits_on_domain(
    const std::vector<Permutation>& gens, const PointSet& domain) {
    std::vector<bool> done(domain.degree() + 1, false);
    std::vector<std::vector<Point>> out;
    for (Point a : domain.members()) {
        if (done[a]) continue;
        auto orb = orbit_points(gens, a);
        for (Point b : orb) done[b] = true;
        out.push_back(std::move(orb));
    }
    return out;
}

struct DomainTriple {
    WordElement g1, g2, g3;
    std::size_t pair_orbits = 0;
    int gprime_retries = 0;
    WalkInfo walk;
};

// the transitive-triple construction restricted to an invariant domain
inline DomainTriple triple_on_domain(const std::vector<WordElement>& elems,
                                     const PointSet& domain, std::uint64_t seed,
                                     const std::string& op_id, GenSetPtr base,
                                     int max_retries = 64) {
    DomainTriple res;
    res.walk.seed = seed;
    std::size_t valency = 0;
    for (const auto& e : elems)
        if (!e.perm.is_identity()) ++valency;
    res.walk.ell_used = practical_walk_length(domain.size(), valency);
    const double lnn =
        std::log(static_cast<double>(std::max<std::size_t>(domain.size(), 2)));
    res.walk.asymptotic_log_ell = 27.0 * lnn * lnn;

    res.g1 = subproduct_on_domain(elems, domain, seed, op_id + ".subproduct",
                                  base, max_retries);
    res.g2 = walk_over_elements(elems, res.walk.ell_used, seed, op_id + ".h", 0,
                                base, domain.degree());

    auto orbs = orbits_on_domain({res.g1.perm, res.g2.perm}, domain);
    res.pair_orbits = orbs.size();
    const double sqrt_n = std::sqrt(static_cast<double>(domain.size()));
    std::vector<Point> small_reps;
    std::vector<bool> small_union(domain.degree() + 1, false);
    std::vector<const std::vector<Point>*> large;
    const std::vector<Point>* largest = nullptr;
    for (const auto& o : orbs) {
        if (static_cast<double>(o.size()) < sqrt_n) {
            small_reps.push_back(o.front());
            for (Point p : o) small_union[p] = true;
        } else {
            large.push_back(&o);
        }
        if (!largest || o.size() > largest->size()) largest = &o;
    }

    for (int retry = 0; retry < max_retries; ++retry) {
        auto gp = walk_over_elements(elems, res.walk.ell_used, seed,
                                     op_id + ".gprime", 1000 + retry, base,
                                     domain.degree());
        // (a) small-orbit representatives leave the union of small orbits
        bool ok = true;
        for (Point r : small_reps)
            if (small_union[gp.perm.apply(r)]) {
                ok = false;
                break;
            }
        // (b) every large orbit meets the largest orbit after g'
        if (ok)
            for (const auto* o : large) {
                bool meets = false;
                for (Point p : *o)
                    if (std::binary_search(largest->begin(), largest->end(),
                                           gp.perm.apply(p))) {
                        meets = true;
                        break;
                    }
                if (!meets) {
                    ok = false;
                    break;
                }
            }
        if (!ok) continue;
        res.g3 = gp;
        res.gprime_retries = retry;
        auto merged =
            orbits_on_domain({res.g1.perm, res.g2.perm, res.g3.perm}, domain);
        if (merged.size() != 1)
            throw InvariantViolation(
                "orbit-merge conditions held but the triple is intransitive");
        return res;
    }
    throw RetryExhaustedError("transitive_triple retry limit");
}

inline std::vector<WordElement> genset_as_elements(const GenSet& sym,
                                                   const GenSetPtr& base) {
    std::vector<WordElement> out;
    for (std::size_t i = 0; i < sym.size(); ++i) {
        WordElement w;
        w.perm = sym.generators()[i];
        w.base = base;
        if (w.perm.is_identity()) {
            w.length_bound = 0;
            w.witness = Word{};
        } else {
            w.length_bound = 1;
            w.witness = Word{static_cast<std::int32_t>(i + 1)};
        }
        out.push_back(std::move(w));
    }
    return out;
}

}  // namespace detail

inline FewOrbitsResult few_orbits_pair(const GenSet& a, std::uint64_t seed,
                                       int max_retries = 64) {
    const Point n = a.degree();
    GenSet sym = a.symmetric_closed() && a.contains_identity() ? a
                                                               : a.symmetrized();
    if (!generates_at_least_alt(sym.generators(), n))
        throw NotFullGroupError("<A> is not Alt(n) or Sym(n)");
    auto base = std::make_shared<const GenSet>(sym);
    auto elems = detail::genset_as_elements(sym, base);

    FewOrbitsResult res;
    res.g = detail::subproduct_on_domain(elems, PointSet::full(n), seed,
                                         "few_orbits.subproduct", base,
                                         max_retries);
    std::size_t valency = 0;
    for (const auto& g : sym.generators())
        if (!g.is_identity()) ++valency;
    res.walk.seed = seed;
    res.walk.ell_used = detail::practical_walk_length(n, valency);
    const double lnn = std::log(static_cast<double>(n));
    res.walk.asymptotic_log_ell = 27.0 * lnn * lnn;
    res.orbit_bound = 175.0 * lnn * lnn;

    for (int retry = 0; retry < max_retries; ++retry) {
        res.h = detail::walk_over_elements(elems, res.walk.ell_used, seed,
                                           "few_orbits.h",
                                           static_cast<std::uint64_t>(retry),
                                           base, n);
        res.orbit_count = orbits({res.g.perm, res.h.perm}, n).size();
        // desk-scale degrees sit far below the bound, so the first draw
        // passes; the loop mirrors the construction anyway
        if (static_cast<double>(res.orbit_count) <= res.orbit_bound) return res;
    }
    throw RetryExhaustedError("few_orbits_pair retry limit");
}

struct TransitiveTripleResult {
    WordElement g1, g2, g3;
    std::size_t pair_orbits = 0;
    int gprime_retries = 0;
    WalkInfo walk;
};

inline TransitiveTripleResult transitive_triple(const GenSet& a,
                                                std::uint64_t seed,
                                                int max_retries = 64) {
    const Point n = a.degree();
    GenSet sym = a.symmetric_closed() && a.contains_identity() ? a
                                                               : a.symmetrized();
    auto base = std::make_shared<const GenSet>(sym);
    TransitiveTripleResult res;
    if (n == 1) {
        res.g1 = res.g2 = res.g3 = WordElement::identity_of(base);
        return res;
    }
    if (!generates_at_least_alt(sym.generators(), n))
        throw NotFullGroupError("<A> is not Alt(n) or Sym(n)");
    auto elems = detail::genset_as_elements(sym, base);
    auto t = detail::triple_on_domain(elems, PointSet::full(n), seed, "triple",
                                      base, max_retries);
    res.g1 = t.g1;
    res.g2 = t.g2;
    res.g3 = t.g3;
    res.pair_orbits = t.pair_orbits;
    res.gprime_retries = t.gprime_retries;
    res.walk = t.walk;
    return res;
}

struct KTransitiveResult {
    std::vector<WordElement> elements;  // |S| <= 3k
    std::vector<Point> fixed_points;    // alpha_1 .. alpha_{k-1}
    bool verified = false;              // k-tuple orbit covers everything
};

// Point-stabilizer descent: a transitive triple per level, Schreier
// generators to step into the next stabilizer. |S| <= 3k.
inline KTransitiveResult k_transitive_set(const GenSet& a, unsigned k,
                                          std::uint64_t seed) {
    const Point n = a.degree();
    if (k < 1) throw ParamError("k must be >= 1");
    if (n < k + 5) throw ParamError("requires n >= k + 5");
    GenSet sym = a.symmetric_closed() && a.contains_identity() ? a
                                                               : a.symmetrized();
    if (!generates_at_least_alt(sym.generators(), n))
        throw NotFullGroupError("<A> is not Alt(n) or Sym(n)");
    auto base = std::make_shared<const GenSet>(sym);

    KTransitiveResult res;
    std::vector<WordElement> current = detail::genset_as_elements(sym, base);

    for (unsigned level = 0; level < k; ++level) {
        std::vector<Point> domain;
        for (Point p = 1; p <= n; ++p)
            if (std::find(res.fixed_points.begin(), res.fixed_points.end(), p) ==
                res.fixed_points.end())
                domain.push_back(p);
        auto triple = detail::triple_on_domain(
            current, PointSet(n, domain), seed,
            "ktrans.level" + std::to_string(level), base);
        res.elements.push_back(triple.g1);
        res.elements.push_back(triple.g2);
        res.elements.push_back(triple.g3);
        if (level + 1 == k) break;

        // A' = current^{|domain|} covers every coset of the next stabilizer
        Point alpha = domain.front();
        res.fixed_points.push_back(alpha);
        std::vector<Permutation> cur_perms;
        for (const auto& w : current) cur_perms.push_back(w.perm);
        GenSet cur_set(n, cur_perms);
        Ball ball = Ball::expand(cur_set, Big(domain.size()));
        std::vector<WordElement> expanded;
        std::vector<Permutation> expanded_perms;
        expanded.reserve(ball.size());
        for (std::size_t i = 0; i < ball.size(); ++i) {
            expanded.push_back(substitute_word(ball.word_at(i), current, base));
            expanded_perms.push_back(expanded.back().perm);
        }
        GenSet expanded_set(n, expanded_perms);
        auto schreier = schreier_generators(
            expanded_set, SubgroupDesc::pointwise_stab(PointSet(n, {alpha})));
        std::vector<WordElement> next;
        for (const auto& s : schreier)
            next.push_back(substitute_word(*s.witness, expanded, base));
        current = std::move(next);
    }

    std::vector<Permutation> sperm;
    for (const auto& w : res.elements) sperm.push_back(w.perm);
    res.verified = is_k_transitive_on(sperm, PointSet::full(n).members(), k);
    if (!res.verified)
        throw InvariantViolation("k-transitivity verification failed");
    return res;
}

}  // namespace permgrow
