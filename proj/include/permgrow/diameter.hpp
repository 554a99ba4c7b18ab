#pragma once

#include <cstdint>
#include <cstdlib>
#include <optional>
#include <unordered_map>
#include <vector>

#include "permgrow/closure.hpp"
#include "permgrow/numeric.hpp"
#include "permgrow/config.hpp"
#include "permgrow/errors.hpp"
#include "permgrow/perm.hpp"
#include "permgrow/wordset.hpp"

namespace permgrow {

constexpr std::uint64_t kDefaultStateBudget = 500'000'000;

// Lehmer-code ranking of Sym(n) into 0..n!-1 (dense indices for bitsets).
// Usable for n <= 12, where n! fits in 32 bits.
class LehmerCodec {
public:
    explicit LehmerCodec(Point n) : n_(n) {
        if (n > 12) throw ParamError("Lehmer codec limited to n <= 12");
        fact_.assign(n + 1, 1);
        for (Point i = 1; i <= n; ++i) fact_[i] = fact_[i - 1] * i;
    }

    std::uint64_t order() const { return fact_[n_]; }

    std::uint32_t rank(const Permutation& p) const {
        // O(n^2); fine for n <= 12
        std::uint64_t r = 0;
        const auto& img = p.images();
        for (Point i = 0; i < n_; ++i) {
            std::uint32_t smaller = 0;
            for (Point j = i + 1; j < n_; ++j)
                if (img[j] < img[i]) ++smaller;
            r += smaller * fact_[n_ - 1 - i];
        }
        return static_cast<std::uint32_t>(r);
    }

    Permutation unrank(std::uint32_t r) const {
        std::vector<Point> pool(n_);
        std::iota(pool.begin(), pool.end(), Point{1});
        std::vector<Point> img(n_);
        std::uint64_t rem = r;
        for (Point i = 0; i < n_; ++i) {
            const std::uint64_t f = fact_[n_ - 1 - i];
            const std::size_t k = static_cast<std::size_t>(rem / f);
            rem %= f;
            img[i] = pool[k];
            pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(k));
        }
        return Permutation::from_images(std::move(img));
    }

private:
    Point n_;
    std::vector<std::uint64_t> fact_;
};

struct DiameterResult {
    Big group_order = 0;
    std::uint32_t diameter = 0;
    bool directed = false;
    bool symmetrized = false;          // inverses were added for undirected mode
    std::vector<Big> histogram;        // element count per geodesic length
    Permutation witness_perm;          // a diameter-realizing element
    Word witness_word;                 // over the generating set actually used
    GenSetPtr used_generators;
    std::string mode;                  // "dense" or "hash"
    bool sweep_fallback = false;       // frontier vectors dropped mid-run
};

namespace detail {

inline GenSet effective_gens(const GenSet& a, bool directed) {
    if (directed) return a;
    std::vector<Permutation> gens = a.generators();
    for (const auto& g : a.generators()) gens.push_back(inverse(g));
    return GenSet(a.degree(), std::move(gens));
}

}  // namespace detail

// Exact diameter of the Cayley graph by breadth-first search from the
// identity (Cayley graphs are vertex-transitive, so the eccentricity of the
// identity is the diameter; the same holds for directed Cayley graphs of
// generating sets by left-translation).
inline DiameterResult bfs_diameter(const GenSet& a, bool directed = false,
                                   std::uint64_t budget = kDefaultStateBudget) {
    if (a.size() == 0) throw ParamError("bfs_diameter: empty generating set");
    const Point n = a.degree();
    GenSet gens = detail::effective_gens(a, directed);
    DiameterResult res;
    res.directed = directed;
    res.symmetrized = !directed;
    res.used_generators = std::make_shared<const GenSet>(gens);
    std::vector<Permutation> gvec;
    for (const auto& g : gens.generators())
        if (!g.is_identity()) gvec.push_back(g);
    if (gvec.empty()) {
        res.group_order = 1;
        res.histogram = {Big(1)};
        res.witness_perm = Permutation::identity(n);
        res.mode = "trivial";
        return res;
    }

    const bool dense = n <= 12 && [&] {
        std::uint64_t f = 1;
        for (Point i = 2; i <= n; ++i) f *= i;
        return f <= budget;
    }();

    std::vector<Big> hist;
    std::uint32_t depth = 0;

    if (dense) {
        LehmerCodec codec(n);
        const std::uint64_t total = codec.order();
        std::vector<std::uint8_t> dist(total, 0xFF);
        const std::uint32_t id_rank = codec.rank(Permutation::identity(n));
        dist[id_rank] = 0;
        std::vector<std::uint32_t> frontier{id_rank};
        hist.push_back(1);
        std::uint64_t visited = 1;
        bool use_sweep = false;
        while (true) {
            std::vector<std::uint32_t> next;
            std::uint64_t found = 0;
            auto expand_one = [&](std::uint32_t r) {
                Permutation p = codec.unrank(r);
                for (const auto& g : gvec) {
                    std::uint32_t nr = codec.rank(compose(p, g));
                    if (dist[nr] == 0xFF) {
                        dist[nr] = static_cast<std::uint8_t>(
                            std::min<std::uint32_t>(depth + 1, 0xFE));
                        ++found;
                        if (!use_sweep) next.push_back(nr);
                    }
                }
            };
            if (!use_sweep && frontier.size() > budget / 4) {
                use_sweep = true;
                res.sweep_fallback = true;
                frontier.clear();
                frontier.shrink_to_fit();
            }
            if (use_sweep) {
                for (std::uint64_t r = 0; r < total; ++r)
                    if (dist[r] == depth) expand_one(static_cast<std::uint32_t>(r));
            } else {
                for (std::uint32_t r : frontier) expand_one(r);
            }
            if (found == 0) break;
            if (depth + 1 >= 0xFE)
                throw BudgetError("distance exceeds dense encoding", depth);
            visited += found;
            hist.push_back(Big(found));
            frontier = std::move(next);
            ++depth;
        }
        res.group_order = visited;
        res.mode = "dense";
        // deterministic witness: smallest rank at the last level
        std::uint32_t far_rank = 0;
        for (std::uint64_t r = 0; r < total; ++r)
            if (dist[r] == depth) {
                far_rank = static_cast<std::uint32_t>(r);
                break;
            }
        res.witness_perm = codec.unrank(far_rank);
        // retrace: at depth d, some generator g has dist[cur * g^{-1}] == d-1
        Permutation cur = res.witness_perm;
        for (std::uint32_t d = depth; d > 0; --d) {
            bool step = false;
            for (std::size_t gi = 0; gi < gens.size() && !step; ++gi) {
                const Permutation& g = gens.generators()[gi];
                if (g.is_identity()) continue;
                Permutation prev = compose(cur, inverse(g));
                if (dist[codec.rank(prev)] == d - 1) {
                    res.witness_word.push_back(static_cast<std::int32_t>(gi + 1));
                    cur = std::move(prev);
                    step = true;
                }
            }
            if (!step) throw InvariantViolation("witness retrace failed");
        }
        std::reverse(res.witness_word.begin(), res.witness_word.end());
    } else {
        std::unordered_map<Permutation, std::uint32_t, PermHash> dist;
        dist.emplace(Permutation::identity(n), 0);
        std::vector<Permutation> frontier{Permutation::identity(n)};
        hist.push_back(1);
        while (!frontier.empty()) {
            std::vector<Permutation> next;
            for (const auto& p : frontier)
                for (const auto& g : gvec) {
                    Permutation q = compose(p, g);
                    if (dist.count(q)) continue;
                    if (dist.size() >= budget)
                        throw BudgetError("state budget exceeded",
                                          static_cast<std::int64_t>(depth));
                    dist.emplace(q, depth + 1);
                    next.push_back(std::move(q));
                }
            if (next.empty()) break;
            hist.push_back(Big(next.size()));
            frontier = std::move(next);
            ++depth;
        }
        res.group_order = Big(dist.size());
        res.mode = "hash";
        // deterministic witness: lexicographically smallest at the last level
        const Permutation* far = nullptr;
        for (const auto& [p, d] : dist)
            if (d == depth && (!far || p < *far)) far = &p;
        res.witness_perm = *far;
        Permutation cur = res.witness_perm;
        for (std::uint32_t d = depth; d > 0; --d) {
            bool step = false;
            for (std::size_t gi = 0; gi < gens.size() && !step; ++gi) {
                const Permutation& g = gens.generators()[gi];
                if (g.is_identity()) continue;
                Permutation prev = compose(cur, inverse(g));
                auto it = dist.find(prev);
                if (it != dist.end() && it->second == d - 1) {
                    res.witness_word.push_back(static_cast<std::int32_t>(gi + 1));
                    cur = std::move(prev);
                    step = true;
                }
            }
            if (!step) throw InvariantViolation("witness retrace failed");
        }
        std::reverse(res.witness_word.begin(), res.witness_word.end());
    }

    res.diameter = depth;
    res.histogram = std::move(hist);
    return res;
}

// Exact point-to-point geodesic distance by meet-in-the-middle: balls grown
// from both endpoints, certified minimal once level sums reach the best
// meeting depth. Memory is O(|B(d/2)|) instead of O(|B(d)|).
inline std::uint64_t mitm_distance(const GenSet& a, const Permutation& target,
                                   std::uint64_t budget = kDefaultStateBudget) {
    GenSet gens = detail::effective_gens(a, false);
    std::vector<Permutation> gvec;
    for (const auto& g : gens.generators())
        if (!g.is_identity()) gvec.push_back(g);
    if (target.is_identity()) return 0;
    if (gvec.empty()) throw ParamError("mitm_distance: no generators");

    std::unordered_map<Permutation, std::uint32_t, PermHash> fwd, bwd;
    fwd.emplace(Permutation::identity(a.degree()), 0);
    bwd.emplace(target, 0);
    std::vector<Permutation> ffront{Permutation::identity(a.degree())};
    std::vector<Permutation> bfront{target};
    std::uint32_t fdepth = 0, bdepth = 0;
    std::uint64_t best = UINT64_MAX;

    auto scan = [&](const Permutation& p,
                    const std::unordered_map<Permutation, std::uint32_t, PermHash>& other,
                    std::uint32_t own_depth) {
        auto it = other.find(p);
        if (it != other.end())
            best = std::min<std::uint64_t>(best, own_depth + it->second);
    };
    scan(target, fwd, 0);

    while (best > static_cast<std::uint64_t>(fdepth) + bdepth) {
        bool forward = ffront.size() <= bfront.size();
        auto& front = forward ? ffront : bfront;
        auto& mine = forward ? fwd : bwd;
        auto& other = forward ? bwd : fwd;
        auto& d = forward ? fdepth : bdepth;
        if (front.empty()) break;  // disconnected: target not in <A>
        std::vector<Permutation> next;
        for (const auto& p : front)
            for (const auto& g : gvec) {
                // backward expansion multiplies by g^{-1}: a path prefix
                Permutation q = forward ? compose(p, g) : compose(p, inverse(g));
                if (mine.count(q)) continue;
                if (fwd.size() + bwd.size() >= budget)
                    throw BudgetError("mitm state budget exceeded",
                                      static_cast<std::int64_t>(fdepth + bdepth));
                mine.emplace(q, d + 1);
                scan(q, other, d + 1);
                next.push_back(std::move(q));
            }
        front = std::move(next);
        ++d;
    }
    if (best == UINT64_MAX)
        throw ParamError("target is not generated by the given set");
    return best;
}

struct SpectralReport {
    std::size_t order = 0;
    std::size_t valency = 0;
    double lambda0 = 0;
    double lambda1 = 0;
    double gap = 0;
    std::uint32_t diameter = 0;
    bool ineq = false;  // lambda0 - lambda1 >= 1/diam^2 (within 1e-9)
};



inline SpectralReport spectral_gap_check(const GenSet& a,
                                         std::size_t max_order = 5000) {
    GenSet gens = detail::effective_gens(a, false);
    std::vector<Permutation> gvec;
    for (const auto& g : gens.generators())
        if (!g.is_identity()) gvec.push_back(g);
    auto elems = closure(gvec, max_order + 1);
    if (elems.size() > max_order)
        throw BudgetError("group too large for dense eigensolve");
    std::unordered_map<Permutation, std::size_t, PermHash> index;
    for (std::size_t i = 0; i < elems.size(); ++i) index.emplace(elems[i], i);

    const std::size_t n = elems.size();
    std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& g : gvec) m[i][index.at(compose(elems[i], g))] += 1.0;

    SpectralReport r;
    r.order = n;
    r.valency = gvec.size();
    if (n <= 600) {
        auto ev = detail::jacobi_eigenvalues(m);
        r.lambda0 = ev[0];
        r.lambda1 = n > 1 ? ev[1] : ev[0];
    } else {
        r.lambda0 = static_cast<double>(gvec.size());
        r.lambda1 = detail::second_eigenvalue_power(m, r.lambda0);
    }
    r.gap = r.lambda0 - r.lambda1;
    auto diam = bfs_diameter(a, false);
    r.diameter = diam.diameter;
    const double need = r.diameter == 0
                            ? 0.0
                            : 1.0 / (static_cast<double>(r.diameter) *
                                     static_cast<double>(r.diameter));
    r.ineq = r.gap >= need - 1e-9;
    return r;
}

}  // namespace permgrow
