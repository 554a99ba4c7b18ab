#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "permgrow/closure.hpp"
#include "permgrow/errors.hpp"
#include "permgrow/orbit.hpp"
#include "permgrow/randwalk.hpp"
#include "permgrow/wordset.hpp"

namespace permgrow {

// (A A^{-1})_{(Sigma)} == {e}, by direct filtering of all pairwise products.
inline bool verify_trivial_pointwise(const Ball& a, const PointSet& sigma) {
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) {
            Permutation p = compose(a.perm_at(i), inverse(a.perm_at(j)));
            if (fixes_pointwise(p, sigma) && !p.is_identity()) return false;
        }
    return true;
}

struct SplitCertificate {
    PointSet sigma;
    std::vector<WordElement> s_elements;
    double rho = 0;
    PointSet sigma_s;             // Sigma^S
    bool verified_trivial = false;
    std::size_t size_bound = 0;   // ceil(2 log n / log(3/(3-2 rho)))
    int retries = 0;
    bool hypothesis_checked = false;  // false = recorded as an assumption
    std::size_t unreachable_pairs = 0;
    std::size_t pair_threshold = 0;   // ceil(rho n (n-1))
};

inline std::size_t splitting_size_bound(Point n, double rho) {
    if (!(rho > 0 && rho < 1)) throw ParamError("rho must lie in (0,1)");
    return static_cast<std::size_t>(
        std::ceil(2.0 * std::log(static_cast<double>(n)) /
                  std::log(3.0 / (3.0 - 2.0 * rho))));
}

// Count of ordered pairs (a, b), a != b, with no g in the stabilizer
// <A>_{(Sigma)} taking a to b; the stabilizer is enumerated exactly.
inline std::size_t unreachable_pair_count(const Ball& a, const PointSet& sigma) {
    const Point n = a.degree();
    auto group = a.closed() ? a.element_set() : closure(a.element_set());
    std::vector<Permutation> stab_gens;
    for (const auto& g : group)
        if (fixes_pointwise(g, sigma)) stab_gens.push_back(g);
    std::size_t count = 0;
    for (Point p = 1; p <= n; ++p)
        count += n - orbit_points(stab_gens, p).size();
    return count;
}

struct SplittingOptions {
    // skip the rho-pair hypothesis (recorded as an assumption; trace mode)
    bool assume_hypothesis = false;
    int max_retries = 64;
};

// Babai's splitting lemma for sets: draws |S| <= the stated bound walk
// elements until (A A^{-1})_{(Sigma^S)} = {e}, checked directly.
inline SplitCertificate splitting_set(const Ball& a, const PointSet& sigma,
                                      double rho, std::uint64_t seed,
                                      SplittingOptions opts = {}) {
    const Point n = a.degree();
    if (sigma.degree() != n) throw DegreeError("splitting_set degree mismatch");
    if (!is_k_transitive_on(a.element_set(), PointSet::full(n).members(), 2))
        throw NotTransitiveError("<A> is not 2-transitive");

    SplitCertificate cert;
    cert.sigma = sigma;
    cert.rho = rho;
    cert.size_bound = splitting_size_bound(n, rho);
    cert.pair_threshold = static_cast<std::size_t>(
        std::ceil(rho * static_cast<double>(n) * static_cast<double>(n - 1)));
    if (!opts.assume_hypothesis) {
        cert.hypothesis_checked = true;
        cert.unreachable_pairs = unreachable_pair_count(a, sigma);
        if (cert.unreachable_pairs < cert.pair_threshold)
            throw HypothesisError(
                "fewer than rho n(n-1) stabilizer-unreachable pairs");
    }

    // walks run over the ball's base generators (a small symmetric set), so
    // the mixing bound stays materializable; S still lies in a power of A
    auto elems = detail::genset_as_elements(*a.base(), a.base());
    std::size_t valency = 0;
    for (const auto& w : elems)
        if (!w.perm.is_identity()) ++valency;
    const Big ell = detail::practical_walk_length(n, valency);

    for (int retry = 0; retry < opts.max_retries; ++retry) {
        std::vector<WordElement> s;
        std::vector<Point> images;
        for (std::size_t draw = 0; draw < cert.size_bound; ++draw) {
            auto g = detail::walk_over_elements(
                elems, ell, seed, "splitting.retry" + std::to_string(retry),
                draw, a.base(), n);
            s.push_back(g);
            for (Point p : sigma.members()) images.push_back(s.back().perm.apply(p));
            PointSet sigma_s(n, images);
            if (verify_trivial_pointwise(a, sigma_s)) {
                cert.s_elements = std::move(s);
                cert.sigma_s = sigma_s;
                cert.verified_trivial = true;
                cert.retries = retry;
                return cert;
            }
        }
    }
    throw RetryExhaustedError("splitting_set: no trivializing S found");
}

// --- stabilizer chain extension ----------------------------------------------

struct ExtendReport {
    StabilizerChain chain;
    double threshold = 0;
    // splitting-lemma lower bound log|A| / (60 (log n)^2), reported when extension
    // halts (meaningful for rho = 0.05)
    double splitting_lower_bound = 0;
};

// Greedily appends points whose image set under the current pointwise
// stabilizer (within the ball) has size >= threshold * n; the point with the
// largest image set wins, smallest index breaking ties.
inline ExtendReport extend_chain(const Ball& a, StabilizerChain chain,
                                 double threshold = 0.9) {
    const Point n = a.degree();
    if (chain.degree == 0) chain.degree = n;
    ExtendReport rep;
    rep.threshold = threshold;

    std::vector<Point> fixed = chain.points();
    for (;;) {
        // members of the ball fixing the chain points
        std::vector<std::size_t> stab;
        for (std::size_t i = 0; i < a.size(); ++i) {
            bool ok = true;
            for (Point f : fixed)
                if (a.perm_at(i).apply(f) != f) {
                    ok = false;
                    break;
                }
            if (ok) stab.push_back(i);
        }
        Point best_point = 0;
        std::size_t best_size = 0;
        for (Point p = 1; p <= n; ++p) {
            if (std::find(fixed.begin(), fixed.end(), p) != fixed.end()) continue;
            std::unordered_set<Point> images;
            for (std::size_t i : stab) images.insert(a.perm_at(i).apply(p));
            if (images.size() > best_size) {
                best_size = images.size();
                best_point = p;
            }
        }
        const double need = threshold * static_cast<double>(n);
        if (!best_point || best_size < 2 ||
            static_cast<double>(best_size) < need - 1e-9)
            break;
        ChainLevel level;
        level.alpha = best_point;
        std::unordered_set<Point> seen;
        for (std::size_t i : stab)
            if (seen.insert(a.perm_at(i).apply(best_point)).second)
                level.elements.push_back(a.element_at(i));
        chain.levels.push_back(std::move(level));
        fixed.push_back(best_point);
    }
    chain.validate();
    const double ln_n = std::log(static_cast<double>(n));
    rep.splitting_lower_bound =
        n > 1 ? std::log(static_cast<double>(a.size())) / (60.0 * ln_n * ln_n)
              : 0.0;
    rep.chain = std::move(chain);
    return rep;
}

}  // namespace permgrow
