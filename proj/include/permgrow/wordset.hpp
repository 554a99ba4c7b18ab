#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "permgrow/errors.hpp"
#include "permgrow/perm.hpp"

namespace permgrow {

// A named generating set. Generators are deduplicated but keep their first
// position, so witness indices are stable.
class GenSet {
public:
    GenSet() = default;

    GenSet(Point degree, std::vector<Permutation> gens) : deg_(degree) {
        for (auto& g : gens) {
            if (g.degree() != degree)
                throw DegreeError("GenSet: generator of degree " +
                                  std::to_string(g.degree()) + " in set of degree " +
                                  std::to_string(degree));
            if (lookup_.emplace(g, static_cast<std::uint32_t>(gens_.size())).second)
                gens_.push_back(std::move(g));
        }
        recompute_flags();
    }

    Point degree() const { return deg_; }
    const std::vector<Permutation>& generators() const { return gens_; }
    std::size_t size() const { return gens_.size(); }
    bool symmetric_closed() const { return symmetric_; }
    bool contains_identity() const { return has_identity_; }

    bool contains(const Permutation& g) const { return lookup_.count(g) != 0; }

    // 0-based index, or -1.
    std::int64_t index_of(const Permutation& g) const {
        auto it = lookup_.find(g);
        return it == lookup_.end() ? -1 : static_cast<std::int64_t>(it->second);
    }

    // A u A^{-1} u {e}, preserving existing indices.
    GenSet symmetrized() const {
        std::vector<Permutation> out = gens_;
        out.push_back(Permutation::identity(deg_));
        for (const auto& g : gens_) out.push_back(inverse(g));
        return GenSet(deg_, std::move(out));
    }

    bool operator==(const GenSet& o) const {
        return deg_ == o.deg_ && gens_ == o.gens_;
    }

private:
    void recompute_flags() {
        has_identity_ = false;
        symmetric_ = true;
        for (const auto& g : gens_) {
            if (g.is_identity()) has_identity_ = true;
            if (!contains(inverse(g))) symmetric_ = false;
        }
    }

    Point deg_ = 0;
    std::vector<Permutation> gens_;
    std::unordered_map<Permutation, std::uint32_t, PermHash> lookup_;
    bool symmetric_ = true;
    bool has_identity_ = false;
};

using GenSetPtr = std::shared_ptr<const GenSet>;

// Witness word: signed 1-based generator indices; +i is gens[i-1], -i its
// inverse. Empty word is the identity.
using Word = std::vector<std::int32_t>;

inline Permutation evaluate_word(const Word& w, const GenSet& base) {
    Permutation acc = Permutation::identity(base.degree());
    for (std::int32_t s : w) {
        if (s == 0) throw ParamError("witness index 0");
        std::size_t i = static_cast<std::size_t>(s > 0 ? s : -s) - 1;
        if (i >= base.size())
            throw ParamError("witness index " + std::to_string(s) +
                             " out of range");
        acc = s > 0 ? compose(acc, base.generators()[i])
                    : compose(acc, inverse(base.generators()[i]));
    }
    return acc;
}

inline Word inverted_word(const Word& w) {
    Word out(w.rbegin(), w.rend());
    for (auto& s : out) s = -s;
    return out;
}

// A permutation with a word-length certificate over a generating set.
struct WordElement {
    Permutation perm;
    Big length_bound = 0;
    std::optional<Word> witness;
    GenSetPtr base;

    static WordElement identity_of(GenSetPtr b) {
        return WordElement{Permutation::identity(b->degree()), 0, Word{}, std::move(b)};
    }
};

inline void require_same_base(const WordElement& x, const WordElement& y) {
    if (!x.base || !y.base || !(*x.base == *y.base))
        throw BaseMismatchError("word elements over different generating sets");
}

inline bool witness_verify(const WordElement& w, const GenSet& base) {
    if (!w.witness) throw NoWitnessError("element carries no witness");
    if (Big(w.witness->size()) != w.length_bound) return false;
    return evaluate_word(*w.witness, base) == w.perm;
}

// perm = x.perm * y.perm (x applied first); lengths add, witnesses concatenate.
inline WordElement product_bound(const WordElement& x, const WordElement& y) {
    require_same_base(x, y);
    WordElement out;
    out.perm = compose(x.perm, y.perm);
    out.length_bound = x.length_bound + y.length_bound;
    out.base = x.base;
    if (x.witness && y.witness) {
        Word w = *x.witness;
        w.insert(w.end(), y.witness->begin(), y.witness->end());
        out.witness = std::move(w);
    }
    return out;
}

inline WordElement inverse_bound(const WordElement& x) {
    WordElement out;
    out.perm = inverse(x.perm);
    out.length_bound = x.length_bound;
    out.base = x.base;
    if (x.witness) out.witness = inverted_word(*x.witness);
    return out;
}

// x^g = g^{-1} x g; length 2|g| + |x|.
inline WordElement conjugate_bound(const WordElement& x, const WordElement& g) {
    return product_bound(product_bound(inverse_bound(g), x), g);
}

// Substitute each signed index of `w` by the corresponding word element
// (1-based into `table`), producing a word over the table's own base.
inline WordElement substitute_word(const Word& w,
                                   const std::vector<WordElement>& table,
                                   GenSetPtr base) {
    WordElement acc = WordElement::identity_of(std::move(base));
    for (std::int32_t s : w) {
        std::size_t i = static_cast<std::size_t>(s > 0 ? s : -s) - 1;
        if (i >= table.size()) throw ParamError("substitution index out of range");
        acc = product_bound(acc, s > 0 ? table[i] : inverse_bound(table[i]));
    }
    return acc;
}

constexpr std::size_t kDefaultBallCap = 10'000'000;

// An explicitly materialized power A^k with geodesic word lengths. Built by
// BFS over right multiplication; storage is a parent-pointer tree so witness
// words are reconstructed on demand.
class Ball {
public:
    struct Entry {
        Permutation perm;
        std::uint64_t len;
        std::int64_t parent;  // index into entries, -1 for the identity
        std::int32_t gen;     // signed 1-based generator applied last
    };

    struct Store {
        std::vector<Entry> entries;
        std::unordered_map<Permutation, std::uint32_t, PermHash> index;
    };

    Ball() = default;

    const GenSetPtr& base() const { return base_; }
    const Big& radius() const { return radius_; }
    bool truncated() const { return truncated_; }
    // True when expansion reached a fixpoint: the ball equals <A>.
    bool closed() const { return closed_; }

    std::size_t size() const { return members_.size(); }
    Point degree() const { return base_->degree(); }

    // Member access in deterministic (BFS discovery) order.
    const Permutation& perm_at(std::size_t i) const {
        return store_->entries[members_[i]].perm;
    }
    std::uint64_t length_at(std::size_t i) const {
        return store_->entries[members_[i]].len;
    }

    bool contains(const Permutation& g) const { return find(g) >= 0; }

    // Index within this ball's member list, or -1.
    std::int64_t find(const Permutation& g) const {
        auto it = store_->index.find(g);
        if (it == store_->index.end()) return -1;
        auto pos = std::lower_bound(members_.begin(), members_.end(), it->second);
        if (pos == members_.end() || *pos != it->second) return -1;
        return pos - members_.begin();
    }

    Word word_at(std::size_t i) const {
        Word w;
        std::int64_t cur = members_[i];
        while (cur >= 0) {
            const Entry& en = store_->entries[static_cast<std::size_t>(cur)];
            if (en.parent >= 0) w.push_back(en.gen);
            cur = en.parent;
        }
        std::reverse(w.begin(), w.end());
        return w;
    }

    WordElement element_at(std::size_t i) const {
        WordElement w;
        w.perm = perm_at(i);
        w.length_bound = length_at(i);
        w.witness = word_at(i);
        w.base = base_;
        return w;
    }

    std::vector<Permutation> element_set() const {
        std::vector<Permutation> out;
        out.reserve(members_.size());
        for (std::size_t i = 0; i < members_.size(); ++i) out.push_back(perm_at(i));
        return out;
    }

    // Keep only elements satisfying pred; lengths and radius are unchanged.
    template <typename Pred>
    Ball filtered(Pred&& pred) const {
        Ball out = *this;
        out.members_.clear();
        for (std::uint32_t m : members_)
            if (pred(store_->entries[m].perm)) out.members_.push_back(m);
        return out;
    }

    static Ball expand(const GenSet& base, const Big& k,
                       std::size_t cap = kDefaultBallCap) {
        if (!base.symmetric_closed() || !base.contains_identity())
            throw ConventionError(
                "ball expansion requires a symmetric generating set containing "
                "the identity");
        Ball b;
        b.base_ = std::make_shared<const GenSet>(base);
        b.radius_ = k;
        auto store = std::make_shared<Store>();
        store->entries.push_back(
            Entry{Permutation::identity(base.degree()), 0, -1, 0});
        store->index.emplace(store->entries[0].perm, 0u);

        std::size_t frontier_begin = 0;
        std::uint64_t depth = 0;
        bool grew = true;
        while (grew && Big(depth) < k && !b.truncated_) {
            grew = false;
            const std::size_t frontier_end = store->entries.size();
            for (std::size_t f = frontier_begin; f < frontier_end && !b.truncated_; ++f) {
                for (std::size_t gi = 0; gi < base.size(); ++gi) {
                    const Permutation& g = base.generators()[gi];
                    if (g.is_identity()) continue;
                    Permutation next = compose(store->entries[f].perm, g);
                    if (store->index.count(next)) continue;
                    if (store->entries.size() >= cap) {
                        b.truncated_ = true;
                        break;
                    }
                    store->index.emplace(next, static_cast<std::uint32_t>(
                                                   store->entries.size()));
                    store->entries.push_back(
                        Entry{std::move(next), depth + 1,
                              static_cast<std::int64_t>(f),
                              static_cast<std::int32_t>(gi + 1)});
                    grew = true;
                }
            }
            frontier_begin = frontier_end;
            ++depth;
        }
        if (!grew) b.closed_ = true;
        b.members_.resize(store->entries.size());
        std::iota(b.members_.begin(), b.members_.end(), 0u);
        b.store_ = std::move(store);
        return b;
    }

    // Expansion until the fixpoint <A>; errors if the cap is hit.
    static Ball expand_group(const GenSet& base,
                             std::size_t cap = kDefaultBallCap) {
        Ball b = expand(base, Big(cap), cap);
        if (b.truncated_)
            throw BudgetError("group closure exceeds element cap " +
                              std::to_string(cap));
        return b;
    }

private:
    GenSetPtr base_;
    Big radius_ = 0;
    bool truncated_ = false;
    bool closed_ = false;
    std::shared_ptr<const Store> store_;
    std::vector<std::uint32_t> members_;
};

inline Ball filter_pointwise_stab(const Ball& b, const PointSet& sigma) {
    if (sigma.degree() != b.degree())
        throw DegreeError("filter_pointwise_stab: degree mismatch");
    return b.filtered([&](const Permutation& g) {
        for (Point a : sigma.members())
            if (g.apply(a) != a) return false;
        return true;
    });
}

inline Ball filter_setwise_stab(const Ball& b, const PointSet& sigma) {
    if (sigma.degree() != b.degree())
        throw DegreeError("filter_setwise_stab: degree mismatch");
    return b.filtered([&](const Permutation& g) {
        for (Point a : sigma.members())
            if (!sigma.contains(g.apply(a))) return false;
        return true;
    });
}

inline bool fixes_pointwise(const Permutation& g, const PointSet& s) {
    for (Point a : s.members())
        if (g.apply(a) != a) return false;
    return true;
}

inline bool stabilizes_setwise(const Permutation& g, const PointSet& s) {
    for (Point a : s.members())
        if (!s.contains(g.apply(a))) return false;
    return true;
}

// All pairwise products x * y^{-1} over two balls, as word elements keyed by
// the product permutation (shortest certificate kept, first wins on ties).
// With a symmetric ball this materializes A * A^{-1} = A^2.
inline std::vector<WordElement> product_inverse_set(const Ball& a, const Ball& b) {
    std::unordered_map<Permutation, std::size_t, PermHash> best;
    std::vector<WordElement> out;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            Permutation p = compose(a.perm_at(i), inverse(b.perm_at(j)));
            const std::uint64_t len = a.length_at(i) + b.length_at(j);
            auto it = best.find(p);
            if (it == best.end()) {
                best.emplace(std::move(p), out.size());
                WordElement w;
                w.perm = compose(a.perm_at(i), inverse(b.perm_at(j)));
                w.length_bound = len;
                Word word = a.word_at(i);
                Word tail = inverted_word(b.word_at(j));
                word.insert(word.end(), tail.begin(), tail.end());
                w.witness = std::move(word);
                w.base = a.base();
                out.push_back(std::move(w));
            } else if (Big(len) < out[it->second].length_bound) {
                WordElement w;
                w.perm = out[it->second].perm;
                w.length_bound = len;
                Word word = a.word_at(i);
                Word tail = inverted_word(b.word_at(j));
                word.insert(word.end(), tail.begin(), tail.end());
                w.witness = std::move(word);
                w.base = a.base();
                out[it->second] = std::move(w);
            }
        }
    }
    return out;
}

}  // namespace permgrow
