#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "permgrow/errors.hpp"

namespace permgrow {

using Big = boost::multiprecision::cpp_int;
using Point = std::uint32_t;  // 1-based everywhere in the public API

class PointSet;

// A permutation of {1..n}. Composition is a right action: compose(p, q)
// applies p first, so apply(compose(p,q), a) == apply(q, apply(p, a)).
// Immutable after construction.
class Permutation {
public:
    Permutation() = default;

    static Permutation identity(Point n) {
        Permutation p;
        p.img_.resize(n);
        std::iota(p.img_.begin(), p.img_.end(), Point{1});
        return p;
    }

    // images[i] is the image of point i+1, values in 1..n.
    static Permutation from_images(std::vector<Point> images) {
        const std::size_t n = images.size();
        std::vector<bool> seen(n, false);
        for (Point v : images) {
            if (v < 1 || v > n)
                throw ParseError("image " + std::to_string(v) +
                                 " out of range 1.." + std::to_string(n));
            if (seen[v - 1])
                throw ParseError("duplicate image " + std::to_string(v));
            seen[v - 1] = true;
        }
        Permutation p;
        p.img_ = std::move(images);
        return p;
    }

    // Cycle notation, e.g. "(1 2 3)(4 5)" or "(1,2,3)". "()" and "e" denote
    // the identity. Points not mentioned are fixed.
    static Permutation from_cycles(const std::string& text, Point degree);

    Point degree() const { return static_cast<Point>(img_.size()); }

    Point apply(Point a) const { return img_[a - 1]; }

    const std::vector<Point>& images() const { return img_; }

    bool is_identity() const {
        for (Point i = 0; i < img_.size(); ++i)
            if (img_[i] != i + 1) return false;
        return true;
    }

    bool operator==(const Permutation& o) const { return img_ == o.img_; }
    bool operator!=(const Permutation& o) const { return img_ != o.img_; }
    bool operator<(const Permutation& o) const { return img_ < o.img_; }

    std::size_t hash() const {
        std::size_t h = 0xcbf29ce484222325ULL;
        for (Point v : img_) {
            h ^= v;
            h *= 0x100000001b3ULL;
        }
        return h;
    }

    std::vector<std::vector<Point>> cycles() const {
        std::vector<std::vector<Point>> out;
        std::vector<bool> done(img_.size(), false);
        for (Point s = 1; s <= img_.size(); ++s) {
            if (done[s - 1] || img_[s - 1] == s) continue;
            std::vector<Point> cyc;
            Point a = s;
            do {
                cyc.push_back(a);
                done[a - 1] = true;
                a = img_[a - 1];
            } while (a != s);
            out.push_back(std::move(cyc));
        }
        return out;
    }

    std::string to_cycle_string() const {
        auto cs = cycles();
        if (cs.empty()) return "()";
        std::string out;
        for (const auto& c : cs) {
            out += '(';
            for (std::size_t i = 0; i < c.size(); ++i) {
                if (i) out += ' ';
                out += std::to_string(c[i]);
            }
            out += ')';
        }
        return out;
    }

    bool is_even() const {
        // parity = n minus number of cycles (fixed points included)
        std::vector<bool> done(img_.size(), false);
        std::size_t transpositions = 0;
        for (Point s = 1; s <= img_.size(); ++s) {
            if (done[s - 1]) continue;
            std::size_t len = 0;
            Point a = s;
            do {
                done[a - 1] = true;
                a = img_[a - 1];
                ++len;
            } while (a != s);
            transpositions += len - 1;
        }
        return transpositions % 2 == 0;
    }

private:
    std::vector<Point> img_;
};

inline void require_same_degree(const Permutation& p, const Permutation& q,
                                const char* what) {
    if (p.degree() != q.degree())
        throw DegreeError(std::string(what) + ": degree mismatch " +
                          std::to_string(p.degree()) + " vs " +
                          std::to_string(q.degree()));
}

// Right action: p first, then q.
inline Permutation compose(const Permutation& p, const Permutation& q) {
    require_same_degree(p, q, "compose");
    std::vector<Point> img(p.degree());
    for (Point i = 1; i <= p.degree(); ++i) img[i - 1] = q.apply(p.apply(i));
    return Permutation::from_images(std::move(img));
}

inline Permutation inverse(const Permutation& p) {
    std::vector<Point> img(p.degree());
    for (Point i = 1; i <= p.degree(); ++i) img[p.apply(i) - 1] = i;
    return Permutation::from_images(std::move(img));
}

// [g,h] = g^{-1} h^{-1} g h under right-action composition.
inline Permutation commutator(const Permutation& g, const Permutation& h) {
    require_same_degree(g, h, "commutator");
    return compose(compose(inverse(g), inverse(h)), compose(g, h));
}

// Conjugate g^h = h^{-1} g h; satisfies a^{g^h} = (((a^{h^-1})^g)^h).
inline Permutation conjugate(const Permutation& g, const Permutation& h) {
    require_same_degree(g, h, "conjugate");
    return compose(inverse(h), compose(g, h));
}

// Sorted, duplicate-free subset of {1..n}.
class PointSet {
public:
    PointSet() = default;

    PointSet(Point degree, std::vector<Point> members) : deg_(degree) {
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()),
                      members.end());
        for (Point a : members)
            if (a < 1 || a > degree)
                throw ParamError("point " + std::to_string(a) +
                                 " outside 1.." + std::to_string(degree));
        pts_ = std::move(members);
    }

    static PointSet full(Point degree) {
        std::vector<Point> all(degree);
        std::iota(all.begin(), all.end(), Point{1});
        return PointSet(degree, std::move(all));
    }

    Point degree() const { return deg_; }
    std::size_t size() const { return pts_.size(); }
    bool empty() const { return pts_.empty(); }
    const std::vector<Point>& members() const { return pts_; }

    bool contains(Point a) const {
        return std::binary_search(pts_.begin(), pts_.end(), a);
    }

    PointSet complement() const {
        std::vector<Point> out;
        out.reserve(deg_ - pts_.size());
        for (Point a = 1; a <= deg_; ++a)
            if (!contains(a)) out.push_back(a);
        return PointSet(deg_, std::move(out));
    }

    // Image set under a permutation of the same degree.
    PointSet image(const Permutation& g) const {
        if (g.degree() != deg_) throw DegreeError("PointSet::image");
        std::vector<Point> out;
        out.reserve(pts_.size());
        for (Point a : pts_) out.push_back(g.apply(a));
        return PointSet(deg_, std::move(out));
    }

    bool is_invariant_under(const Permutation& g) const {
        for (Point a : pts_)
            if (!contains(g.apply(a))) return false;
        return true;
    }

    bool operator==(const PointSet& o) const {
        return deg_ == o.deg_ && pts_ == o.pts_;
    }

private:
    Point deg_ = 0;
    std::vector<Point> pts_;
};

inline PointSet support(const Permutation& p) {
    std::vector<Point> moved;
    for (Point a = 1; a <= p.degree(); ++a)
        if (p.apply(a) != a) moved.push_back(a);
    return PointSet(p.degree(), std::move(moved));
}

struct CycleType {
    std::vector<Point> lengths;  // cycle lengths >= 2, sorted ascending
    Point fixed_points = 0;
};

inline CycleType cycle_type(const Permutation& p) {
    CycleType ct;
    ct.fixed_points = p.degree();
    for (const auto& c : p.cycles()) {
        ct.lengths.push_back(static_cast<Point>(c.size()));
        ct.fixed_points -= static_cast<Point>(c.size());
    }
    std::sort(ct.lengths.begin(), ct.lengths.end());
    return ct;
}

// Restriction g|_D relabelled to 1..|D| following the sorted order of D.
inline Permutation restrict(const Permutation& p, const PointSet& d) {
    if (d.degree() != p.degree()) throw DegreeError("restrict");
    if (!d.is_invariant_under(p))
        throw NotInvariantError("restrict: set is not invariant under " +
                                p.to_cycle_string());
    const auto& pts = d.members();
    std::vector<Point> img(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        Point image = p.apply(pts[i]);
        auto it = std::lower_bound(pts.begin(), pts.end(), image);
        img[i] = static_cast<Point>(it - pts.begin()) + 1;
    }
    return Permutation::from_images(std::move(img));
}

// Restriction of g to D viewed inside the ambient degree: points of D are
// permuted as by g, everything else fixed. Requires D invariant under g.
inline Permutation restrict_ambient(const Permutation& p, const PointSet& d) {
    if (d.degree() != p.degree()) throw DegreeError("restrict_ambient");
    if (!d.is_invariant_under(p))
        throw NotInvariantError("restrict_ambient: set not invariant");
    std::vector<Point> img(p.degree());
    std::iota(img.begin(), img.end(), Point{1});
    for (Point a : d.members()) img[a - 1] = p.apply(a);
    return Permutation::from_images(std::move(img));
}

inline Big order(const Permutation& p) {
    Big ord = 1;
    for (const auto& c : p.cycles()) ord = boost::multiprecision::lcm(ord, Big(c.size()));
    return ord;
}

// p^k via cycle decomposition; k may be any integer (reduced per cycle).
inline Permutation power(const Permutation& p, const Big& k) {
    std::vector<Point> img(p.degree());
    std::iota(img.begin(), img.end(), Point{1});
    for (const auto& c : p.cycles()) {
        const std::size_t len = c.size();
        Big r = k % static_cast<long>(len);
        if (r < 0) r += static_cast<long>(len);
        const std::size_t shift = r.convert_to<std::size_t>();
        for (std::size_t i = 0; i < len; ++i)
            img[c[i] - 1] = c[(i + shift) % len];
    }
    return Permutation::from_images(std::move(img));
}

inline Permutation Permutation::from_cycles(const std::string& text,
                                            Point degree) {
    std::vector<Point> img(degree);
    std::iota(img.begin(), img.end(), Point{1});
    std::size_t i = 0;
    const auto fail = [&](const std::string& msg) {
        throw ParseError(msg, 1, static_cast<int>(i) + 1);
    };
    auto skip_ws = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    skip_ws();
    if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        ++i;
        skip_ws();
        if (i != text.size()) fail("trailing characters after identity");
        return Permutation::from_images(std::move(img));
    }
    bool any = false;
    while (i < text.size()) {
        skip_ws();
        if (i == text.size()) break;
        if (text[i] != '(') fail("expected '('");
        ++i;
        std::vector<Point> cyc;
        for (;;) {
            skip_ws();
            if (i == text.size()) fail("unterminated cycle");
            if (text[i] == ')') {
                ++i;
                break;
            }
            if (text[i] == ',') {
                ++i;
                continue;
            }
            if (!std::isdigit(static_cast<unsigned char>(text[i])))
                fail("expected point number");
            Point v = 0;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
                v = v * 10 + static_cast<Point>(text[i] - '0');
                ++i;
            }
            if (v < 1 || v > degree)
                fail("point " + std::to_string(v) + " outside 1.." +
                     std::to_string(degree));
            cyc.push_back(v);
        }
        any = true;
        if (cyc.size() >= 2) {
            for (std::size_t j = 0; j < cyc.size(); ++j) {
                Point from = cyc[j], to = cyc[(j + 1) % cyc.size()];
                if (img[from - 1] != from)
                    fail("point " + std::to_string(from) +
                         " appears in two cycles");
                img[from - 1] = to;
            }
        }
    }
    if (!any) fail("empty permutation text");
    // from_images re-validates bijectivity (catches overlapping cycles)
    return Permutation::from_images(std::move(img));
}

struct PermHash {
    std::size_t operator()(const Permutation& p) const { return p.hash(); }
};

}  // namespace permgrow
