#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "permgrow/closure.hpp"
#include "permgrow/constructions.hpp"
#include "permgrow/diameter.hpp"
#include "permgrow/growth.hpp"
#include "permgrow/io.hpp"
#include "permgrow/orbit.hpp"
#include "permgrow/randwalk.hpp"
#include "permgrow/rng.hpp"
#include "permgrow/splitting.hpp"

using namespace permgrow;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParamError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::uint64_t state_budget() {
    if (const char* env = std::getenv("PERMGROW_STATE_BUDGET")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0) return v;
    }
    return kDefaultStateBudget;
}

GeneratorFile load_generators(const std::string& path, bool symmetrize) {
    auto file = parse_generators(read_file(path));
    if (symmetrize) {
        GenSet sym = GenSet(file.degree, file.generators).symmetrized();
        file.generators = sym.generators();
    }
    return file;
}

std::vector<Point> parse_point_list(const std::string& text, Point degree) {
    std::vector<Point> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        const unsigned long v = std::stoul(tok);
        if (v < 1 || v > degree)
            throw ParamError("point " + tok + " outside 1.." +
                             std::to_string(degree));
        out.push_back(static_cast<Point>(v));
    }
    return out;
}

// condensed re-run of the library's property oracles, seeded
json run_verify(std::uint64_t seed, Point max_n) {
    json checks = json::array();
    bool all = true;
    auto push = [&](const std::string& name, std::size_t instances, bool pass) {
        json c;
        c["name"] = name;
        c["instances"] = instances;
        c["pass"] = pass;
        checks.push_back(c);
        all = all && pass;
    };
    auto random_perm = [](Point n, RngStream& rng) {
        std::vector<Point> img(n);
        std::iota(img.begin(), img.end(), Point{1});
        for (Point i = n; i > 1; --i) std::swap(img[i - 1], img[rng.below(i)]);
        return Permutation::from_images(std::move(img));
    };

    {  // group laws and support subadditivity
        auto rng = RngStream::derive(seed, "verify.perm");
        bool ok = true;
        for (int i = 0; i < 200; ++i) {
            Point n = 2 + static_cast<Point>(rng.below(std::max<Point>(max_n - 1, 1)));
            auto a = random_perm(n, rng), b = random_perm(n, rng),
                 c = random_perm(n, rng);
            ok &= compose(compose(a, b), c) == compose(a, compose(b, c));
            ok &= compose(a, inverse(a)).is_identity();
            ok &= support(compose(a, b)).size() <=
                  support(a).size() + support(b).size();
            ok &= (commutator(a, b).is_identity()) ==
                  (compose(a, b) == compose(b, a));
        }
        push("perm-laws", 200, ok);
    }
    {  // orbit-stabilizer inequalities
        auto rng = RngStream::derive(seed, "verify.orbit-stab");
        bool ok = true;
        for (int i = 0; i < 100; ++i) {
            Point n = 3 + static_cast<Point>(rng.below(std::max<Point>(max_n - 2, 1)));
            std::vector<Permutation> set{Permutation::identity(n)};
            for (int j = 0; j < 3; ++j) {
                auto p = random_perm(n, rng);
                set.push_back(inverse(p));
                set.push_back(std::move(p));
            }
            auto ball = Ball::expand(GenSet(n, set).symmetrized(), 1);
            auto r = check_orbit_stabilizer(ball,
                                            {1 + static_cast<Point>(rng.below(n))});
            ok &= r.ineq_31 && r.ineq_32;
        }
        push("orbit-stabilizer", 100, ok);
    }
    {  // ball lengths are geodesic under re-expansion
        auto rng = RngStream::derive(seed, "verify.ball");
        bool ok = true;
        for (int i = 0; i < 10; ++i) {
            Point n = 3 + static_cast<Point>(rng.below(2));
            std::vector<Permutation> gens;
            for (int j = 0; j < 2; ++j) gens.push_back(random_perm(n, rng));
            auto sym = GenSet(n, gens).symmetrized();
            auto b1 = Ball::expand(sym, 3);
            auto b2 = Ball::expand(sym, 4);
            for (std::size_t e = 0; e < b1.size(); ++e) {
                auto idx = b2.find(b1.perm_at(e));
                ok &= idx >= 0 &&
                      b2.length_at(static_cast<std::size_t>(idx)) ==
                          b1.length_at(e);
            }
        }
        push("ball-geodesics", 10, ok);
    }
    {  // schreier closure identity
        auto rng = RngStream::derive(seed, "verify.schreier");
        bool ok = true;
        int done = 0;
        for (int i = 0; i < 60 && done < 20; ++i) {
            Point n = 4 + static_cast<Point>(rng.below(2));
            std::vector<Permutation> gens;
            for (int j = 0; j < 2; ++j) gens.push_back(random_perm(n, rng));
            auto ball = Ball::expand(GenSet(n, gens).symmetrized(), n);
            GenSet a(n, ball.element_set());
            auto h = SubgroupDesc::pointwise_stab(
                PointSet(n, {1 + static_cast<Point>(rng.below(n))}));
            std::vector<Permutation> hg;
            try {
                for (auto& w : schreier_generators(a, h)) hg.push_back(w.perm);
            } catch (const CosetCoverageError&) {
                continue;
            }
            auto lhs = closure(hg);
            std::vector<Permutation> rhs;
            for (const auto& g : closure(a.generators()))
                if (h.contains(g)) rhs.push_back(g);
            std::sort(lhs.begin(), lhs.end());
            std::sort(rhs.begin(), rhs.end());
            ok &= lhs == rhs;
            ++done;
        }
        push("schreier-closure", static_cast<std::size_t>(done), ok);
    }
    {  // spectral gap inequality on Sym(4)
        auto r = spectral_gap_check(GenSet(
            4, {Permutation::from_cycles("(1 2)", 4),
                Permutation::from_cycles("(2 3)", 4),
                Permutation::from_cycles("(3 4)", 4)}));
        push("spectral-gap", 1, r.ineq);
    }
    {  // gv codes
        bool ok = true;
        for (std::uint64_t n : {4ULL, 16ULL, 64ULL, 256ULL}) {
            auto c = gv_code(n);
            ok &= c.words.size() > n;
            try {
                c.verify_pairwise();
            } catch (...) {
                ok = false;
            }
        }
        push("gv-codes", 4, ok);
    }
    {  // splitting certificates
        bool ok = true;
        auto gens = GenSet(5, {Permutation::from_cycles("(1 2)", 5),
                               Permutation::from_cycles("(1 2 3 4 5)", 5)});
        auto ball = Ball::expand(gens.symmetrized(), 1000);
        for (std::uint64_t s = 0; s < 5; ++s) {
            auto cert = splitting_set(ball, PointSet(5, {1}), 0.05, seed + s);
            ok &= cert.verified_trivial &&
                  cert.s_elements.size() <= cert.size_bound;
        }
        push("splitting", 5, ok);
    }

    json out;
    out["seed"] = seed;
    out["max_n"] = max_n;
    out["checks"] = checks;
    out["all_pass"] = all;
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"permutation-group growth toolkit"};
    app.require_subcommand(1);
    int threads = 1;
    app.add_option("--threads", threads,
                   "worker threads (all primitives are deterministic)");

    std::string gens_path, sigma_text, mode = "desk";
    bool directed = false, symmetrize = false, assume_hyp = false,
         waive = false;
    std::uint64_t seed = 0;
    long long bound_n = 0;
    double rho = 0.05;
    Point max_n = 6;
    std::uint64_t walk_steps = 0;
    std::size_t walk_count = 1;
    unsigned ktrans = 0;

    auto* diam = app.add_subcommand("diam", "exact Cayley-graph diameter");
    diam->add_option("--gens", gens_path, "generator file")->required();
    diam->add_flag("--directed", directed, "directed Cayley graph");
    diam->add_flag("--symmetrize", symmetrize, "close generators under inverses");

    auto* spectral = app.add_subcommand("spectral", "adjacency gap vs 1/diam^2");
    spectral->add_option("--gens", gens_path)->required();

    auto* walk = app.add_subcommand("walk", "lazy random-walk samples");
    walk->add_option("--gens", gens_path)->required();
    walk->add_option("--steps", walk_steps, "walk length (0 = pair mixing bound)");
    walk->add_option("--count", walk_count);
    walk->add_option("--seed", seed);

    auto* split = app.add_subcommand("split", "splitting-lemma certificate");
    split->add_option("--gens", gens_path)->required();
    split->add_option("--sigma", sigma_text, "comma-separated points")->required();
    split->add_option("--rho", rho);
    split->add_option("--seed", seed);
    split->add_flag("--assume-hypothesis", assume_hyp);

    auto* grow = app.add_subcommand("grow", "growth-engine main loop");
    grow->add_option("--gens", gens_path, "generator file (desk mode)");
    grow->add_option("--mode", mode)->check(CLI::IsMember({"desk", "trace"}));
    grow->add_option("--n", bound_n, "degree (trace mode)");
    grow->add_option("--seed", seed);
    grow->add_flag("--waive-asymptotic-guards", waive);

    auto* verify = app.add_subcommand("verify", "seeded property suite");
    verify->add_option("--seed", seed);
    verify->add_option("--max-n", max_n);

    auto* bound = app.add_subcommand("bound", "F1/F2 bound formulas");
    bound->add_option("--n", bound_n)->required();

    auto* ktr = app.add_subcommand("ktransitive", "k-transitive witness set");
    ktr->add_option("--gens", gens_path)->required();
    ktr->add_option("--k", ktrans)->required();
    ktr->add_option("--seed", seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // help exits 0, usage errors exit 2
    }

    try {
        json out;
        out["threads"] = threads;
        if (diam->parsed()) {
            auto file = load_generators(gens_path, symmetrize);
            GenSet a(file.degree, file.generators);
            auto res = bfs_diameter(a, directed, state_budget());
            out["input"] = generator_file_json(file);
            out["result"] = to_json(res);
            if (!directed) {
                out["note"] = "generators closed under inverses for the "
                              "undirected graph";
            } else {
                // comparison line only: the directed-vs-undirected bound
                // diam_dir = O(diam (log|G|)^2) carries an unpinned constant
                auto und = bfs_diameter(a, false, state_budget());
                out["undirected_diameter"] = und.diameter;
                const double logg =
                    boost::multiprecision::log(
                        boost::multiprecision::cpp_bin_float_100(res.group_order))
                        .convert_to<double>();
                out["babai_comparison"] =
                    "directed " + std::to_string(res.diameter) +
                    " vs undirected*(log|G|)^2 = " +
                    std::to_string(static_cast<double>(und.diameter) * logg * logg);
            }
        } else if (spectral->parsed()) {
            auto file = load_generators(gens_path, false);
            auto res = spectral_gap_check(GenSet(file.degree, file.generators));
            out["input"] = generator_file_json(file);
            out["result"] = to_json(res);
            if (!res.ineq) {
                std::cout << out.dump(2) << std::endl;
                return 1;
            }
        } else if (walk->parsed()) {
            auto file = load_generators(gens_path, true);
            GenSet sym(file.degree, file.generators);
            std::size_t valency = 0;
            for (const auto& g : sym.generators())
                if (!g.is_identity()) ++valency;
            Big steps = walk_steps
                            ? Big(walk_steps)
                            : detail::practical_walk_length(file.degree, valency);
            WalkSampler sampler(std::make_shared<const GenSet>(sym), steps, seed);
            json samples = json::array();
            for (auto& w : walk_sample(sampler, walk_count))
                samples.push_back(to_json(w));
            out["steps"] = steps.str();
            out["seed"] = seed;
            out["samples"] = samples;
        } else if (split->parsed()) {
            auto file = load_generators(gens_path, true);
            GenSet sym(file.degree, file.generators);
            auto ball = Ball::expand(sym, Big(kClosureCap), kClosureCap);
            if (!ball.closed())
                throw BudgetError("group too large to materialize");
            SplittingOptions opts;
            opts.assume_hypothesis = assume_hyp;
            auto cert = splitting_set(
                ball,
                PointSet(file.degree, parse_point_list(sigma_text, file.degree)),
                rho, seed, opts);
            out["result"] = to_json(cert);
        } else if (grow->parsed()) {
            GrowthConfig cfg;
            cfg.waive_asymptotic_guards = waive;
            cfg.validate();
            if (mode == "trace") {
                if (bound_n < 3) throw ParamError("trace mode needs --n >= 3");
                out["result"] = to_json(main_loop_trace(bound_n, cfg));
            } else {
                if (gens_path.empty()) throw ParamError("desk mode needs --gens");
                auto file = load_generators(gens_path, false);
                out["result"] = to_json(main_loop_desk(
                    GenSet(file.degree, file.generators), cfg, seed));
            }
        } else if (verify->parsed()) {
            out = run_verify(seed, max_n);
            std::cout << out.dump(2) << std::endl;
            return out["all_pass"].get<bool>() ? 0 : 1;
        } else if (bound->parsed()) {
            GrowthConfig cfg;
            cfg.validate();
            out["result"] = to_json(bound_formula(bound_n, cfg));
        } else if (ktr->parsed()) {
            auto file = load_generators(gens_path, true);
            auto res = k_transitive_set(GenSet(file.degree, file.generators),
                                        ktrans, seed);
            json elems = json::array();
            for (const auto& w : res.elements) elems.push_back(to_json(w));
            out["elements"] = elems;
            out["verified"] = res.verified;
        }
        std::cout << out.dump(2) << std::endl;
        return 0;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << std::endl;
        return 2;
    } catch (const ParamError& e) {
        std::cerr << "usage error: " << e.what() << std::endl;
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
}
