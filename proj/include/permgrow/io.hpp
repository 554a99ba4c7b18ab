#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "permgrow/config.hpp"
#include "permgrow/constructions.hpp"
#include "permgrow/diameter.hpp"
#include "permgrow/errors.hpp"
#include "permgrow/growth.hpp"
#include "permgrow/perm.hpp"
#include "permgrow/randwalk.hpp"
#include "permgrow/splitting.hpp"
#include "permgrow/wordset.hpp"

namespace permgrow {

using nlohmann::json;

struct GeneratorFile {
    Point degree = 0;
    std::vector<Permutation> generators;
    std::string name;
};

namespace detail {

inline Point max_point_in_cycles(const std::string& text, int line_no) {
    Point mx = 0;
    Point cur = 0;
    bool in_num = false;
    for (char c : text) {
        if (c >= '0' && c <= '9') {
            cur = cur * 10 + static_cast<Point>(c - '0');
            in_num = true;
        } else {
            if (in_num) mx = std::max(mx, cur);
            cur = 0;
            in_num = false;
        }
    }
    if (in_num) mx = std::max(mx, cur);
    if (mx == 0 && text.find('e') == std::string::npos &&
        text.find("()") == std::string::npos)
        throw ParseError("no points found in cycle text", line_no, 1);
    return mx;
}

}  // namespace detail

// Accepts either a JSON document {degree, generators:[...], name?} where each
// generator is an image array or a cycle string, or bare cycle-notation
// lines (optionally preceded by a "degree N" line; the degree is otherwise
// inferred from the largest point mentioned).
inline GeneratorFile parse_generators(const std::string& text) {
    GeneratorFile out;
    std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) throw ParseError("empty generator input");

    if (text[first] == '{') {
        json doc;
        try {
            doc = json::parse(text);
        } catch (const json::parse_error& e) {
            throw ParseError(std::string("JSON: ") + e.what());
        }
        if (!doc.contains("degree") || !doc["degree"].is_number_unsigned())
            throw ParseError("missing or invalid \"degree\"");
        out.degree = doc["degree"].get<Point>();
        if (out.degree < 1) throw ParseError("degree must be positive");
        out.name = doc.value("name", std::string{});
        if (!doc.contains("generators") || !doc["generators"].is_array())
            throw ParseError("missing \"generators\" array");
        for (const auto& g : doc["generators"]) {
            if (g.is_string()) {
                out.generators.push_back(
                    Permutation::from_cycles(g.get<std::string>(), out.degree));
            } else if (g.is_array()) {
                std::vector<Point> img;
                for (const auto& v : g) {
                    if (!v.is_number_unsigned())
                        throw ParseError("image entries must be positive integers");
                    img.push_back(v.get<Point>());
                }
                if (img.size() != out.degree)
                    throw ParseError("image array length differs from degree");
                out.generators.push_back(Permutation::from_images(std::move(img)));
            } else {
                throw ParseError("generator must be a cycle string or image array");
            }
        }
        return out;
    }

    // bare cycle-notation lines
    std::istringstream in(text);
    std::string line;
    std::vector<std::pair<int, std::string>> cycle_lines;
    int line_no = 0;
    std::optional<Point> declared;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos) continue;
        std::size_t b = line.find_last_not_of(" \t\r");
        std::string t = line.substr(a, b - a + 1);
        if (t.rfind("degree", 0) == 0) {
            try {
                declared = static_cast<Point>(std::stoul(t.substr(6)));
            } catch (...) {
                throw ParseError("malformed degree line", line_no, 1);
            }
            continue;
        }
        if (t[0] == '#') continue;
        cycle_lines.emplace_back(line_no, t);
    }
    if (cycle_lines.empty()) throw ParseError("no generators in input");
    Point degree = declared.value_or(0);
    if (!declared)
        for (auto& [ln, t] : cycle_lines)
            degree = std::max(degree, detail::max_point_in_cycles(t, ln));
    if (degree < 1) throw ParseError("could not determine the degree");
    out.degree = degree;
    for (auto& [ln, t] : cycle_lines) {
        try {
            out.generators.push_back(Permutation::from_cycles(t, degree));
        } catch (ParseError& e) {
            throw ParseError(std::string(e.what()) + " [line " +
                                 std::to_string(ln) + "]",
                             ln, e.column);
        }
    }
    return out;
}

// --- JSON serialization -------------------------------------------------------

inline json to_json(const Permutation& p) {
    json a = json::array();
    for (Point v : p.images()) a.push_back(v);
    return a;
}

inline json to_json(const PointSet& s) {
    json a = json::array();
    for (Point v : s.members()) a.push_back(v);
    return a;
}

inline json to_json(const WordElement& w) {
    json j;
    j["images"] = to_json(w.perm);
    j["length"] = w.length_bound.str();
    if (w.witness) {
        json wit = json::array();
        for (auto s : *w.witness) wit.push_back(s);
        j["witness"] = wit;
    }
    return j;
}

inline json generator_file_json(const GeneratorFile& f) {
    json j;
    j["degree"] = f.degree;
    if (!f.name.empty()) j["name"] = f.name;
    json gens = json::array();
    for (const auto& g : f.generators) gens.push_back(to_json(g));
    j["generators"] = gens;
    return j;
}

// one record per element: {images, length, witness?}
inline std::string ball_dump_jsonl(const Ball& b) {
    std::string out;
    for (std::size_t i = 0; i < b.size(); ++i) {
        json j;
        j["images"] = to_json(b.perm_at(i));
        j["length"] = b.length_at(i);
        j["witness"] = b.word_at(i);
        out += j.dump();
        out += '\n';
    }
    return out;
}

// full builder witnesses included so the certificate can be re-verified
// without this library
inline json to_json(const ThreeCycleCertificate& c) {
    json j;
    j["cycle"] = c.cycle.to_cycle_string();
    j["cycle_images"] = to_json(c.cycle);
    j["g"] = to_json(c.g);
    j["h"] = to_json(c.h);
    if (c.two_step) j["h2"] = to_json(*c.h2);
    j["expression"] = c.two_step ? "[[g,h],h2]" : "[g,h]";
    j["case"] = c.case_fired;
    j["total_length"] = c.total_length.str();
    return j;
}

inline json to_json(const PrimeCycleWitness& w) {
    json j;
    json primes = json::array();
    for (Point p : w.primes) primes.push_back(p);
    j["primes"] = primes;
    j["prime_product"] = w.prime_product.str();
    j["prime_product_target"] = w.prime_product_target.str();
    j["budget"] = w.budget;
    j["h"] = to_json(w.h);
    j["chosen_prime"] = w.chosen_prime;
    j["g"] = to_json(w.g);
    j["budget_sum_lhs"] = w.budget_sum_lhs;
    j["budget_sum_rhs"] = w.budget_sum_rhs;
    j["gamma_divisor_counts"] = w.gamma_divisor_counts;
    j["support_in_gamma"] = w.support_in_gamma;
    return j;
}

inline json to_json(const DiameterResult& r) {
    json j;
    j["order"] = r.group_order.str();
    j["diameter"] = r.diameter;
    j["directed"] = r.directed;
    j["symmetrized"] = r.symmetrized;
    j["mode"] = r.mode;
    json h = json::array();
    for (const auto& c : r.histogram) h.push_back(c.str());
    j["histogram"] = h;
    j["witness"] = to_json(r.witness_perm);
    j["witness_word"] = r.witness_word;
    return j;
}

inline json to_json(const SpectralReport& r) {
    json j;
    j["order"] = r.order;
    j["valency"] = r.valency;
    j["lambda0"] = r.lambda0;
    j["lambda1"] = r.lambda1;
    j["gap"] = r.gap;
    j["diameter"] = r.diameter;
    j["inequality_holds"] = r.ineq;
    return j;
}

inline json to_json(const MixingReport& r) {
    json j;
    j["states"] = r.n_states;
    j["valency"] = r.valency;
    j["step_bound"] = r.step_bound.str();
    j["eps"] = r.eps;
    j["max_deviation"] = r.max_deviation;
    j["entries_ok"] = r.entries_ok;
    j["lambda2"] = r.lambda2;
    j["lambda2_ok"] = r.lambda2_ok;
    return j;
}

inline json to_json(const SplitCertificate& c) {
    json j;
    j["sigma"] = to_json(c.sigma);
    j["rho"] = c.rho;
    j["sigma_S"] = to_json(c.sigma_s);
    j["verified_trivial"] = c.verified_trivial;
    j["size_bound"] = c.size_bound;
    j["retries"] = c.retries;
    j["hypothesis_checked"] = c.hypothesis_checked;
    j["unreachable_pairs"] = c.unreachable_pairs;
    j["pair_threshold"] = c.pair_threshold;
    json s = json::array();
    for (const auto& w : c.s_elements) s.push_back(to_json(w));
    j["S"] = s;
    return j;
}

inline json to_json(const BoundReport& b) {
    json j;
    j["n"] = b.n;
    j["log_F1"] = b.log_f1;
    j["log_F2"] = b.log_f2;
    j["log10_F1"] = b.log_f1 / std::log(10.0);
    j["log10_F2"] = b.log_f2 / std::log(10.0);
    j["main_exponent"] = b.main_exponent;
    j["ratio_logF1_over_shape"] = b.ratio;
    j["eq52_ok"] = b.eq52_ok;
    return j;
}

inline json to_json(const Ledger& l) {
    json entries = json::array();
    for (const auto& e : l.entries) {
        json je;
        je["step"] = e.step;
        je["formula"] = e.formula;
        je["log_value"] = e.log_value;
        if (e.exact) je["exact"] = e.exact->str();
        if (!e.note.empty()) je["note"] = e.note;
        entries.push_back(je);
    }
    json j;
    j["entries"] = entries;
    j["waivers"] = l.waivers;
    return j;
}

inline json to_json(const MainLoopResult& r) {
    json j;
    j["mode"] = r.mode;
    j["iterations"] = r.iterations;
    j["iteration_cap"] = r.iteration_cap;
    json rounds = json::array();
    for (auto k : r.rounds)
        rounds.push_back(k == GrowthOutcome::Kind::Extended ? "extended"
                         : k == GrowthOutcome::Kind::Exit   ? "exit"
                                                            : "descent");
    j["rounds"] = rounds;
    j["bound"] = to_json(r.bound);
    if (r.exact_diameter) {
        j["exact_diameter"] = *r.exact_diameter;
        j["diameter_within_F2"] = r.diameter_within_f2;
    }
    j["ledger"] = to_json(r.ledger);
    if (r.mode == "desk") {
        j["terminal"] = r.last.kind == GrowthOutcome::Kind::Exit ? "exit"
                        : r.last.kind == GrowthOutcome::Kind::Descent
                            ? "descent"
                            : "extended";
        if (r.last.exit_element)
            j["exit_element"] = to_json(*r.last.exit_element);
        if (r.last.kind == GrowthOutcome::Kind::Descent)
            j["descent_degree"] = r.last.descent_degree;
    }
    return j;
}

}  // namespace permgrow
