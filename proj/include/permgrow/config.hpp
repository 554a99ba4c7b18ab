#pragma once

#include <cmath>
#include <string>

#include "permgrow/errors.hpp"

namespace permgrow {

// Named constants of the growth engine and the diameter bound formulas
// F1(n) = C exp(c (log n)^4 log log n),
// F2(n) = exp((log n)^3 + 2 log n + c' c3 (log n)^3 log log n) F1(n) + 2.
// c1 (descent), K (small-support exit) and C are never pinned numerically;
// they ride along symbolically in ledgers and C is taken as 1 in formula
// evaluation.
struct GrowthConfig {
    double orbit_threshold = 0.9;    // required relative orbit length (9/10)
    double setup_fraction = 0.9;     // d in the alternating-section setup
    double descent_fraction = 0.95;  // degree shrink factor on descent
    double c2 = 0.0745;
    double c3 = 750.0;
    double c_prime = 13.423;
    double c4 = 10068.0;
    long long c = 49071;

    // Desk-scale runs may waive the asymptotic guards (m >= (log n)^2 and
    // the occupancy hypothesis); every waiver is reported.
    bool waive_asymptotic_guards = false;

    void validate() const {
        if (!(orbit_threshold > 0 && orbit_threshold <= 1) ||
            !(setup_fraction > 0.5 && setup_fraction < 1) ||
            !(descent_fraction > 0 && descent_fraction < 1))
            throw ParamError("growth config fractions out of range");
        if (std::abs(c2 - 0.149 / 2) > 1e-12)
            throw ParamError("c2 must equal 0.149/2");
        if (c_prime * c3 >= c4) throw ParamError("c4 must exceed c' * c3");
        // c is the least integer exceeding c4 / (4 |log 0.95|)
        const double lower = c4 / (4.0 * std::abs(std::log(0.95)));
        if (!(static_cast<double>(c) > lower &&
              static_cast<double>(c - 1) <= lower))
            throw ParamError("c must be the least integer above c4/(4|log 0.95|)");
    }
};

struct BoundReport {
    long long n = 0;
    double log_f1 = 0;          // natural log of F1(n), C = 1
    double log_f2 = 0;          // natural log of F2(n)
    double main_exponent = 0;   // c
    double ratio = 0;           // log F1 / ((log n)^4 log log n)
    bool eq52_ok = false;       // F1(n) >= 2 K n^{c3 log n + 8}, K = 1
};

inline BoundReport bound_formula(long long n, const GrowthConfig& cfg) {
    if (n < 3) throw ParamError("bound_formula requires n >= 3");
    BoundReport r;
    r.n = n;
    const double ln = std::log(static_cast<double>(n));
    const double lnln = std::log(ln);
    r.log_f1 = static_cast<double>(cfg.c) * ln * ln * ln * ln * lnln;
    const double organ = ln * ln * ln + 2 * ln + cfg.c_prime * cfg.c3 * ln * ln * ln * lnln;
    r.log_f2 = organ + r.log_f1;  // the +2 term vanishes at double precision
    if (r.log_f2 < 700) r.log_f2 = std::log(std::exp(organ + r.log_f1) + 2.0);
    r.main_exponent = static_cast<double>(cfg.c);
    r.ratio = r.log_f1 / (ln * ln * ln * ln * lnln);
    r.eq52_ok = r.log_f1 >= std::log(2.0) + (cfg.c3 * ln + 8) * ln;
    return r;
}

}  // namespace permgrow
