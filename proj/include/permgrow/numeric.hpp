#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace permgrow::detail {

// Cyclic Jacobi eigenvalues of a dense symmetric matrix, descending.
inline std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> m) {
    const std::size_t n = m.size();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += m[i][j] * m[i][j];
        if (off < 1e-24) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(m[p][q]) < 1e-15) continue;
                const double theta = (m[q][q] - m[p][p]) / (2 * m[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1));
                const double c = 1 / std::sqrt(t * t + 1);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double mkp = m[k][p], mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double mpk = m[p][k], mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = m[i][i];
    std::sort(ev.rbegin(), ev.rend());
    return ev;
}

// Second-largest eigenvalue by shifted power iteration on the complement of
// the all-ones eigenvector (valid for connected regular graphs).
inline double second_eigenvalue_power(const std::vector<std::vector<double>>& m,
                                      double lambda0) {
    const std::size_t n = m.size();
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = 1.0 + 0.123456789 * std::cos(static_cast<double>(i));
    auto deflate = [&](std::vector<double>& x) {
        double mean = 0;
        for (double t : x) mean += t;
        mean /= static_cast<double>(n);
        for (double& t : x) t -= mean;
    };
    deflate(v);
    double est = 0;
    for (int it = 0; it < 20000; ++it) {
        std::vector<double> w(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) w[i] += m[i][j] * v[j];
            w[i] += lambda0 * v[i];
        }
        deflate(w);
        double norm = 0;
        for (double t : w) norm += t * t;
        norm = std::sqrt(norm);
        if (norm < 1e-300) return -lambda0;
        for (double& t : w) t /= norm;
        double next = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double wi = 0;
            for (std::size_t j = 0; j < n; ++j) wi += m[i][j] * w[j];
            next += (wi + lambda0 * w[i]) * w[i];
        }
        v = std::move(w);
        const bool settled = it > 50 && std::abs(next - est) < 1e-12;
        est = next;
        if (settled) break;
    }
    return est - lambda0;
}

}  // namespace permgrow::detail
