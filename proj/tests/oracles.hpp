#pragma once

// Independent brute-force reference implementations used only by the tests.
// Everything here is written from the problem definitions, deliberately not
// sharing code with the library evaluators it checks.

#include <cmath>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "deep_eda/dbm.hpp"
#include "deep_eda/problems.hpp"
#include "deep_eda/rbm.hpp"

namespace oracles {

using deep_eda::DbmParams;
using deep_eda::Genome;
using deep_eda::Matrix;
using deep_eda::NkInstance;
using deep_eda::RbmParams;
using deep_eda::Vector;

inline void for_each_genome(int n, const std::function<void(const Genome&)>& fn) {
    Genome g(n, 0);
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t code = 0; code < total; ++code) {
        for (int i = 0; i < n; ++i) g[i] = static_cast<std::uint8_t>((code >> i) & 1);
        fn(g);
    }
}

inline double ref_onemax(const Genome& g) {
    double s = 0.0;
    for (auto b : g) s += b;
    return s;
}

inline double ref_trap(const Genome& g, int k) {
    double total = 0.0;
    for (size_t start = 0; start < g.size(); start += k) {
        int zeros = 0;
        for (int i = 0; i < k; ++i)
            if (g[start + i] == 0) ++zeros;
        total += zeros == 0 ? static_cast<double>(k) : static_cast<double>(zeros - 1);
    }
    return total;
}

// Recursive formulation: a segment of length 2^l contributes its own length
// when both halves map to the same non-null symbol.
inline std::pair<int, double> ref_hiff_segment(const Genome& g, size_t lo, size_t len) {
    if (len == 1) return {g[lo], 0.0};
    const auto left = ref_hiff_segment(g, lo, len / 2);
    const auto right = ref_hiff_segment(g, lo + len / 2, len / 2);
    double score = left.second + right.second;
    int sym = -1;
    if (left.first == right.first && left.first != -1) {
        sym = left.first;
        score += static_cast<double>(len);
    }
    return {sym, score};
}

inline double ref_hiff(const Genome& g) {
    return ref_hiff_segment(g, 0, g.size()).second;
}

inline double ref_nk(const Genome& g, const NkInstance& inst) {
    double total = 0.0;
    for (int i = 0; i < inst.n; ++i) {
        std::vector<int> participants;
        participants.push_back(i);
        for (int nb : inst.neighbors[i]) participants.push_back(nb);
        unsigned idx = 0;
        for (size_t pos = 0; pos < participants.size(); ++pos)
            idx |= static_cast<unsigned>(g[participants[pos]]) << (inst.k - pos);
        total += inst.tables[i][idx];
    }
    return total / inst.n;
}

// --- RBM joint-state enumeration -----------------------------------------

inline double rbm_energy(const RbmParams& p, const std::vector<int>& v,
                         const std::vector<int>& h) {
    double e = 0.0;
    for (int i = 0; i < p.n(); ++i)
        for (int j = 0; j < p.m(); ++j) e -= v[i] * h[j] * p.W(i, j);
    for (int i = 0; i < p.n(); ++i) e -= p.b[i] * v[i];
    for (int j = 0; j < p.m(); ++j) e -= p.c[j] * h[j];
    return e;
}

inline void bits_of(std::uint64_t code, std::vector<int>& out) {
    for (size_t i = 0; i < out.size(); ++i) out[i] = static_cast<int>((code >> i) & 1);
}

// Mean exact log P(v) over the data rows, by full joint enumeration.
inline double rbm_log_likelihood(const RbmParams& p, const Matrix& data) {
    const int n = p.n(), m = p.m();
    std::vector<int> v(n), h(m);
    double z = 0.0;
    for (std::uint64_t cv = 0; cv < (std::uint64_t{1} << n); ++cv) {
        bits_of(cv, v);
        for (std::uint64_t ch = 0; ch < (std::uint64_t{1} << m); ++ch) {
            bits_of(ch, h);
            z += std::exp(-rbm_energy(p, v, h));
        }
    }
    double total = 0.0;
    for (int r = 0; r < data.rows; ++r) {
        for (int i = 0; i < n; ++i) v[i] = data(r, i) != 0.0 ? 1 : 0;
        double unnorm = 0.0;
        for (std::uint64_t ch = 0; ch < (std::uint64_t{1} << m); ++ch) {
            bits_of(ch, h);
            unnorm += std::exp(-rbm_energy(p, v, h));
        }
        total += std::log(unnorm / z);
    }
    return total / data.rows;
}

// Exact gradient of the mean data log-likelihood with respect to W:
// E_data[v h^T] - E_model[v h^T], both sides computed purely from the
// enumerated joint distribution.
inline Matrix rbm_loglik_grad_W(const RbmParams& p, const Matrix& data) {
    const int n = p.n(), m = p.m();
    std::vector<int> v(n), h(m);

    Matrix model_term(n, m);
    double z = 0.0;
    for (std::uint64_t cv = 0; cv < (std::uint64_t{1} << n); ++cv) {
        bits_of(cv, v);
        for (std::uint64_t ch = 0; ch < (std::uint64_t{1} << m); ++ch) {
            bits_of(ch, h);
            const double w = std::exp(-rbm_energy(p, v, h));
            z += w;
            for (int i = 0; i < n; ++i) {
                if (!v[i]) continue;
                for (int j = 0; j < m; ++j)
                    if (h[j]) model_term(i, j) += w;
            }
        }
    }
    for (auto& x : model_term.data) x /= z;

    Matrix data_term(n, m);
    for (int r = 0; r < data.rows; ++r) {
        for (int i = 0; i < n; ++i) v[i] = data(r, i) != 0.0 ? 1 : 0;
        double cond_z = 0.0;
        Vector h_marginal(m, 0.0);
        for (std::uint64_t ch = 0; ch < (std::uint64_t{1} << m); ++ch) {
            bits_of(ch, h);
            const double w = std::exp(-rbm_energy(p, v, h));
            cond_z += w;
            for (int j = 0; j < m; ++j)
                if (h[j]) h_marginal[j] += w;
        }
        for (int i = 0; i < n; ++i) {
            if (!v[i]) continue;
            for (int j = 0; j < m; ++j) data_term(i, j) += h_marginal[j] / cond_z;
        }
    }
    for (auto& x : data_term.data) x /= data.rows;

    Matrix grad(n, m);
    for (size_t i = 0; i < grad.data.size(); ++i)
        grad.data[i] = data_term.data[i] - model_term.data[i];
    return grad;
}

inline double cosine(const Matrix& a, const Matrix& b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (size_t i = 0; i < a.data.size(); ++i) {
        dot += a.data[i] * b.data[i];
        na += a.data[i] * a.data[i];
        nb += b.data[i] * b.data[i];
    }
    return dot / (std::sqrt(na) * std::sqrt(nb) + 1e-300);
}

// --- DBM enumeration by an independent route ------------------------------

inline double dbm_energy(const DbmParams& p, const std::vector<int>& v,
                         const std::vector<int>& h1, const std::vector<int>& h2) {
    const auto s = p.shape();
    double e = 0.0;
    for (int i = 0; i < s.n; ++i)
        for (int j = 0; j < s.m1; ++j) e -= v[i] * h1[j] * p.W1(i, j);
    for (int j = 0; j < s.m1; ++j)
        for (int k = 0; k < s.m2; ++k) e -= h1[j] * h2[k] * p.W2(j, k);
    for (int i = 0; i < s.n; ++i) e -= p.b[i] * v[i];
    for (int j = 0; j < s.m1; ++j) e -= p.c1[j] * h1[j];
    for (int k = 0; k < s.m2; ++k) e -= p.c2[k] * h2[k];
    return e;
}

// P(v): plain-domain sums, h2-major inner order (the library sums h1-major
// in the log domain, so agreement is a genuine cross-check).
inline double dbm_visible_probability(const Vector& vbits, const DbmParams& p) {
    const auto s = p.shape();
    std::vector<int> v(s.n), h1(s.m1), h2(s.m2);
    auto unnorm = [&](const std::vector<int>& vv) {
        double total = 0.0;
        for (std::uint64_t c2 = 0; c2 < (std::uint64_t{1} << s.m2); ++c2) {
            bits_of(c2, h2);
            for (std::uint64_t c1 = 0; c1 < (std::uint64_t{1} << s.m1); ++c1) {
                bits_of(c1, h1);
                total += std::exp(-dbm_energy(p, vv, h1, h2));
            }
        }
        return total;
    };
    double z = 0.0;
    for (std::uint64_t cv = 0; cv < (std::uint64_t{1} << s.n); ++cv) {
        bits_of(cv, v);
        z += unnorm(v);
    }
    for (int i = 0; i < s.n; ++i) v[i] = vbits[i] != 0.0 ? 1 : 0;
    return unnorm(v) / z;
}

} // namespace oracles
