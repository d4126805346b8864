#include "deep_eda/problems.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "deep_eda/rng.hpp"
#include "deep_eda/textio.hpp"

namespace deep_eda {

const char* problem_kind_name(ProblemKind kind) {
    switch (kind) {
        case ProblemKind::Onemax: return "onemax";
        case ProblemKind::Trap: return "trap";
        case ProblemKind::Nk: return "nk";
        case ProblemKind::Hiff: return "hiff";
    }
    return "?";
}

ProblemKind problem_kind_from_name(const std::string& name) {
    if (name == "onemax") return ProblemKind::Onemax;
    if (name == "trap") return ProblemKind::Trap;
    if (name == "nk") return ProblemKind::Nk;
    if (name == "hiff") return ProblemKind::Hiff;
    throw std::invalid_argument("unknown problem kind: " + name);
}

double evaluate_onemax(const Genome& g) {
    return static_cast<double>(std::accumulate(g.begin(), g.end(), 0));
}

double evaluate_trap(const Genome& g, int k) {
    if (k < 1 || g.size() % static_cast<size_t>(k) != 0)
        throw std::invalid_argument("trap: genome length not divisible by block size");
    double total = 0.0;
    for (size_t start = 0; start < g.size(); start += k) {
        int ones = 0;
        for (int i = 0; i < k; ++i) ones += g[start + i];
        total += ones == k ? k : k - (ones + 1);
    }
    return total;
}

double evaluate_nk(const Genome& g, const NkInstance& inst) {
    if (static_cast<int>(g.size()) != inst.n)
        throw std::invalid_argument("nk: genome length does not match instance");
    double total = 0.0;
    for (int i = 0; i < inst.n; ++i) {
        unsigned idx = static_cast<unsigned>(g[i]) << inst.k;
        const auto& nb = inst.neighbors[i];
        for (int j = 0; j < inst.k; ++j)
            idx |= static_cast<unsigned>(g[nb[j]]) << (inst.k - 1 - j);
        total += inst.tables[i][idx];
    }
    return total / inst.n;
}

double evaluate_hiff(const Genome& g) {
    const size_t n = g.size();
    if (n < 2 || !std::has_single_bit(n))
        throw std::invalid_argument("hiff: genome length must be a power of two >= 2");
    // -1 is the null symbol
    std::vector<int> sym(g.begin(), g.end());
    double total = 0.0;
    double level_weight = 2.0;
    while (sym.size() >= 2) {
        std::vector<int> next(sym.size() / 2);
        for (size_t b = 0; b < next.size(); ++b) {
            const int a = sym[2 * b], c = sym[2 * b + 1];
            if (a == c && a != -1) {
                total += level_weight;
                next[b] = a;
            } else {
                next[b] = -1;
            }
        }
        sym = std::move(next);
        level_weight *= 2.0;
    }
    return total;
}

double ProblemInstance::evaluate(const Genome& g) const {
    switch (kind) {
        case ProblemKind::Onemax: return evaluate_onemax(g);
        case ProblemKind::Trap: return evaluate_trap(g, trap_k);
        case ProblemKind::Nk: return evaluate_nk(g, *nk);
        case ProblemKind::Hiff: return evaluate_hiff(g);
    }
    throw std::logic_error("unreachable problem kind");
}

ProblemInstance make_onemax(int n) {
    if (n < 1) throw std::invalid_argument("onemax: n must be positive");
    ProblemInstance p;
    p.kind = ProblemKind::Onemax;
    p.n = n;
    p.optimum_fitness = n;
    return p;
}

ProblemInstance make_trap(int n, int k) {
    if (n < 1 || k < 1 || n % k != 0)
        throw std::invalid_argument("trap: n must be a positive multiple of k");
    ProblemInstance p;
    p.kind = ProblemKind::Trap;
    p.n = n;
    p.trap_k = k;
    p.optimum_fitness = n; // all-ones: every block scores k
    return p;
}

ProblemInstance make_hiff(int n) {
    if (n < 2 || !std::has_single_bit(static_cast<unsigned>(n)))
        throw std::invalid_argument("hiff: n must be a power of two >= 2");
    ProblemInstance p;
    p.kind = ProblemKind::Hiff;
    p.n = n;
    const int levels = std::bit_width(static_cast<unsigned>(n)) - 1;
    p.optimum_fitness = static_cast<double>(levels) * n;
    return p;
}

namespace {

void validate_nk(const NkInstance& inst, bool from_file, int line_base) {
    auto fail = [&](const std::string& msg, int line) -> void {
        if (from_file) throw ParseError(msg, line);
        throw std::invalid_argument("nk instance: " + msg);
    };
    if (inst.n < 1 || inst.k < 0 || inst.k >= inst.n) fail("need 0 <= k < n", 1);
    if (static_cast<int>(inst.neighbors.size()) != inst.n ||
        static_cast<int>(inst.tables.size()) != inst.n)
        fail("wrong number of neighbor lists or tables", 1);
    const size_t table_len = size_t{1} << (inst.k + 1);
    for (int i = 0; i < inst.n; ++i) {
        const auto& nb = inst.neighbors[i];
        const int line = line_base + 1 + i;
        if (static_cast<int>(nb.size()) != inst.k) fail("neighbor list has wrong length", line);
        std::vector<int> sorted(nb);
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            fail("duplicate neighbor index", line);
        for (int v : nb)
            if (v < 0 || v >= inst.n || v == i) fail("neighbor index out of range", line);
    }
    for (int i = 0; i < inst.n; ++i) {
        const int line = line_base + 1 + inst.n + i;
        if (inst.tables[i].size() != table_len) fail("table has wrong length", line);
        for (double v : inst.tables[i])
            if (!(v >= 0.0 && v <= 1.0)) fail("table value outside [0,1]", line);
    }
}

// Exhaustive max by direct evaluation; fine up to ~2^20 genomes.
double nk_max_direct(const NkInstance& inst) {
    Genome g(inst.n, 0);
    double best = -1.0;
    const std::uint64_t total = std::uint64_t{1} << inst.n;
    for (std::uint64_t code = 0; code < total; ++code) {
        for (int i = 0; i < inst.n; ++i) g[i] = static_cast<std::uint8_t>((code >> i) & 1);
        best = std::max(best, evaluate_nk(g, inst));
    }
    return best;
}

// Gray-code walk with incremental component updates for n in (20, 34].
// The running sum is refreshed periodically to keep rounding drift bounded,
// and the winning genome is re-evaluated with evaluate_nk at the end so the
// stored optimum is bit-identical to what the evaluator can reach.
double nk_max_graycode(const NkInstance& inst) {
    const int n = inst.n;
    std::vector<std::vector<int>> dependents(n); // components affected by each bit
    for (int comp = 0; comp < n; ++comp) {
        dependents[comp].push_back(comp);
        for (int j = 0; j < inst.k; ++j) dependents[inst.neighbors[comp][j]].push_back(comp);
    }

    const std::uint64_t total = std::uint64_t{1} << n;
    constexpr std::uint64_t kRefreshPeriod = 1u << 16;

    double global_best = -1.0;
    std::uint64_t global_best_state = 0;

#pragma omp parallel
    {
        int nthreads = 1, tid = 0;
#ifdef _OPENMP
        nthreads = omp_get_num_threads();
        tid = omp_get_thread_num();
#endif
        const std::uint64_t chunk = (total + nthreads - 1) / nthreads;
        const std::uint64_t begin = std::min<std::uint64_t>(chunk * tid, total);
        const std::uint64_t end = std::min<std::uint64_t>(begin + chunk, total);

        if (begin < end) {
            Genome g(n);
            std::vector<unsigned> idx(n);
            auto rebuild = [&](std::uint64_t code) {
                const std::uint64_t gray = code ^ (code >> 1);
                for (int i = 0; i < n; ++i) g[i] = static_cast<std::uint8_t>((gray >> i) & 1);
                for (int c = 0; c < n; ++c) {
                    unsigned v = static_cast<unsigned>(g[c]) << inst.k;
                    for (int j = 0; j < inst.k; ++j)
                        v |= static_cast<unsigned>(g[inst.neighbors[c][j]]) << (inst.k - 1 - j);
                    idx[c] = v;
                }
                double s = 0.0;
                for (int c = 0; c < n; ++c) s += inst.tables[c][idx[c]];
                return s;
            };

            double sum = rebuild(begin);
            double best = sum;
            std::uint64_t best_state = begin ^ (begin >> 1);

            for (std::uint64_t code = begin + 1; code < end; ++code) {
                const int bit = std::countr_zero(code);
                g[bit] ^= 1;
                for (int comp : dependents[bit]) {
                    sum -= inst.tables[comp][idx[comp]];
                    unsigned v = static_cast<unsigned>(g[comp]) << inst.k;
                    for (int j = 0; j < inst.k; ++j)
                        v |= static_cast<unsigned>(g[inst.neighbors[comp][j]]) << (inst.k - 1 - j);
                    idx[comp] = v;
                    sum += inst.tables[comp][idx[comp]];
                }
                if ((code & (kRefreshPeriod - 1)) == 0) sum = rebuild(code);
                if (sum > best) {
                    best = sum;
                    best_state = code ^ (code >> 1);
                }
            }

#pragma omp critical
            {
                if (best > global_best) {
                    global_best = best;
                    global_best_state = best_state;
                }
            }
        }
    }

    Genome winner(n);
    for (int i = 0; i < n; ++i)
        winner[i] = static_cast<std::uint8_t>((global_best_state >> i) & 1);
    return evaluate_nk(winner, inst);
}

} // namespace

ProblemInstance make_nk_problem(NkInstance inst) {
    validate_nk(inst, false, 1);
    ProblemInstance p;
    p.kind = ProblemKind::Nk;
    p.n = inst.n;
    p.optimum_fitness = inst.known_optimum;
    p.nk = std::move(inst);
    return p;
}

NkInstance generate_nk_instance(int n, int k, std::uint64_t seed,
                                std::optional<double> supplied_optimum) {
    if (n < 1) throw std::invalid_argument("nk: n must be positive");
    if (k < 0 || k >= n) throw std::invalid_argument("nk: need 0 <= k < n");
    if (n > 34 && !supplied_optimum)
        throw std::invalid_argument(
            "nk: optimum certification by enumeration is limited to n <= 34; "
            "supply a known optimum for larger instances");

    Rng rng(seed);
    NkInstance inst;
    inst.n = n;
    inst.k = k;
    inst.neighbors.resize(n);
    inst.tables.resize(n);

    std::vector<int> pool(n - 1);
    for (int i = 0; i < n; ++i) {
        int w = 0;
        for (int v = 0; v < n; ++v)
            if (v != i) pool[w++] = v;
        // partial Fisher-Yates: first k entries are a uniform draw w/o replacement
        for (int j = 0; j < k; ++j) {
            const int pick = j + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1 - j)));
            std::swap(pool[j], pool[pick]);
        }
        inst.neighbors[i].assign(pool.begin(), pool.begin() + k);
    }
    const size_t table_len = size_t{1} << (k + 1);
    for (int i = 0; i < n; ++i) {
        inst.tables[i].resize(table_len);
        for (auto& v : inst.tables[i]) v = rng.uniform01();
    }

    if (supplied_optimum) {
        inst.known_optimum = *supplied_optimum;
    } else {
        inst.known_optimum = n <= 20 ? nk_max_direct(inst) : nk_max_graycode(inst);
    }
    return inst;
}

void save_nk_instance(const NkInstance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    out << "nk " << inst.n << ' ' << inst.k << ' ' << format_real(inst.known_optimum) << '\n';
    for (const auto& nb : inst.neighbors) {
        for (size_t j = 0; j < nb.size(); ++j) out << (j ? " " : "") << nb[j];
        out << '\n';
    }
    for (const auto& table : inst.tables) {
        for (size_t j = 0; j < table.size(); ++j) out << (j ? " " : "") << format_real(table[j]);
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

NkInstance load_nk_instance(const std::string& path) {
    LineReader rd(path);
    auto header = rd.expect_tokens(4, "header fields");
    if (header[0] != "nk") throw ParseError("expected 'nk' header", rd.line());
    NkInstance inst;
    inst.n = LineReader::parse_int(header[1], rd.line(), "n");
    inst.k = LineReader::parse_int(header[2], rd.line(), "k");
    inst.known_optimum = LineReader::parse_real(header[3], rd.line(), "known optimum");
    if (inst.n < 1 || inst.k < 0 || inst.k >= inst.n)
        throw ParseError("need 0 <= k < n", rd.line());
    inst.neighbors.resize(inst.n);
    for (int i = 0; i < inst.n; ++i)
        inst.neighbors[i] = rd.expect_ints(static_cast<size_t>(inst.k), "neighbor indices");
    const size_t table_len = size_t{1} << (inst.k + 1);
    inst.tables.resize(inst.n);
    for (int i = 0; i < inst.n; ++i)
        inst.tables[i] = rd.expect_reals(table_len, "table values");
    validate_nk(inst, true, 1);
    return inst;
}

} // namespace deep_eda
