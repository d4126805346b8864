#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "deep_eda/errors.hpp"

namespace deep_eda {

// Fixed-length bit string; the unit of search and fitness evaluation.
using Genome = std::vector<std::uint8_t>;

enum class ProblemKind { Onemax, Trap, Nk, Hiff };

const char* problem_kind_name(ProblemKind kind);
ProblemKind problem_kind_from_name(const std::string& name);

// NK landscape: n overlapping components, each a lookup over its own bit and
// k neighbor bits. Table index packs x_i as the most significant bit and the
// neighbors after it in stored order:
//   idx = x_i << k | x_{nb[0]} << (k-1) | ... | x_{nb[k-1]}
struct NkInstance {
    int n = 0;
    int k = 0;
    std::vector<std::vector<int>> neighbors; // n lists of k distinct indices, none equal to i
    std::vector<std::vector<double>> tables; // n tables of 2^(k+1) values in [0,1]
    double known_optimum = 0.0;

    bool operator==(const NkInstance&) const = default;
};

struct ProblemInstance {
    ProblemKind kind = ProblemKind::Onemax;
    int n = 0;
    int trap_k = 0;                // trap only
    std::optional<NkInstance> nk;  // nk only
    double optimum_fitness = 0.0;

    double evaluate(const Genome& g) const;
};

// Factories; validate parameters and fill in the known optimum.
ProblemInstance make_onemax(int n);
ProblemInstance make_trap(int n, int k);
ProblemInstance make_hiff(int n);
ProblemInstance make_nk_problem(NkInstance inst);

double evaluate_onemax(const Genome& g);
double evaluate_trap(const Genome& g, int k);
double evaluate_nk(const Genome& g, const NkInstance& inst);
double evaluate_hiff(const Genome& g);

// Deterministic per seed. Neighbors drawn uniformly without replacement,
// table values uniform on [0,1]. The global optimum is certified by
// exhaustive enumeration up to n = 34; beyond that the caller has to supply
// it or generation refuses.
NkInstance generate_nk_instance(int n, int k, std::uint64_t seed,
                                std::optional<double> supplied_optimum = std::nullopt);

void save_nk_instance(const NkInstance& inst, const std::string& path);
NkInstance load_nk_instance(const std::string& path);

} // namespace deep_eda
