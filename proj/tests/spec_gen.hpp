// Random proper linear-set specs for property sweeps.
#pragma once

#include <optional>
#include <random>
#include <sstream>

#include "fingeo/linset.hpp"

namespace specgen {

using namespace fingeo;

struct GeneratedSpec {
    LinearSetSpec spec;
    SubspaceBasis W;
    BlockParams params;
};

// Draw variable degrees among the divisors of t (with optional trace_zero on
// full-degree variables) until the dimensions sum to the target rank.
inline std::optional<std::vector<VariableSpec>> draw_vars(int t, int target, std::mt19937_64& rng) {
    std::vector<int> divisors;
    for (int s = 1; s <= t; ++s)
        if (t % s == 0) divisors.push_back(s);
    std::vector<VariableSpec> vars;
    int total = 0, idx = 0;
    std::uniform_int_distribution<size_t> pick(0, divisors.size() - 1);
    std::bernoulli_distribution tz(0.3);
    while (total < target) {
        int s = divisors[pick(rng)];
        bool trace_zero = s > 1 && tz(rng);
        int dim = s - (trace_zero ? 1 : 0);
        if (total + dim > target) continue;
        vars.push_back({"v" + std::to_string(idx++), s, trace_zero});
        total += dim;
        if (vars.size() > 24) return std::nullopt;
    }
    return vars;
}

inline std::string draw_expr(const std::vector<VariableSpec>& vars, const TowerPtr& tower, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> frob(0, tower->t() - 1);
    std::uniform_int_distribution<code_t> coeff(1, static_cast<code_t>(tower->size() - 1));
    std::bernoulli_distribution use(0.55);
    std::ostringstream os;
    bool first = true;
    for (const auto& v : vars) {
        if (!use(rng)) continue;
        if (!first) os << " + ";
        first = false;
        code_t c = coeff(rng);
        if (c != 1) os << c << "*";
        os << v.name;
        int e = frob(rng);
        if (e == 1) os << "^q";
        if (e > 1) os << "^q^" << e;
    }
    return os.str();
}

/// A random spec with the requested rank that builds consistently and is
/// proper; retries until one is found (deterministic in the seed).
inline GeneratedSpec random_proper_spec(const TowerPtr& tower, int r, int rank, std::mt19937_64& rng) {
    BlockDecomposition bd(tower, r);
    for (int attempt = 0; attempt < 2000; ++attempt) {
        auto vars = draw_vars(tower->t(), rank, rng);
        if (!vars) continue;
        std::vector<std::string> coords;
        bool empty = false;
        for (int j = 0; j < r; ++j) {
            coords.push_back(draw_expr(*vars, tower, rng));
            if (coords.back().empty()) empty = true;
        }
        if (empty) continue;
        try {
            LinearSetSpec spec(tower, r, *vars, coords);
            SubspaceBasis W = build_W(bd, spec);
            BlockParams params = block_params(bd, W);
            if (!params.proper) continue;
            return {std::move(spec), std::move(W), std::move(params)};
        } catch (const ConfigError&) {
            continue;
        }
    }
    throw std::runtime_error("no proper random spec found (r=" + std::to_string(r) +
                             ", rank=" + std::to_string(rank) + ")");
}

} // namespace specgen
