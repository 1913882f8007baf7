#pragma once

// Global-best particle swarm minimizer on a bounded box. Runs a fixed number
// of iterations; the per-(particle, dimension) velocity update draws two
// independent uniforms, so results are fully determined by the stream.

#include "cfak/rng.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace cfak {

struct PsoParams {
    int n_swarm = 100;
    int n_ite_max = 50;
    double inertia = 0.729;
    double c1 = 2.0;
    double c2 = 2.0;
    double v_max = 0.3;   // per-dimension speed cap
    double lo = -6.0;     // box bounds, every dimension
    double hi = 6.0;

    void validate() const;
};

struct PsoResult {
    std::vector<double> x;            // gbest position
    double f = 0.0;                   // gbest value
    std::uint64_t evals = 0;          // objective calls: n_swarm * (n_ite_max + 1)
    std::uint64_t nan_evals = 0;      // NaN objective values treated as +inf
    std::vector<double> gbest_trace;  // gbest value after each iteration (0..n_ite_max)
};

using Objective = std::function<double(std::span<const double>)>;

PsoResult pso_minimize(const Objective& objective, std::size_t dim,
                       const PsoParams& params, RngStream stream);

} // namespace cfak
