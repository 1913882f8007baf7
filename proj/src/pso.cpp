#include "cfak/pso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cfak {

void PsoParams::validate() const {
    if (n_swarm < 2) throw std::invalid_argument("pso: n_swarm must be >= 2");
    if (n_ite_max < 1) throw std::invalid_argument("pso: n_ite_max must be >= 1");
    if (!(v_max > 0.0)) throw std::invalid_argument("pso: v_max must be > 0");
    if (!(inertia > 0.0 && inertia <= 1.0)) throw std::invalid_argument("pso: inertia in (0,1]");
    if (!(c1 > 0.0 && c2 > 0.0)) throw std::invalid_argument("pso: c1, c2 must be > 0");
    if (!(lo < hi)) throw std::invalid_argument("pso: empty box");
}

PsoResult pso_minimize(const Objective& objective, std::size_t dim,
                       const PsoParams& params, RngStream stream) {
    params.validate();
    const std::size_t n = static_cast<std::size_t>(params.n_swarm);

    Rng rng(stream);
    PsoResult result;

    std::vector<double> pos(n * dim), vel(n * dim);
    std::vector<double> pbest_pos(n * dim), pbest_val(n);
    for (std::size_t i = 0; i < n * dim; ++i) pos[i] = rng.next_uniform(params.lo, params.hi);
    for (std::size_t i = 0; i < n * dim; ++i) vel[i] = rng.next_uniform(-params.v_max, params.v_max);

    auto evaluate = [&](const double* x) {
        ++result.evals;
        const double f = objective(std::span<const double>(x, dim));
        if (std::isnan(f)) {
            ++result.nan_evals;
            return std::numeric_limits<double>::infinity();
        }
        return f;
    };

    std::size_t gbest = 0;
    for (std::size_t i = 0; i < n; ++i) {
        pbest_val[i] = evaluate(&pos[i * dim]);
        if (pbest_val[i] < pbest_val[gbest]) gbest = i; // ties keep the lowest index
    }
    std::copy(pos.begin(), pos.end(), pbest_pos.begin());
    result.gbest_trace.push_back(pbest_val[gbest]);

    std::vector<double> gbest_pos(pbest_pos.begin() + static_cast<std::ptrdiff_t>(gbest * dim),
                                  pbest_pos.begin() + static_cast<std::ptrdiff_t>((gbest + 1) * dim));
    double gbest_val = pbest_val[gbest];

    for (int iter = 0; iter < params.n_ite_max; ++iter) {
        for (std::size_t i = 0; i < n; ++i) {
            double* x = &pos[i * dim];
            double* v = &vel[i * dim];
            const double* pb = &pbest_pos[i * dim];
            for (std::size_t j = 0; j < dim; ++j) {
                const double r1 = rng.next_unit();
                const double r2 = rng.next_unit();
                double vj = params.inertia * v[j] + params.c1 * r1 * (pb[j] - x[j]) +
                            params.c2 * r2 * (gbest_pos[j] - x[j]);
                vj = std::clamp(vj, -params.v_max, params.v_max);
                double xj = x[j] + vj;
                if (xj < params.lo) { xj = params.lo; vj = 0.0; }
                if (xj > params.hi) { xj = params.hi; vj = 0.0; }
                v[j] = vj;
                x[j] = xj;
            }
            const double f = evaluate(x);
            if (f <= pbest_val[i]) { // weak improvement replaces
                pbest_val[i] = f;
                std::copy(x, x + dim, &pbest_pos[i * dim]);
            }
        }
        // synchronized gbest update from the pbests
        std::size_t best = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (pbest_val[i] < pbest_val[best]) best = i;
        if (pbest_val[best] <= gbest_val) {
            gbest_val = pbest_val[best];
            gbest_pos.assign(pbest_pos.begin() + static_cast<std::ptrdiff_t>(best * dim),
                             pbest_pos.begin() + static_cast<std::ptrdiff_t>((best + 1) * dim));
        }
        result.gbest_trace.push_back(gbest_val);
    }

    result.x = std::move(gbest_pos);
    result.f = gbest_val;
    return result;
}

} // namespace cfak
