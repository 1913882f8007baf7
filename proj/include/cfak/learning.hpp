#pragma once

// Acquisition machinery: the U learning function, the penalty coefficient and
// radius schedule, the density-control index, and the three objective-function
// variants used to pick representative samples.

#include "cfak/kriging.hpp"
#include "cfak/probspace.hpp"

#include <span>

namespace cfak {

enum class Variant { basic, penalty, density };

struct ObjectiveContext {
    Variant variant = Variant::density;
    double delta = 0.001;   // offset between the search target and the limit state
    double delta0 = 1e-8;   // fitness guard, reporting only
    double p = 0.0;         // penalty coefficient
    double r_c = 4.3;       // hypersphere radius
    double r = 0.0;         // current penalty radius, <= r_c
    double r_d = 0.5;       // density-control parameters
    double lambda = 0.5;
    double alpha_s = 1.0;   // sqrt(2 / N_D)
    double u_lim = 6.0;

    // DoE snapshot, dimension-major for the distance kernel (density variant)
    std::vector<double> doe_dm;
    std::size_t doe_m = 0;
    std::size_t dim = 0;

    static ObjectiveContext make(Variant variant, std::size_t dim, double delta,
                                 double r_c, double r_d, double lambda, double u_lim);
    void snapshot_doe(const SampleMatrix& doe);
};

// |mean| / sigma; returns the 1e30 sentinel when the variance underflows
// (the point is effectively classified).
double u_score(const Prediction& pred);

// p = sqrt(2/N_D) * (max - min) / 4 over the current DoE responses.
double penalty_coefficient(std::span<const double> responses, std::size_t n_d);

// Radius schedule: mean initial-DoE norm before any acceptance, then the
// largest accepted-point norm clamped at r_c. Rows [0, n_initial) of doe are
// the initial design.
double update_radius(const SampleMatrix& doe, std::size_t n_initial, double r_c);

// Density-control index d_c(u): r_d near the sampling center, decaying as
// 1/||u|| beyond alpha_s*||u|| = lambda/r_d; continuous and non-increasing.
double density_index(std::span<const double> u, const ObjectiveContext& ctx);

// Variant objective given a prediction at u (so callers that already
// predicted do not pay twice).
double objective_value(const Prediction& pred, std::span<const double> u,
                       const ObjectiveContext& ctx);

// Convenience wrapper that predicts through the model.
double objective(std::span<const double> u, const KrigingModel& model,
                 const ObjectiveContext& ctx);

} // namespace cfak
