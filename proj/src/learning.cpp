#include "cfak/learning.hpp"

#include "cfak/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cfak {
namespace {

constexpr double kSigmaFloor = 1e-15;
constexpr double kVarSentinelThreshold = 1e-30;
constexpr double kUSentinel = 1e30;

double norm(std::span<const double> u) {
    double s = 0.0;
    for (const double v : u) s += v * v;
    return std::sqrt(s);
}

} // namespace

ObjectiveContext ObjectiveContext::make(Variant variant, std::size_t dim, double delta,
                                        double r_c, double r_d, double lambda, double u_lim) {
    ObjectiveContext ctx;
    ctx.variant = variant;
    ctx.dim = dim;
    ctx.delta = delta;
    ctx.r_c = r_c;
    ctx.r_d = r_d;
    ctx.lambda = lambda;
    ctx.u_lim = u_lim;
    ctx.alpha_s = std::sqrt(2.0 / static_cast<double>(dim));
    return ctx;
}

void ObjectiveContext::snapshot_doe(const SampleMatrix& doe) {
    dim = doe.cols;
    doe_m = doe.rows;
    doe_dm.resize(doe.rows * doe.cols);
    for (std::size_t d = 0; d < doe.cols; ++d)
        for (std::size_t i = 0; i < doe.rows; ++i)
            doe_dm[d * doe.rows + i] = doe.row(i)[d];
}

double u_score(const Prediction& pred) {
    if (pred.variance < kVarSentinelThreshold) return kUSentinel;
    return std::abs(pred.mean) / std::sqrt(pred.variance);
}

double penalty_coefficient(std::span<const double> responses, std::size_t n_d) {
    if (responses.empty())
        throw std::invalid_argument("penalty_coefficient: need at least one response");
    const auto [mn, mx] = std::minmax_element(responses.begin(), responses.end());
    const double alpha_s = std::sqrt(2.0 / static_cast<double>(n_d));
    return alpha_s * (*mx - *mn) / 4.0;
}

double update_radius(const SampleMatrix& doe, std::size_t n_initial, double r_c) {
    if (doe.rows < n_initial) throw std::invalid_argument("update_radius: bad prefix");
    if (doe.rows == n_initial) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n_initial; ++i) sum += norm(doe.row_span(i));
        return sum / static_cast<double>(n_initial);
    }
    double max_norm = 0.0;
    for (std::size_t i = n_initial; i < doe.rows; ++i)
        max_norm = std::max(max_norm, norm(doe.row_span(i)));
    return std::min(max_norm, r_c);
}

double density_index(std::span<const double> u, const ObjectiveContext& ctx) {
    const double n = norm(u);
    if (ctx.alpha_s * n <= ctx.lambda / ctx.r_d) return ctx.r_d;
    return ctx.lambda / (ctx.alpha_s * n);
}

double objective_value(const Prediction& pred, std::span<const double> u,
                       const ObjectiveContext& ctx) {
    const double sigma = std::max(std::sqrt(std::max(pred.variance, 0.0)), kSigmaFloor);
    double value = std::abs(pred.mean - ctx.delta) / sigma;

    const double u_norm = norm(u);
    value += ctx.p * std::max(u_norm - ctx.r_c, 0.0);
    if (ctx.variant == Variant::penalty || ctx.variant == Variant::density)
        value += ctx.p * std::max(u_norm - ctx.r, 0.0);

    if (ctx.variant == Variant::density && ctx.doe_m > 0) {
        const double d_c = density_index(u, ctx);
        const double min_sq = kernels::active().min_sqdist(u.data(), ctx.doe_dm.data(),
                                                           ctx.doe_m, ctx.dim);
        const double threshold = d_c / ctx.alpha_s;
        if (min_sq < threshold * threshold) value += 2.0;
    }
    return value;
}

double objective(std::span<const double> u, const KrigingModel& model,
                 const ObjectiveContext& ctx) {
    return objective_value(model.predict(u), u, ctx);
}

} // namespace cfak
