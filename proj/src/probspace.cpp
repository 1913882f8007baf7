#include "cfak/probspace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cfak {
namespace {

constexpr double kEulerMascheroni = 0.57721566490153286060651209;

} // namespace

double Marginal::mean() const {
    switch (kind) {
        case MarginalKind::normal: return param1;
        case MarginalKind::lognormal: return std::exp(param1 + 0.5 * param2 * param2);
        case MarginalKind::gumbel: return param1 + kEulerMascheroni * param2;
    }
    return 0.0;
}

double Marginal::stddev() const {
    switch (kind) {
        case MarginalKind::normal: return param2;
        case MarginalKind::lognormal:
            return mean() * std::sqrt(std::exp(param2 * param2) - 1.0);
        case MarginalKind::gumbel:
            return std::numbers::pi * param2 / std::sqrt(6.0);
    }
    return 0.0;
}

bool Marginal::is_standard_normal() const {
    return kind == MarginalKind::normal && param1 == 0.0 && param2 == 1.0;
}

Marginal moments_to_params(MarginalKind kind, double mean, double std) {
    if (!(std > 0.0)) throw std::invalid_argument("moments_to_params: std must be > 0");
    switch (kind) {
        case MarginalKind::normal:
            return {kind, mean, std};
        case MarginalKind::lognormal: {
            if (!(mean > 0.0))
                throw std::invalid_argument("moments_to_params: lognormal mean must be > 0");
            const double cv = std / mean;
            const double sigma_ln = std::sqrt(std::log1p(cv * cv));
            const double mu_ln = std::log(mean) - 0.5 * sigma_ln * sigma_ln;
            return {kind, mu_ln, sigma_ln};
        }
        case MarginalKind::gumbel: {
            const double scale = std * std::sqrt(6.0) / std::numbers::pi;
            const double location = mean - kEulerMascheroni * scale;
            return {kind, location, scale};
        }
    }
    throw std::invalid_argument("moments_to_params: unknown marginal kind");
}

bool RandomVectorSpec::all_standard_normal() const {
    return std::all_of(marginals.begin(), marginals.end(),
                       [](const Marginal& m) { return m.is_standard_normal(); });
}

RandomVectorSpec RandomVectorSpec::standard_normal(std::size_t dim) {
    RandomVectorSpec spec;
    spec.marginals.assign(dim, Marginal{MarginalKind::normal, 0.0, 1.0});
    return spec;
}

void SampleMatrix::append_row(std::span<const double> r) {
    if (rows == 0 && cols == 0) cols = r.size();
    if (r.size() != cols) throw std::invalid_argument("append_row: column mismatch");
    data.insert(data.end(), r.begin(), r.end());
    ++rows;
}

double norm_cdf(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double norm_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("norm_quantile: p must be in (0,1)");

    // Acklam's inverse-normal approximation (|rel err| < 1.2e-9) ...
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425;

    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    // ... refined by one Newton step on Phi(x) - p = 0.
    const double err = norm_cdf(x) - p;
    const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
    if (pdf > 0.0) x -= err / pdf;
    return x;
}

void u_to_x(std::span<const double> u, const RandomVectorSpec& spec,
            std::span<double> x, std::uint64_t* clamp_count) {
    if (u.size() != spec.dim() || x.size() != spec.dim())
        throw std::invalid_argument("u_to_x: dimension mismatch");

    for (std::size_t j = 0; j < u.size(); ++j) {
        const Marginal& m = spec.marginals[j];
        switch (m.kind) {
            case MarginalKind::normal:
                x[j] = m.param1 + m.param2 * u[j];
                break;
            case MarginalKind::lognormal:
                x[j] = std::exp(m.param1 + m.param2 * u[j]);
                break;
            case MarginalKind::gumbel: {
                double p = norm_cdf(u[j]);
                const double lo = 1e-16;
                const double hi = std::nextafter(1.0, 0.0);
                if (p < lo || p > hi) {
                    p = std::clamp(p, lo, hi);
                    if (clamp_count) ++*clamp_count;
                }
                x[j] = m.param1 - m.param2 * std::log(-std::log(p));
                break;
            }
        }
    }
}

SampleMatrix sample_mc(std::size_t n, std::size_t dim, RngStream stream) {
    if (n < 1) throw std::invalid_argument("sample_mc: n must be >= 1");
    SampleMatrix out(n, dim);
    Rng rng(stream);
    for (double& v : out.data) v = rng.next_normal();
    return out;
}

SampleMatrix sample_mc(std::size_t n, const RandomVectorSpec& spec, RngStream stream) {
    return sample_mc(n, spec.dim(), stream);
}

SampleMatrix latin_hypercube(std::size_t m, std::size_t dim, double bound, RngStream stream) {
    if (m < 2) throw std::invalid_argument("latin_hypercube: m must be >= 2");
    if (!(bound > 0.0)) throw std::invalid_argument("latin_hypercube: bound must be > 0");

    SampleMatrix out(m, dim);
    Rng rng(stream);
    std::vector<std::size_t> perm(m);
    const double width = 2.0 * bound / static_cast<double>(m);

    for (std::size_t d = 0; d < dim; ++d) {
        for (std::size_t i = 0; i < m; ++i) perm[i] = i;
        for (std::size_t i = m - 1; i > 0; --i) { // Fisher-Yates
            const std::size_t j = static_cast<std::size_t>(rng.next_u64() % (i + 1));
            std::swap(perm[i], perm[j]);
        }
        for (std::size_t i = 0; i < m; ++i) {
            const double offset = rng.next_unit();
            out.row(i)[d] = -bound + (static_cast<double>(perm[i]) + offset) * width;
        }
    }
    return out;
}

} // namespace cfak
