#pragma once

// Random-vector specifications: marginal distributions, the standard-normal
// to physical-space transform, and the sampling primitives. All marginals are
// mutually independent, so the isoprobabilistic transform reduces to the
// component-wise map x_j = F_j^{-1}(Phi(u_j)).

#include "cfak/rng.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace cfak {

enum class MarginalKind { normal, lognormal, gumbel };

// param1/param2 are the distribution's native location/scale parameters:
// normal (mean, std), lognormal (mu_ln, sigma_ln), Gumbel type-I largest
// value (location a, scale b).
struct Marginal {
    MarginalKind kind = MarginalKind::normal;
    double param1 = 0.0;
    double param2 = 1.0;

    double mean() const;
    double stddev() const;
    bool is_standard_normal() const;
};

// Converts (mean, std) to native parameters by moment matching.
Marginal moments_to_params(MarginalKind kind, double mean, double std);

struct RandomVectorSpec {
    std::vector<Marginal> marginals;

    std::size_t dim() const { return marginals.size(); }
    bool all_standard_normal() const;

    static RandomVectorSpec standard_normal(std::size_t dim);
};

// Dense row-major sample storage: rows = samples, cols = dimension.
struct SampleMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    SampleMatrix() = default;
    SampleMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double* row(std::size_t i) { return data.data() + i * cols; }
    const double* row(std::size_t i) const { return data.data() + i * cols; }
    std::span<const double> row_span(std::size_t i) const { return {row(i), cols}; }
    void append_row(std::span<const double> r);
};

// Standard normal CDF (erfc-based, full double accuracy) and its inverse
// (Acklam's rational approximation refined by one Newton step).
double norm_cdf(double x);
double norm_quantile(double p);

// Component-wise transform from standard normal space to physical space.
// Phi(u) is clamped away from {0,1} where the marginal inverse needs it; each
// clamp increments *clamp_count when provided (diagnostics, not an error).
void u_to_x(std::span<const double> u, const RandomVectorSpec& spec,
            std::span<double> x, std::uint64_t* clamp_count = nullptr);

// n i.i.d. standard normal vectors of the spec's dimension.
SampleMatrix sample_mc(std::size_t n, const RandomVectorSpec& spec, RngStream stream);
SampleMatrix sample_mc(std::size_t n, std::size_t dim, RngStream stream);

// m points in [-bound, bound]^dim; every axis is split into m equal strata
// and each stratum holds exactly one coordinate.
SampleMatrix latin_hypercube(std::size_t m, std::size_t dim, double bound, RngStream stream);

} // namespace cfak
