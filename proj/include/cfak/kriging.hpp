#pragma once

// Ordinary Kriging surrogate with a Gaussian (squared-exponential) kernel:
// maximum-likelihood fit of the length-scale vector theta, mean/variance
// prediction at arbitrary points, and the analytic gradient of the predicted
// mean. A fitted model is immutable; predictions are thread-safe.

#include "cfak/probspace.hpp"

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace cfak {

struct TrainingSet {
    SampleMatrix points;      // m x dim, U-space
    std::vector<double> y;    // limit-state values, length m

    // Throws unless m >= 2, everything is finite, and no two rows sit closer
    // than 1e-8 (which would make the correlation matrix singular).
    void validate() const;
};

class SingularModelError : public std::runtime_error {
  public:
    SingularModelError(std::size_t i, std::size_t j)
        : std::runtime_error("correlation matrix singular even at maximum nugget"),
          offending{i, j} {}
    std::pair<std::size_t, std::size_t> offending;
};

struct FitOptions {
    double theta_log10_lo = -3.0; // bounds for the theta search, log10 units
    double theta_log10_hi = 2.0;
    int multistarts = 10;
    int max_evals = 600;
    std::vector<double> warm_theta;               // extra search seed (previous fit)
    std::optional<std::vector<double>> fixed_theta; // skip the search entirely
};

struct FitDiagnostics {
    double objective = 0.0;                // log of the reduced-likelihood objective
    std::vector<double> seed_objectives;   // objective at every multistart seed
    int evals = 0;
    double nugget = 0.0;
    bool degenerate = false;               // constant responses
};

struct Prediction {
    double mean = 0.0;
    double variance = 0.0; // clamped at 0
};

// Gaussian correlation prod_d exp(-theta_d (xi_d - xj_d)^2); 1 iff xi == xj.
double correlation(std::span<const double> theta, std::span<const double> xi,
                   std::span<const double> xj);

class KrigingModel {
  public:
    // Minimizes det(R)^(1/m) * sigma2 over theta (multistart pattern search in
    // log10 space), then caches the factorization-derived quantities.
    static KrigingModel fit(TrainingSet train, const FitOptions& opts = {});

    Prediction predict(std::span<const double> u) const;
    std::vector<Prediction> predict_batch(const SampleMatrix& points) const;

    // Mean-only fast path for Monte Carlo populations (row-major points).
    void predict_mean_batch(const double* points, std::size_t n, double* means) const;

    // Analytic gradient of the predicted mean; does not touch the counter.
    void mean_gradient(std::span<const double> u, std::span<double> grad) const;

    std::size_t dim() const { return train_.points.cols; }
    std::size_t train_size() const { return train_.points.rows; }
    const TrainingSet& training() const { return train_; }
    std::span<const double> theta() const { return theta_; }
    double beta() const { return beta_; }
    double sigma2() const { return sigma2_; }
    double nugget() const { return nugget_; }
    const FitDiagnostics& diagnostics() const { return diag_; }

    // Shared prediction counter; incremented by 1 per predict and by rows per
    // batch call. Reassignable so a construction loop can carry one counter
    // across refits.
    std::shared_ptr<std::atomic<std::uint64_t>> counter() const { return counter_; }
    void set_counter(std::shared_ptr<std::atomic<std::uint64_t>> c) { counter_ = std::move(c); }

  private:
    KrigingModel() = default;

    double predict_mean_one(const double* u, double* corr_scratch) const;

    TrainingSet train_;
    std::vector<double> theta_;
    std::vector<double> train_dm_;   // dimension-major copy for the kernels
    std::vector<double> w_;          // R^-1 (y - beta 1)
    std::vector<double> w1_;         // R^-1 1
    std::vector<double> rinv_;       // R^-1, row-major
    double beta_ = 0.0;
    double sigma2_ = 0.0;
    double s11_ = 0.0;               // 1^T R^-1 1
    double nugget_ = 0.0;
    FitDiagnostics diag_;
    std::shared_ptr<std::atomic<std::uint64_t>> counter_;
};

} // namespace cfak
