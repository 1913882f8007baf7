#include "cfak/kriging.hpp"

#include "cfak/kernels.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace cfak {
namespace {

constexpr double kNuggetStart = 1e-10;
constexpr double kNuggetCap = 1e-4;
constexpr double kVarianceFloor = 1e-30;

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct LikelihoodEval {
    bool ok = false;
    double log_objective = std::numeric_limits<double>::infinity();
    double beta = 0.0;
    double sigma2 = 0.0;
    double nugget = 0.0;
};

// Builds R for the given theta and evaluates the log of the Eq.-based reduced
// likelihood objective det(R)^(1/m) * sigma2 through a Cholesky factorization.
// The nugget starts at nugget_floor and grows x10 until the factorization
// succeeds (or the cap is hit).
LikelihoodEval eval_likelihood(const SampleMatrix& pts, const std::vector<double>& y,
                               std::span<const double> theta, double nugget_floor,
                               Eigen::LLT<MatrixXd>* keep_llt = nullptr) {
    const std::size_t m = pts.rows;
    const std::size_t d = pts.cols;

    MatrixXd corr(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        corr(i, i) = 1.0;
        const double* xi = pts.row(i);
        for (std::size_t j = i + 1; j < m; ++j) {
            const double* xj = pts.row(j);
            double e = 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                const double diff = xi[k] - xj[k];
                e -= theta[k] * diff * diff;
            }
            corr(i, j) = corr(j, i) = std::exp(e);
        }
    }

    LikelihoodEval out;
    Eigen::LLT<MatrixXd> llt;
    double nugget = nugget_floor;
    while (true) {
        MatrixXd reg = corr;
        reg.diagonal().array() += nugget;
        llt.compute(reg);
        if (llt.info() == Eigen::Success) break;
        nugget *= 10.0;
        if (nugget > kNuggetCap) return out; // ok == false
    }
    out.nugget = nugget;

    const VectorXd ym = Eigen::Map<const VectorXd>(y.data(), static_cast<Eigen::Index>(m));
    const VectorXd ones = VectorXd::Ones(static_cast<Eigen::Index>(m));
    const MatrixXd& lower = llt.matrixL();
    const VectorXd a = lower.triangularView<Eigen::Lower>().solve(ym);
    const VectorXd b = lower.triangularView<Eigen::Lower>().solve(ones);

    const double btb = b.squaredNorm();
    out.beta = b.dot(a) / btb;
    out.sigma2 = (a - out.beta * b).squaredNorm() / static_cast<double>(m);

    double logdet = 0.0;
    for (std::size_t i = 0; i < m; ++i) logdet += std::log(lower(i, i));
    logdet *= 2.0;

    out.log_objective = logdet / static_cast<double>(m) +
                        std::log(std::max(out.sigma2, 1e-300));
    out.ok = true;
    if (keep_llt) *keep_llt = std::move(llt);
    return out;
}

// Hooke-Jeeves coordinate search in log10(theta) space.
struct SearchState {
    std::vector<double> best_z;
    double best_obj = std::numeric_limits<double>::infinity();
    double nugget_floor = kNuggetStart;
    int evals = 0;
};

double probe(SearchState& st, const SampleMatrix& pts, const std::vector<double>& y,
             const std::vector<double>& z) {
    std::vector<double> theta(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) theta[i] = std::pow(10.0, z[i]);
    const LikelihoodEval ev = eval_likelihood(pts, y, theta, st.nugget_floor);
    ++st.evals;
    if (!ev.ok) return std::numeric_limits<double>::infinity();
    // remember the jitter a difficult theta needed so later evals skip the retries
    st.nugget_floor = std::max(st.nugget_floor, ev.nugget);
    return ev.log_objective;
}

void pattern_search(SearchState& st, const SampleMatrix& pts, const std::vector<double>& y,
                    std::vector<double> z, double lo, double hi, int eval_budget) {
    double f = probe(st, pts, y, z);
    if (f < st.best_obj) {
        st.best_obj = f;
        st.best_z = z;
    }
    double step = 0.5;
    const int start_evals = st.evals;
    while (step >= 0.02 && st.evals - start_evals < eval_budget) {
        bool improved = false;
        for (std::size_t d = 0; d < z.size(); ++d) {
            for (const double sign : {+1.0, -1.0}) {
                std::vector<double> trial = z;
                trial[d] = std::clamp(trial[d] + sign * step, lo, hi);
                if (trial[d] == z[d]) continue;
                const double ft = probe(st, pts, y, trial);
                if (ft < f) {
                    f = ft;
                    z = std::move(trial);
                    improved = true;
                    break;
                }
                if (st.evals - start_evals >= eval_budget) break;
            }
            if (st.evals - start_evals >= eval_budget) break;
        }
        if (!improved) step *= 0.5;
        if (f < st.best_obj) {
            st.best_obj = f;
            st.best_z = z;
        }
    }
}

} // namespace

void TrainingSet::validate() const {
    if (points.rows < 2) throw std::invalid_argument("TrainingSet: need at least 2 points");
    if (y.size() != points.rows) throw std::invalid_argument("TrainingSet: response count mismatch");
    for (const double v : points.data)
        if (!std::isfinite(v)) throw std::invalid_argument("TrainingSet: non-finite point");
    for (const double v : y)
        if (!std::isfinite(v)) throw std::invalid_argument("TrainingSet: non-finite response");
    for (std::size_t i = 0; i < points.rows; ++i) {
        for (std::size_t j = i + 1; j < points.rows; ++j) {
            double s = 0.0;
            for (std::size_t d = 0; d < points.cols; ++d) {
                const double diff = points.row(i)[d] - points.row(j)[d];
                s += diff * diff;
            }
            if (s < 1e-16) throw std::invalid_argument("TrainingSet: duplicate points");
        }
    }
}

double correlation(std::span<const double> theta, std::span<const double> xi,
                   std::span<const double> xj) {
    if (theta.size() != xi.size() || xi.size() != xj.size())
        throw std::invalid_argument("correlation: length mismatch");
    double e = 0.0;
    for (std::size_t d = 0; d < theta.size(); ++d) {
        const double diff = xi[d] - xj[d];
        e -= theta[d] * diff * diff;
    }
    return std::exp(e);
}

KrigingModel KrigingModel::fit(TrainingSet train, const FitOptions& opts) {
    train.validate();
    const std::size_t m = train.points.rows;
    const std::size_t d = train.points.cols;

    KrigingModel model;
    model.train_ = std::move(train);
    model.counter_ = std::make_shared<std::atomic<std::uint64_t>>(0);

    // dimension-major copy for the prediction kernels
    model.train_dm_.resize(m * d);
    for (std::size_t k = 0; k < d; ++k)
        for (std::size_t i = 0; i < m; ++i)
            model.train_dm_[k * m + i] = model.train_.points.row(i)[k];

    const auto& y = model.train_.y;
    const bool constant_y = std::all_of(y.begin(), y.end(),
                                        [&](double v) { return v == y.front(); });
    if (constant_y) {
        model.theta_.assign(d, 1.0);
        model.beta_ = y.front();
        model.sigma2_ = 0.0;
        model.s11_ = static_cast<double>(m);
        model.w_.assign(m, 0.0);
        model.w1_.assign(m, 1.0 / static_cast<double>(m)); // unused when sigma2 == 0
        model.rinv_.assign(m * m, 0.0);
        model.diag_.degenerate = true;
        return model;
    }

    const double lo = opts.theta_log10_lo;
    const double hi = opts.theta_log10_hi;

    SearchState st;
    if (opts.fixed_theta) {
        if (opts.fixed_theta->size() != d)
            throw std::invalid_argument("fit: fixed_theta dimension mismatch");
        st.best_z.resize(d);
        for (std::size_t k = 0; k < d; ++k) st.best_z[k] = std::log10((*opts.fixed_theta)[k]);
        st.best_obj = probe(st, model.train_.points, y, st.best_z);
    } else {
        // seed points: deterministic LHS over the log10 box, plus the warm start
        std::vector<std::vector<double>> seeds;
        const int n_starts = std::max(1, opts.multistarts);
        SampleMatrix lhs = latin_hypercube(static_cast<std::size_t>(std::max(2, n_starts)), d,
                                           1.0, RngStream{0x5EEDC0DEULL, static_cast<std::int64_t>(d)});
        for (int s = 0; s < n_starts; ++s) {
            std::vector<double> z(d);
            for (std::size_t k = 0; k < d; ++k) {
                const double t = 0.5 * (lhs.row(static_cast<std::size_t>(s))[k] + 1.0); // -> [0,1]
                z[k] = lo + t * (hi - lo);
            }
            seeds.push_back(std::move(z));
        }
        if (opts.warm_theta.size() == d) {
            std::vector<double> z(d);
            for (std::size_t k = 0; k < d; ++k)
                z[k] = std::clamp(std::log10(opts.warm_theta[k]), lo, hi);
            seeds.insert(seeds.begin(), std::move(z));
        }

        for (const auto& z : seeds) {
            const double f0 = probe(st, model.train_.points, y, z);
            model.diag_.seed_objectives.push_back(f0);
            if (f0 < st.best_obj) {
                st.best_obj = f0;
                st.best_z = z;
            }
        }
        const int per_start = std::max(20, opts.max_evals / static_cast<int>(seeds.size()));
        // refine from the best seeds only: full budget on the best, a short
        // polish on the runner-up seeds keeps multimodal fits honest
        std::vector<std::size_t> order(seeds.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return model.diag_.seed_objectives[a] < model.diag_.seed_objectives[b];
        });
        const std::size_t refine = std::min<std::size_t>(seeds.size(), 3);
        for (std::size_t k = 0; k < refine; ++k) {
            if (st.evals >= opts.max_evals) break;
            pattern_search(st, model.train_.points, y, seeds[order[k]], lo, hi,
                           k == 0 ? std::max(per_start, opts.max_evals / 2) : per_start);
        }
    }

    if (st.best_z.empty() || !std::isfinite(st.best_obj)) {
        // every probe failed to factorize; report the closest pair
        std::size_t bi = 0, bj = 1;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j) {
                double s = 0.0;
                for (std::size_t k = 0; k < d; ++k) {
                    const double diff = model.train_.points.row(i)[k] - model.train_.points.row(j)[k];
                    s += diff * diff;
                }
                if (s < best) { best = s; bi = i; bj = j; }
            }
        throw SingularModelError(bi, bj);
    }

    model.theta_.resize(d);
    for (std::size_t k = 0; k < d; ++k) model.theta_[k] = std::pow(10.0, st.best_z[k]);

    // final factorization and cached solves at the chosen theta
    Eigen::LLT<MatrixXd> llt;
    const LikelihoodEval ev =
        eval_likelihood(model.train_.points, y, model.theta_, st.nugget_floor, &llt);
    if (!ev.ok) throw SingularModelError(0, 1);

    model.beta_ = ev.beta;
    model.sigma2_ = ev.sigma2;
    model.nugget_ = ev.nugget;
    model.diag_.objective = ev.log_objective;
    model.diag_.evals = st.evals;
    model.diag_.nugget = ev.nugget;

    const Eigen::Index em = static_cast<Eigen::Index>(m);
    const VectorXd ym = Eigen::Map<const VectorXd>(y.data(), em);
    const VectorXd ones = VectorXd::Ones(em);
    const VectorXd w = llt.solve(ym - model.beta_ * ones);
    const VectorXd w1 = llt.solve(ones);
    const MatrixXd rinv = llt.solve(MatrixXd::Identity(em, em));

    model.w_.assign(w.data(), w.data() + m);
    model.w1_.assign(w1.data(), w1.data() + m);
    model.s11_ = w1.sum();
    model.rinv_.assign(rinv.data(), rinv.data() + m * m); // symmetric, layout moot
    return model;
}

double KrigingModel::predict_mean_one(const double* u, double* corr_scratch) const {
    const auto& ops = kernels::active();
    const std::size_t m = train_size();
    ops.corr_vector(u, train_dm_.data(), theta_.data(), m, dim(), corr_scratch);
    return beta_ + ops.dot(corr_scratch, w_.data(), m);
}

Prediction KrigingModel::predict(std::span<const double> u) const {
    if (u.size() != dim()) throw std::invalid_argument("predict: dimension mismatch");
    if (counter_) counter_->fetch_add(1, std::memory_order_relaxed);

    const std::size_t m = train_size();
    if (diag_.degenerate) return {beta_, 0.0};

    const auto& ops = kernels::active();
    std::vector<double> corr(m);
    ops.corr_vector(u.data(), train_dm_.data(), theta_.data(), m, dim(), corr.data());

    const double mean = beta_ + ops.dot(corr.data(), w_.data(), m);
    const double quad = ops.quad_form(rinv_.data(), corr.data(), m);
    const double uu = ops.dot(corr.data(), w1_.data(), m) - 1.0;
    double var = sigma2_ * (1.0 - quad + uu * uu / s11_);
    if (!(var > 0.0)) var = 0.0;
    return {mean, var};
}

std::vector<Prediction> KrigingModel::predict_batch(const SampleMatrix& points) const {
    if (points.cols != dim()) throw std::invalid_argument("predict_batch: dimension mismatch");
    std::vector<Prediction> out;
    out.reserve(points.rows);
    if (counter_) counter_->fetch_add(points.rows, std::memory_order_relaxed);

    const std::size_t m = train_size();
    const auto& ops = kernels::active();
    std::vector<double> corr(m);
    for (std::size_t i = 0; i < points.rows; ++i) {
        if (diag_.degenerate) {
            out.push_back({beta_, 0.0});
            continue;
        }
        const double* u = points.row(i);
        ops.corr_vector(u, train_dm_.data(), theta_.data(), m, dim(), corr.data());
        const double mean = beta_ + ops.dot(corr.data(), w_.data(), m);
        const double quad = ops.quad_form(rinv_.data(), corr.data(), m);
        const double uu = ops.dot(corr.data(), w1_.data(), m) - 1.0;
        double var = sigma2_ * (1.0 - quad + uu * uu / s11_);
        if (!(var > 0.0)) var = 0.0;
        out.push_back({mean, var});
    }
    return out;
}

void KrigingModel::predict_mean_batch(const double* points, std::size_t n, double* means) const {
    if (counter_) counter_->fetch_add(n, std::memory_order_relaxed);
    if (diag_.degenerate) {
        std::fill(means, means + n, beta_);
        return;
    }
    const std::size_t d = dim();
    std::vector<double> corr(train_size());
    for (std::size_t i = 0; i < n; ++i) {
        means[i] = predict_mean_one(points + i * d, corr.data());
    }
}

void KrigingModel::mean_gradient(std::span<const double> u, std::span<double> grad) const {
    if (u.size() != dim() || grad.size() != dim())
        throw std::invalid_argument("mean_gradient: dimension mismatch");
    const std::size_t m = train_size();
    if (diag_.degenerate) {
        std::fill(grad.begin(), grad.end(), 0.0);
        return;
    }

    const auto& ops = kernels::active();
    std::vector<double> corr(m);
    ops.corr_vector(u.data(), train_dm_.data(), theta_.data(), m, dim(), corr.data());

    // d mean / d u_k = sum_i w_i * (-2 theta_k (u_k - x_k^i)) * r_i
    std::vector<double> wr(m);
    for (std::size_t i = 0; i < m; ++i) wr[i] = w_[i] * corr[i];
    for (std::size_t k = 0; k < dim(); ++k) {
        const double* xk = train_dm_.data() + k * m;
        double s_wr_x = 0.0, s_wr = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            s_wr += wr[i];
            s_wr_x += wr[i] * xk[i];
        }
        grad[k] = -2.0 * theta_[k] * (u[k] * s_wr - s_wr_x);
    }
}

} // namespace cfak
