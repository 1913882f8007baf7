// Scalar reference kernels. These are the ground truth the SIMD variants are
// tested against, so they stay as plain as possible.

#include "cfak/kernels.hpp"

#include <cmath>
#include <limits>

namespace cfak::kernels {
namespace {

void vexp_scalar(const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = std::exp(x[i]);
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

void corr_vector_scalar(const double* q, const double* xt, const double* theta,
                        std::size_t m, std::size_t dim, double* y) {
    for (std::size_t i = 0; i < m; ++i) {
        double e = 0.0;
        for (std::size_t d = 0; d < dim; ++d) {
            const double diff = q[d] - xt[d * m + i];
            e -= theta[d] * diff * diff;
        }
        y[i] = std::exp(e);
    }
}

double min_sqdist_scalar(const double* q, const double* xt,
                         std::size_t m, std::size_t dim) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
        double s = 0.0;
        for (std::size_t d = 0; d < dim; ++d) {
            const double diff = q[d] - xt[d * m + i];
            s += diff * diff;
        }
        if (s < best) best = s;
    }
    return best;
}

double quad_form_scalar(const double* a, const double* r, std::size_t m) {
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        total += r[i] * dot_scalar(a + i * m, r, m);
    }
    return total;
}

} // namespace

const Ops& scalar() {
    static const Ops ops{"scalar",       vexp_scalar,       dot_scalar,
                         corr_vector_scalar, min_sqdist_scalar, quad_form_scalar};
    return ops;
}

} // namespace cfak::kernels
