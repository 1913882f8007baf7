// AVX2/FMA kernels. This translation unit is compiled with -mavx2 -mfma and
// must only be entered after a runtime CPU check (see kernels_dispatch.cpp).

#include "cfak/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>
#include <limits>

namespace cfak::kernels {
namespace {

// Vectorized exp for doubles, Cephes-style: reduce x = n*ln2 + r, evaluate a
// Pade approximant of exp(r) on |r| <= ln2/2, scale by 2^n in two steps so
// subnormal results stay representable. Inputs must be finite; values are
// clamped to [-746, 710] which covers the full double range of exp.
inline __m256d exp_pd(__m256d x) {
    const __m256d log2e = _mm256_set1_pd(1.4426950408889634073599);
    const __m256d c1 = _mm256_set1_pd(6.93145751953125e-1);
    const __m256d c2 = _mm256_set1_pd(1.42860682030941723212e-6);

    const __m256d p0 = _mm256_set1_pd(1.26177193074810590878e-4);
    const __m256d p1 = _mm256_set1_pd(3.02994407707441961300e-2);
    const __m256d p2 = _mm256_set1_pd(9.99999999999999999910e-1);
    const __m256d q0 = _mm256_set1_pd(3.00198505138664455042e-6);
    const __m256d q1 = _mm256_set1_pd(2.52448340349684104192e-3);
    const __m256d q2 = _mm256_set1_pd(2.27265548208155028766e-1);
    const __m256d q3 = _mm256_set1_pd(2.00000000000000000005e0);

    x = _mm256_max_pd(_mm256_set1_pd(-746.0), _mm256_min_pd(_mm256_set1_pd(710.0), x));

    const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(n, c1, x);
    r = _mm256_fnmadd_pd(n, c2, r);

    const __m256d rr = _mm256_mul_pd(r, r);
    __m256d p = _mm256_fmadd_pd(p0, rr, p1);
    p = _mm256_fmadd_pd(p, rr, p2);
    p = _mm256_mul_pd(p, r);
    __m256d q = _mm256_fmadd_pd(q0, rr, q1);
    q = _mm256_fmadd_pd(q, rr, q2);
    q = _mm256_fmadd_pd(q, rr, q3);
    const __m256d er = _mm256_fmadd_pd(_mm256_set1_pd(2.0),
                                       _mm256_div_pd(p, _mm256_sub_pd(q, p)),
                                       _mm256_set1_pd(1.0));

    // 2^n = 2^n1 * 2^n2 with n1 = n>>1, keeping each factor's exponent in range
    const __m128i ni = _mm256_cvtpd_epi32(n);
    const __m128i n1 = _mm_srai_epi32(ni, 1);
    const __m128i n2 = _mm_sub_epi32(ni, n1);
    const __m256i bias = _mm256_set1_epi64x(1023);
    const __m256d s1 = _mm256_castsi256_pd(
        _mm256_slli_epi64(_mm256_add_epi64(_mm256_cvtepi32_epi64(n1), bias), 52));
    const __m256d s2 = _mm256_castsi256_pd(
        _mm256_slli_epi64(_mm256_add_epi64(_mm256_cvtepi32_epi64(n2), bias), 52));

    return _mm256_mul_pd(_mm256_mul_pd(er, s1), s2);
}

void vexp_avx2(const double* x, double* y, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(y + i, exp_pd(_mm256_loadu_pd(x + i)));
    }
    for (; i < n; ++i) y[i] = std::exp(x[i]);
}

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

void corr_vector_avx2(const double* q, const double* xt, const double* theta,
                      std::size_t m, std::size_t dim, double* y) {
    std::size_t i = 0;
    for (; i + 4 <= m; i += 4) {
        __m256d acc = _mm256_setzero_pd();
        for (std::size_t d = 0; d < dim; ++d) {
            const __m256d qd = _mm256_set1_pd(q[d]);
            const __m256d th = _mm256_set1_pd(theta[d]);
            const __m256d xv = _mm256_loadu_pd(xt + d * m + i);
            const __m256d diff = _mm256_sub_pd(qd, xv);
            acc = _mm256_fnmadd_pd(_mm256_mul_pd(th, diff), diff, acc);
        }
        _mm256_storeu_pd(y + i, exp_pd(acc));
    }
    for (; i < m; ++i) {
        double e = 0.0;
        for (std::size_t d = 0; d < dim; ++d) {
            const double diff = q[d] - xt[d * m + i];
            e -= theta[d] * diff * diff;
        }
        y[i] = std::exp(e);
    }
}

double min_sqdist_avx2(const double* q, const double* xt,
                       std::size_t m, std::size_t dim) {
    __m256d best = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    std::size_t i = 0;
    for (; i + 4 <= m; i += 4) {
        __m256d acc = _mm256_setzero_pd();
        for (std::size_t d = 0; d < dim; ++d) {
            const __m256d diff = _mm256_sub_pd(_mm256_set1_pd(q[d]),
                                               _mm256_loadu_pd(xt + d * m + i));
            acc = _mm256_fmadd_pd(diff, diff, acc);
        }
        best = _mm256_min_pd(best, acc);
    }
    const __m128d lo = _mm256_castpd256_pd128(best);
    const __m128d hi = _mm256_extractf128_pd(best, 1);
    const __m128d m2 = _mm_min_pd(lo, hi);
    double out = _mm_cvtsd_f64(_mm_min_sd(m2, _mm_unpackhi_pd(m2, m2)));
    for (; i < m; ++i) {
        double s = 0.0;
        for (std::size_t d = 0; d < dim; ++d) {
            const double diff = q[d] - xt[d * m + i];
            s += diff * diff;
        }
        if (s < out) out = s;
    }
    return out;
}

double quad_form_avx2(const double* a, const double* r, std::size_t m) {
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        total += r[i] * dot_avx2(a + i * m, r, m);
    }
    return total;
}

} // namespace

const Ops* avx2_impl() {
    static const Ops ops{"avx2",        vexp_avx2,        dot_avx2,
                         corr_vector_avx2, min_sqdist_avx2, quad_form_avx2};
    return &ops;
}

} // namespace cfak::kernels

#endif // x86-64
