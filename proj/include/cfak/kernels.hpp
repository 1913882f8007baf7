#pragma once

// Data-parallel inner-loop kernels used by the surrogate prediction and
// acquisition paths. Every kernel has a scalar reference implementation and,
// on x86-64 with AVX2/FMA, a vectorized variant selected at runtime. The two
// are equivalence-tested against each other in tests/test_kernels.cpp.
//
// All inputs must be finite. vexp flushes results below ~1e-308 to zero and
// saturates to +inf above the double range.

#include <cstddef>

namespace cfak::kernels {

struct Ops {
    const char* name;

    // y[i] = exp(x[i])
    void (*vexp)(const double* x, double* y, std::size_t n);

    // plain dot product
    double (*dot)(const double* a, const double* b, std::size_t n);

    // Correlation vector against a training set stored dimension-major:
    // xt[d*m + i] is coordinate d of training point i.
    // y[i] = exp(-sum_d theta[d] * (q[d] - xt[d*m+i])^2)
    void (*corr_vector)(const double* q, const double* xt, const double* theta,
                        std::size_t m, std::size_t dim, double* y);

    // min over training points of the squared Euclidean distance to q
    double (*min_sqdist)(const double* q, const double* xt,
                         std::size_t m, std::size_t dim);

    // r^T A r for a row-major m-by-m matrix A
    double (*quad_form)(const double* a, const double* r, std::size_t m);
};

const Ops& scalar();

// nullptr when the CPU (or the build) lacks AVX2+FMA
const Ops* avx2();

// Runtime-selected implementation. The CFAK_KERNELS environment variable
// ("scalar" or "avx2") overrides the automatic choice.
const Ops& active();

} // namespace cfak::kernels
