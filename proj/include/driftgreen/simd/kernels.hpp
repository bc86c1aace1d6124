#pragma once

#include <cstddef>

namespace driftgreen::simd {

/// Lane state for euler_block. Status is 0 while alive, -1 after hitting 0, +1 after hitting 1.
struct LaneArrays {
    double* x;
    double* steps;
    double* status;
};

/// Polynomial drift and variance of one Euler-Maruyama step.
struct EulerParams {
    const double* drift;     ///< coefficients of alpha psi sigma^2, lowest first
    std::size_t drift_terms;
    const double* variance;  ///< coefficients of sigma^2, lowest first
    std::size_t variance_terms;
    double dt;
    double sqrt_dt;
};

// Every backend evaluates the same operation sequence without contraction, so results are
// bit-identical across backends:
//   x' = (x + drift(x) * dt) + (sqrt(max(var(x), 0)) * sqrt_dt) * z
// A step landing at or beyond a boundary absorbs there; absorbed lanes are left untouched.
// noise is step-major: noise[s * lanes + lane].
using EulerBlockFn = void (*)(const EulerParams& p, LaneArrays lanes, const double* noise,
                              std::size_t lane_count, std::size_t step_count);

/// out[i] = c[0] + c[1] x[i] + ... by Horner.
using PolyvalFn = void (*)(const double* coeffs, std::size_t terms, const double* x, double* out,
                           std::size_t count);

struct KernelTable {
    const char* name;
    EulerBlockFn euler_block;
    PolyvalFn polyval;
};

const KernelTable& scalar_kernels();
/// nullptr when the vector backend was not compiled in.
const KernelTable* avx2_kernels();

enum class Backend { Auto, Scalar, Avx2 };

/// Table chosen from CPU support, overridable by set_backend or the DRIFTGREEN_SIMD
/// environment variable ("scalar" or "avx2").
const KernelTable& active_kernels();
void set_backend(Backend b);
bool cpu_has_avx2();

} // namespace driftgreen::simd
