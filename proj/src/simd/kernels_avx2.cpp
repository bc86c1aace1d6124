#include "driftgreen/simd/kernels.hpp"

#if defined(__AVX2__)

#include <immintrin.h>

#include <cmath>

namespace driftgreen::simd {

namespace {

inline __m256d horner4(const double* c, std::size_t terms, __m256d x)
{
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t k = terms; k-- > 0;)
        acc = _mm256_add_pd(_mm256_mul_pd(acc, x), _mm256_set1_pd(c[k]));
    return acc;
}

inline double horner1(const double* c, std::size_t terms, double x)
{
    double acc = 0.0;
    for (std::size_t k = terms; k-- > 0;)
        acc = acc * x + c[k];
    return acc;
}

void step_tail(const EulerParams& p, LaneArrays lanes, const double* z, std::size_t i)
{
    if (lanes.status[i] != 0.0)
        return;
    const double x = lanes.x[i];
    const double drift = horner1(p.drift, p.drift_terms, x) * p.dt;
    double v = horner1(p.variance, p.variance_terms, x);
    v = v > 0.0 ? v : 0.0;
    const double next = (x + drift) + (std::sqrt(v) * p.sqrt_dt) * z[i];
    lanes.steps[i] += 1.0;
    if (next <= 0.0) {
        lanes.x[i] = 0.0;
        lanes.status[i] = -1.0;
    } else if (next >= 1.0) {
        lanes.x[i] = 1.0;
        lanes.status[i] = 1.0;
    } else {
        lanes.x[i] = next;
    }
}

void euler_block_avx2(const EulerParams& p, LaneArrays lanes, const double* noise, std::size_t lane_count,
                      std::size_t step_count)
{
    const __m256d zero = _mm256_setzero_pd();
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d minus_one = _mm256_set1_pd(-1.0);
    const __m256d dt = _mm256_set1_pd(p.dt);
    const __m256d sqrt_dt = _mm256_set1_pd(p.sqrt_dt);
    const std::size_t vec_end = lane_count - lane_count % 4;

    for (std::size_t s = 0; s < step_count; ++s) {
        const double* z = noise + s * lane_count;
        for (std::size_t i = 0; i < vec_end; i += 4) {
            const __m256d status = _mm256_loadu_pd(lanes.status + i);
            const __m256d alive = _mm256_cmp_pd(status, zero, _CMP_EQ_OQ);
            if (_mm256_movemask_pd(alive) == 0)
                continue;
            const __m256d x = _mm256_loadu_pd(lanes.x + i);
            const __m256d drift = _mm256_mul_pd(horner4(p.drift, p.drift_terms, x), dt);
            const __m256d v = _mm256_max_pd(horner4(p.variance, p.variance_terms, x), zero);
            const __m256d shock = _mm256_mul_pd(_mm256_mul_pd(_mm256_sqrt_pd(v), sqrt_dt), _mm256_loadu_pd(z + i));
            const __m256d next = _mm256_add_pd(_mm256_add_pd(x, drift), shock);

            const __m256d low = _mm256_and_pd(alive, _mm256_cmp_pd(next, zero, _CMP_LE_OQ));
            const __m256d high = _mm256_andnot_pd(low, _mm256_and_pd(alive, _mm256_cmp_pd(next, one, _CMP_GE_OQ)));

            __m256d nx = _mm256_blendv_pd(x, next, alive);
            nx = _mm256_blendv_pd(nx, zero, low);
            nx = _mm256_blendv_pd(nx, one, high);
            __m256d ns = _mm256_blendv_pd(status, minus_one, low);
            ns = _mm256_blendv_pd(ns, one, high);
            const __m256d steps = _mm256_add_pd(_mm256_loadu_pd(lanes.steps + i), _mm256_and_pd(alive, one));

            _mm256_storeu_pd(lanes.x + i, nx);
            _mm256_storeu_pd(lanes.status + i, ns);
            _mm256_storeu_pd(lanes.steps + i, steps);
        }
        for (std::size_t i = vec_end; i < lane_count; ++i)
            step_tail(p, lanes, z, i);
    }
}

void polyval_avx2(const double* coeffs, std::size_t terms, const double* x, double* out, std::size_t count)
{
    const std::size_t vec_end = count - count % 4;
    for (std::size_t i = 0; i < vec_end; i += 4)
        _mm256_storeu_pd(out + i, horner4(coeffs, terms, _mm256_loadu_pd(x + i)));
    for (std::size_t i = vec_end; i < count; ++i)
        out[i] = horner1(coeffs, terms, x[i]);
}

} // namespace

const KernelTable* avx2_kernels()
{
    static const KernelTable table{"avx2", euler_block_avx2, polyval_avx2};
    return &table;
}

} // namespace driftgreen::simd

#else

namespace driftgreen::simd {

const KernelTable* avx2_kernels() { return nullptr; }

} // namespace driftgreen::simd

#endif
