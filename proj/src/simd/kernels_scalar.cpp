#include "driftgreen/simd/kernels.hpp"

#include <cmath>

namespace driftgreen::simd {

namespace {

inline double horner(const double* c, std::size_t terms, double x)
{
    double acc = 0.0;
    for (std::size_t k = terms; k-- > 0;)
        acc = acc * x + c[k];
    return acc;
}

void euler_block_scalar(const EulerParams& p, LaneArrays lanes, const double* noise, std::size_t lane_count,
                        std::size_t step_count)
{
    for (std::size_t s = 0; s < step_count; ++s) {
        const double* z = noise + s * lane_count;
        for (std::size_t i = 0; i < lane_count; ++i) {
            if (lanes.status[i] != 0.0)
                continue;
            const double x = lanes.x[i];
            const double drift = horner(p.drift, p.drift_terms, x) * p.dt;
            double v = horner(p.variance, p.variance_terms, x);
            v = v > 0.0 ? v : 0.0;
            const double shock = (std::sqrt(v) * p.sqrt_dt) * z[i];
            const double next = (x + drift) + shock;
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
    }
}

void polyval_scalar(const double* coeffs, std::size_t terms, const double* x, double* out, std::size_t count)
{
    for (std::size_t i = 0; i < count; ++i)
        out[i] = horner(coeffs, terms, x[i]);
}

} // namespace

const KernelTable& scalar_kernels()
{
    static const KernelTable table{"scalar", euler_block_scalar, polyval_scalar};
    return table;
}

} // namespace driftgreen::simd
