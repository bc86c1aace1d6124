#include "driftgreen/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace driftgreen::simd {

namespace {

std::atomic<Backend> g_override{Backend::Auto};

Backend from_environment()
{
    const char* env = std::getenv("DRIFTGREEN_SIMD");
    if (env == nullptr)
        return Backend::Auto;
    if (std::strcmp(env, "scalar") == 0)
        return Backend::Scalar;
    if (std::strcmp(env, "avx2") == 0)
        return Backend::Avx2;
    return Backend::Auto;
}

} // namespace

bool cpu_has_avx2()
{
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

void set_backend(Backend b) { g_override.store(b); }

const KernelTable& active_kernels()
{
    Backend want = g_override.load();
    if (want == Backend::Auto)
        want = from_environment();
    const KernelTable* vec = cpu_has_avx2() ? avx2_kernels() : nullptr;
    if (want == Backend::Scalar || vec == nullptr)
        return scalar_kernels();
    return *vec;
}

} // namespace driftgreen::simd
