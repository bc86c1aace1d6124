#include "doctest.h"

#include "driftgreen/montecarlo.hpp"
#include "driftgreen/simd/kernels.hpp"

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

using namespace driftgreen;
using namespace driftgreen::simd;

namespace {

struct Lanes {
    std::vector<double> x, steps, status;
    explicit Lanes(std::size_t n) : x(n), steps(n, 0.0), status(n, 0.0) {}
    LaneArrays view() { return {x.data(), steps.data(), status.data()}; }
};

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b)
{
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

const KernelTable* vector_table() { return cpu_has_avx2() ? avx2_kernels() : nullptr; }

} // namespace

TEST_SUITE("simd") {

TEST_CASE("scalar backend can be forced")
{
    set_backend(Backend::Scalar);
    CHECK(std::string(active_kernels().name) == "scalar");
    set_backend(Backend::Auto);
}

TEST_CASE("polyval is bit-identical across backends")
{
    const KernelTable* vec = vector_table();
    if (vec == nullptr) {
        MESSAGE("no AVX2 on this machine; scalar only");
        return;
    }
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-2, 2);
    for (std::size_t terms : {1u, 2u, 3u, 5u, 9u}) {
        for (std::size_t n : {1u, 3u, 4u, 7u, 8u, 13u, 64u, 257u}) {
            std::vector<double> c(terms), x(n), a(n), b(n);
            for (auto& v : c)
                v = u(rng);
            for (auto& v : x)
                v = u(rng);
            scalar_kernels().polyval(c.data(), terms, x.data(), a.data(), n);
            vec->polyval(c.data(), terms, x.data(), b.data(), n);
            CHECK(bit_equal(a, b));
        }
    }
}

TEST_CASE("euler block is bit-identical across backends, including absorption")
{
    const KernelTable* vec = vector_table();
    if (vec == nullptr) {
        MESSAGE("no AVX2 on this machine; scalar only");
        return;
    }
    std::mt19937_64 rng(9);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> start(0.001, 0.999);
    // alpha psi sigma^2 with psi = 1 - 2y, alpha = 3; and a non-WF variance.
    const std::vector<double> drift = {0, 3, -9, 6};
    const std::vector<double> wf = {0, 1, -1};
    const std::vector<double> other = {0.01, 1, -1};
    for (const auto* variance : {&wf, &other}) {
        for (std::size_t n : {1u, 4u, 7u, 8u, 19u, 64u}) {
            const double dt = 1e-2; // coarse, so many lanes absorb within the block
            const EulerParams p{drift.data(), drift.size(), variance->data(), variance->size(), dt, std::sqrt(dt)};
            const std::size_t steps = 300;
            std::vector<double> noise(steps * n);
            for (auto& z : noise)
                z = normal(rng);
            Lanes a(n), b(n);
            for (std::size_t i = 0; i < n; ++i)
                a.x[i] = b.x[i] = start(rng);
            // One lane parked from the start must stay untouched.
            a.status[0] = b.status[0] = 2.0;
            scalar_kernels().euler_block(p, a.view(), noise.data(), n, steps);
            vec->euler_block(p, b.view(), noise.data(), n, steps);
            CHECK(bit_equal(a.x, b.x));
            CHECK(bit_equal(a.steps, b.steps));
            CHECK(bit_equal(a.status, b.status));
            CHECK(a.steps[0] == 0.0);
            int absorbed = 0;
            for (double s : a.status)
                absorbed += (s == 1.0 || s == -1.0);
            if (n >= 19)
                CHECK(absorbed > 0);
            for (std::size_t i = 0; i < n; ++i) {
                if (a.status[i] == 1.0)
                    CHECK(a.x[i] == 1.0);
                if (a.status[i] == -1.0)
                    CHECK(a.x[i] == 0.0);
            }
        }
    }
}

TEST_CASE("simulation results do not depend on the backend")
{
    const DiffusionModel m(0.4, FrequencyDependence::polynomial(std::vector<double>{1, -0.5}));
    SimConfig cfg;
    cfg.n_paths = 600;
    cfg.dt = 1e-3;
    cfg.seed = 99;
    cfg.workers = 1;
    set_backend(Backend::Scalar);
    const McTally a = simulate(m, 0.4, cfg);
    set_backend(Backend::Avx2);
    const McTally b = simulate(m, 0.4, cfg);
    set_backend(Backend::Auto);
    CHECK(a.n_fixed == b.n_fixed);
    CHECK(a.n_lost == b.n_lost);
    CHECK(a.sum_t_fixed == b.sum_t_fixed);
    CHECK(a.sum_t2_lost == b.sum_t2_lost);
}

} // TEST_SUITE
