#include "driftgreen/montecarlo.hpp"

#include "driftgreen/errors.hpp"
#include "driftgreen/simd/kernels.hpp"
#include "driftgreen/threads.hpp"

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>

#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace driftgreen {

void SimConfig::validate() const
{
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw std::invalid_argument("SimConfig: dt must be > 0");
    if (n_paths < 1)
        throw std::invalid_argument("SimConfig: n_paths must be >= 1");
    if (!(max_time > 0.0))
        throw std::invalid_argument("SimConfig: max_time must be > 0");
    if (refinement > 6)
        throw std::invalid_argument("SimConfig: refinement must be <= 6");
}

double SimConfig::step() const { return std::ldexp(dt, -static_cast<int>(refinement)); }

namespace {

constexpr std::size_t kBlock = 64; // sub-steps per noise block; a multiple of 2^6
constexpr std::size_t kLanes = 8;
constexpr std::size_t kChunk = 512;
constexpr std::uint32_t kBaseStream = 0;
constexpr std::uint32_t kBridgeStream = 1;

using Engine = boost::random::mt19937_64;

// The engine seed is a hash of (seed, path_index, stream), so every path owns an independent
// stream no matter which worker or lane simulates it.
Engine path_engine(std::uint64_t seed, std::uint64_t path_index, std::uint32_t stream)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(path_index), static_cast<std::uint32_t>(path_index >> 32), stream};
    std::array<std::uint32_t, 2> key{};
    seq.generate(key.begin(), key.end());
    return Engine((static_cast<std::uint64_t>(key[0]) << 32) | key[1]);
}

// Brownian increments of one path in units of sqrt(step).
class PathNoise {
public:
    PathNoise() = default;
    PathNoise(std::uint64_t seed, std::uint64_t path_index, unsigned refinement)
        : base_(path_engine(seed, path_index, kBaseStream)), refinement_(refinement)
    {
        if (refinement_ > 0)
            bridge_ = path_engine(seed, path_index, kBridgeStream);
    }

    // Writes kBlock values to out[0], out[stride], ...
    void fill(double* out, std::size_t stride)
    {
        if (refinement_ == 0) {
            for (std::size_t s = 0; s < kBlock; ++s)
                out[s * stride] = normal_(base_);
            return;
        }
        const std::size_t fine = std::size_t{1} << refinement_;
        std::array<double, 64> cur, nxt;
        for (std::size_t coarse = 0; coarse < kBlock / fine; ++coarse) {
            cur[0] = normal_(base_);
            for (std::size_t width = 1; width < fine; width *= 2) {
                for (std::size_t j = 0; j < width; ++j) {
                    const double w = normal_(bridge_);
                    nxt[2 * j] = (cur[j] + w) * kHalfSqrt2;
                    nxt[2 * j + 1] = (cur[j] - w) * kHalfSqrt2;
                }
                std::copy(nxt.begin(), nxt.begin() + static_cast<std::ptrdiff_t>(2 * width), cur.begin());
            }
            for (std::size_t j = 0; j < fine; ++j)
                out[(coarse * fine + j) * stride] = cur[j];
        }
    }

private:
    static constexpr double kHalfSqrt2 = 0.70710678118654752440;
    Engine base_;
    Engine bridge_;
    boost::random::normal_distribution<double> normal_;
    unsigned refinement_ = 0;
};

struct Stepper {
    bool polynomial = false;
    std::vector<double> drift;
    std::vector<double> variance;
    simd::EulerParams params{};
    const simd::KernelTable* kernels = nullptr;
    const DiffusionModel* model = nullptr;
    double dt = 0.0;
    double sqrt_dt = 0.0;

    Stepper(const DiffusionModel& m, double step) : model(&m), dt(step), sqrt_dt(std::sqrt(step))
    {
        const auto s2 = m.sigma2().polynomial_form();
        if (m.psi().is_polynomial() && s2) {
            polynomial = true;
            const RationalPolynomial mu = *m.psi().exact() * to_rational(*s2) * rational_from_double(m.alpha());
            drift = to_double(mu).coefficients();
            variance = s2->coefficients();
            params = {drift.data(), drift.size(), variance.data(), variance.size(), dt, sqrt_dt};
            kernels = &simd::active_kernels();
        }
    }

    void run(simd::LaneArrays lanes, const double* noise, std::size_t lane_count) const
    {
        if (polynomial) {
            kernels->euler_block(params, lanes, noise, lane_count, kBlock);
            return;
        }
        // Same update as the polynomial kernels, with psi and sigma^2 as opaque evaluators.
        const double alpha = model->alpha();
        for (std::size_t s = 0; s < kBlock; ++s) {
            for (std::size_t i = 0; i < lane_count; ++i) {
                if (lanes.status[i] != 0.0)
                    continue;
                const double x = lanes.x[i];
                double v = model->sigma2()(x);
                const double drift_step = (alpha * model->psi()(x) * v) * dt;
                v = v > 0.0 ? v : 0.0;
                const double next = (x + drift_step) + (std::sqrt(v) * sqrt_dt) * noise[s * lane_count + i];
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
};

// Runs paths [begin, end) and stores each outcome at outcomes[index - begin]. Every path starts
// on a block boundary, so its trajectory does not depend on which lane or batch carries it.
void run_paths(const Stepper& stepper, double x0, const SimConfig& cfg, std::uint64_t begin, std::uint64_t end,
               PathOutcome* outcomes)
{
    const std::size_t lanes = static_cast<std::size_t>(std::min<std::uint64_t>(kLanes, end - begin));
    const double step = cfg.step();
    const double max_steps = std::ceil(cfg.max_time / step);

    std::vector<double> x(lanes), steps(lanes), status(lanes), noise(lanes * kBlock);
    std::vector<PathNoise> rng(lanes);
    std::vector<std::uint64_t> index(lanes);
    std::vector<bool> busy(lanes, false);
    std::uint64_t next = begin;

    auto load = [&](std::size_t lane) {
        if (next >= end) {
            busy[lane] = false;
            status[lane] = 2.0; // parked; the kernel skips non-zero status
            return;
        }
        index[lane] = next;
        rng[lane] = PathNoise(cfg.seed, next, cfg.refinement);
        x[lane] = x0;
        steps[lane] = 0.0;
        status[lane] = 0.0;
        busy[lane] = true;
        ++next;
    };
    for (std::size_t i = 0; i < lanes; ++i)
        load(i);

    for (;;) {
        bool any = false;
        for (std::size_t i = 0; i < lanes; ++i) {
            if (busy[i]) {
                rng[i].fill(noise.data() + i, lanes);
                any = true;
            } else {
                for (std::size_t s = 0; s < kBlock; ++s)
                    noise[s * lanes + i] = 0.0;
            }
        }
        if (!any)
            break;
        stepper.run({x.data(), steps.data(), status.data()}, noise.data(), lanes);
        for (std::size_t i = 0; i < lanes; ++i) {
            if (!busy[i])
                continue;
            PathOutcome* out = &outcomes[index[i] - begin];
            if (status[i] != 0.0 && steps[i] <= max_steps) {
                out->kind = status[i] > 0.0 ? PathOutcome::Kind::Fixed : PathOutcome::Kind::Lost;
                out->time = steps[i] * step;
                load(i);
            } else if (steps[i] >= max_steps) {
                out->kind = PathOutcome::Kind::Censored;
                out->time = max_steps * step;
                load(i);
            }
        }
    }
}

void require_start(double x0)
{
    if (!(x0 > 0.0 && x0 < 1.0)) {
        std::ostringstream msg;
        msg << "x0 must lie in (0,1), got " << x0;
        throw DomainError(msg.str());
    }
}

// Neumaier-compensated running sum.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;
    void add(double v)
    {
        const double t = sum + v;
        if (std::fabs(sum) >= std::fabs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

constexpr std::uint64_t kMinSamplesForSe = 100;

Estimate mean_estimate(double sum, double sum2, std::uint64_t n)
{
    Estimate e;
    const double nd = static_cast<double>(n);
    e.value = sum / nd;
    if (n < kMinSamplesForSe) {
        e.se = std::numeric_limits<double>::quiet_NaN();
        return e;
    }
    const double var = std::max(0.0, (sum2 - nd * e.value * e.value) / (nd - 1.0));
    e.se = std::sqrt(var / nd);
    return e;
}

} // namespace

PathOutcome simulate_path(const DiffusionModel& model, double x0, const SimConfig& cfg, std::uint64_t path_index)
{
    cfg.validate();
    require_start(x0);
    const Stepper stepper(model, cfg.step());
    PathOutcome out;
    run_paths(stepper, x0, cfg, path_index, path_index + 1, &out);
    return out;
}

McTally simulate(const DiffusionModel& model, double x0, const SimConfig& cfg)
{
    cfg.validate();
    require_start(x0);
    const Stepper stepper(model, cfg.step());
    std::vector<PathOutcome> outcomes(cfg.n_paths);
    parallel_chunks(cfg.n_paths, kChunk, worker_count(cfg.workers), [&](std::size_t b, std::size_t e) {
        run_paths(stepper, x0, cfg, b, e, outcomes.data() + b);
    });

    McTally t;
    t.n_paths = cfg.n_paths;
    CompensatedSum tf, tf2, tl, tl2;
    for (const auto& o : outcomes) {
        switch (o.kind) {
        case PathOutcome::Kind::Fixed:
            ++t.n_fixed;
            tf.add(o.time);
            tf2.add(o.time * o.time);
            break;
        case PathOutcome::Kind::Lost:
            ++t.n_lost;
            tl.add(o.time);
            tl2.add(o.time * o.time);
            break;
        case PathOutcome::Kind::Censored:
            ++t.n_censored;
            break;
        }
    }
    t.sum_t_fixed = tf.value();
    t.sum_t2_fixed = tf2.value();
    t.sum_t_lost = tl.value();
    t.sum_t2_lost = tl2.value();
    return t;
}

McEstimates summarize(const McTally& t)
{
    if (t.n_fixed == 0)
        throw InsufficientData("no path fixed, so the mean time conditioned on fixation is undefined");
    if (t.n_lost == 0)
        throw InsufficientData("no path was lost, so the mean time conditioned on loss is undefined");

    McEstimates e;
    e.n_paths = t.n_paths;
    e.n_fixed = t.n_fixed;
    e.n_lost = t.n_lost;
    e.n_censored = t.n_censored;

    const std::uint64_t n = t.n_fixed + t.n_lost;
    const double nd = static_cast<double>(n);
    e.p_fix.value = static_cast<double>(t.n_fixed) / nd;
    e.p_fix.se = n < kMinSamplesForSe ? std::numeric_limits<double>::quiet_NaN()
                                      : std::sqrt(e.p_fix.value * (1.0 - e.p_fix.value) / nd);
    e.mean_T = mean_estimate(t.sum_t_fixed + t.sum_t_lost, t.sum_t2_fixed + t.sum_t2_lost, n);
    e.mean_T_up = mean_estimate(t.sum_t_fixed, t.sum_t2_fixed, t.n_fixed);
    e.mean_T_down = mean_estimate(t.sum_t_lost, t.sum_t2_lost, t.n_lost);
    return e;
}

McEstimates estimate(const DiffusionModel& model, double x0, const SimConfig& cfg)
{
    return summarize(simulate(model, x0, cfg));
}

} // namespace driftgreen
