#pragma once

#include "driftgreen/model.hpp"

#include <cstdint>

namespace driftgreen {

struct SimConfig {
    double dt = 1e-4;
    std::uint64_t n_paths = 10000;
    std::uint64_t seed = 0;
    double max_time = 1e4;
    /// Each step of size dt is split into 2^refinement sub-steps whose Brownian increments sum
    /// to the unrefined increment, so runs at different refinement share their coarse noise.
    unsigned refinement = 0;
    /// 0 means worker_count() decides.
    unsigned workers = 0;

    /// Throws std::invalid_argument when a field is out of range.
    void validate() const;
    /// dt / 2^refinement.
    double step() const;
};

struct PathOutcome {
    enum class Kind { Lost, Fixed, Censored };
    Kind kind = Kind::Censored;
    double time = 0.0; ///< absorption time, or the time reached when censored
};

/// One Euler-Maruyama path from x0. The outcome is a pure function of (model, x0, cfg.seed,
/// cfg.dt, cfg.refinement, cfg.max_time, path_index).
PathOutcome simulate_path(const DiffusionModel& model, double x0, const SimConfig& cfg, std::uint64_t path_index);

/// Raw sums over all paths, accumulated in path-index order.
struct McTally {
    std::uint64_t n_paths = 0;
    std::uint64_t n_fixed = 0;
    std::uint64_t n_lost = 0;
    std::uint64_t n_censored = 0;
    double sum_t_fixed = 0.0, sum_t2_fixed = 0.0;
    double sum_t_lost = 0.0, sum_t2_lost = 0.0;
};

McTally simulate(const DiffusionModel& model, double x0, const SimConfig& cfg);

struct Estimate {
    double value = 0.0;
    double se = 0.0; ///< NaN below 100 contributing samples
};

/// Estimates over absorbed paths; censored paths are counted but enter no mean.
struct McEstimates {
    Estimate p_fix;
    Estimate mean_T;
    Estimate mean_T_up;
    Estimate mean_T_down;
    std::uint64_t n_paths = 0;
    std::uint64_t n_fixed = 0;
    std::uint64_t n_lost = 0;
    std::uint64_t n_censored = 0;
};

/// Throws InsufficientData when no path fixed or no path was lost.
McEstimates estimate(const DiffusionModel& model, double x0, const SimConfig& cfg);
McEstimates summarize(const McTally& tally);

} // namespace driftgreen
