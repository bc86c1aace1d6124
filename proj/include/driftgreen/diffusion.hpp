#pragma once

#include "driftgreen/model.hpp"
#include "driftgreen/quadrature.hpp"

#include <optional>
#include <utility>

namespace driftgreen {

enum class Conditioning { None, Up, Down };

/// Scale function S(x) = \int_0^x exp(-2 alpha Psi(y)) dy with Psi(y) = \int_0^y psi.
///
/// Psi is the exact antiderivative when psi is a polynomial and a CumulativeTable
/// otherwise. For alpha == 0 everything collapses to S(x) = x and no table is built.
class ScaleTable {
public:
    bool neutral() const { return neutral_; }

    /// Psi(y) = \int_0^y psi.
    double psi_integral(double y) const;
    /// S(x); S(0) == 0.
    double scale(double x) const;
    /// S(1) - S(x), evaluated without cancellation near x = 1.
    double scale_complement(double x) const;
    /// S'(x) = exp(-2 alpha Psi(x)).
    double derivative(double x) const;
    /// S(1).
    double total() const { return neutral_ ? 1.0 : scale_->total(); }

    /// Present only for non-polynomial psi with alpha != 0.
    const std::optional<CumulativeTable>& psi_cumulative() const { return psi_table_; }
    /// Present only for alpha != 0.
    const std::optional<CumulativeTable>& scale_cumulative() const { return scale_; }

private:
    friend ScaleTable build_scale(const DiffusionModel& model, const QuadConfig& cfg);

    double alpha_ = 0.0;
    bool neutral_ = true;
    std::optional<Polynomial> psi_antiderivative_;
    std::optional<CumulativeTable> psi_table_;
    std::optional<CumulativeTable> scale_;
};

ScaleTable build_scale(const DiffusionModel& model, const QuadConfig& cfg = {});

/// Absorption probabilities and expected (conditional) absorption times from one start.
struct HittingSummary {
    double p_up = 0.0;     ///< P_x(T_1 < T_0)
    double p_down = 0.0;   ///< 1 - p_up
    double e_t = 0.0;      ///< E_x[T]
    double e_t_up = 0.0;   ///< E_x[T_1 | T_1 < T_0]
    double e_t_down = 0.0; ///< E_x[T_0 | T_0 < T_1]
};

/// All exact (quadrature based) hitting quantities of one model.
///
/// Construction builds the scale table once; every query afterwards is a pure function
/// of its arguments, so a solver can be shared between threads.
class DiffusionSolver {
public:
    explicit DiffusionSolver(DiffusionModel model, QuadConfig cfg = {});

    const DiffusionModel& model() const { return model_; }
    const QuadConfig& config() const { return cfg_; }
    const ScaleTable& scale() const { return scale_; }

    double hit_prob_up(double x) const;
    double hit_prob_down(double x) const { return 1.0 - hit_prob_up(x); }

    /// Occupation density G(x, y) before absorption, optionally conditioned on the exit side.
    double green(double x, double y, Conditioning conditioning = Conditioning::None) const;

    /// The two algebraically equal expressions of the unconditioned Green function:
    /// first the one written with P_x, then the one written with P_y.
    std::pair<double, double> green_two_forms(double x, double y) const;

    /// E_x[T] = \int_0^1 G(x, y) dy.
    double absorption_time(double x) const;
    /// E_x[T_1 | T_1 < T_0] (Up) or E_x[T_0 | T_0 < T_1] (Down).
    double absorption_time_conditioned(double x, Conditioning direction) const;
    /// lim_{x -> 0+} E_x[T_1 | T_1 < T_0], by Richardson extrapolation from x = 1e-5 and 1e-6.
    double absorption_time_up_from_zero() const;

    HittingSummary hitting_summary(double x) const;

    /// f(x) = exp(2 alpha Psi(x)) / sigma^2(x) * P_x(T_0 < T_1).
    double frequency_spectrum(double x) const;

    /// Drift of the process conditioned to hit 1: alpha mu(x) + S'(x) / S(x) sigma^2(x).
    double conditioned_drift(double x) const;

private:
    double sigma2_checked(double y) const;
    double time_integral(double x, Conditioning conditioning) const;

    DiffusionModel model_;
    QuadConfig cfg_;
    ScaleTable scale_;
};

// Free-function forms; each builds a solver for a single query.
double hit_prob_up(const DiffusionModel& model, double x, const QuadConfig& cfg = {});
double hit_prob_down(const DiffusionModel& model, double x, const QuadConfig& cfg = {});
double green(const DiffusionModel& model, double x, double y, Conditioning conditioning,
             const QuadConfig& cfg = {});
double absorption_time(const DiffusionModel& model, double x, const QuadConfig& cfg = {});
double absorption_time_conditioned(const DiffusionModel& model, double x, Conditioning direction,
                                   const QuadConfig& cfg = {});
double absorption_time_up_from_zero(const DiffusionModel& model, const QuadConfig& cfg = {});
double frequency_spectrum(const DiffusionModel& model, double x, const QuadConfig& cfg = {});
double conditioned_drift(const DiffusionModel& model, double x, const QuadConfig& cfg = {});

} // namespace driftgreen
