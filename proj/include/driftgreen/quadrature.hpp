#pragma once

#include <functional>
#include <vector>

namespace driftgreen {

/// Tolerances and budgets shared by every integral in the library.
struct QuadConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    int max_subdivisions = 2000;
    /// Endpoint panels narrower than this fraction of the interval are not refined further.
    double endpoint_shave = 1e-12;

    /// Throws std::invalid_argument when a field is out of range.
    void validate() const;

    /// Same config with both tolerances divided by `factor`; used for inner integrals.
    QuadConfig tightened(double factor = 10.0) const;
};

using Integrand = std::function<double(double)>;

struct QuadResult {
    double value = 0.0;
    double error = 0.0;       ///< estimated absolute error
    int subdivisions = 0;     ///< panels created across all passes
    int stretch_power = 1;    ///< endpoint substitution exponent used (1 = none)
};

/// Adaptive 21-point Gauss-Kronrod integration of f over [a, b].
///
/// The integrand is never evaluated at a or b, so integrable endpoint singularities of
/// the form (y-a)^-p and (b-y)^-p with p < 1 are allowed. When plain bisection cannot
/// resolve such a singularity the interval is split at its midpoint and each half is
/// re-integrated after the substitution y = a + (c-a) t^m, with m chosen from the observed
/// decay of the endpoint panels.
///
/// Throws Divergence when the endpoint panel contributions stop shrinking under
/// bisection, NonConvergence when the subdivision budget is exhausted.
QuadResult integrate_with_error(const Integrand& f, double a, double b, const QuadConfig& cfg = {});

inline double integrate(const Integrand& f, double a, double b, const QuadConfig& cfg = {})
{
    return integrate_with_error(f, a, b, cfg).value;
}

/// Running integral T(y) = \int_0^y f on [0, 1], stored at adaptively chosen nodes and
/// interpolated by cubic Hermite segments whose end slopes are f itself.
///
/// Both T(y) and the complement \int_y^1 f are evaluated locally from the nearest node,
/// so each keeps full relative accuracy close to the end it vanishes at. Immutable once
/// built.
class CumulativeTable {
public:
    const std::vector<double>& nodes() const { return nodes_; }
    /// T at each node; values()[0] == 0.
    const std::vector<double>& values() const { return left_; }

    double total() const { return total_; }
    /// T(y) = \int_0^y f.
    double operator()(double y) const;
    /// \int_y^1 f, computed without cancellation against total().
    double complement(double y) const;

private:
    friend CumulativeTable cumulative(const Integrand& f, const QuadConfig& cfg);

    std::size_t panel_of(double y) const;
    double hermite(std::size_t panel, double t, bool from_right) const;

    std::vector<double> nodes_;
    std::vector<double> left_;   // \int_0^{node}
    std::vector<double> right_;  // \int_{node}^1
    std::vector<double> panel_;  // \int over [node_i, node_{i+1}]
    std::vector<double> slope_;  // f at node (secant fallback where f is not finite)
    double total_ = 0.0;
};

/// Builds the running integral of f over [0, 1]. Nodes are inserted until the cubic
/// interpolant matches a direct integral at every panel midpoint within
/// max(abs_tol, rel_tol * |T|).
CumulativeTable cumulative(const Integrand& f, const QuadConfig& cfg = {});

} // namespace driftgreen
