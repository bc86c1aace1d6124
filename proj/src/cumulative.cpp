#include "driftgreen/errors.hpp"
#include "driftgreen/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace driftgreen {

namespace {

struct Segment {
    double u;
    double v;
    double integral;
    double fu; // f(u), NaN when f is not finite there
    double fv;
};

double slope_or_nan(const Integrand& f, double y)
{
    const double v = f(y);
    return std::isfinite(v) ? v : std::nan("");
}

// \int_u^{u + t h} of the cubic Hermite segment with end slopes su, sv.
double hermite_from(double P, double h, double su, double sv, double t)
{
    const double t2 = t * t;
    const double t3 = t2 * t;
    return P * (3.0 * t2 - 2.0 * t3) + h * su * (t - 2.0 * t2 + t3) + h * sv * (t3 - t2);
}

double resolved(double slope, double secant) { return std::isfinite(slope) ? slope : secant; }

} // namespace

CumulativeTable cumulative(const Integrand& f, const QuadConfig& cfg)
{
    cfg.validate();
    const QuadConfig inner = cfg.tightened(10.0);
    constexpr int kInitialPanels = 8;
    const std::size_t max_nodes = std::max<std::size_t>(1000, 50 * static_cast<std::size_t>(cfg.max_subdivisions));

    std::vector<Segment> pending;
    double scale = 0.0;
    {
        double prev_f = slope_or_nan(f, 0.0);
        for (int i = 0; i < kInitialPanels; ++i) {
            const double u = static_cast<double>(i) / kInitialPanels;
            const double v = static_cast<double>(i + 1) / kInitialPanels;
            const double fv = slope_or_nan(f, v);
            const double p = integrate(f, u, v, inner);
            pending.push_back({u, v, p, prev_f, fv});
            scale += std::fabs(p);
            prev_f = fv;
        }
    }
    const double tol = std::max(cfg.abs_tol, cfg.rel_tol * scale);

    // Depth-first refinement keeps accepted segments in ascending order.
    std::vector<Segment> accepted;
    std::reverse(pending.begin(), pending.end());
    while (!pending.empty()) {
        Segment s = pending.back();
        pending.pop_back();
        const double h = s.v - s.u;
        if (h <= cfg.endpoint_shave) {
            accepted.push_back(s);
            continue;
        }
        const double mid = 0.5 * (s.u + s.v);
        const double lower = integrate(f, s.u, mid, inner);
        const double upper = integrate(f, mid, s.v, inner);
        const double secant = s.integral / h;
        const double interp =
            hermite_from(s.integral, h, resolved(s.fu, secant), resolved(s.fv, secant), 0.5);
        if (std::fabs(interp - lower) <= tol) {
            s.integral = lower + upper;
            accepted.push_back(s);
            continue;
        }
        if (accepted.size() + pending.size() + 2 > max_nodes) {
            std::ostringstream msg;
            msg << "cumulative table exceeded " << max_nodes << " nodes";
            throw NonConvergence(msg.str());
        }
        const double fm = slope_or_nan(f, mid);
        pending.push_back({mid, s.v, upper, fm, s.fv});
        pending.push_back({s.u, mid, lower, s.fu, fm});
    }

    CumulativeTable t;
    const std::size_t n = accepted.size();
    t.nodes_.resize(n + 1);
    t.left_.assign(n + 1, 0.0);
    t.right_.assign(n + 1, 0.0);
    t.panel_.resize(n);
    t.slope_.resize(n + 1);

    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = accepted[i];
        const double secant = s.integral / (s.v - s.u);
        t.nodes_[i] = s.u;
        t.panel_[i] = s.integral;
        t.slope_[i] = resolved(s.fu, secant);
    }
    t.nodes_[n] = 1.0;
    t.slope_[n] = resolved(accepted.back().fv, accepted.back().integral / (1.0 - accepted.back().u));

    // Compensated running sums from both ends.
    double sum = 0.0, comp = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double y = t.panel_[i] - comp;
        const double s2 = sum + y;
        comp = (s2 - sum) - y;
        sum = s2;
        t.left_[i + 1] = sum;
    }
    sum = 0.0;
    comp = 0.0;
    for (std::size_t i = n; i-- > 0;) {
        const double y = t.panel_[i] - comp;
        const double s2 = sum + y;
        comp = (s2 - sum) - y;
        sum = s2;
        t.right_[i] = sum;
    }
    t.total_ = t.left_[n];
    return t;
}

std::size_t CumulativeTable::panel_of(double y) const
{
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), y);
    std::size_t idx = it == nodes_.begin() ? 0 : static_cast<std::size_t>(it - nodes_.begin()) - 1;
    return std::min(idx, panel_.size() - 1);
}

double CumulativeTable::hermite(std::size_t i, double t, bool from_right) const
{
    const double h = nodes_[i + 1] - nodes_[i];
    if (from_right)
        return hermite_from(panel_[i], h, slope_[i + 1], slope_[i], t);
    return hermite_from(panel_[i], h, slope_[i], slope_[i + 1], t);
}

double CumulativeTable::operator()(double y) const
{
    if (y <= 0.0)
        return 0.0;
    if (y >= 1.0)
        return total_;
    const std::size_t i = panel_of(y);
    const double h = nodes_[i + 1] - nodes_[i];
    const double t = (y - nodes_[i]) / h;
    if (t <= 0.5)
        return left_[i] + hermite(i, t, false);
    return left_[i + 1] - hermite(i, (nodes_[i + 1] - y) / h, true);
}

double CumulativeTable::complement(double y) const
{
    if (y <= 0.0)
        return total_;
    if (y >= 1.0)
        return 0.0;
    const std::size_t i = panel_of(y);
    const double h = nodes_[i + 1] - nodes_[i];
    const double s = (nodes_[i + 1] - y) / h;
    if (s <= 0.5)
        return right_[i + 1] + hermite(i, s, true);
    return right_[i] - hermite(i, (y - nodes_[i]) / h, false);
}

} // namespace driftgreen
