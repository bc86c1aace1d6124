#include "driftgreen/quadrature.hpp"

#include "driftgreen/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace driftgreen {

void QuadConfig::validate() const
{
    if (!(rel_tol > 0.0))
        throw std::invalid_argument("QuadConfig: rel_tol must be > 0");
    if (!(abs_tol >= 0.0))
        throw std::invalid_argument("QuadConfig: abs_tol must be >= 0");
    if (max_subdivisions < 1)
        throw std::invalid_argument("QuadConfig: max_subdivisions must be >= 1");
    if (!(endpoint_shave > 0.0 && endpoint_shave < 1e-3))
        throw std::invalid_argument("QuadConfig: endpoint_shave must lie in (0, 1e-3)");
}

QuadConfig QuadConfig::tightened(double factor) const
{
    QuadConfig out = *this;
    out.rel_tol /= factor;
    out.abs_tol /= factor;
    // Never ask for less than a few ulps; the Kronrod error floor sits near 50 eps.
    out.rel_tol = std::max(out.rel_tol, 1e-14);
    return out;
}

namespace {

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kUflow = std::numeric_limits<double>::min();

// Endpoint panels whose integral shrinks by less than this factor per halving are
// treated as non-integrable once it happens kDivergenceRun times in a row.
constexpr double kDivergenceRatio = 0.99;
constexpr int kDivergenceRun = 12;

struct Rule {
    double value;
    double error;
};

double checked(const Integrand& f, double y)
{
    double v = f(y);
    if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg << "integrand is not finite at y=" << y;
        throw Divergence(msg.str());
    }
    return v;
}

Rule gauss_kronrod21(const Integrand& f, double a, double b)
{
    const double centr = 0.5 * (a + b);
    const double hlgth = 0.5 * (b - a);
    const double dhlgth = std::fabs(hlgth);

    std::array<double, 10> fv1{}, fv2{};
    const double fc = checked(f, centr);
    double resg = 0.0;
    double resk = kWgk[10] * fc;
    double resabs = std::fabs(resk);
    for (int j = 0; j < 5; ++j) {
        const int jtw = 2 * j + 1;
        const double absc = hlgth * kXgk[jtw];
        const double f1 = checked(f, centr - absc);
        const double f2 = checked(f, centr + absc);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        const double fsum = f1 + f2;
        resg += kWg[j] * fsum;
        resk += kWgk[jtw] * fsum;
        resabs += kWgk[jtw] * (std::fabs(f1) + std::fabs(f2));
    }
    for (int j = 0; j < 5; ++j) {
        const int jtwm1 = 2 * j;
        const double absc = hlgth * kXgk[jtwm1];
        const double f1 = checked(f, centr - absc);
        const double f2 = checked(f, centr + absc);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        const double fsum = f1 + f2;
        resk += kWgk[jtwm1] * fsum;
        resabs += kWgk[jtwm1] * (std::fabs(f1) + std::fabs(f2));
    }
    const double reskh = resk * 0.5;
    double resasc = kWgk[10] * std::fabs(fc - reskh);
    for (int j = 0; j < 10; ++j)
        resasc += kWgk[j] * (std::fabs(fv1[j] - reskh) + std::fabs(fv2[j] - reskh));

    resabs *= dhlgth;
    resasc *= dhlgth;
    double abserr = std::fabs((resk - resg) * hlgth);
    if (resasc != 0.0 && abserr != 0.0)
        abserr = resasc * std::min(1.0, std::pow(200.0 * abserr / resasc, 1.5));
    if (resabs > kUflow / (50.0 * kEps))
        abserr = std::max(kEps * 50.0 * resabs, abserr);
    return {resk * hlgth, abserr};
}

struct Panel {
    double a;
    double b;
    double value;
    double error;
};

bool by_error(const Panel& l, const Panel& r) { return l.error < r.error; }

// Tracks the panel that touches one end of the interval through successive bisections.
constexpr int kSettleDepth = 12;

struct EndpointTrack {
    double last_ratio = -1.0; // |child| / |parent| of the latest halving, -1 if never halved
    // Ratio seen a few levels down. Deep halvings near an endpoint at 1 see y quantized to
    // ~1e-16, which makes the latest ratio noisy.
    double settled_ratio = -1.0;
    int halvings = 0;
    int stagnant = 0;

    void observe(double parent, double child, double negligible)
    {
        if (std::fabs(parent) <= negligible) {
            stagnant = 0;
            return;
        }
        last_ratio = std::fabs(child) / std::fabs(parent);
        if (++halvings <= kSettleDepth)
            settled_ratio = last_ratio;
        stagnant = last_ratio > kDivergenceRatio ? stagnant + 1 : 0;
    }
};

enum class PassStatus { Converged, Exhausted };

struct PassOutcome {
    PassStatus status = PassStatus::Converged;
    double value = 0.0;
    double error = 0.0;
    int subdivisions = 0;
    double left_error = 0.0;  // error still attributed to the panel at a
    double right_error = 0.0; // error still attributed to the panel at b
    EndpointTrack left;
    EndpointTrack right;
};

double neumaier_sum(const std::vector<Panel>& panels, double Panel::*field)
{
    double sum = 0.0, comp = 0.0;
    for (const auto& p : panels) {
        const double v = p.*field;
        const double t = sum + v;
        comp += std::fabs(sum) >= std::fabs(v) ? (sum - t) + v : (v - t) + sum;
        sum = t;
    }
    return sum + comp;
}

PassOutcome adaptive_pass(const Integrand& f, double a, double b, double rel_tol, double abs_tol,
                          int budget, double shave_width)
{
    PassOutcome out;
    std::vector<Panel> heap;
    std::vector<Panel> frozen;
    {
        Rule r = gauss_kronrod21(f, a, b);
        heap.push_back({a, b, r.value, r.error});
    }
    double value = heap.front().value;
    double error = heap.front().error;
    double frozen_error = 0.0;

    auto finish = [&](PassStatus status) {
        std::vector<Panel> all = heap;
        all.insert(all.end(), frozen.begin(), frozen.end());
        out.status = status;
        out.value = neumaier_sum(all, &Panel::value);
        out.error = neumaier_sum(all, &Panel::error);
        for (const auto& p : all) {
            if (p.a == a)
                out.left_error += p.error;
            if (p.b == b)
                out.right_error += p.error;
        }
        return out;
    };

    for (;;) {
        const double tol = std::max(abs_tol, rel_tol * std::fabs(value));
        if (error + frozen_error <= tol)
            return finish(PassStatus::Converged);
        if (heap.empty() || out.subdivisions >= budget)
            return finish(PassStatus::Exhausted);

        std::pop_heap(heap.begin(), heap.end(), by_error);
        Panel worst = heap.back();
        heap.pop_back();

        if (worst.b - worst.a <= shave_width) {
            frozen.push_back(worst);
            error -= worst.error;
            frozen_error += worst.error;
            continue;
        }

        const double mid = 0.5 * (worst.a + worst.b);
        Rule lr = gauss_kronrod21(f, worst.a, mid);
        Rule rr = gauss_kronrod21(f, mid, worst.b);
        ++out.subdivisions;

        value += lr.value + rr.value - worst.value;
        error += lr.error + rr.error - worst.error;

        const double negligible = 1e-3 * abs_tol + 1e-300;
        if (worst.a == a)
            out.left.observe(worst.value, lr.value, negligible);
        if (worst.b == b)
            out.right.observe(worst.value, rr.value, negligible);
        if (out.left.stagnant >= kDivergenceRun || out.right.stagnant >= kDivergenceRun) {
            std::ostringstream msg;
            msg << "integral over [" << a << ", " << b << "] diverges at the "
                << (out.left.stagnant >= kDivergenceRun ? "lower" : "upper")
                << " endpoint: panel contributions do not shrink under bisection";
            throw Divergence(msg.str());
        }

        heap.push_back({worst.a, mid, lr.value, lr.error});
        std::push_heap(heap.begin(), heap.end(), by_error);
        heap.push_back({mid, worst.b, rr.value, rr.error});
        std::push_heap(heap.begin(), heap.end(), by_error);
    }
}

// Exponent m for the substitution y = a + L t^m, picked so that a singularity decaying
// like (y-a)^-p turns into t^{m(1-p)-1} with m(1-p) >= 2.
int stretch_power(const EndpointTrack& track)
{
    if (track.settled_ratio <= 0.0)
        return 4;
    const double p = 1.0 + std::log2(track.settled_ratio);
    if (p <= 0.0)
        return 2;
    if (p >= 0.99)
        return 64;
    return std::clamp(static_cast<int>(std::ceil(2.0 / (1.0 - p) - 0.05)), 2, 64);
}

// Integrates f over [lo, hi] after stretching towards `pinned` (either lo or hi).
PassOutcome stretched_pass(const Integrand& f, double lo, double hi, bool pin_low, int m,
                           double rel_tol, double abs_tol, int budget, double shave)
{
    const double len = hi - lo;
    const double pinned = pin_low ? lo : hi;
    Integrand g = [&](double t) {
        const double tm1 = std::pow(t, m - 1);
        const double off = len * tm1 * t;
        const double y = pin_low ? lo + off : hi - off;
        if (y == pinned)
            return 0.0; // below representable resolution of the endpoint
        return f(y) * len * m * tm1;
    };
    return adaptive_pass(g, 0.0, 1.0, rel_tol, abs_tol, budget, shave);
}

} // namespace

QuadResult integrate_with_error(const Integrand& f, double a, double b, const QuadConfig& cfg)
{
    cfg.validate();
    if (!(a < b)) {
        std::ostringstream msg;
        msg << "integrate: need a < b, got [" << a << ", " << b << "]";
        throw std::invalid_argument(msg.str());
    }

    const double shave_width = cfg.endpoint_shave * (b - a);
    PassOutcome plain =
        adaptive_pass(f, a, b, cfg.rel_tol, cfg.abs_tol, cfg.max_subdivisions, shave_width);
    if (plain.status == PassStatus::Converged)
        return {plain.value, plain.error, plain.subdivisions, 1};

    const bool left_heavy = plain.left_error > 0.25 * plain.error;
    const bool right_heavy = plain.right_error > 0.25 * plain.error;
    if (!left_heavy && !right_heavy) {
        std::ostringstream msg;
        msg << "integral over [" << a << ", " << b << "] did not converge within "
            << cfg.max_subdivisions << " subdivisions (error estimate " << plain.error << ")";
        throw NonConvergence(msg.str());
    }

    // Split at the midpoint so each half has at most one stretched end.
    const double c = 0.5 * (a + b);
    const double half_abs = 0.5 * cfg.abs_tol;
    QuadResult res;
    res.subdivisions = plain.subdivisions;
    int power = 1;

    auto run_half = [&](double lo, double hi, bool pin_low, bool stretch, const EndpointTrack& track) {
        PassOutcome o;
        if (stretch) {
            const int m = stretch_power(track);
            power = std::max(power, m);
            o = stretched_pass(f, lo, hi, pin_low, m, cfg.rel_tol, half_abs, cfg.max_subdivisions,
                               cfg.endpoint_shave);
        } else {
            o = adaptive_pass(f, lo, hi, cfg.rel_tol, half_abs, cfg.max_subdivisions,
                              cfg.endpoint_shave * (hi - lo));
        }
        res.subdivisions += o.subdivisions;
        if (o.status != PassStatus::Converged) {
            std::ostringstream msg;
            msg << "integral over [" << lo << ", " << hi << "] did not converge after endpoint "
                << "substitution (error estimate " << o.error << ")";
            throw NonConvergence(msg.str());
        }
        return o;
    };

    PassOutcome lower = run_half(a, c, true, left_heavy, plain.left);
    PassOutcome upper = run_half(c, b, false, right_heavy, plain.right);
    res.value = lower.value + upper.value;
    res.error = lower.error + upper.error;
    res.stretch_power = power;
    if (res.error > std::max(cfg.abs_tol, cfg.rel_tol * std::fabs(res.value))) {
        std::ostringstream msg;
        msg << "integral over [" << a << ", " << b << "] did not reach tolerance (error estimate "
            << res.error << ")";
        throw NonConvergence(msg.str());
    }
    return res;
}

} // namespace driftgreen
