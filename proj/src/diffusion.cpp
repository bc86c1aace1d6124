#include "driftgreen/diffusion.hpp"

#include "driftgreen/errors.hpp"

#include <cmath>
#include <sstream>

namespace driftgreen {

namespace {

void require_closed_unit(double x, const char* what)
{
    if (!(x >= 0.0 && x <= 1.0)) {
        std::ostringstream msg;
        msg << what << " must lie in [0,1], got " << x;
        throw DomainError(msg.str());
    }
}

void require_open_unit(double x, const char* what)
{
    if (!(x > 0.0 && x < 1.0)) {
        std::ostringstream msg;
        msg << what << " must lie in (0,1), got " << x;
        throw DomainError(msg.str());
    }
}

} // namespace

double ScaleTable::psi_integral(double y) const
{
    if (psi_antiderivative_)
        return (*psi_antiderivative_)(y);
    if (psi_table_)
        return (*psi_table_)(y);
    return 0.0;
}

double ScaleTable::scale(double x) const
{
    if (neutral_)
        return x <= 0.0 ? 0.0 : (x >= 1.0 ? 1.0 : x);
    return (*scale_)(x);
}

double ScaleTable::scale_complement(double x) const
{
    if (neutral_)
        return x <= 0.0 ? 1.0 : (x >= 1.0 ? 0.0 : 1.0 - x);
    return scale_->complement(x);
}

double ScaleTable::derivative(double x) const
{
    if (neutral_)
        return 1.0;
    return std::exp(-2.0 * alpha_ * psi_integral(x));
}

ScaleTable build_scale(const DiffusionModel& model, const QuadConfig& cfg)
{
    cfg.validate();
    ScaleTable t;
    t.alpha_ = model.alpha();
    t.neutral_ = model.is_neutral();
    if (t.neutral_)
        return t;

    const QuadConfig inner = cfg.tightened(10.0);
    if (const auto* p = model.psi().coefficients())
        t.psi_antiderivative_ = p->antiderivative();
    else
        t.psi_table_ = cumulative([&model](double y) { return model.psi()(y); }, inner);

    const ScaleTable& ref = t;
    t.scale_ = cumulative([&ref](double y) { return ref.derivative(y); }, inner);
    if (!(t.scale_->total() > 0.0) || !std::isfinite(t.scale_->total()))
        throw NonConvergence("scale function total is not a positive finite number");
    return t;
}

DiffusionSolver::DiffusionSolver(DiffusionModel model, QuadConfig cfg)
    : model_(std::move(model)), cfg_(cfg), scale_(build_scale(model_, cfg_))
{
}

double DiffusionSolver::sigma2_checked(double y) const
{
    const double s2 = model_.sigma2()(y);
    if (!(s2 > 0.0)) {
        std::ostringstream msg;
        msg << "sigma^2 is not positive at y = " << y;
        throw DomainError(msg.str());
    }
    return s2;
}

double DiffusionSolver::hit_prob_up(double x) const
{
    require_closed_unit(x, "x");
    if (x == 0.0)
        return 0.0;
    if (x == 1.0)
        return 1.0;
    const double s = scale_.scale(x);
    const double c = scale_.scale_complement(x);
    const double total = scale_.total();
    // Whichever of S(x), S(1)-S(x) is smaller carries the relative accuracy.
    return s <= c ? s / total : 1.0 - c / total;
}

double DiffusionSolver::green(double x, double y, Conditioning conditioning) const
{
    require_open_unit(x, "x");
    require_open_unit(y, "y");
    const double total = scale_.total();
    const double denom = total * sigma2_checked(y) * scale_.derivative(y);
    const double sx = scale_.scale(x);
    const double cx = scale_.scale_complement(x);
    const double sy = scale_.scale(y);
    const double cy = scale_.scale_complement(y);

    switch (conditioning) {
    case Conditioning::None:
        return x <= y ? 2.0 * sx * cy / denom : 2.0 * cx * sy / denom;
    case Conditioning::Up:
        if (x <= y)
            return 2.0 * cy * sy / denom;
        return 2.0 * cx * (sy / sx) * sy / denom;
    case Conditioning::Down:
        if (y <= x)
            return 2.0 * sy * cy / denom;
        return 2.0 * sx * (cy / cx) * cy / denom;
    }
    return 0.0;
}

std::pair<double, double> DiffusionSolver::green_two_forms(double x, double y) const
{
    require_open_unit(x, "x");
    require_open_unit(y, "y");
    const double total = scale_.total();
    const double kernel = 2.0 / (sigma2_checked(y) * scale_.derivative(y));
    if (x <= y) {
        const double px_up = scale_.scale(x) / total;
        const double py_down = scale_.scale_complement(y) / total;
        return {kernel * px_up * scale_.scale_complement(y), kernel * py_down * scale_.scale(x)};
    }
    const double px_down = scale_.scale_complement(x) / total;
    const double py_up = scale_.scale(y) / total;
    return {kernel * px_down * scale_.scale(y), kernel * py_up * scale_.scale_complement(x)};
}

double DiffusionSolver::time_integral(double x, Conditioning conditioning) const
{
    require_open_unit(x, "x");
    auto g = [this, x, conditioning](double y) { return green(x, y, conditioning); };
    return integrate(g, 0.0, x, cfg_) + integrate(g, x, 1.0, cfg_);
}

double DiffusionSolver::absorption_time(double x) const
{
    return time_integral(x, Conditioning::None);
}

double DiffusionSolver::absorption_time_conditioned(double x, Conditioning direction) const
{
    if (direction == Conditioning::None)
        throw DomainError("conditioned absorption time needs direction Up or Down");
    return time_integral(x, direction);
}

double DiffusionSolver::absorption_time_up_from_zero() const
{
    constexpr double x1 = 1e-5;
    constexpr double x2 = 1e-6;
    const double e1 = absorption_time_conditioned(x1, Conditioning::Up);
    const double e2 = absorption_time_conditioned(x2, Conditioning::Up);
    return (x1 * e2 - x2 * e1) / (x1 - x2);
}

HittingSummary DiffusionSolver::hitting_summary(double x) const
{
    HittingSummary h;
    h.p_up = hit_prob_up(x);
    h.p_down = 1.0 - h.p_up;
    h.e_t = absorption_time(x);
    h.e_t_up = absorption_time_conditioned(x, Conditioning::Up);
    h.e_t_down = absorption_time_conditioned(x, Conditioning::Down);
    return h;
}

double DiffusionSolver::frequency_spectrum(double x) const
{
    require_open_unit(x, "x");
    return scale_.scale_complement(x) / (scale_.total() * sigma2_checked(x) * scale_.derivative(x));
}

double DiffusionSolver::conditioned_drift(double x) const
{
    if (x == 0.0)
        throw DomainError("conditioned drift is undefined at x = 0");
    require_open_unit(x, "x");
    const double s2 = sigma2_checked(x);
    return model_.alpha() * model_.mu(x) + scale_.derivative(x) / scale_.scale(x) * s2;
}

double hit_prob_up(const DiffusionModel& model, double x, const QuadConfig& cfg)
{
    require_closed_unit(x, "x");
    return DiffusionSolver(model, cfg).hit_prob_up(x);
}

double hit_prob_down(const DiffusionModel& model, double x, const QuadConfig& cfg)
{
    return 1.0 - hit_prob_up(model, x, cfg);
}

double green(const DiffusionModel& model, double x, double y, Conditioning conditioning, const QuadConfig& cfg)
{
    require_open_unit(x, "x");
    require_open_unit(y, "y");
    return DiffusionSolver(model, cfg).green(x, y, conditioning);
}

double absorption_time(const DiffusionModel& model, double x, const QuadConfig& cfg)
{
    require_open_unit(x, "x");
    return DiffusionSolver(model, cfg).absorption_time(x);
}

double absorption_time_conditioned(const DiffusionModel& model, double x, Conditioning direction,
                                   const QuadConfig& cfg)
{
    require_open_unit(x, "x");
    return DiffusionSolver(model, cfg).absorption_time_conditioned(x, direction);
}

double absorption_time_up_from_zero(const DiffusionModel& model, const QuadConfig& cfg)
{
    return DiffusionSolver(model, cfg).absorption_time_up_from_zero();
}

double frequency_spectrum(const DiffusionModel& model, double x, const QuadConfig& cfg)
{
    require_open_unit(x, "x");
    return DiffusionSolver(model, cfg).frequency_spectrum(x);
}

double conditioned_drift(const DiffusionModel& model, double x, const QuadConfig& cfg)
{
    if (x == 0.0)
        throw DomainError("conditioned drift is undefined at x = 0");
    require_open_unit(x, "x");
    return DiffusionSolver(model, cfg).conditioned_drift(x);
}

} // namespace driftgreen
