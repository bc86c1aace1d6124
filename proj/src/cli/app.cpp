#include "driftgreen/cli/app.hpp"

#include "driftgreen/diffusion.hpp"
#include "driftgreen/errors.hpp"
#include "driftgreen/games.hpp"
#include "driftgreen/montecarlo.hpp"
#include "driftgreen/perturbation.hpp"
#include "driftgreen/threads.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>

namespace driftgreen::cli {

using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------------------------
// Building library objects from a JobSpec

RationalPolynomial psi_polynomial(const PsiSpec& p)
{
    switch (p.kind) {
    case PsiSpec::Kind::Monomial:
        return MonomialPsi{MonomialPsi::Kind::XPowK, p.k}.polynomial();
    case PsiSpec::Kind::OneMinus:
        return MonomialPsi{MonomialPsi::Kind::OneMinusXPowK, p.k}.polynomial();
    case PsiSpec::Kind::Coefficients:
        break;
    }
    std::vector<Rational> c;
    for (const auto& s : p.coefficients) {
        try {
            c.push_back(parse_rational(s));
        } catch (const std::invalid_argument& e) {
            throw UsageError(std::string("psi: ") + e.what());
        }
    }
    return RationalPolynomial(std::move(c));
}

DiffusionCoefficient sigma2_of(const ModelSpec& m)
{
    if (!m.sigma2)
        return DiffusionCoefficient::wright_fisher();
    std::vector<double> c;
    for (const auto& s : *m.sigma2) {
        try {
            c.push_back(to_double(parse_rational(s)));
        } catch (const std::invalid_argument& e) {
            throw UsageError(std::string("sigma2: ") + e.what());
        }
    }
    try {
        return DiffusionCoefficient::polynomial(c);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

DiffusionModel model_of(const ModelSpec& m, double alpha)
{
    return DiffusionModel(alpha, FrequencyDependence::polynomial(psi_polynomial(m.psi)), sigma2_of(m));
}

QuadConfig quad_of(const TaskSpec& t)
{
    QuadConfig cfg;
    if (t.rel_tol)
        cfg.rel_tol = *t.rel_tol;
    if (t.abs_tol)
        cfg.abs_tol = *t.abs_tol;
    if (t.max_subdivisions)
        cfg.max_subdivisions = *t.max_subdivisions;
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return cfg;
}

double require_x(const TaskSpec& t)
{
    if (!t.x)
        throw UsageError(t.command + " needs --x");
    return *t.x;
}

Conditioning conditioning_of(const TaskSpec& t)
{
    const std::string c = t.conditioning.value_or("none");
    if (c == "up")
        return Conditioning::Up;
    if (c == "down")
        return Conditioning::Down;
    return Conditioning::None;
}

json rational_array(const RationalPolynomial& p)
{
    json a = json::array();
    for (const auto& c : p.coefficients())
        a.push_back(to_string(c));
    return a;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// ---------------------------------------------------------------------------------------------
// Sweeps

struct Grid {
    double start = 0.0;
    double stop = 0.0;
    std::size_t count = 0;

    double at(std::size_t i) const
    {
        if (count == 1)
            return start;
        if (i + 1 == count)
            return stop;
        return start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
};

Grid parse_grid(const std::string& text)
{
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ':'))
        parts.push_back(item);
    if (parts.size() != 3)
        throw UsageError("--grid must be start:stop:count, got '" + text + "'");
    Grid g;
    try {
        std::size_t used = 0;
        g.start = std::stod(parts[0], &used);
        if (used != parts[0].size())
            throw std::invalid_argument(parts[0]);
        g.stop = std::stod(parts[1], &used);
        if (used != parts[1].size())
            throw std::invalid_argument(parts[1]);
        const long long n = std::stoll(parts[2], &used);
        if (used != parts[2].size() || n < 0)
            throw std::invalid_argument(parts[2]);
        g.count = static_cast<std::size_t>(n);
    } catch (const std::exception&) {
        throw UsageError("--grid must be start:stop:count, got '" + text + "'");
    }
    if (g.count == 0)
        throw UsageError("--grid count must be at least 1");
    if (!std::isfinite(g.start) || !std::isfinite(g.stop))
        throw UsageError("--grid bounds must be finite");
    return g;
}

struct Point {
    double x = 0.0;
    double y = 0.0;
    double alpha = 0.0;
};

using RowFn = std::function<std::vector<double>(const Point&, const DiffusionSolver&)>;

JobResult sweep(const JobSpec& spec, const std::vector<std::string>& value_columns, const RowFn& row)
{
    const TaskSpec& t = spec.task;
    const Grid grid = parse_grid(*t.grid);
    const std::string over = t.over.value_or("x");
    if (over == "y" && t.command != "green")
        throw UsageError("--over y is only meaningful for green");
    const QuadConfig cfg = quad_of(t);

    Point base{t.x.value_or(0.5), t.y.value_or(0.5), spec.model.alpha};
    std::vector<Point> points(grid.count, base);
    for (std::size_t i = 0; i < grid.count; ++i) {
        const double v = grid.at(i);
        (over == "x" ? points[i].x : over == "y" ? points[i].y : points[i].alpha) = v;
    }

    // One scale table serves the whole sweep unless alpha itself varies.
    std::unique_ptr<DiffusionSolver> shared;
    std::string shared_error;
    if (over != "alpha") {
        try {
            shared = std::make_unique<DiffusionSolver>(model_of(spec.model, base.alpha), cfg);
        } catch (const NumericalError& e) {
            shared_error = e.what();
        }
    }

    const std::size_t width = value_columns.size();
    std::vector<std::vector<std::optional<double>>> rows(grid.count);
    std::vector<std::string> failures(grid.count);
    parallel_chunks(grid.count, 1, worker_count(t.workers.value_or(0)), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            const double key = over == "x" ? points[i].x : over == "y" ? points[i].y : points[i].alpha;
            auto& r = rows[i];
            r.assign(width + 1, std::nullopt);
            r[0] = key;
            try {
                if (!shared && !shared_error.empty())
                    throw NonConvergence(shared_error);
                std::vector<double> values;
                if (shared) {
                    values = row(points[i], *shared);
                } else {
                    const DiffusionSolver solver(model_of(spec.model, points[i].alpha), cfg);
                    values = row(points[i], solver);
                }
                for (std::size_t c = 0; c < width && c < values.size(); ++c)
                    if (std::isfinite(values[c]))
                        r[c + 1] = values[c];
            } catch (const NumericalError& err) {
                failures[i] = std::string(err.error_class()) + ": " + err.what();
            } catch (const DomainError& err) {
                failures[i] = std::string("DomainError: ") + err.what();
            }
        }
    });

    JobResult result;
    CurveFile curve;
    curve.columns.push_back(over);
    curve.columns.insert(curve.columns.end(), value_columns.begin(), value_columns.end());
    curve.rows = rows;

    json jrows = json::array();
    json jfail = json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        json jr = json::array();
        for (const auto& v : rows[i])
            jr.push_back(v ? json(*v) : json(nullptr));
        jrows.push_back(jr);
        if (!failures[i].empty())
            jfail.push_back({{"index", i}, {"message", failures[i]}});
    }
    result.document = {{"command", t.command}, {"over", over},      {"columns", curve.columns},
                       {"rows", jrows},         {"failed_points", jfail.size()}, {"failures", jfail}};
    result.curve = std::move(curve);
    if (!jfail.empty())
        result.exit_code = kNumerical;
    return result;
}

// ---------------------------------------------------------------------------------------------
// Commands

JobResult run_fixation(const JobSpec& spec)
{
    const auto psi = FrequencyDependence::polynomial(psi_polynomial(spec.model.psi));
    const QuadConfig cfg = quad_of(spec.task);
    if (spec.task.grid) {
        return sweep(spec, {"p_up", "first_order", "difference"}, [&](const Point& p, const DiffusionSolver& s) {
            const double exact = s.hit_prob_up(p.x);
            const double first = p.x + p.alpha * d_fixation(psi, p.x, cfg);
            return std::vector<double>{exact, first, exact - first};
        });
    }
    const double x = require_x(spec.task);
    const DiffusionSolver s(model_of(spec.model, spec.model.alpha), cfg);
    const double p = s.hit_prob_up(x);
    const double d = d_fixation(psi, x, cfg);
    const double first = x + spec.model.alpha * d;
    return {json{{"command", "fixation"}, {"x", x}, {"alpha", spec.model.alpha}, {"p_up", p}, {"p_down", 1.0 - p},
                 {"d_fixation", d}, {"first_order", first}, {"difference", p - first}},
            std::nullopt};
}

JobResult run_times(const JobSpec& spec)
{
    const auto psi = FrequencyDependence::polynomial(psi_polynomial(spec.model.psi));
    const auto sigma2 = sigma2_of(spec.model);
    const QuadConfig cfg = quad_of(spec.task);
    if (spec.task.grid) {
        const double d_time = d_time_unconditional(psi, sigma2, cfg);
        const DiffusionSolver neutral(model_of(spec.model, 0.0), cfg);
        return sweep(spec, {"e_t", "e_t_up", "e_t_down", "first_order", "difference"},
                     [&](const Point& p, const DiffusionSolver& s) {
                         const HittingSummary h = s.hitting_summary(p.x);
                         const double first = neutral.absorption_time(p.x) + p.alpha * p.x * d_time;
                         return std::vector<double>{h.e_t, h.e_t_up, h.e_t_down, first, h.e_t - first};
                     });
    }
    const double x = require_x(spec.task);
    const DiffusionSolver s(model_of(spec.model, spec.model.alpha), cfg);
    const HittingSummary h = s.hitting_summary(x);
    json j{{"command", "times"}, {"x", x},           {"alpha", spec.model.alpha}, {"p_up", h.p_up},
           {"p_down", h.p_down}, {"e_t", h.e_t},     {"e_t_up", h.e_t_up},        {"e_t_down", h.e_t_down}};
    if (spec.task.from_zero)
        j["e_t_up_from_zero"] = s.absorption_time_up_from_zero();
    return {j, std::nullopt};
}

JobResult run_green(const JobSpec& spec)
{
    const auto psi = FrequencyDependence::polynomial(psi_polynomial(spec.model.psi));
    const auto sigma2 = sigma2_of(spec.model);
    const QuadConfig cfg = quad_of(spec.task);
    const Conditioning cond = conditioning_of(spec.task);
    if (spec.task.grid) {
        return sweep(spec, {"green", "d_green"}, [&](const Point& p, const DiffusionSolver& s) {
            return std::vector<double>{s.green(p.x, p.y, cond), d_green(psi, sigma2, p.y, cond, cfg)};
        });
    }
    const double x = require_x(spec.task);
    if (!spec.task.y)
        throw UsageError("green needs --y");
    const double y = *spec.task.y;
    const DiffusionSolver s(model_of(spec.model, spec.model.alpha), cfg);
    json j{{"command", "green"},
           {"x", x},
           {"y", y},
           {"alpha", spec.model.alpha},
           {"conditioning", spec.task.conditioning.value_or("none")},
           {"green", s.green(x, y, cond)},
           {"d_green", d_green(psi, sigma2, y, cond, cfg)}};
    if (cond == Conditioning::None) {
        const auto [a, b] = s.green_two_forms(x, y);
        j["forms"] = {a, b};
    }
    return {j, std::nullopt};
}

JobResult run_spectrum(const JobSpec& spec)
{
    const auto psi = FrequencyDependence::polynomial(psi_polynomial(spec.model.psi));
    const auto sigma2 = sigma2_of(spec.model);
    const QuadConfig cfg = quad_of(spec.task);
    auto first_order = [&](double x, double alpha) {
        return (1.0 - x) / sigma2(x) + alpha * d_spectrum(psi, sigma2, x, cfg);
    };
    if (spec.task.grid) {
        return sweep(spec, {"f", "first_order", "difference"}, [&](const Point& p, const DiffusionSolver& s) {
            const double f = s.frequency_spectrum(p.x);
            const double first = first_order(p.x, p.alpha);
            return std::vector<double>{f, first, f - first};
        });
    }
    const double x = require_x(spec.task);
    const DiffusionSolver s(model_of(spec.model, spec.model.alpha), cfg);
    const double f = s.frequency_spectrum(x);
    const double first = first_order(x, spec.model.alpha);
    return {json{{"command", "spectrum"},
                 {"x", x},
                 {"alpha", spec.model.alpha},
                 {"f", f},
                 {"d_spectrum", d_spectrum(psi, sigma2, x, cfg)},
                 {"first_order", first},
                 {"difference", f - first}},
            std::nullopt};
}

PayoffMatrix payoff_of(const std::vector<std::string>& v)
{
    if (v.size() != 4)
        throw UsageError("--payoff needs four entries a,b,c,d");
    try {
        return {parse_rational(v[0]), parse_rational(v[1]), parse_rational(v[2]), parse_rational(v[3])};
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--payoff: ") + e.what());
    }
}

JobResult run_game(const JobSpec& spec)
{
    const TaskSpec& t = spec.task;
    if (t.grid)
        throw UsageError("game does not support --grid");
    if (t.payoff && t.dominance)
        throw UsageError("give either --payoff or --dominance, not both");
    if (!t.payoff && !t.dominance)
        throw UsageError("game needs --payoff or --dominance");

    json j{{"command", "game"}};
    std::optional<LinearPsi> linear;
    RationalPolynomial poly;
    if (t.dominance) {
        Rational h;
        try {
            h = parse_rational(*t.dominance);
        } catch (const std::invalid_argument& e) {
            throw UsageError(std::string("--dominance: ") + e.what());
        }
        linear = dominance_psi(h);
        poly = linear->polynomial();
        j["ploidy"] = "dominance";
        j["beta"] = to_double(linear->beta);
        j["gamma"] = to_double(linear->gamma);
        j["beta_exact"] = to_string(linear->beta);
        j["gamma_exact"] = to_string(linear->gamma);
    } else {
        const PayoffMatrix m = payoff_of(*t.payoff);
        const std::string ploidy = t.ploidy.value_or("haploid");
        j["ploidy"] = ploidy;
        if (ploidy == "haploid") {
            linear = haploid_psi(m);
            poly = linear->polynomial();
            j["beta"] = to_double(linear->beta);
            j["gamma"] = to_double(linear->gamma);
            j["beta_exact"] = to_string(linear->beta);
            j["gamma_exact"] = to_string(linear->gamma);
        } else {
            const DiploidCase dc = diploid_case(m, ploidy == "dominant" ? DiploidMode::Dominant : DiploidMode::Recessive);
            poly = dc.polynomial();
            j["beta"] = to_double(dc.beta);
            j["gamma"] = to_double(dc.gamma);
            j["beta_exact"] = to_string(dc.beta);
            j["gamma_exact"] = to_string(dc.gamma);
        }
    }
    j["psi"] = rational_array(poly);

    if (t.rule) {
        if (!linear)
            throw UsageError("--rule applies to linear psi (haploid payoffs or --dominance)");
        const double x = t.x.value_or(0.0);
        const InvasionResult r = invasion_rule(*linear, x);
        j["x"] = x;
        j["verdict"] = to_string(r.verdict);
        j["margin"] = to_double(r.margin);
        j["margin_exact"] = to_string(r.margin);
        j["d_fixation"] = d_fixation(linear->psi(), x, quad_of(t));
    }
    return {j, std::nullopt};
}

json estimate_json(const Estimate& e) { return {{"value", e.value}, {"se", number_or_null(e.se)}}; }

JobResult run_mc(const JobSpec& spec)
{
    const TaskSpec& t = spec.task;
    if (t.grid)
        throw UsageError("mc does not support --grid");
    const double x = require_x(t);
    SimConfig cfg;
    if (t.paths)
        cfg.n_paths = *t.paths;
    if (t.seed)
        cfg.seed = *t.seed;
    if (t.dt)
        cfg.dt = *t.dt;
    if (t.max_time)
        cfg.max_time = *t.max_time;
    if (t.refinement)
        cfg.refinement = *t.refinement;
    if (t.workers)
        cfg.workers = *t.workers;
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const McEstimates e = estimate(model_of(spec.model, spec.model.alpha), x, cfg);
    json warnings = json::array();
    if (e.n_censored > 0)
        warnings.push_back(std::to_string(e.n_censored) + " paths reached max_time without absorbing");
    return {json{{"command", "mc"},
                 {"x", x},
                 {"alpha", spec.model.alpha},
                 {"paths", cfg.n_paths},
                 {"dt", cfg.dt},
                 {"seed", cfg.seed},
                 {"refinement", cfg.refinement},
                 {"max_time", cfg.max_time},
                 {"p_fix", estimate_json(e.p_fix)},
                 {"mean_T", estimate_json(e.mean_T)},
                 {"mean_T_up", estimate_json(e.mean_T_up)},
                 {"mean_T_down", estimate_json(e.mean_T_down)},
                 {"n_fixed", e.n_fixed},
                 {"n_lost", e.n_lost},
                 {"n_censored", e.n_censored},
                 {"warnings", warnings}},
            std::nullopt};
}

json linear_json(const LinearForm& f) { return {{"beta", to_string(f.beta)}, {"gamma", to_string(f.gamma)}}; }

JobResult run_report(const JobSpec& spec)
{
    const TaskSpec& t = spec.task;
    if (t.grid)
        throw UsageError("report does not support --grid");
    if (t.diploid) {
        const DiploidMode mode = *t.diploid == "dominant" ? DiploidMode::Dominant : DiploidMode::Recessive;
        const DiploidCoefficients c = diploid_rule_coefficients(mode);
        json rows = json::array();
        for (const auto& r : diploid_comparison(mode))
            rows.push_back({{"quantity", r.quantity},
                            {"computed", r.computed},
                            {"tabulated", r.tabulated},
                            {"agrees", r.agrees}});
        return {json{{"command", "report"},
                     {"diploid", *t.diploid},
                     {"fixation", linear_json(c.fixation)},
                     {"time", linear_json(c.time)},
                     {"time_up", linear_json(c.time_up)},
                     {"time_down", linear_json(c.time_down)},
                     {"spectrum", {{"beta", rational_array(c.spectrum.beta)}, {"gamma", rational_array(c.spectrum.gamma)}}},
                     {"comparison", rows}},
                std::nullopt};
    }

    const double x = t.x.value_or(0.5);
    const RationalPolynomial poly = psi_polynomial(spec.model.psi);
    json j{{"command", "report"}, {"x", x}, {"psi", rational_array(poly)}};
    FirstOrderReport r;
    if (!spec.model.sigma2) {
        r = wf_polynomial_report(poly, x);
        j["route"] = "exact";
        j["exact"] = {{"fixation", rational_array(r.exact->fixation)},
                      {"time_unconditional", to_string(r.exact->time_unconditional)},
                      {"time_cond_up", to_string(r.exact->time_cond_up)},
                      {"time_cond_down", to_string(r.exact->time_cond_down)},
                      {"spectrum", rational_array(r.exact->spectrum)}};
    } else {
        r = quadrature_report(FrequencyDependence::polynomial(poly), sigma2_of(spec.model), x, quad_of(t));
        j["route"] = "quadrature";
    }
    j["d_fixation"] = r.d_fixation;
    j["d_time_unconditional_per_x"] = r.d_time_unconditional_per_x;
    j["d_time_cond_up_at_0"] = r.d_time_cond_up_at_0;
    j["d_time_cond_down_per_x"] = r.d_time_cond_down_per_x;
    j["d_spectrum"] = r.d_spectrum;
    return {j, std::nullopt};
}

json error_json(const std::string& cls, const std::string& message)
{
    return {{"error", {{"class", cls}, {"message", message}}}};
}

// ---------------------------------------------------------------------------------------------
// Flags

struct Flags {
    std::string job;
    bool emit_job = false;
    std::optional<double> alpha;
    std::string psi, monomial, one_minus, sigma2;
    std::optional<double> x, y;
    std::string conditioning, grid, over;
    bool from_zero = false;
    std::optional<double> rel_tol, abs_tol;
    std::optional<int> max_subdivisions;
    std::string payoff, ploidy, dominance, diploid;
    bool rule = false;
    std::optional<std::uint64_t> paths, seed;
    std::optional<double> dt, max_time;
    std::optional<unsigned> refinement, workers;
    std::string out, format;
};

unsigned parse_k(const std::string& text, const char* flag)
{
    std::string s = text;
    if (s.rfind("k=", 0) == 0)
        s = s.substr(2);
    try {
        std::size_t used = 0;
        const long k = std::stol(s, &used);
        if (used == s.size() && k >= 0)
            return static_cast<unsigned>(k);
    } catch (const std::exception&) {
    }
    throw UsageError(std::string(flag) + " expects k=<non-negative integer>, got '" + text + "'");
}

void apply_flags(const Flags& f, JobSpec& spec)
{
    if (f.alpha)
        spec.model.alpha = *f.alpha;
    const int psi_forms = !f.psi.empty() + !f.monomial.empty() + !f.one_minus.empty();
    if (psi_forms > 1)
        throw UsageError("give only one of --psi, --monomial, --one-minus");
    if (!f.psi.empty())
        spec.model.psi = PsiSpec{PsiSpec::Kind::Coefficients, split_list(f.psi), 0};
    if (!f.monomial.empty())
        spec.model.psi = PsiSpec{PsiSpec::Kind::Monomial, {}, parse_k(f.monomial, "--monomial")};
    if (!f.one_minus.empty())
        spec.model.psi = PsiSpec{PsiSpec::Kind::OneMinus, {}, parse_k(f.one_minus, "--one-minus")};
    if (!f.sigma2.empty()) {
        if (f.sigma2 == "wf" || f.sigma2 == "WRIGHT_FISHER")
            spec.model.sigma2.reset();
        else
            spec.model.sigma2 = split_list(f.sigma2);
    }

    TaskSpec& t = spec.task;
    if (f.x)
        t.x = f.x;
    if (f.y)
        t.y = f.y;
    if (!f.conditioning.empty())
        t.conditioning = f.conditioning;
    if (!f.grid.empty())
        t.grid = f.grid;
    if (!f.over.empty())
        t.over = f.over;
    if (f.from_zero)
        t.from_zero = true;
    if (f.rel_tol)
        t.rel_tol = f.rel_tol;
    if (f.abs_tol)
        t.abs_tol = f.abs_tol;
    if (f.max_subdivisions)
        t.max_subdivisions = f.max_subdivisions;
    if (!f.payoff.empty())
        t.payoff = split_list(f.payoff);
    if (!f.ploidy.empty())
        t.ploidy = f.ploidy;
    if (f.rule)
        t.rule = true;
    if (!f.dominance.empty())
        t.dominance = f.dominance;
    if (!f.diploid.empty())
        t.diploid = f.diploid;
    if (f.paths)
        t.paths = f.paths;
    if (f.seed)
        t.seed = f.seed;
    if (f.dt)
        t.dt = f.dt;
    if (f.max_time)
        t.max_time = f.max_time;
    if (f.refinement)
        t.refinement = f.refinement;
    if (f.workers)
        t.workers = f.workers;
    if (!f.format.empty())
        spec.output.format = f.format;
    if (!f.out.empty())
        spec.output.path = f.out;

    // Re-validate enumerations and shapes through the job-file parser.
    spec = jobspec_from_json(to_json(spec));
}

void add_model_options(CLI::App* sub, Flags& f)
{
    sub->add_option("--job", f.job, "JSON job file; flags override its values");
    sub->add_flag("--emit-job", f.emit_job, "Print the resolved job as JSON and exit");
    sub->add_option("--alpha", f.alpha, "Selection strength");
    sub->add_option("--psi", f.psi, "psi coefficients, lowest power first (e.g. 1,-2)");
    sub->add_option("--monomial", f.monomial, "psi(x) = x^k, given as k=<k>");
    sub->add_option("--one-minus", f.one_minus, "psi(x) = (1-x)^k, given as k=<k>");
    sub->add_option("--sigma2", f.sigma2, "wf (default) or sigma^2 coefficients");
    sub->add_option("--rel-tol", f.rel_tol, "Quadrature relative tolerance");
    sub->add_option("--abs-tol", f.abs_tol, "Quadrature absolute tolerance");
    sub->add_option("--max-subdivisions", f.max_subdivisions, "Quadrature panel budget");
    sub->add_option("--workers", f.workers, "Worker threads (capped by DRIFTGREEN_THREADS)");
    sub->add_option("--out", f.out, "Write output to this file");
    sub->add_option("--format", f.format, "json (default) or csv");
}

void add_sweep_options(CLI::App* sub, Flags& f)
{
    sub->add_option("--grid", f.grid, "Sweep start:stop:count");
    sub->add_option("--over", f.over, "Swept variable: x (default), alpha or y");
}

void write_result(const JobSpec& spec, const JobResult& r, std::ostream& out)
{
    const bool csv = spec.output.format == "csv";
    if (csv && !r.curve)
        throw UsageError("--format csv needs a --grid sweep");
    std::string text = csv ? to_csv(*r.curve) : r.document.dump(2) + "\n";
    if (spec.output.path) {
        std::ofstream file(*spec.output.path, std::ios::binary);
        if (!file)
            throw UsageError("cannot write '" + *spec.output.path + "'");
        file << text;
        if (csv) {
            // A short pointer on stdout keeps the JSON contract for scripted callers.
            out << json{{"command", spec.task.command},
                        {"path", *spec.output.path},
                        {"rows", r.curve->rows.size()},
                        {"failed_points", r.document.value("failed_points", 0)}}
                       .dump(2)
                << "\n";
        }
        return;
    }
    out << text;
}

} // namespace

JobResult execute(const JobSpec& spec)
{
    const std::string& c = spec.task.command;
    if (c == "fixation")
        return run_fixation(spec);
    if (c == "times")
        return run_times(spec);
    if (c == "green")
        return run_green(spec);
    if (c == "spectrum")
        return run_spectrum(spec);
    if (c == "game")
        return run_game(spec);
    if (c == "mc")
        return run_mc(spec);
    if (c == "report")
        return run_report(spec);
    throw UsageError("unknown command '" + c + "'");
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Hitting probabilities, times, Green functions and spectra of weakly selected diffusions"};
    app.require_subcommand(1);
    Flags f;

    auto* fixation = app.add_subcommand("fixation", "Probability of absorption at 1");
    add_model_options(fixation, f);
    add_sweep_options(fixation, f);
    fixation->add_option("--x", f.x, "Initial frequency");

    auto* times = app.add_subcommand("times", "Expected absorption times, plain and conditioned");
    add_model_options(times, f);
    add_sweep_options(times, f);
    times->add_option("--x", f.x, "Initial frequency");
    times->add_flag("--from-zero", f.from_zero, "Also report the fixation-conditioned time from 0+");

    auto* green = app.add_subcommand("green", "Green function G(x, y)");
    add_model_options(green, f);
    add_sweep_options(green, f);
    green->add_option("--x", f.x, "Initial frequency");
    green->add_option("--y", f.y, "Occupied frequency");
    green->add_option("--conditioning", f.conditioning, "none (default), up or down");

    auto* spectrum = app.add_subcommand("spectrum", "Expected frequency spectrum");
    add_model_options(spectrum, f);
    add_sweep_options(spectrum, f);
    spectrum->add_option("--x", f.x, "Frequency");

    auto* game = app.add_subcommand("game", "Payoff matrix to psi, and the invasion rule");
    add_model_options(game, f);
    game->add_option("--payoff", f.payoff, "Payoffs a,b,c,d");
    game->add_option("--ploidy", f.ploidy, "haploid (default), dominant or recessive");
    game->add_option("--dominance", f.dominance, "Dominance coefficient h");
    game->add_flag("--rule", f.rule, "Evaluate the invasion rule at --x");
    game->add_option("--x", f.x, "Initial frequency for --rule (default 0)");

    auto* mc = app.add_subcommand("mc", "Monte Carlo estimates from simulated paths");
    add_model_options(mc, f);
    mc->add_option("--x", f.x, "Initial frequency");
    mc->add_option("--paths", f.paths, "Number of paths");
    mc->add_option("--seed", f.seed, "Random seed");
    mc->add_option("--dt", f.dt, "Time step");
    mc->add_option("--max-time", f.max_time, "Censoring time");
    mc->add_option("--refinement", f.refinement, "Split each step into 2^r sub-steps");

    auto* report = app.add_subcommand("report", "First-order coefficients");
    add_model_options(report, f);
    report->add_option("--diploid", f.diploid, "dominant or recessive game coefficients");
    report->add_option("--x", f.x, "Frequency for x-dependent entries (default 0.5)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return kOk;
        }
        err << e.what() << "\n";
        out << error_json("UsageError", e.what()).dump(2) << "\n";
        return kUsage;
    }

    const CLI::App* sub = app.get_subcommands().front();
    try {
        JobSpec spec;
        if (!f.job.empty()) {
            spec = load_jobspec(f.job);
            if (!spec.task.command.empty() && spec.task.command != sub->get_name())
                throw UsageError("job file is for '" + spec.task.command + "', not '" + sub->get_name() + "'");
        }
        spec.task.command = sub->get_name();
        apply_flags(f, spec);
        if (f.emit_job) {
            out << to_json(spec).dump(2) << "\n";
            return kOk;
        }
        const JobResult r = execute(spec);
        write_result(spec, r, out);
        if (r.exit_code == kNumerical)
            err << "some grid points failed; see \"failures\"\n";
        for (const auto& w : r.document.value("warnings", json::array()))
            err << "warning: " << w.get<std::string>() << "\n";
        return r.exit_code;
    } catch (const UsageError& e) {
        err << e.what() << "\n";
        out << error_json("UsageError", e.what()).dump(2) << "\n";
        return kUsage;
    } catch (const DomainError& e) {
        err << e.what() << "\n";
        out << error_json("DomainError", e.what()).dump(2) << "\n";
        return kUsage;
    } catch (const NumericalError& e) {
        err << e.what() << "\n";
        out << error_json(e.error_class(), e.what()).dump(2) << "\n";
        return kNumerical;
    } catch (const std::invalid_argument& e) {
        err << e.what() << "\n";
        out << error_json("UsageError", e.what()).dump(2) << "\n";
        return kUsage;
    }
}

} // namespace driftgreen::cli
