#include "driftgreen/cli/jobspec.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

namespace driftgreen::cli {

using nlohmann::json;

namespace {

void require_object(const json& j, const std::string& where, std::initializer_list<const char*> allowed)
{
    if (!j.is_object())
        throw UsageError(where + " must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
            throw UsageError("unknown key '" + key + "' in " + where);
    }
}

void require_choice(const std::string& value, const std::string& where, std::initializer_list<const char*> choices)
{
    if (std::none_of(choices.begin(), choices.end(), [&](const char* c) { return value == c; }))
        throw UsageError("invalid value '" + value + "' for " + where);
}

std::string literal(const json& v, const std::string& where)
{
    if (v.is_string())
        return v.get<std::string>();
    if (v.is_number())
        return v.dump();
    throw UsageError(where + " entries must be numbers or strings");
}

std::vector<std::string> literal_list(const json& v, const std::string& where)
{
    if (!v.is_array() || v.empty())
        throw UsageError(where + " must be a non-empty array");
    std::vector<std::string> out;
    for (const auto& e : v)
        out.push_back(literal(e, where));
    return out;
}

template <class T>
T get_as(const json& j, const char* key, const std::string& where)
{
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw UsageError("'" + std::string(key) + "' in " + where + " has the wrong type");
    }
}

template <class T>
void read_optional(const json& j, const char* key, std::optional<T>& out, const std::string& where)
{
    if (j.contains(key))
        out = get_as<T>(j, key, where);
}

double read_number(const json& j, const char* key, const std::string& where)
{
    if (!j.at(key).is_number())
        throw UsageError("'" + std::string(key) + "' in " + where + " must be a number");
    return j.at(key).get<double>();
}

void read_optional_number(const json& j, const char* key, std::optional<double>& out, const std::string& where)
{
    if (j.contains(key))
        out = read_number(j, key, where);
}

template <class T>
void read_optional_unsigned(const json& j, const char* key, std::optional<T>& out, const std::string& where)
{
    if (!j.contains(key))
        return;
    if (!j.at(key).is_number_unsigned())
        throw UsageError("'" + std::string(key) + "' in " + where + " must be a non-negative integer");
    out = j.at(key).get<T>();
}

PsiSpec psi_from_json(const json& j)
{
    PsiSpec p;
    if (j.is_array()) {
        p.coefficients = literal_list(j, "model.psi");
        return p;
    }
    require_object(j, "model.psi", {"monomial", "one_minus"});
    if (j.size() != 1)
        throw UsageError("model.psi must name exactly one of 'monomial' or 'one_minus'");
    const bool mono = j.contains("monomial");
    const json& k = mono ? j.at("monomial") : j.at("one_minus");
    if (!k.is_number_unsigned())
        throw UsageError("model.psi exponent must be a non-negative integer");
    p.kind = mono ? PsiSpec::Kind::Monomial : PsiSpec::Kind::OneMinus;
    p.coefficients.clear();
    p.k = k.get<unsigned>();
    return p;
}

json psi_to_json(const PsiSpec& p)
{
    switch (p.kind) {
    case PsiSpec::Kind::Monomial:
        return {{"monomial", p.k}};
    case PsiSpec::Kind::OneMinus:
        return {{"one_minus", p.k}};
    case PsiSpec::Kind::Coefficients:
        break;
    }
    return p.coefficients;
}

} // namespace

std::vector<std::string> split_list(const std::string& text)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        out.push_back(b == std::string::npos ? std::string() : item.substr(b, e - b + 1));
    }
    if (out.empty() || std::any_of(out.begin(), out.end(), [](const std::string& s) { return s.empty(); }))
        throw UsageError("malformed list '" + text + "'");
    return out;
}

json to_json(const JobSpec& spec)
{
    json model = {{"alpha", spec.model.alpha}, {"psi", psi_to_json(spec.model.psi)}};
    model["sigma2"] = spec.model.sigma2 ? json(*spec.model.sigma2) : json("WRIGHT_FISHER");

    const TaskSpec& t = spec.task;
    json task = {{"command", t.command}};
    auto put = [&task](const char* key, const auto& opt) {
        if (opt)
            task[key] = *opt;
    };
    put("x", t.x);
    put("y", t.y);
    put("conditioning", t.conditioning);
    put("grid", t.grid);
    put("over", t.over);
    if (t.from_zero)
        task["from_zero"] = true;
    put("rel_tol", t.rel_tol);
    put("abs_tol", t.abs_tol);
    put("max_subdivisions", t.max_subdivisions);
    put("payoff", t.payoff);
    put("ploidy", t.ploidy);
    if (t.rule)
        task["rule"] = true;
    put("dominance", t.dominance);
    put("diploid", t.diploid);
    put("paths", t.paths);
    put("seed", t.seed);
    put("dt", t.dt);
    put("max_time", t.max_time);
    put("refinement", t.refinement);
    put("workers", t.workers);

    json output = {{"format", spec.output.format}};
    if (spec.output.path)
        output["path"] = *spec.output.path;
    return {{"model", model}, {"task", task}, {"output", output}};
}

JobSpec jobspec_from_json(const json& j)
{
    require_object(j, "job", {"model", "task", "output"});
    JobSpec spec;

    if (j.contains("model")) {
        const json& m = j.at("model");
        require_object(m, "model", {"alpha", "psi", "sigma2"});
        if (m.contains("alpha"))
            spec.model.alpha = read_number(m, "alpha", "model");
        if (m.contains("psi"))
            spec.model.psi = psi_from_json(m.at("psi"));
        if (m.contains("sigma2")) {
            const json& s = m.at("sigma2");
            if (s.is_string()) {
                if (s.get<std::string>() != "WRIGHT_FISHER")
                    throw UsageError("model.sigma2 must be \"WRIGHT_FISHER\" or a coefficient array");
            } else {
                spec.model.sigma2 = literal_list(s, "model.sigma2");
            }
        }
    }

    if (j.contains("task")) {
        const json& t = j.at("task");
        const std::string w = "task";
        require_object(t, w,
                       {"command", "x", "y", "conditioning", "grid", "over", "from_zero", "rel_tol", "abs_tol",
                        "max_subdivisions", "payoff", "ploidy", "rule", "dominance", "diploid", "paths", "seed", "dt",
                        "max_time", "refinement", "workers"});
        TaskSpec& ts = spec.task;
        if (t.contains("command")) {
            ts.command = get_as<std::string>(t, "command", w);
            require_choice(ts.command, "task.command",
                           {"fixation", "times", "green", "spectrum", "game", "mc", "report"});
        }
        read_optional_number(t, "x", ts.x, w);
        read_optional_number(t, "y", ts.y, w);
        read_optional(t, "conditioning", ts.conditioning, w);
        if (ts.conditioning)
            require_choice(*ts.conditioning, "task.conditioning", {"none", "up", "down"});
        read_optional(t, "grid", ts.grid, w);
        read_optional(t, "over", ts.over, w);
        if (ts.over)
            require_choice(*ts.over, "task.over", {"x", "alpha", "y"});
        if (t.contains("from_zero"))
            ts.from_zero = get_as<bool>(t, "from_zero", w);
        read_optional_number(t, "rel_tol", ts.rel_tol, w);
        read_optional_number(t, "abs_tol", ts.abs_tol, w);
        read_optional(t, "max_subdivisions", ts.max_subdivisions, w);
        if (t.contains("payoff")) {
            ts.payoff = literal_list(t.at("payoff"), "task.payoff");
            if (ts.payoff->size() != 4)
                throw UsageError("task.payoff needs exactly four entries a,b,c,d");
        }
        read_optional(t, "ploidy", ts.ploidy, w);
        if (ts.ploidy)
            require_choice(*ts.ploidy, "task.ploidy", {"haploid", "dominant", "recessive"});
        if (t.contains("rule"))
            ts.rule = get_as<bool>(t, "rule", w);
        if (t.contains("dominance"))
            ts.dominance = literal(t.at("dominance"), "task.dominance");
        read_optional(t, "diploid", ts.diploid, w);
        if (ts.diploid)
            require_choice(*ts.diploid, "task.diploid", {"dominant", "recessive"});
        read_optional_unsigned(t, "paths", ts.paths, w);
        read_optional_unsigned(t, "seed", ts.seed, w);
        read_optional_number(t, "dt", ts.dt, w);
        read_optional_number(t, "max_time", ts.max_time, w);
        read_optional_unsigned(t, "refinement", ts.refinement, w);
        read_optional_unsigned(t, "workers", ts.workers, w);
    }

    if (j.contains("output")) {
        const json& o = j.at("output");
        require_object(o, "output", {"format", "path"});
        if (o.contains("format")) {
            spec.output.format = get_as<std::string>(o, "format", "output");
            require_choice(spec.output.format, "output.format", {"json", "csv"});
        }
        read_optional(o, "path", spec.output.path, "output");
    }
    return spec;
}

JobSpec load_jobspec(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot open job file '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw UsageError("job file '" + path + "' is not valid JSON: " + e.what());
    }
    return jobspec_from_json(j);
}

} // namespace driftgreen::cli
