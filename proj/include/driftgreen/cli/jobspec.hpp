#pragma once

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace driftgreen::cli {

/// Malformed job file or flag combination; reported as a usage error.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct PsiSpec {
    enum class Kind { Coefficients, Monomial, OneMinus };
    Kind kind = Kind::Coefficients;
    /// Exact rational literals, lowest power first ("1", "-2", "1/3", "0.5").
    std::vector<std::string> coefficients{"1"};
    unsigned k = 0;

    friend bool operator==(const PsiSpec&, const PsiSpec&) = default;
};

struct ModelSpec {
    double alpha = 0.0;
    PsiSpec psi;
    /// Coefficient literals of sigma^2; empty means Wright-Fisher.
    std::optional<std::vector<std::string>> sigma2;

    friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

struct TaskSpec {
    std::string command;
    std::optional<double> x;
    std::optional<double> y;
    std::optional<std::string> conditioning; // none | up | down
    std::optional<std::string> grid;         // start:stop:count
    std::optional<std::string> over;         // x | alpha | y
    bool from_zero = false;
    // quadrature
    std::optional<double> rel_tol;
    std::optional<double> abs_tol;
    std::optional<int> max_subdivisions;
    // game
    std::optional<std::vector<std::string>> payoff;
    std::optional<std::string> ploidy; // haploid | dominant | recessive
    bool rule = false;
    std::optional<std::string> dominance;
    // report
    std::optional<std::string> diploid; // dominant | recessive
    // mc
    std::optional<std::uint64_t> paths;
    std::optional<std::uint64_t> seed;
    std::optional<double> dt;
    std::optional<double> max_time;
    std::optional<unsigned> refinement;
    std::optional<unsigned> workers;

    friend bool operator==(const TaskSpec&, const TaskSpec&) = default;
};

struct OutputSpec {
    std::string format = "json"; // json | csv
    std::optional<std::string> path;

    friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

struct JobSpec {
    ModelSpec model;
    TaskSpec task;
    OutputSpec output;

    friend bool operator==(const JobSpec&, const JobSpec&) = default;
};

/// Unset optionals are omitted from the output.
nlohmann::json to_json(const JobSpec& spec);

/// Throws UsageError on unknown keys, wrong types or invalid enumerations.
JobSpec jobspec_from_json(const nlohmann::json& j);
JobSpec load_jobspec(const std::string& path);

/// Splits "1,-2,1/3" on commas, trimming blanks.
std::vector<std::string> split_list(const std::string& text);

} // namespace driftgreen::cli
