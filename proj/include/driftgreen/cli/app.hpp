#pragma once

#include "driftgreen/cli/csv.hpp"
#include "driftgreen/cli/jobspec.hpp"

#include <iosfwd>
#include <optional>

namespace driftgreen::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kNumerical = 3 };

/// Outcome of one job: a JSON document, plus a curve for sweeps.
struct JobResult {
    nlohmann::json document;
    std::optional<CurveFile> curve;
    int exit_code = kOk;
};

/// Runs a fully resolved job. Throws UsageError, DomainError or NumericalError.
JobResult execute(const JobSpec& spec);

/// Entry point of the driftgreen binary.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace driftgreen::cli
