#pragma once

// Experiment dispatch and report emission. Reports carry no timing and list
// everything in a fixed order, so a config always yields the same bytes.

#include <optional>
#include <string>
#include <vector>

#include "tensorlab/cli/config.hpp"

namespace tensorlab::cli {

inline constexpr char const* report_schema = "tensorlab.report/1";

/// Command-line overrides; they take precedence over the config.
struct RunOptions {
  std::optional<std::size_t> L;
  std::optional<std::size_t> k;
  std::optional<std::uint64_t> universe_budget;
  std::optional<std::size_t> search_budget;
};

/// An experiment failed; the message names the experiment.
class RunError : public Error {
 public:
  using Error::Error;
};

/// One experiment's report entry: id, kind, parameters, caps, result and
/// discrepancy flags. Every flag carries a witness.
Json run_experiment(ExperimentSpec const& spec, ExperimentConfig const& config,
                    RunOptions const& options = {});

/// Runs `specs` in order. Throws RunError.
Json run(ExperimentConfig const& config, std::vector<ExperimentSpec> const& specs,
         RunOptions const& options = {});
Json run(ExperimentConfig const& config, RunOptions const& options = {});

/// 0 without discrepancy flags, 2 with.
int exit_code(Json const& report);

std::string render_json(Json const& report);
std::string render_text(Json const& report);

}  // namespace tensorlab::cli
