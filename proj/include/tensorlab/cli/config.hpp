#pragma once

// TOML experiment configurations: named carriers, operations, generators
// and rule systems, default caps and budgets, and a list of experiments.
// Loading validates every reference and cap before anything is computed.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tensorlab/closure.hpp"
#include "tensorlab/finite_algebra.hpp"
#include "tensorlab/words.hpp"

namespace tensorlab::cli {

using Json = nlohmann::ordered_json;

struct ConfigIssue {
  enum class Kind { parse_error, unresolved_reference, invalid_cap, invalid_value };
  Kind kind;
  std::string message;
};

char const* to_string(ConfigIssue::Kind kind);

/// Every problem found while loading, in discovery order.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues);
  std::vector<ConfigIssue> const& issues() const noexcept { return issues_; }
  bool has(ConfigIssue::Kind kind) const;

 private:
  std::vector<ConfigIssue> issues_;
};

struct SystemDecl {
  std::string name;
  Provenance::Kind provenance = Provenance::Kind::binary_ops;
  std::vector<std::string> factors;
  std::string alpha, beta;
  std::vector<std::string> alphas, betas;
  std::string psi, phi;
  std::vector<std::string> candidates_x, candidates_y;
  /// One-factor system whose relations come from the operation `alpha`.
  bool superposition = false;
  /// Explicit relations as written; "" is the empty side.
  std::vector<std::pair<std::string, std::string>> relations;
};

struct Caps {
  std::size_t L = 3;
  std::size_t k = 1;
};

struct Budgets {
  std::uint64_t universe = default_universe_budget;
  std::size_t search = default_search_budget;
  std::uint64_t pairs = 2'000'000;
};

struct ExperimentSpec {
  std::string id;
  std::string kind;
  /// Every key of the entry except `id` and `kind`, as written.
  Json params = Json::object();
};

class ExperimentConfig {
 public:
  std::string source;
  std::map<std::string, CarrierPtr> carriers;
  std::map<std::string, CayleyOp> operations;
  std::map<std::string, Generator> generators;
  std::map<std::string, SystemDecl> systems;
  Caps caps;
  Budgets budgets;
  std::vector<ExperimentSpec> experiments;

  AlphabetPtr alphabet(std::string const& system) const;
  /// Compiled on first use, then shared.
  RuleSystemPtr system(std::string const& name) const;
  CayleyOp const& operation(std::string const& name) const;
  CarrierPtr const& carrier(std::string const& name) const;

 private:
  struct Cache {
    std::mutex mutex;
    std::map<std::string, RuleSystemPtr> systems;
  };
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

/// Throws ConfigError listing every problem.
ExperimentConfig load_config(std::string const& path);
ExperimentConfig load_config_text(std::string_view text,
                                  std::string const& source = "<string>");

/// Experiment kinds known to the runner.
std::vector<std::string> const& experiment_kinds();

/// Issues for one experiment's parameters against the declared names.
std::vector<ConfigIssue> validate_experiment(ExperimentSpec const& spec,
                                             ExperimentConfig const& config);

/// Builtin operations: "mod-add n", "mod-mul n", "affine a b cap N",
/// "projection left|right", "max", "min", "capped-add N". Carrier may be
/// null for forms that define their own.
CayleyOp builtin_operation(std::string_view form, CarrierPtr carrier);

}  // namespace tensorlab::cli
