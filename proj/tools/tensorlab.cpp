// Command-line front end: one subcommand per experiment kind, plus `run`
// for every experiment in a config.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "tensorlab/cli/config.hpp"
#include "tensorlab/cli/run.hpp"

namespace cli = tensorlab::cli;
using cli::Json;

namespace {

struct Common {
  std::string config;
  std::optional<std::size_t> L, k, search_budget;
  std::optional<std::uint64_t> budget;
  std::string out;
  std::string format = "text";
  std::vector<std::string> only;
  std::vector<std::string> params;
};

void add_common(CLI::App& app, Common& c) {
  app.add_option("--config", c.config, "TOML experiment configuration")->check(CLI::ExistingFile);
  app.add_option("--cap-L", c.L, "stratum length cap L");
  app.add_option("--cap-k", c.k, "bridge slack k");
  app.add_option("--budget", c.budget, "universe word budget");
  app.add_option("--search-budget", c.search_budget, "equivalence search node budget");
  app.add_option("--out", c.out, "write the report here instead of stdout");
  app.add_option("--format", c.format, "report format")->check(CLI::IsMember({"text", "json"}));
}

// Named flags per kind, copied into the experiment's parameters.
std::vector<std::string> named_params(std::string const& kind) {
  if (kind == "check-op") return {"op"};
  if (kind == "closure" || kind == "iota") return {"system", "random", "seed"};
  if (kind == "tensor") return {"system"};
  if (kind == "entangled") return {"system", "word", "expect"};
  if (kind == "refine") return {"source", "target", "random", "seed", "pairs"};
  if (kind == "universality") return {"system", "codomain", "delta", "random", "seed"};
  if (kind == "theorem21") return {"size", "threads", "rows"};
  if (kind == "affine") return {"a", "b", "N"};
  if (kind == "equiv") return {"system", "word", "target"};
  return {};
}

Json scalar(std::string const& text) {
  auto j = Json::parse(text, nullptr, false);
  return j.is_discarded() || j.is_object() ? Json(text) : j;
}

bool numeric(std::string const& key) {
  for (char const* k : {"random", "seed", "pairs", "size", "threads", "a", "b", "N"}) {
    if (key == k) {
      return true;
    }
  }
  return false;
}

std::optional<std::uint64_t> env_budget() {
  if (char const* v = std::getenv("TENSORLAB_UNIVERSE_BUDGET")) {
    try {
      return std::stoull(v);
    } catch (std::exception const&) {
      throw tensorlab::Error(std::string("TENSORLAB_UNIVERSE_BUDGET is not a number: ") + v);
    }
  }
  return std::nullopt;
}

int emit(Json const& report, Common const& c) {
  auto text = c.format == "json" ? cli::render_json(report) : cli::render_text(report);
  if (c.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(c.out, std::ios::binary);
    if (!f) {
      throw tensorlab::Error("cannot write '" + c.out + "'");
    }
    f << text;
  }
  return cli::exit_code(report);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-scale laboratory for tensor products of partial operations"};
  app.require_subcommand(0, 1);

  Common common;
  std::map<std::string, std::string> named;
  std::vector<CLI::App*> kinds;
  for (auto const& kind : cli::experiment_kinds()) {
    auto* sub = app.add_subcommand(kind, "run one '" + kind + "' experiment");
    add_common(*sub, common);
    for (auto const& key : named_params(kind)) {
      sub->add_option("--" + key, named[key], key);
    }
    sub->add_option("--param", common.params, "extra parameter key=value");
    kinds.push_back(sub);
  }
  auto* run = app.add_subcommand("run", "run every experiment in a config");
  add_common(*run, common);
  run->add_option("--only", common.only, "run only these experiment ids");

  CLI11_PARSE(app, argc, argv);

  try {
    cli::RunOptions opts{common.L, common.k, common.budget ? common.budget : env_budget(),
                         common.search_budget};
    cli::ExperimentConfig config;
    config.source = "<command line>";
    if (!common.config.empty()) {
      config = cli::load_config(common.config);
    }

    std::vector<cli::ExperimentSpec> specs;
    if (run->parsed()) {
      for (auto const& e : config.experiments) {
        if (common.only.empty()
            || std::find(common.only.begin(), common.only.end(), e.id) != common.only.end()) {
          specs.push_back(e);
        }
      }
    } else {
      for (auto* sub : kinds) {
        if (!sub->parsed()) {
          continue;
        }
        cli::ExperimentSpec spec{sub->get_name(), sub->get_name(), Json::object()};
        for (auto const& key : named_params(spec.kind)) {
          if (sub->count("--" + key)) {
            spec.params[key] = numeric(key) ? scalar(named[key]) : Json(named[key]);
          }
        }
        for (auto const& kv : common.params) {
          auto eq = kv.find('=');
          if (eq == std::string::npos) {
            throw tensorlab::Error("--param expects key=value, got '" + kv + "'");
          }
          spec.params[kv.substr(0, eq)] = scalar(kv.substr(eq + 1));
        }
        // Builtin operation forms may be used without declaring them.
        if (spec.params.contains("op") && spec.params["op"].is_string()) {
          auto name = spec.params["op"].get<std::string>();
          if (!config.operations.count(name)) {
            config.operations.emplace(name, cli::builtin_operation(name, nullptr));
          }
        }
        specs.push_back(std::move(spec));
      }
    }
    if (specs.empty()) {
      std::cerr << "no experiments to run\n\n" << app.help();
      return 1;
    }
    return emit(cli::run(config, specs, opts), common);
  } catch (cli::ConfigError const& e) {
    for (auto const& issue : e.issues()) {
      std::cerr << cli::to_string(issue.kind) << ": " << issue.message << "\n";
    }
    return 1;
  } catch (std::exception const& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
