#include "tensorlab/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "tensorlab/error.hpp"
#include "tensorlab/superposition.hpp"

namespace tensorlab::cli {

namespace {
  using Kind = ConfigIssue::Kind;

  Json to_json(toml::node const& n) {
    if (auto const* t = n.as_table()) {
      Json j = Json::object();
      for (auto const& [key, value] : *t) {
        j[std::string(key.str())] = to_json(value);
      }
      return j;
    }
    if (auto const* a = n.as_array()) {
      Json j = Json::array();
      for (auto const& v : *a) {
        j.push_back(to_json(v));
      }
      return j;
    }
    if (auto const* s = n.as_string()) {
      return s->get();
    }
    if (auto const* i = n.as_integer()) {
      return i->get();
    }
    if (auto const* f = n.as_floating_point()) {
      return f->get();
    }
    if (auto const* b = n.as_boolean()) {
      return b->get();
    }
    return nullptr;
  }

  std::vector<std::string> split(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    for (std::string w; in >> w;) {
      out.push_back(w);
    }
    return out;
  }

  std::optional<std::uint64_t> number(std::string const& s) {
    std::uint64_t v = 0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || end != s.data() + s.size()) {
      return std::nullopt;
    }
    return v;
  }

  class Loader {
   public:
    explicit Loader(ExperimentConfig& c) : c_(c) {}

    void load(Json const& doc) {
      if (doc.contains("caps")) {
        caps(doc["caps"], c_.caps, "[caps]");
      }
      if (doc.contains("budgets")) {
        budgets(doc["budgets"]);
      }
      if (doc.contains("carriers")) {
        for (auto const& [name, v] : object(doc["carriers"], "[carriers]").items()) {
          carrier(name, v);
        }
      }
      if (doc.contains("operations")) {
        for (auto const& [name, v] : object(doc["operations"], "[operations]").items()) {
          operation(name, v);
        }
      }
      if (doc.contains("generators")) {
        for (auto const& [name, v] : object(doc["generators"], "[generators]").items()) {
          generator(name, v);
        }
      }
      if (doc.contains("systems")) {
        for (auto const& [name, v] : object(doc["systems"], "[systems]").items()) {
          system(name, v);
        }
      }
      if (doc.contains("experiment")) {
        auto const& list = doc["experiment"];
        if (!list.is_array()) {
          issue(Kind::invalid_value, "[[experiment]] must be an array of tables");
        } else {
          for (std::size_t i = 0; i < list.size(); ++i) {
            experiment(i, list[i]);
          }
        }
      }
      for (auto const& e : c_.experiments) {
        auto more = validate_experiment(e, c_);
        issues_.insert(issues_.end(), more.begin(), more.end());
      }
    }

    std::vector<ConfigIssue> issues_;

   private:
    void issue(Kind kind, std::string message) {
      issues_.push_back({kind, std::move(message)});
    }

    Json const& object(Json const& j, std::string const& where) {
      static Json const empty = Json::object();
      if (!j.is_object()) {
        issue(Kind::invalid_value, where + " must be a table");
        return empty;
      }
      return j;
    }

    std::optional<std::string> string(Json const& j, char const* key,
                                      std::string const& where) {
      if (!j.contains(key)) {
        return std::nullopt;
      }
      if (!j[key].is_string()) {
        issue(Kind::invalid_value, where + ": '" + key + "' must be a string");
        return std::nullopt;
      }
      return j[key].get<std::string>();
    }

    std::vector<std::string> strings(Json const& j, char const* key,
                                     std::string const& where) {
      std::vector<std::string> out;
      if (!j.contains(key)) {
        return out;
      }
      if (!j[key].is_array()) {
        issue(Kind::invalid_value, where + ": '" + key + "' must be a list of names");
        return out;
      }
      for (auto const& v : j[key]) {
        if (!v.is_string()) {
          issue(Kind::invalid_value, where + ": '" + key + "' must be a list of names");
          return {};
        }
        out.push_back(v.get<std::string>());
      }
      return out;
    }

    void caps(Json const& j, Caps& out, std::string const& where) {
      if (j.contains("L")) {
        if (!j["L"].is_number_integer() || j["L"].get<std::int64_t>() < 1) {
          issue(Kind::invalid_cap, where + ": L must be an integer >= 1");
        } else {
          out.L = j["L"].get<std::size_t>();
        }
      }
      if (j.contains("k")) {
        if (!j["k"].is_number_integer() || j["k"].get<std::int64_t>() < 0) {
          issue(Kind::invalid_cap, where + ": k must be an integer >= 0");
        } else {
          out.k = j["k"].get<std::size_t>();
        }
      }
    }

    void budgets(Json const& j) {
      auto read = [&](char const* key, auto& out) {
        if (!j.contains(key)) {
          return;
        }
        if (!j[key].is_number_integer() || j[key].get<std::int64_t>() < 1) {
          issue(Kind::invalid_cap, std::string("[budgets]: ") + key
                                       + " must be a positive integer");
          return;
        }
        out = j[key].get<std::remove_reference_t<decltype(out)>>();
      };
      read("universe", c_.budgets.universe);
      read("search", c_.budgets.search);
      read("pairs", c_.budgets.pairs);
    }

    void carrier(std::string const& name, Json const& v) {
      if (v.is_number_integer() && v.get<std::int64_t>() >= 1) {
        c_.carriers[name] = make_range_carrier(name, v.get<std::size_t>());
        return;
      }
      if (v.is_array() && !v.empty()
          && std::all_of(v.begin(), v.end(), [](Json const& e) { return e.is_string(); })) {
        std::vector<std::string> elems = v.get<std::vector<std::string>>();
        if (std::set<std::string>(elems.begin(), elems.end()).size() != elems.size()) {
          issue(Kind::invalid_value, "carrier '" + name + "' repeats an element");
          return;
        }
        c_.carriers[name] = make_carrier(name, std::move(elems));
        return;
      }
      issue(Kind::invalid_value, "carrier '" + name
                                     + "' must be a positive size or a list of element names");
    }

    CarrierPtr carrier_ref(std::string const& name, std::string const& where) {
      auto it = c_.carriers.find(name);
      if (it == c_.carriers.end()) {
        issue(Kind::unresolved_reference, where + ": unknown carrier '" + name + "'");
        return nullptr;
      }
      return it->second;
    }

    void operation(std::string const& name, Json const& v) {
      std::string const where = "operation '" + name + "'";
      if (!v.is_object()) {
        issue(Kind::invalid_value, where + " must be a table");
        return;
      }
      CarrierPtr carrier;
      if (auto c = string(v, "carrier", where)) {
        carrier = carrier_ref(*c, where);
        if (!carrier) {
          return;
        }
      }
      try {
        if (auto form = string(v, "builtin", where)) {
          auto op = builtin_operation(*form, carrier);
          CayleyOp named(op.carrier_ptr(), op.table(), name);
          if (!carrier) {
            // The builtin's own carrier becomes addressable by its name.
            c_.carriers.emplace(op.carrier().name(), op.carrier_ptr());
          }
          c_.operations.emplace(name, std::move(named));
          return;
        }
      } catch (InvalidCap const& e) {
        issue(Kind::invalid_cap, where + ": " + e.what());
        return;
      } catch (Error const& e) {
        issue(Kind::invalid_value, where + ": " + e.what());
        return;
      }
      if (!v.contains("table")) {
        issue(Kind::invalid_value, where + " needs 'builtin' or 'table'");
        return;
      }
      if (!carrier) {
        issue(Kind::invalid_value, where + ": a table needs a 'carrier'");
        return;
      }
      table(name, where, carrier, v["table"]);
    }

    void table(std::string const& name, std::string const& where,
               CarrierPtr const& carrier, Json const& rows) {
      std::size_t const n = carrier->size();
      if (!rows.is_array() || rows.size() != n) {
        issue(Kind::invalid_value, where + ": table needs " + std::to_string(n) + " rows");
        return;
      }
      std::vector<Elem> t;
      for (auto const& row : rows) {
        if (!row.is_array() || row.size() != n) {
          issue(Kind::invalid_value,
                where + ": every row needs " + std::to_string(n) + " entries");
          return;
        }
        for (auto const& e : row) {
          if (e.is_number_integer() && e.get<std::int64_t>() >= 0
              && e.get<std::uint64_t>() < n) {
            t.push_back(e.get<Elem>());
          } else if (e.is_string() && e.get<std::string>() == "-") {
            t.push_back(undefined);
          } else if (e.is_string() && carrier->index_of(e.get<std::string>())) {
            t.push_back(*carrier->index_of(e.get<std::string>()));
          } else {
            issue(Kind::invalid_value, where + ": bad table entry " + e.dump());
            return;
          }
        }
      }
      c_.operations.emplace(name, CayleyOp(carrier, std::move(t), name));
    }

    void generator(std::string const& name, Json const& v) {
      std::string const where = "generator '" + name + "'";
      if (!v.is_object()) {
        issue(Kind::invalid_value, where + " must be a table");
        return;
      }
      auto c = string(v, "carrier", where);
      if (!c) {
        issue(Kind::invalid_value, where + " needs a 'carrier'");
        return;
      }
      auto carrier = carrier_ref(*c, where);
      if (!carrier) {
        return;
      }
      if (auto form = string(v, "form", where)) {
        auto words = split(*form);
        if (words.size() == 2 && words[0] == "from-op") {
          auto it = c_.operations.find(words[1]);
          if (it == c_.operations.end()) {
            issue(Kind::unresolved_reference, where + ": unknown operation '" + words[1] + "'");
          } else if (!same_carrier(it->second.carrier(), *carrier)) {
            issue(Kind::invalid_value, where + ": operation '" + words[1]
                                           + "' is not on carrier '" + *c + "'");
          } else {
            c_.generators.emplace(name, generator_from_op(it->second));
          }
        } else if (words.size() == 1 && words[0] == "identity") {
          c_.generators.emplace(name, identity_generator(carrier));
        } else if (words.size() == 1 && words[0] == "full") {
          c_.generators.emplace(name, full_generator(carrier));
        } else {
          issue(Kind::invalid_value, where + ": unknown form '" + *form + "'");
        }
        return;
      }
      if (!v.contains("table") || !v["table"].is_array()) {
        issue(Kind::invalid_value, where + " needs 'form' or 'table'");
        return;
      }
      std::size_t const n = carrier->size();
      if (n > Generator::table_limit) {
        issue(Kind::invalid_value, where + ": explicit tables need at most 16 elements");
        return;
      }
      std::size_t const subsets = std::size_t{1} << n;
      auto const& t = v["table"];
      if (t.size() != subsets) {
        issue(Kind::invalid_value,
              where + ": table needs " + std::to_string(subsets) + " image masks");
        return;
      }
      std::vector<std::uint32_t> masks;
      for (auto const& m : t) {
        if (!m.is_number_integer() || m.get<std::int64_t>() < 0
            || m.get<std::uint64_t>() >= subsets) {
          issue(Kind::invalid_value, where + ": bad image mask " + m.dump());
          return;
        }
        masks.push_back(m.get<std::uint32_t>());
      }
      c_.generators.emplace(name, Generator::from_table(carrier, std::move(masks), name));
    }

    void op_on(std::string const& op, std::size_t factor, SystemDecl const& d,
               std::string const& where) {
      auto it = c_.operations.find(op);
      if (it == c_.operations.end()) {
        issue(Kind::unresolved_reference, where + ": unknown operation '" + op + "'");
        return;
      }
      if (factor < d.factors.size()) {
        auto f = c_.carriers.find(d.factors[factor]);
        if (f != c_.carriers.end() && !same_carrier(it->second.carrier(), *f->second)) {
          issue(Kind::invalid_value, where + ": operation '" + op + "' is not on factor '"
                                         + d.factors[factor] + "'");
        }
      }
    }

    void generator_on(std::string const& g, std::size_t factor, SystemDecl const& d,
                      std::string const& where) {
      auto it = c_.generators.find(g);
      if (it == c_.generators.end()) {
        issue(Kind::unresolved_reference, where + ": unknown generator '" + g + "'");
        return;
      }
      auto f = c_.carriers.find(d.factors[factor]);
      if (f != c_.carriers.end() && !same_carrier(it->second.carrier(), *f->second)) {
        issue(Kind::invalid_value, where + ": generator '" + g + "' is not on factor '"
                                       + d.factors[factor] + "'");
      }
    }

    void system(std::string const& name, Json const& v) {
      std::string const where = "system '" + name + "'";
      if (!v.is_object()) {
        issue(Kind::invalid_value, where + " must be a table");
        return;
      }
      SystemDecl d;
      d.name = name;
      d.factors = strings(v, "factors", where);
      std::size_t const before = issues_.size();
      if (d.factors.empty()) {
        issue(Kind::invalid_value, where + " needs a nonempty 'factors' list");
      }
      for (auto const& f : d.factors) {
        carrier_ref(f, where);
      }
      auto provenance = string(v, "provenance", where).value_or("");
      bool const pair = d.factors.size() == 2;
      if (provenance == "binary-ops") {
        d.provenance = Provenance::Kind::binary_ops;
        d.alpha = string(v, "alpha", where).value_or("");
        d.beta = string(v, "beta", where).value_or("");
        if (!pair) {
          issue(Kind::invalid_value, where + ": binary-ops needs two factors");
        } else {
          op_on(d.alpha, 0, d, where);
          op_on(d.beta, 1, d, where);
        }
      } else if (provenance == "op-sets") {
        d.provenance = Provenance::Kind::op_sets;
        d.alphas = strings(v, "alphas", where);
        d.betas = strings(v, "betas", where);
        if (!pair) {
          issue(Kind::invalid_value, where + ": op-sets needs two factors");
        } else {
          for (auto const& o : d.alphas) {
            op_on(o, 0, d, where);
          }
          for (auto const& o : d.betas) {
            op_on(o, 1, d, where);
          }
        }
      } else if (provenance == "generators") {
        d.provenance = Provenance::Kind::generators;
        d.psi = string(v, "psi", where).value_or("");
        d.phi = string(v, "phi", where).value_or("");
        d.candidates_x = strings(v, "candidates_x", where);
        d.candidates_y = strings(v, "candidates_y", where);
        if (!pair) {
          issue(Kind::invalid_value, where + ": generators needs two factors");
        } else {
          generator_on(d.psi, 0, d, where);
          generator_on(d.phi, 1, d, where);
          for (auto const& o : d.candidates_x) {
            op_on(o, 0, d, where);
          }
          for (auto const& o : d.candidates_y) {
            op_on(o, 1, d, where);
          }
          for (std::size_t i = 0; i < 2; ++i) {
            auto const& cands = i == 0 ? d.candidates_x : d.candidates_y;
            auto f = c_.carriers.find(d.factors[i]);
            if (cands.empty() && f != c_.carriers.end()
                && f->second->size() > enumerate_ops_limit) {
              issue(Kind::invalid_value, where + ": factor '" + d.factors[i]
                                             + "' is too large to enumerate candidates");
            }
          }
        }
      } else if (provenance == "superposition") {
        d.provenance = Provenance::Kind::explicit_relations;
        d.superposition = true;
        d.alpha = string(v, "op", where).value_or("");
        if (d.factors.size() != 1) {
          issue(Kind::invalid_value, where + ": superposition needs one factor");
        } else {
          op_on(d.alpha, 0, d, where);
        }
      } else if (provenance == "explicit") {
        d.provenance = Provenance::Kind::explicit_relations;
        if (!v.contains("relations") || !v["relations"].is_array()) {
          issue(Kind::invalid_value, where + " needs a 'relations' list");
        } else {
          for (auto const& r : v["relations"]) {
            if (!r.is_array() || r.size() != 2 || !r[0].is_string() || !r[1].is_string()) {
              issue(Kind::invalid_value, where + ": a relation is a pair of word strings");
              continue;
            }
            d.relations.emplace_back(r[0].get<std::string>(), r[1].get<std::string>());
          }
        }
      } else {
        issue(Kind::invalid_value, where + ": provenance must be one of binary-ops, "
                                       "op-sets, generators, superposition, explicit");
      }
      if (issues_.size() != before) {
        return;
      }
      if (d.provenance == Provenance::Kind::explicit_relations && !d.superposition) {
        auto alphabet = make_alphabet_of(d);
        for (auto const& [l, r] : d.relations) {
          for (auto const& side : {l, r}) {
            if (side.empty()) {
              continue;
            }
            try {
              parse_word(alphabet, side);
            } catch (Error const& e) {
              issue(Kind::parse_error, where + ": " + e.what());
            }
          }
        }
      }
      c_.systems.emplace(name, std::move(d));
    }

    AlphabetPtr make_alphabet_of(SystemDecl const& d) {
      std::vector<CarrierPtr> fs;
      for (auto const& f : d.factors) {
        fs.push_back(c_.carriers.at(f));
      }
      return make_alphabet(std::move(fs));
    }

    void experiment(std::size_t index, Json const& v) {
      std::string const where = "experiment " + std::to_string(index + 1);
      if (!v.is_object()) {
        issue(Kind::invalid_value, where + " must be a table");
        return;
      }
      ExperimentSpec e;
      e.kind = string(v, "kind", where).value_or("");
      e.id = string(v, "id", where).value_or(e.kind + "-" + std::to_string(index + 1));
      for (auto const& [key, value] : v.items()) {
        if (key != "id" && key != "kind") {
          e.params[key] = value;
        }
      }
      c_.experiments.push_back(std::move(e));
    }

    ExperimentConfig& c_;
  };

  bool is_uint(Json const& j) {
    return j.is_number_integer() && j.get<std::int64_t>() >= 0;
  }
}  // namespace

char const* to_string(ConfigIssue::Kind kind) {
  switch (kind) {
    case Kind::parse_error: return "ParseError";
    case Kind::unresolved_reference: return "UnresolvedReference";
    case Kind::invalid_cap: return "InvalidCap";
    case Kind::invalid_value: return "InvalidValue";
  }
  return "?";
}

namespace {
  std::string join(std::vector<ConfigIssue> const& issues) {
    std::string s;
    for (auto const& i : issues) {
      if (!s.empty()) {
        s += '\n';
      }
      s += std::string(to_string(i.kind)) + ": " + i.message;
    }
    return s;
  }
}  // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : Error(join(issues)), issues_(std::move(issues)) {}

bool ConfigError::has(ConfigIssue::Kind kind) const {
  return std::any_of(issues_.begin(), issues_.end(),
                     [&](ConfigIssue const& i) { return i.kind == kind; });
}

AlphabetPtr ExperimentConfig::alphabet(std::string const& system) const {
  auto const& d = systems.at(system);
  std::vector<CarrierPtr> fs;
  for (auto const& f : d.factors) {
    fs.push_back(carriers.at(f));
  }
  return make_alphabet(std::move(fs));
}

RuleSystemPtr ExperimentConfig::system(std::string const& name) const {
  {
    std::lock_guard lock(cache_->mutex);
    auto it = cache_->systems.find(name);
    if (it != cache_->systems.end()) {
      return it->second;
    }
  }
  auto const& d = systems.at(name);
  auto a = alphabet(name);
  auto ops_of = [&](std::vector<std::string> const& names) {
    std::vector<CayleyOp> out;
    for (auto const& n : names) {
      out.push_back(operations.at(n));
    }
    return out;
  };
  RuleSystem sys;
  switch (d.provenance) {
    case Provenance::Kind::binary_ops:
      sys = compile_from_binary_ops(a, operations.at(d.alpha), operations.at(d.beta));
      break;
    case Provenance::Kind::op_sets:
      sys = compile_from_op_sets(a, ops_of(d.alphas), ops_of(d.betas));
      break;
    case Provenance::Kind::generators:
      sys = compile_from_generators(a, generators.at(d.psi), generators.at(d.phi),
                                    ops_of(d.candidates_x), ops_of(d.candidates_y));
      break;
    case Provenance::Kind::explicit_relations: {
      if (d.superposition) {
        sys = compile_explicit(a, relations_from_op(operations.at(d.alpha)),
                               "superposition of " + d.alpha);
        break;
      }
      std::vector<Relation> rels;
      for (auto const& [l, r] : d.relations) {
        Relation rel;
        if (!l.empty()) {
          rel.left = parse_word(a, l).letters();
        }
        if (!r.empty()) {
          rel.right = parse_word(a, r).letters();
        }
        rels.push_back(std::move(rel));
      }
      sys = compile_explicit(a, rels, name);
      break;
    }
  }
  auto ptr = std::make_shared<RuleSystem const>(std::move(sys));
  std::lock_guard lock(cache_->mutex);
  return cache_->systems.emplace(name, ptr).first->second;
}

CayleyOp const& ExperimentConfig::operation(std::string const& name) const {
  return operations.at(name);
}

CarrierPtr const& ExperimentConfig::carrier(std::string const& name) const {
  return carriers.at(name);
}

std::vector<std::string> const& experiment_kinds() {
  static std::vector<std::string> const kinds{
      "check-op", "closure",  "tensor",  "iota",           "entangled", "refine",
      "universality", "theorem21", "affine", "appendix-suite", "equiv"};
  return kinds;
}

std::vector<ConfigIssue> validate_experiment(ExperimentSpec const& e,
                                             ExperimentConfig const& c) {
  std::vector<ConfigIssue> out;
  std::string const where = "experiment '" + e.id + "'";
  auto const& kinds = experiment_kinds();
  if (std::find(kinds.begin(), kinds.end(), e.kind) == kinds.end()) {
    out.push_back({Kind::invalid_value, where + ": unknown kind '" + e.kind + "'"});
    return out;
  }
  auto const& p = e.params;
  auto ref = [&](char const* key, auto const& table, char const* what) {
    if (!p.contains(key)) {
      return;
    }
    if (!p[key].is_string()) {
      out.push_back({Kind::invalid_value, where + ": '" + key + "' must be a name"});
      return;
    }
    if (!table.count(p[key].get<std::string>())) {
      out.push_back({Kind::unresolved_reference, where + ": unknown " + what + " '"
                                                     + p[key].get<std::string>() + "'"});
    }
  };
  ref("system", c.systems, "system");
  if (e.kind == "refine") {
    ref("source", c.systems, "system");
    ref("target", c.systems, "system");
  }
  ref("op", c.operations, "operation");
  ref("delta", c.operations, "operation");
  ref("codomain", c.carriers, "carrier");

  for (char const* key : {"L", "k", "a", "b", "N", "size", "random", "seed", "threads",
                          "budget", "pairs"}) {
    if (p.contains(key) && !is_uint(p[key])) {
      out.push_back({Kind::invalid_value, where + ": '" + key
                                              + "' must be a non-negative integer"});
    }
  }
  if (p.contains("L") && is_uint(p["L"]) && p["L"].get<std::size_t>() < 1) {
    out.push_back({Kind::invalid_cap, where + ": L must be >= 1"});
  }

  auto require = [&](char const* key) {
    if (!p.contains(key)) {
      out.push_back({Kind::invalid_value, where + ": missing '" + key + "'"});
    }
  };
  bool const random = p.contains("random");
  if (e.kind == "check-op") {
    require("op");
  } else if (e.kind == "closure" || e.kind == "tensor" || e.kind == "iota"
             || e.kind == "entangled") {
    if (!random || e.kind == "tensor" || e.kind == "entangled") {
      require("system");
    }
  } else if (e.kind == "refine") {
    if (!random) {
      require("source");
      require("target");
    }
  } else if (e.kind == "universality") {
    if (!random) {
      require("system");
      require("codomain");
      require("delta");
      require("g");
    }
  } else if (e.kind == "theorem21") {
    require("size");
    if (p.contains("size") && is_uint(p["size"])
        && (p["size"].get<std::size_t>() < 1 || p["size"].get<std::size_t>() > 3)) {
      out.push_back({Kind::invalid_cap, where + ": size must be 1, 2 or 3"});
    }
  } else if (e.kind == "affine") {
    std::uint64_t const a = p.contains("a") && is_uint(p["a"]) ? p["a"].get<std::uint64_t>() : 2;
    std::uint64_t const b = p.contains("b") && is_uint(p["b"]) ? p["b"].get<std::uint64_t>() : 2;
    if (a < 1 || b < 1 || a + b < 3) {
      out.push_back({Kind::invalid_cap,
                     where + ": affine constants need a, b >= 1 and a + b >= 3 (got a = "
                         + std::to_string(a) + ", b = " + std::to_string(b) + ")"});
    }
  } else if (e.kind == "equiv") {
    require("system");
    require("word");
    require("target");
  }

  if (p.contains("system") && p["system"].is_string()
      && c.systems.count(p["system"].get<std::string>())) {
    auto alphabet = c.alphabet(p["system"].get<std::string>());
    for (char const* key : {"word", "target"}) {
      if (e.kind == "refine" || !p.contains(key)) {
        continue;
      }
      if (!p[key].is_string()) {
        out.push_back({Kind::invalid_value, where + ": '" + key + "' must be a word"});
        continue;
      }
      try {
        parse_word(alphabet, p[key].get<std::string>());
      } catch (Error const& err) {
        out.push_back({Kind::parse_error, where + ": " + err.what()});
      }
    }
  }
  return out;
}

CayleyOp builtin_operation(std::string_view form, CarrierPtr carrier) {
  auto w = split(form);
  auto need_carrier = [&](std::size_t n) -> CarrierPtr {
    if (!carrier) {
      return make_range_carrier("Z" + std::to_string(n), n);
    }
    if (carrier->size() != n) {
      throw Error("builtin '" + std::string(form) + "' needs a carrier of size "
                  + std::to_string(n));
    }
    return carrier;
  };
  if (w.size() == 2 && (w[0] == "mod-add" || w[0] == "mod-mul")) {
    auto n = number(w[1]);
    if (!n || *n < 1) {
      throw Error("bad modulus in '" + std::string(form) + "'");
    }
    auto c = need_carrier(*n);
    return w[0] == "mod-add" ? ops::mod_add(c) : ops::mod_mul(c);
  }
  if (w.size() == 5 && w[0] == "affine" && w[3] == "cap") {
    auto a = number(w[1]);
    auto b = number(w[2]);
    auto N = number(w[4]);
    if (!a || !b || !N) {
      throw Error("bad numbers in '" + std::string(form) + "'");
    }
    if (*a < 1 || *b < 1 || *a + *b < 3) {
      throw InvalidCap("affine constants need a, b >= 1 and a + b >= 3");
    }
    auto op = ops::affine(*a, *b, *N);
    if (carrier && carrier->size() != *N + 1) {
      throw Error("builtin '" + std::string(form) + "' needs a carrier of size "
                  + std::to_string(*N + 1));
    }
    return carrier ? CayleyOp(carrier, op.table(), op.name()) : op;
  }
  if (w.size() == 2 && w[0] == "capped-add") {
    auto N = number(w[1]);
    if (!N) {
      throw Error("bad cap in '" + std::string(form) + "'");
    }
    return ops::capped_add(*N);
  }
  if (!carrier) {
    throw Error("builtin '" + std::string(form) + "' needs a 'carrier'");
  }
  if (w.size() == 2 && w[0] == "projection" && w[1] == "left") {
    return ops::left_projection(carrier);
  }
  if (w.size() == 2 && w[0] == "projection" && w[1] == "right") {
    return ops::right_projection(carrier);
  }
  if (w.size() == 1 && w[0] == "max") {
    return ops::max(carrier);
  }
  if (w.size() == 1 && w[0] == "min") {
    return ops::min(carrier);
  }
  throw Error("unknown builtin '" + std::string(form) + "'");
}

ExperimentConfig load_config_text(std::string_view text, std::string const& source) {
  ExperimentConfig c;
  c.source = source;
  Json doc;
  try {
    doc = to_json(toml::parse(text, source));
  } catch (toml::parse_error const& e) {
    std::ostringstream msg;
    msg << source << ":" << e.source().begin.line << ":" << e.source().begin.column
        << ": " << e.description();
    throw ConfigError({{Kind::parse_error, msg.str()}});
  }
  Loader loader(c);
  loader.load(doc);
  if (!loader.issues_.empty()) {
    throw ConfigError(std::move(loader.issues_));
  }
  return c;
}

ExperimentConfig load_config(std::string const& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError({{Kind::parse_error, "cannot open '" + path + "'"}});
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_config_text(buf.str(), path);
}

}  // namespace tensorlab::cli
