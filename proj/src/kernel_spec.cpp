#include "gwldp/kernel_spec.hpp"

#include <json.hpp>

#include "gwldp/io.hpp"

namespace gwldp {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) {
  throw std::invalid_argument("kernel spec: " + what);
}

const json& require(const json& j, const char* key, const char* where) {
  if (!j.contains(key)) fail(std::string(where) + " is missing field '" + key + "'");
  return j.at(key);
}

CountLaw parse_offspring_law(const json& j) {
  const std::string kind = require(j, "kind", "offspring_law").get<std::string>();
  if (kind == "geometric") return CountLaw::geometric(require(j, "q", "offspring_law").get<double>());
  if (kind == "poisson") return CountLaw::poisson(require(j, "lambda", "offspring_law").get<double>());
  if (kind == "table") {
    const json& arr = require(j, "p", "offspring_law");
    if (!arr.is_array()) fail("offspring_law.p must be an array");
    return CountLaw::table(arr.get<std::vector<double>>());
  }
  fail("offspring_law.kind must be table, geometric or poisson; got '" + kind + "'");
}

}  // namespace

KernelSpec parse_kernel_spec(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }

  const json& alphabet_json = require(doc, "alphabet", "document");
  if (!alphabet_json.is_array() || alphabet_json.empty()) fail("alphabet must be a nonempty array");
  Alphabet alphabet(alphabet_json.get<std::vector<std::string>>());

  const json& root_json = require(doc, "root_law", "document");
  RootLaw mu(static_cast<std::size_t>(alphabet.size()), 0.0);
  for (const auto& [label, value] : root_json.items()) {
    if (!alphabet.contains(label)) fail("root_law has unknown label '" + label + "'");
    mu[static_cast<std::size_t>(alphabet.index_of(label))] = value.get<double>();
  }
  try {
    validate_root_law(alphabet, mu);
  } catch (const std::exception& e) {
    fail(e.what());
  }

  const json& kernel_json = require(doc, "kernel", "document");
  const std::string form = require(kernel_json, "form", "kernel").get<std::string>();

  if (form == "factored") {
    CountLaw counts = parse_offspring_law(require(kernel_json, "offspring_law", "kernel"));
    const json& t = require(kernel_json, "transition", "kernel");
    if (!t.is_array() || static_cast<int>(t.size()) != alphabet.size())
      fail("transition must be a " + std::to_string(alphabet.size()) + "-row matrix");
    Matrix transition(alphabet.size(), alphabet.size());
    for (int i = 0; i < alphabet.size(); ++i) {
      const json& row = t.at(static_cast<std::size_t>(i));
      if (!row.is_array() || static_cast<int>(row.size()) != alphabet.size())
        fail("transition row " + std::to_string(i) + " must have " +
             std::to_string(alphabet.size()) + " entries");
      double sum = 0.0;
      for (int j = 0; j < alphabet.size(); ++j) {
        transition.at(i, j) = row.at(static_cast<std::size_t>(j)).get<double>();
        sum += transition.at(i, j);
      }
      if (std::abs(sum - 1.0) > 1e-12)
        fail("transition row " + std::to_string(i) + " sums to " + std::to_string(sum));
    }
    try {
      return {alphabet, std::move(mu),
              OffspringKernel::factored(alphabet, std::move(counts), std::move(transition))};
    } catch (const std::exception& e) {
      fail(e.what());
    }
  }

  if (form == "explicit") {
    const json& laws_json = require(kernel_json, "laws", "kernel");
    std::vector<ExplicitLaw> laws(static_cast<std::size_t>(alphabet.size()));
    for (const auto& [label, atoms] : laws_json.items()) {
      if (!alphabet.contains(label)) fail("laws has unknown label '" + label + "'");
      const TypeId a = alphabet.index_of(label);
      if (!atoms.is_array()) fail("law for '" + label + "' must be an array");
      for (const json& atom : atoms) {
        const json& children_json = require(atom, "children", "law atom");
        std::vector<TypeId> children;
        for (const json& c : children_json) {
          const std::string child_label = c.get<std::string>();
          if (!alphabet.contains(child_label))
            fail("law for '" + label + "' has unknown child label '" + child_label + "'");
          children.push_back(alphabet.index_of(child_label));
        }
        laws[static_cast<std::size_t>(a)].atoms.emplace_back(
            OffspringConfig(std::move(children)), require(atom, "p", "law atom").get<double>());
      }
    }
    for (TypeId a = 0; a < alphabet.size(); ++a) {
      if (laws[static_cast<std::size_t>(a)].atoms.empty())
        fail("no law given for type '" + alphabet.symbol(a) + "'");
    }
    try {
      return {alphabet, std::move(mu), OffspringKernel::explicit_kernel(alphabet, std::move(laws))};
    } catch (const std::exception& e) {
      fail(e.what());
    }
  }

  fail("kernel.form must be 'explicit' or 'factored'; got '" + form + "'");
}

KernelSpec load_kernel_spec(const std::string& path) {
  return parse_kernel_spec(read_file(path));
}

CountLaw parse_count_law(const std::string& spec) {
  const std::size_t colon = spec.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("count law spec must look like geometric:0.5, poisson:1.0 or "
                                "table:p0,p1,...; got '" + spec + "'");
  const std::string kind = spec.substr(0, colon);
  const std::string args = spec.substr(colon + 1);
  if (kind == "geometric") return CountLaw::geometric(parse_double(args));
  if (kind == "poisson") return CountLaw::poisson(parse_double(args));
  if (kind == "table") {
    std::vector<double> p;
    for (std::string_view field : split(args, ',')) p.push_back(parse_double(field));
    return CountLaw::table(std::move(p));
  }
  throw std::invalid_argument("unknown count law family '" + kind + "'");
}

}  // namespace gwldp
