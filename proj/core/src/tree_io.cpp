#include "mrz/tree_io.hpp"

#include <json.hpp>

namespace mrz {

namespace {

using nlohmann::json;

json parse_document(const std::string& text) {
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw std::runtime_error("empty document");
  }
  return json::parse(text);  // raises json::parse_error on malformed input
}

}  // namespace

std::string tree_to_json(const FiltrationTree& tree) {
  json levels = json::array();
  for (const auto& level : tree.levels()) {
    json atoms = json::array();
    for (const Atom& a : level) atoms.push_back({{"p", a.prob}, {"parent", a.parent}});
    levels.push_back(std::move(atoms));
  }
  return json{{"levels", std::move(levels)}}.dump(2);
}

FiltrationTree tree_from_json(const std::string& text) {
  json doc = parse_document(text);
  if (!doc.is_object() || !doc.contains("levels") || !doc["levels"].is_array()) {
    throw std::runtime_error("tree document must be an object with a 'levels' array");
  }
  std::vector<std::vector<Atom>> levels;
  for (const json& level : doc["levels"]) {
    if (!level.is_array()) throw std::runtime_error("each level must be an array of atoms");
    std::vector<Atom> atoms;
    for (const json& a : level) {
      if (!a.is_object() || !a.contains("p") || !a.contains("parent") ||
          !a["p"].is_number() || !a["parent"].is_number_integer()) {
        throw std::runtime_error("each atom must be {\"p\": number, \"parent\": int}");
      }
      atoms.push_back(Atom{a["p"].get<double>(), a["parent"].get<int>()});
    }
    levels.push_back(std::move(atoms));
  }
  return FiltrationTree(std::move(levels));  // invariant validation happens here
}

std::string variable_to_json(const RandomVariable& f) {
  json values = json::array();
  for (double v : f.values()) values.push_back(v);
  return json{{"level", f.level()}, {"values", std::move(values)}}.dump(2);
}

RandomVariable variable_from_json(const std::string& text, const FiltrationTree& tree) {
  json doc = parse_document(text);
  if (!doc.is_object() || !doc.contains("level") || !doc.contains("values") ||
      !doc["level"].is_number_integer() || !doc["values"].is_array()) {
    throw std::runtime_error("variable document must be {\"level\": int, \"values\": [...]}");
  }
  std::vector<double> values;
  for (const json& v : doc["values"]) {
    if (!v.is_number()) throw std::runtime_error("variable values must be numbers");
    values.push_back(v.get<double>());
  }
  return RandomVariable(tree, doc["level"].get<int>(), std::move(values));
}

}  // namespace mrz
