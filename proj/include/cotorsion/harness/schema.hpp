#pragma once

// Validator for the draft-07 subset used by the report schema: type,
// properties, required, additionalProperties, items, enum, const, minimum,
// minItems and local $ref ("#/definitions/...").

#include <string>
#include <vector>

#include <json.hpp>

namespace cotorsion::harness {

class SchemaValidator {
 public:
  explicit SchemaValidator(nlohmann::json schema) : root_(std::move(schema)) {}

  /// Errors as "path: message"; empty when the document conforms.
  std::vector<std::string> validate(const nlohmann::json& doc) const {
    std::vector<std::string> errors;
    check(root_, doc, "$", errors, 0);
    return errors;
  }

 private:
  using json = nlohmann::json;

  const json& resolve(const std::string& ref) const {
    const std::string prefix = "#/";
    if (ref.rfind(prefix, 0) != 0) throw std::invalid_argument("unsupported $ref " + ref);
    return root_.at(json::json_pointer(ref.substr(1)));
  }

  static bool has_type(const json& v, const std::string& t) {
    if (t == "object") return v.is_object();
    if (t == "array") return v.is_array();
    if (t == "string") return v.is_string();
    if (t == "boolean") return v.is_boolean();
    if (t == "null") return v.is_null();
    if (t == "integer") return v.is_number_integer();
    if (t == "number") return v.is_number();
    throw std::invalid_argument("unsupported type " + t);
  }

  void check(const json& s, const json& v, const std::string& path, std::vector<std::string>& errors,
             int depth) const {
    if (depth > 64) throw std::invalid_argument("schema nesting too deep at " + path);
    if (s.is_boolean()) {
      if (!s.get<bool>()) errors.push_back(path + ": not allowed");
      return;
    }
    if (auto it = s.find("$ref"); it != s.end()) {
      check(resolve(it->get<std::string>()), v, path, errors, depth + 1);
      return;
    }
    if (auto it = s.find("type"); it != s.end()) {
      bool ok = false;
      if (it->is_array()) {
        for (const auto& t : *it) ok = ok || has_type(v, t.get<std::string>());
      } else {
        ok = has_type(v, it->get<std::string>());
      }
      if (!ok) {
        errors.push_back(path + ": expected type " + it->dump());
        return;
      }
    }
    if (auto it = s.find("const"); it != s.end() && v != *it) errors.push_back(path + ": expected " + it->dump());
    if (auto it = s.find("enum"); it != s.end()) {
      bool found = false;
      for (const auto& e : *it) found = found || e == v;
      if (!found) errors.push_back(path + ": not one of " + it->dump());
    }
    if (auto it = s.find("minimum"); it != s.end() && v.is_number() && v.get<double>() < it->get<double>())
      errors.push_back(path + ": below minimum " + it->dump());
    if (v.is_array()) {
      if (auto it = s.find("minItems"); it != s.end() && v.size() < it->get<std::size_t>())
        errors.push_back(path + ": fewer than " + it->dump() + " items");
      if (auto it = s.find("items"); it != s.end())
        for (std::size_t i = 0; i < v.size(); ++i) check(*it, v[i], path + "[" + std::to_string(i) + "]", errors, depth + 1);
    }
    if (v.is_object()) {
      if (auto it = s.find("required"); it != s.end())
        for (const auto& k : *it)
          if (!v.contains(k.get<std::string>())) errors.push_back(path + ": missing " + k.get<std::string>());
      const json* props = s.contains("properties") ? &s.at("properties") : nullptr;
      const json* extra = s.contains("additionalProperties") ? &s.at("additionalProperties") : nullptr;
      for (const auto& [k, sub] : v.items()) {
        const std::string p = path + "." + k;
        if (props && props->contains(k)) check(props->at(k), sub, p, errors, depth + 1);
        else if (extra) check(*extra, sub, p, errors, depth + 1);
      }
    }
  }

  json root_;
};

}  // namespace cotorsion::harness
