#pragma once

#include <json.hpp>

#include "toric/adelic.hpp"
#include "toric/fan.hpp"

namespace toric::io {

using Json = nlohmann::ordered_json;

// Schema violation at a JSON pointer such as "/places/0/roof".
class SchemaError : public Error {
 public:
  SchemaError(const std::string& path, const std::string& what)
      : Error(ErrorKind::invalid_input, (path.empty() ? "/" : path) + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// Text to JSON; syntax errors carry line and column.
Json parse_text(const std::string& text, const std::string& source = "<input>");
Json read_file(const std::string& path);
// Two-space indentation plus a trailing newline.
std::string dump(const Json& j);

// Rationals are strings "p/q" or "n"; JSON numbers are refused.
Q rational_from(const Json& j, const std::string& path);
Json to_json(const Q& q);
QVec vec_from(const Json& j, const std::string& path, int dim = -1);
Json to_json(const QVec& v);

ConvexBody body_from(const Json& j, const std::string& path, int dim = -1);
Json to_json(const ConvexBody& b);

// PA data whose points lie strictly below their own envelope is refused.
Roof roof_from(const Json& j, const std::string& path, int dim);
Json to_json(const Roof& r);

PAConcave pieces_from(const Json& j, const std::string& path, int dim);
Json to_json(const PAConcave& f);
PADiff padiff_from(const Json& j, const std::string& path, int dim);
Json to_json(const PADiff& f);

FamilyDescriptor family_from(const Json& j, const std::string& path, int dim);
Json to_json(const FamilyDescriptor& f);

AdelicDivisor divisor_from(const Json& j);
Json to_json(const AdelicDivisor& D);

// Either explicit gammas or {"standard_boundary": {"dim": d, "S": [...]}}.
ModelDivisor model_from(const Json& j);
Json to_json(const ModelDivisor& M);
bool is_model_divisor(const Json& j);

Fan fan_from(const Json& j, const std::string& path);
Json to_json(const Fan& f);

}  // namespace toric::io
