#include "toric/io.hpp"

#include <fstream>
#include <regex>
#include <sstream>

namespace toric::io {

namespace {

std::string at(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string at(const std::string& path, size_t i) { return path + "/" + std::to_string(i); }

const Json& field(const Json& j, const std::string& path, const std::string& key) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(path, "missing field '" + key + "'");
  return *it;
}

const Json* optional_field(const Json& j, const std::string& key) {
  auto it = j.find(key);
  return it == j.end() || it->is_null() ? nullptr : &*it;
}

int int_from(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw SchemaError(path, "expected an integer");
  return j.get<int>();
}

bool bool_from(const Json& j, const std::string& path) {
  if (!j.is_boolean()) throw SchemaError(path, "expected true or false");
  return j.get<bool>();
}

std::string string_from(const Json& j, const std::string& path) {
  if (!j.is_string()) throw SchemaError(path, "expected a string");
  return j.get<std::string>();
}

const Json& array_from(const Json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected an array");
  return j;
}

// The single key of a tagged object such as {"pa": {...}}.
std::pair<std::string, const Json*> tag(const Json& j, const std::string& path) {
  if (!j.is_object() || j.size() != 1) throw SchemaError(path, "expected an object with exactly one key");
  return {j.begin().key(), &j.begin().value()};
}

std::vector<QVec> points_from(const Json& j, const std::string& path, int dim) {
  std::vector<QVec> out;
  const Json& a = array_from(j, path);
  for (size_t i = 0; i < a.size(); ++i) out.push_back(vec_from(a[i], at(path, i), dim));
  return out;
}

Json points_to_json(const std::vector<QVec>& pts) {
  Json a = Json::array();
  for (const auto& p : pts) a.push_back(to_json(p));
  return a;
}

Place place_from(const Json& j, const std::string& path) {
  std::string kind = string_from(field(j, path, "kind"), at(path, "kind"));
  std::string label = string_from(field(j, path, "label"), at(path, "label"));
  Q w = 1;
  if (const Json* wj = optional_field(j, "weight")) w = rational_from(*wj, at(path, "weight"));
  try {
    if (kind == "infinite") {
      static const std::regex re("inf([1-9][0-9]*)?");
      std::smatch m;
      if (!std::regex_match(label, m, re)) throw SchemaError(at(path, "label"), "infinite places are labelled inf, inf1, ...");
      return Place::infinite(m[1].matched ? std::stoi(m[1].str()) : 0, w);
    }
    if (kind == "finite") return Place::finite(label, w);
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    throw SchemaError(path, e.what());
  }
  throw SchemaError(at(path, "kind"), "expected 'infinite' or 'finite'");
}

Json place_json(const Place& p) {
  Json j;
  j["kind"] = p.is_infinite() ? "infinite" : "finite";
  j["label"] = p.label;
  j["weight"] = to_json(p.weight);
  return j;
}

// Wraps library errors raised while building an object at `path`.
template <class F>
auto guarded(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    throw SchemaError(path, e.what());
  }
}

}  // namespace

Json parse_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    size_t line = 1, col = 1;
    for (size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorKind::syntax, source + ":" + std::to_string(line) + ":" + std::to_string(col) +
                                       ": invalid JSON");
  }
}

Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::invalid_input, "cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str(), path);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Q rational_from(const Json& j, const std::string& path) {
  static const std::regex re("[+-]?[0-9]+(/[0-9]+)?");
  if (!j.is_string()) throw SchemaError(path, "rationals must be strings \"p/q\"");
  const std::string s = j.get<std::string>();
  if (!std::regex_match(s, re)) throw SchemaError(path, "'" + s + "' is not a rational \"p/q\"");
  return guarded(path, [&] { return parse_rational(s); });
}

Json to_json(const Q& q) { return to_string(q); }

QVec vec_from(const Json& j, const std::string& path, int dim) {
  const Json& a = array_from(j, path);
  if (dim >= 0 && static_cast<int>(a.size()) != dim)
    throw SchemaError(path, "expected " + std::to_string(dim) + " coordinates");
  QVec v;
  for (size_t i = 0; i < a.size(); ++i) v.push_back(rational_from(a[i], at(path, i)));
  return v;
}

Json to_json(const QVec& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}

ConvexBody body_from(const Json& j, const std::string& path, int dim) {
  auto [key, val] = tag(j, path);
  const std::string p = at(path, key);
  if (key == "polytope") {
    auto pts = points_from(*val, p, dim);
    if (pts.empty()) throw SchemaError(p, "a polytope needs at least one point");
    const int d = dim >= 0 ? dim : static_cast<int>(pts[0].size());
    return guarded(p, [&] { return ConvexBody(Polytope(d, pts)); });
  }
  if (key == "ball") {
    QVec c = vec_from(field(*val, p, "center"), at(p, "center"), dim);
    Q r = rational_from(field(*val, p, "radius"), at(p, "radius"));
    if (r < 0) throw SchemaError(at(p, "radius"), "radius must be nonnegative");
    return ConvexBody(Ball{c, r});
  }
  throw SchemaError(path, "unknown body '" + key + "' (expected polytope or ball)");
}

Json to_json(const ConvexBody& b) {
  Json j;
  if (b.is_polytope()) {
    j["polytope"] = points_to_json(b.polytope().vertices());
  } else if (b.is_ball()) {
    j["ball"] = {{"center", to_json(b.ball().center)}, {"radius", to_json(b.ball().radius)}};
  } else {
    throw Error(ErrorKind::unsupported_combination, "oracle bodies have no file representation");
  }
  return j;
}

Roof roof_from(const Json& j, const std::string& path, int dim) {
  auto [key, val] = tag(j, path);
  const std::string p = at(path, key);
  if (key == "pa") {
    auto pts = points_from(field(*val, p, "points"), at(p, "points"), dim);
    QVec vals = vec_from(field(*val, p, "values"), at(p, "values"));
    if (pts.size() != vals.size()) throw SchemaError(p, "points and values differ in length");
    if (pts.empty()) throw SchemaError(p, "a PA roof needs at least one point");
    Roof r = guarded(p, [&] { return Roof::pa(dim, pts, vals); });
    for (size_t i = 0; i < pts.size(); ++i)
      if (*r.eval_exact(pts[i]) != vals[i])
        throw SchemaError(at(at(p, "values"), i), "value " + to_string(vals[i]) +
                                                      " lies below the concave envelope (non-concave data)");
    return r;
  }
  if (key == "indicator") return Roof::indicator(body_from(*val, p, dim));
  if (key == "analytic") {
    std::string src = string_from(field(*val, p, "expr"), at(p, "expr"));
    ConvexBody body = body_from(field(*val, p, "domain"), at(p, "domain"), dim);
    bool singular = false;
    if (const Json* s = optional_field(*val, "singular")) singular = bool_from(*s, at(p, "singular"));
    return guarded(at(p, "expr"), [&] { return Roof::analytic(parse_roof_expression(src, dim), body, singular); });
  }
  if (key == "shift" || key == "scale") {
    Roof inner = roof_from(field(*val, p, "roof"), at(p, "roof"), dim);
    Q by = rational_from(field(*val, p, "by"), at(p, "by"));
    return guarded(p, [&] { return key == "shift" ? add_constant(inner, by) : scale(inner, by); });
  }
  if (key == "restrict") {
    Roof inner = roof_from(field(*val, p, "roof"), at(p, "roof"), dim);
    ConvexBody body = body_from(field(*val, p, "domain"), at(p, "domain"), dim);
    return guarded(p, [&] { return restrict(inner, body); });
  }
  if (key == "supconv") {
    const Json& a = array_from(*val, p);
    if (a.size() != 2) throw SchemaError(p, "supconv takes two roofs");
    Roof f = roof_from(a[0], at(p, 0), dim), g = roof_from(a[1], at(p, 1), dim);
    return guarded(p, [&] { return sup_convolution(f, g); });
  }
  throw SchemaError(path, "unknown roof kind '" + key + "'");
}

Json to_json(const Roof& r) {
  Json j;
  switch (r.kind()) {
    case Roof::Kind::pa:
      j["pa"] = {{"points", points_to_json(r.points())}, {"values", to_json(r.values())}};
      break;
    case Roof::Kind::indicator: j["indicator"] = to_json(r.body()); break;
    case Roof::Kind::analytic: {
      Json a = {{"expr", r.expr().source()}, {"domain", to_json(r.body())}};
      if (r.singular_boundary()) a["singular"] = true;
      j["analytic"] = a;
      break;
    }
    case Roof::Kind::shift: j["shift"] = {{"roof", to_json(r.inner())}, {"by", to_json(r.param())}}; break;
    case Roof::Kind::scale: j["scale"] = {{"roof", to_json(r.inner())}, {"by", to_json(r.param())}}; break;
    case Roof::Kind::restrict: j["restrict"] = {{"roof", to_json(r.inner())}, {"domain", to_json(r.body())}}; break;
    case Roof::Kind::supconv: j["supconv"] = Json::array({to_json(r.inner()), to_json(r.other())}); break;
  }
  return j;
}

PAConcave pieces_from(const Json& j, const std::string& path, int dim) {
  const Json& a = array_from(j, path);
  if (a.empty()) throw SchemaError(path, "a PA function needs at least one piece");
  std::vector<Piece> pieces;
  for (size_t i = 0; i < a.size(); ++i) {
    const std::string p = at(path, i);
    pieces.push_back({vec_from(field(a[i], p, "m"), at(p, "m"), dim), rational_from(field(a[i], p, "c"), at(p, "c"))});
  }
  return guarded(path, [&] { return PAConcave(dim, pieces); });
}

Json to_json(const PAConcave& f) {
  Json a = Json::array();
  for (const auto& pc : f.pieces()) a.push_back({{"m", to_json(pc.m)}, {"c", to_json(pc.c)}});
  return a;
}

PADiff padiff_from(const Json& j, const std::string& path, int dim) {
  if (j.is_array()) return PADiff::of(pieces_from(j, path, dim));
  return {pieces_from(field(j, path, "pos"), at(path, "pos"), dim),
          pieces_from(field(j, path, "neg"), at(path, "neg"), dim)};
}

Json to_json(const PADiff& f) {
  if (f.neg == PAConcave::zero(f.dim())) return to_json(f.pos);
  return {{"pos", to_json(f.pos)}, {"neg", to_json(f.neg)}};
}

FamilyDescriptor family_from(const Json& j, const std::string& path, int dim) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  int start = 1;
  if (const Json* s = optional_field(j, "start")) start = int_from(*s, at(path, "start"));
  FamilyDescriptor F = FamilyDescriptor::simplex_ramp();
  if (const Json* b = optional_field(j, "builtin")) {
    std::string name = string_from(*b, at(path, "builtin"));
    F = guarded(path, [&] {
      if (name == "simplex_ramp") return FamilyDescriptor::simplex_ramp(start);
      Q alpha = rational_from(field(j, path, "alpha"), at(path, "alpha"));
      if (name == "power_cusp") return FamilyDescriptor::power_cusp(alpha, start);
      if (name == "radial_power_cusp") return FamilyDescriptor::radial_power_cusp(alpha, start);
      throw SchemaError(at(path, "builtin"), "unknown family '" + name + "'");
    });
  } else {
    std::string templ = string_from(field(j, path, "expression"), at(path, "expression"));
    ConvexBody body = body_from(field(j, path, "body"), at(path, "body"), dim);
    bool singular = false;
    if (const Json* s = optional_field(j, "singular")) singular = bool_from(*s, at(path, "singular"));
    std::optional<Q> factor;
    if (const Json* f = optional_field(j, "vanishing_factor")) factor = rational_from(*f, at(path, "vanishing_factor"));
    std::optional<GeometricBound> bound;
    if (const Json* t = optional_field(j, "tail_bound")) {
      const std::string p = at(path, "tail_bound");
      bound = GeometricBound{rational_from(field(*t, p, "constant"), at(p, "constant")),
                             rational_from(field(*t, p, "ratio"), at(p, "ratio"))};
    }
    F = guarded(path, [&] { return FamilyDescriptor::expression(templ, body, singular, factor, bound, start); });
  }
  if (F.dim() != dim) throw SchemaError(path, "family dimension differs from the divisor's");
  if (const Json* i = optional_field(j, "infinite_index")) F.set_infinite_index(int_from(*i, at(path, "infinite_index")));
  if (const Json* w = optional_field(j, "weight")) {
    Q wt = rational_from(*w, at(path, "weight"));
    if (wt <= 0 || wt > 1) throw SchemaError(at(path, "weight"), "place weight must lie in (0, 1]");
    F.set_weight(wt);
  }
  return F;
}

Json to_json(const FamilyDescriptor& F) {
  if (!F.serializable()) throw Error(ErrorKind::unsupported_combination, "derived families have no file representation");
  Json j;
  switch (F.kind()) {
    case FamilyDescriptor::Kind::simplex_ramp: j["builtin"] = "simplex_ramp"; break;
    case FamilyDescriptor::Kind::power_cusp:
      j["builtin"] = "power_cusp";
      j["alpha"] = to_json(F.alpha());
      break;
    case FamilyDescriptor::Kind::radial_power_cusp:
      j["builtin"] = "radial_power_cusp";
      j["alpha"] = to_json(F.alpha());
      break;
    default:
      j["expression"] = F.templ();
      j["body"] = to_json(F.body());
      if (F.singular_boundary()) j["singular"] = true;
      if (F.vanishing_factor()) j["vanishing_factor"] = to_json(*F.vanishing_factor());
      if (F.bound()) j["tail_bound"] = {{"constant", to_json(F.bound()->constant)}, {"ratio", to_json(F.bound()->ratio)}};
      break;
  }
  j["start"] = F.start();
  if (F.infinite_index()) j["infinite_index"] = *F.infinite_index();
  if (F.weight() != 1) j["weight"] = to_json(F.weight());
  return j;
}

AdelicDivisor divisor_from(const Json& j) {
  const int dim = int_from(field(j, "", "dim"), "/dim");
  if (dim < 1) throw SchemaError("/dim", "dimension must be positive");
  AdelicDivisor D = AdelicDivisor::canonical(body_from(field(j, "", "domain"), "/domain", dim));
  if (const Json* s = optional_field(j, "S")) {
    const Json& a = array_from(*s, "/S");
    for (size_t i = 0; i < a.size(); ++i) D.S.push_back(string_from(a[i], at("/S", i)));
  }
  if (const Json* d = optional_field(j, "default_roof")) D.default_roof = roof_from(*d, "/default_roof", dim);
  if (const Json* ps = optional_field(j, "places")) {
    const Json& a = array_from(*ps, "/places");
    for (size_t i = 0; i < a.size(); ++i) {
      const std::string p = at("/places", i);
      Place pl = place_from(a[i], p);
      if (D.find(pl.label)) throw SchemaError(at(p, "label"), "duplicate place '" + pl.label + "'");
      D.set(pl, roof_from(field(a[i], p, "roof"), at(p, "roof"), dim));
    }
  }
  if (const Json* f = optional_field(j, "family")) D.family = family_from(*f, "/family", dim);
  guarded("", [&] {
    D.validate();
    return 0;
  });
  return D;
}

Json to_json(const AdelicDivisor& D) {
  Json j;
  j["dim"] = D.dim;
  j["domain"] = to_json(D.domain);
  if (!D.S.empty()) j["S"] = D.S;
  Json places = Json::array();
  for (const auto& pr : D.places) {
    Json p = place_json(pr.place);
    p["roof"] = to_json(pr.roof);
    places.push_back(p);
  }
  j["places"] = places;
  if (!(D.default_roof.kind() == Roof::Kind::indicator && D.default_roof.body() == D.domain))
    j["default_roof"] = to_json(D.default_roof);
  if (D.family) j["family"] = to_json(*D.family);
  return j;
}

bool is_model_divisor(const Json& j) {
  return j.is_object() && (j.contains("gammas") || j.contains("fallback") || j.contains("standard_boundary"));
}

ModelDivisor model_from(const Json& j) {
  if (const Json* sb = optional_field(j, "standard_boundary")) {
    const int d = int_from(field(*sb, "/standard_boundary", "dim"), "/standard_boundary/dim");
    std::vector<std::string> S;
    if (const Json* s = optional_field(*sb, "S")) {
      const Json& a = array_from(*s, "/standard_boundary/S");
      for (size_t i = 0; i < a.size(); ++i) S.push_back(string_from(a[i], at("/standard_boundary/S", i)));
    }
    return guarded("/standard_boundary", [&] { return standard_boundary_divisor(d, S).green; });
  }
  ModelDivisor M;
  M.dim = int_from(field(j, "", "dim"), "/dim");
  if (M.dim < 1) throw SchemaError("/dim", "dimension must be positive");
  M.fallback = padiff_from(field(j, "", "fallback"), "/fallback", M.dim);
  if (const Json* g = optional_field(j, "gammas")) {
    const Json& a = array_from(*g, "/gammas");
    for (size_t i = 0; i < a.size(); ++i) {
      const std::string p = at("/gammas", i);
      M.gammas.emplace_back(place_from(a[i], p), padiff_from(field(a[i], p, "gamma"), at(p, "gamma"), M.dim));
    }
  }
  return M;
}

Json to_json(const ModelDivisor& M) {
  Json j;
  j["dim"] = M.dim;
  Json g = Json::array();
  for (const auto& [pl, f] : M.gammas) {
    Json p = place_json(pl);
    p["gamma"] = to_json(f);
    g.push_back(p);
  }
  j["gammas"] = g;
  j["fallback"] = to_json(M.fallback);
  return j;
}

Fan fan_from(const Json& j, const std::string& path) {
  const int dim = int_from(field(j, path, "dim"), at(path, "dim"));
  const Json& cones = array_from(field(j, path, "cones"), at(path, "cones"));
  std::vector<std::vector<QVec>> rays;
  for (size_t i = 0; i < cones.size(); ++i) rays.push_back(points_from(cones[i], at(at(path, "cones"), i), dim));
  return guarded(path, [&] { return Fan::from_rays(dim, rays); });
}

Json to_json(const Fan& f) {
  Json cones = Json::array();
  for (const auto& c : f.cones()) cones.push_back(points_to_json(c.rays()));
  return {{"dim", f.ambient()}, {"cones", cones}};
}

}  // namespace toric::io
