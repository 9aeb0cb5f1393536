#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <iostream>
#include <sstream>

#include "toric/examples.hpp"
#include "toric/height.hpp"
#include "toric/io.hpp"

using namespace toric;
using io::Json;

namespace {

constexpr int kOk = 0, kMinusInfinity = 1, kInputError = 2, kBudget = 3;

struct Options {
  std::optional<double> tol;
  bool exact_only = false;
  std::uint64_t seed = 1;
  bool json = false;
};

HeightOptions height_options(const Options& o) {
  HeightOptions h;
  if (o.tol) {
    h.integration.rel_tol = *o.tol;
    h.integration.abs_tol = std::min(h.integration.abs_tol, *o.tol * 1e-3);
  }
  h.integration.seed = o.seed;
  h.exact_only = o.exact_only;
  return h;
}

// Every number is tagged: exact | numeric (with the tolerance) | certified | heuristic.
Json value_json(const HeightValue& h, const IntegrationConfig& cfg, bool certified = false) {
  Json j;
  switch (h.kind) {
    case HeightValue::Kind::exact:
      j["value"] = to_string(h.exact);
      j["decimal"] = h.exact.get_d();
      j["provenance"] = "exact";
      break;
    case HeightValue::Kind::approx:
      j["value"] = h.value;
      j["abs_error"] = h.abs_error;
      j["provenance"] = h.heuristic ? "heuristic" : certified ? "certified" : "numeric";
      break;
    case HeightValue::Kind::minus_infinity:
      j["value"] = "-inf";
      j["provenance"] = h.heuristic ? "heuristic" : "numeric";
      break;
  }
  if (j["provenance"] != "exact") j["tol"] = {{"rel", cfg.rel_tol}, {"abs", cfg.abs_tol}};
  Json flags = Json::array();
  if (h.lower_bound_only) flags.push_back("lower_bound_only");
  if (h.budget_exceeded) flags.push_back("budget_exceeded");
  if (!flags.empty()) j["flags"] = flags;
  if (!h.trace.empty()) j["trace"] = h.trace;
  return j;
}

Json report_json(const HeightReport& r, const IntegrationConfig& cfg) {
  Json j;
  j["result"] = value_json(r.value, cfg, r.series.certified);
  Json places = Json::array();
  for (const auto& t : r.places)
    places.push_back({{"label", t.label}, {"weight", to_string(t.weight)}, {"term", value_json(t.value, cfg)}});
  j["places"] = places;
  if (r.series.present) {
    Json s = {{"first", r.series.first}, {"last", r.series.last}, {"certified", r.series.certified},
              {"note", r.series.note}};
    if (r.series.tail) s["tail_bound"] = {{"value", to_string(*r.series.tail)}, {"provenance", "exact"}};
    j["series"] = s;
  }
  return j;
}

int exit_code(const HeightValue& h) {
  if (h.budget_exceeded) return kBudget;
  if (h.is_minus_infinity()) return kMinusInfinity;
  return kOk;
}

std::string value_text(const Json& v) {
  std::ostringstream os;
  os.precision(12);
  const Json& x = v.at("value");
  if (x.is_string()) {
    os << x.get<std::string>();
  } else if (x.is_boolean()) {
    os << (x.get<bool>() ? "true" : "false");
  } else {
    os << x.get<double>();
  }
  if (v.contains("abs_error")) os << " +- " << v["abs_error"].get<double>();
  os << " [" << v["provenance"].get<std::string>();
  if (v.contains("tol")) os << ", rel " << v["tol"]["rel"].get<double>() << ", abs " << v["tol"]["abs"].get<double>();
  os << "]";
  if (v.contains("flags"))
    for (const auto& f : v["flags"]) os << " {" << f.get<std::string>() << "}";
  return os.str();
}

// Human rendering walks the same JSON object, so both carry the same fields.
void render_text(const Json& j, std::ostream& out, const std::string& indent = "") {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const Json& v = it.value();
    if (v.is_object() && v.contains("provenance") && v.contains("value")) {
      out << indent << it.key() << ": " << value_text(v) << "\n";
      if (v.contains("trace"))
        for (const auto& t : v["trace"]) out << indent << "  | " << t.get<std::string>() << "\n";
    } else if (v.is_object()) {
      out << indent << it.key() << ":\n";
      render_text(v, out, indent + "  ");
    } else if (v.is_array()) {
      out << indent << it.key() << ":\n";
      for (const auto& e : v) {
        if (e.is_object() && e.contains("label") && e.contains("term")) {
          out << indent << "  - " << e["label"].get<std::string>() << " (weight " << e["weight"].get<std::string>()
              << "): " << value_text(e["term"]) << "\n";
        } else if (e.is_object()) {
          out << indent << "  -\n";
          render_text(e, out, indent + "    ");
        } else {
          out << indent << "  - " << (e.is_string() ? e.get<std::string>() : e.dump()) << "\n";
        }
      }
    } else {
      out << indent << it.key() << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
    }
  }
}

void emit(Json report, const Options& o, const std::string& command, double seconds) {
  Json full;
  full["command"] = command;
  for (auto it = report.begin(); it != report.end(); ++it) full[it.key()] = it.value();
  full["timing_s"] = seconds;
  if (o.json) {
    std::cout << full.dump(2) << "\n";
  } else {
    render_text(full, std::cout);
  }
}

Json verdicts_json(const SemipositiveReport& r) {
  Json a = Json::array();
  for (const auto& v : r.verdicts)
    a.push_back({{"condition", v.condition}, {"pass", v.pass}, {"provenance", v.exact ? "exact" : "sampled"},
                 {"detail", v.detail}});
  return a;
}

Json nef_json(const NefVerdict& n) {
  Json j = {{"verdict", to_string(n.kind)}, {"provenance", n.exact ? "exact" : "sampled"}, {"detail", n.detail}};
  if (n.witness) {
    j["witness"] = *n.witness;
    j["witness_value"] = {{"value", n.witness_value}, {"provenance", n.exact ? "exact" : "sampled"}};
  }
  return j;
}

const std::vector<Q> kEpsSchedule = {frac(1, 2), frac(1, 10), frac(1, 100)};

int cmd_check(const std::string& file, Json& out) {
  Json j = io::read_file(file);
  if (io::is_model_divisor(j)) {
    ModelDivisor M = io::model_from(j);
    std::vector<std::string> S;
    for (const auto& [p, g] : M.gammas)
      if (!p.is_infinite()) S.push_back(p.label);
    Json items = Json::array();
    bool ok = true;
    for (const auto& c : check_boundary_divisor(M, S)) {
      items.push_back({{"check", c.name}, {"pass", c.pass}, {"provenance", "exact"}, {"detail", c.detail}});
      ok = ok && c.pass;
    }
    out["boundary_divisor"] = items;
    return ok ? kOk : kInputError;
  }
  AdelicDivisor D = io::divisor_from(j);
  SemipositiveReport sp = check_semipositive(D, kEpsSchedule);
  out["semipositive"] = {{"pass", sp.ok()}, {"verdicts", verdicts_json(sp)}};
  if (!sp.ok()) return kInputError;
  out["nef"] = nef_json(check_nef(D));
  return kOk;
}

int cmd_height(const std::string& file, const Options& o, Json& out) {
  AdelicDivisor D = io::divisor_from(io::read_file(file));
  HeightOptions h = height_options(o);
  HeightReport r = self_intersection(D, h);
  out = report_json(r, h.integration);
  return exit_code(r.value);
}

int cmd_mixed(const std::vector<std::string>& files, const Options& o, Json& out) {
  std::vector<AdelicDivisor> divs;
  for (const auto& f : files) divs.push_back(io::divisor_from(io::read_file(f)));
  HeightOptions h = height_options(o);
  HeightReport r = mixed_intersection(divs, h);
  out = report_json(r, h.integration);
  return exit_code(r.value);
}

int dim_of(const Json& j) {
  if (!j.contains("dim") || !j["dim"].is_number_integer()) throw io::SchemaError("/dim", "expected an integer");
  return j["dim"].get<int>();
}

int cmd_lf(const std::string& file, bool inverse, Json& out) {
  Json j = io::read_file(file);
  const int d = dim_of(j);
  if (inverse) {
    Roof r = io::roof_from(j.at("roof"), "/roof", d);
    PAConcave f = lf_transform_inv(r);
    out["pieces"] = io::to_json(f);
  } else {
    PAConcave f = io::pieces_from(j.at("pieces"), "/pieces", d);
    Roof r = lf_transform(f);
    out["roof"] = io::to_json(r);
    out["domain"] = io::to_json(r.domain());
  }
  return kOk;
}

int cmd_supconv(const std::string& a, const std::string& b, Json& out) {
  Json ja = io::read_file(a), jb = io::read_file(b);
  const int d = dim_of(ja);
  if (dim_of(jb) != d) throw Error(ErrorKind::dimension_mismatch, "supconv: dimensions differ");
  Roof r = sup_convolution(io::roof_from(ja.at("roof"), "/roof", d), io::roof_from(jb.at("roof"), "/roof", d));
  out["roof"] = io::to_json(r);
  out["domain"] = io::to_json(r.domain());
  return kOk;
}

int cmd_norm(const std::string& file, const std::string& boundary, Json& out) {
  ModelDivisor D = io::model_from(io::read_file(file));
  ModelDivisor B = boundary.empty() ? standard_boundary_divisor(D.dim).green : io::model_from(io::read_file(boundary));
  std::vector<std::string> S;
  for (const auto& [p, g] : B.gammas)
    if (!p.is_infinite()) S.push_back(p.label);
  for (const auto& c : check_boundary_divisor(B, S))
    if (!c.pass) throw Error(ErrorKind::invalid_input, "boundary data fails '" + c.name + "': " + c.detail);
  auto n = boundary_norm(D, B);
  out["norm"] = {{"value", n ? to_string(*n) : "+inf"}, {"provenance", "exact"}};
  return kOk;
}

int cmd_fan(const std::string& sub, const std::vector<std::string>& files, Json& out) {
  auto need = [&](size_t k) {
    if (files.size() != k)
      throw Error(ErrorKind::invalid_input, "fan " + sub + " takes " + std::to_string(k) + " file(s)");
  };
  if (sub == "refine") {
    if (files.size() == 1) {
      out["fan"] = io::to_json(smooth_refinement_2d(io::fan_from(io::read_file(files[0]), "")));
    } else {
      need(2);
      out["fan"] = io::to_json(common_refinement(io::fan_from(io::read_file(files[0]), ""),
                                                 io::fan_from(io::read_file(files[1]), "")));
    }
    return kOk;
  }
  if (sub == "check-smooth" || sub == "check-complete" || sub == "check-projective") {
    need(1);
    Fan f = io::fan_from(io::read_file(files[0]), "");
    bool v = sub == "check-smooth" ? is_smooth(f) : sub == "check-complete" ? is_complete(f) : is_projective(f);
    out[sub.substr(6)] = {{"value", v}, {"provenance", "exact"}};
    return kOk;
  }
  if (sub == "normal-fan") {
    need(1);
    ConvexBody b = io::body_from(io::read_file(files[0]), "", -1);
    if (!b.is_polytope()) throw Error(ErrorKind::invalid_input, "normal-fan needs a polytope");
    out["fan"] = io::to_json(normal_fan(b.polytope()));
    return kOk;
  }
  if (sub == "divisor") {
    need(1);
    Json j = io::read_file(files[0]);
    Fan f = io::fan_from(j.at("fan"), "/fan");
    std::map<QVec, Q> values;
    const Json& h = j.at("horizontal");
    for (size_t i = 0; i < h.size(); ++i) {
      const std::string p = "/horizontal/" + std::to_string(i);
      values[io::vec_from(h[i].at("ray"), p + "/ray", f.ambient())] = io::rational_from(h[i].at("a"), p + "/a");
    }
    ToricDivisorData data{values, {}};
    SupportFunction s = support_from_divisor(f, data);
    out["nef"] = {{"value", is_relatively_nef(s)}, {"provenance", "exact"}};
    out["ample"] = {{"value", is_ample(s)}, {"provenance", "exact"}};
    out["effective"] = {{"value", is_effective(s)}, {"provenance", "exact"}};
    if (is_relatively_nef(s)) {
      PAConcave psi = to_pa(s);
      out["psi"] = io::to_json(psi);
      out["polytope"] = io::to_json(ConvexBody(stability_set(psi)));
    }
    return kOk;
  }
  throw Error(ErrorKind::invalid_input, "unknown fan subcommand '" + sub + "'");
}

std::vector<AdelicDivisor> example_divisors(const std::string& name, const Q& alpha) {
  if (name == "ex1") return {examples::ramp()};
  if (name == "ex2") return {examples::power(alpha)};
  if (name == "ex3") return {examples::power_family(alpha)};
  if (name == "ex4") return {examples::radial_family(alpha)};
  if (name == "ex5") return {examples::triangle_pole(), examples::segment()};
  throw Error(ErrorKind::invalid_input, "unknown example '" + name + "' (ex1..ex5)");
}

int cmd_example(const std::string& name, const std::string& alpha_text, bool emit_only, const Options& o,
                Json& out) {
  const Q alpha = io::rational_from(Json(alpha_text), "--alpha");
  std::vector<AdelicDivisor> divs = example_divisors(name, alpha);
  if (emit_only) {
    if (divs.size() == 1) {
      out = io::to_json(divs[0]);
    } else {
      out = Json::array();
      for (const auto& D : divs) out.push_back(io::to_json(D));
    }
    return kOk;
  }
  HeightOptions h = height_options(o);
  if (name != "ex5") {
    HeightReport r = self_intersection(divs[0], h);
    out = report_json(r, h.integration);
    return exit_code(r.value);
  }
  AdelicDivisor D3 = add(divs[0], divs[1]);
  int code = kOk;
  Json parts = Json::array();
  for (const auto& [label, D] : std::vector<std::pair<std::string, AdelicDivisor>>{
           {"D1^3", divs[0]}, {"D2^3", divs[1]}, {"(D1+D2)^3", D3}}) {
    HeightReport r = self_intersection(D, h);
    Json p = {{"name", label}};
    Json rep = report_json(r, h.integration);
    for (const auto& [k, v] : rep.items()) p[k] = v;
    parts.push_back(p);
    code = std::max(code, exit_code(r.value));
  }
  out["results"] = parts;
  return code;
}

int cmd_fmt(const std::string& file, Json& out) {
  Json j = io::read_file(file);
  out = io::is_model_divisor(j) ? io::to_json(io::model_from(j)) : io::to_json(io::divisor_from(j));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heights of toric adelic divisors over the rationals"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--tol", o.tol, "Relative tolerance for numeric integration")->check(CLI::PositiveNumber);
  app.add_flag("--exact-only", o.exact_only, "Refuse numeric integration");
  app.add_option("--seed", o.seed, "Seed for quasi-Monte-Carlo sampling");
  app.add_flag("--json", o.json, "Machine-readable report");

  std::string file, file2, boundary, example, alpha = "-1/2", fan_sub;
  std::vector<std::string> files;
  bool inverse = false, emit_only = false;

  auto* check = app.add_subcommand("check", "Semipositivity and nef checks");
  check->add_option("file", file)->required();
  auto* height = app.add_subcommand("height", "Arithmetic self-intersection");
  height->add_option("file", file)->required();
  auto* mixed = app.add_subcommand("mixed", "Mixed arithmetic intersection of d + 1 divisors");
  mixed->add_option("files", files)->required();
  auto* lf = app.add_subcommand("lf", "Legendre-Fenchel transform of PA data");
  lf->add_option("file", file)->required();
  lf->add_flag("--inverse", inverse, "Roof to PA function");
  auto* supconv = app.add_subcommand("supconv", "Sup-convolution of two roofs");
  supconv->add_option("first", file)->required();
  supconv->add_option("second", file2)->required();
  auto* norm = app.add_subcommand("norm", "Boundary norm of a model divisor");
  norm->add_option("file", file)->required();
  norm->add_option("--boundary", boundary, "Boundary divisor data (default: standard)");
  auto* fan = app.add_subcommand("fan", "Fan operations");
  fan->add_option("subcommand", fan_sub)
      ->required()
      ->check(CLI::IsMember({"refine", "check-smooth", "check-complete", "check-projective", "normal-fan", "divisor"}));
  fan->add_option("files", files);
  auto* ex = app.add_subcommand("example", "Built-in examples ex1..ex5");
  ex->add_option("name", example)->required()->check(CLI::IsMember({"ex1", "ex2", "ex3", "ex4", "ex5"}));
  ex->add_option("--alpha", alpha, "Exponent for ex2..ex4, as p/q");
  ex->add_flag("--emit", emit_only, "Print the divisor file instead of computing");
  auto* fmt = app.add_subcommand("fmt", "Print a divisor file in canonical form");
  fmt->add_option("file", file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }

  std::string command;
  for (int i = 1; i < argc; ++i) command += (i > 1 ? " " : "") + std::string(argv[i]);
  const auto t0 = std::chrono::steady_clock::now();
  Json out = Json::object();
  int code = kOk;
  try {
    if (*check) code = cmd_check(file, out);
    else if (*height) code = cmd_height(file, o, out);
    else if (*mixed) code = cmd_mixed(files, o, out);
    else if (*lf) code = cmd_lf(file, inverse, out);
    else if (*supconv) code = cmd_supconv(file, file2, out);
    else if (*norm) code = cmd_norm(file, boundary, out);
    else if (*fan) code = cmd_fan(fan_sub, files, out);
    else if (*ex) code = cmd_example(example, alpha, emit_only, o, out);
    else if (*fmt) code = cmd_fmt(file, out);
  } catch (const Error& e) {
    std::cerr << "error [" << error_kind_name(e.kind()) << "]: " << e.what() << "\n";
    return e.kind() == ErrorKind::budget_exceeded ? kBudget : kInputError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error [SchemaError]: " << e.what() << "\n";
    return kInputError;
  }
  if ((*fmt) || (*ex && emit_only)) {
    std::cout << io::dump(out);
    return code;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  emit(out, o, command, seconds);
  return code;
}
