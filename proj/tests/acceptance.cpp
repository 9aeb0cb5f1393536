// Acceptance run: one PASS/FAIL line per criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include "properties.hpp"
#include "toric/examples.hpp"
#include "toric/height.hpp"

using namespace toric;

namespace {

constexpr double kEx1AbsTol = 1e-9;
constexpr double kEx1Seconds = 1;
constexpr double kEx2RelTolHalf = 1e-3;
constexpr double kEx2RelTolNineTenths = 1e-2;
constexpr double kEx2Seconds = 10;
constexpr double kEx3RelTol = 1e-2;
constexpr double kEx3Seconds = 30;
constexpr double kEx4RelTol = 1e-2;
constexpr double kEx4Seconds = 120;
constexpr double kEx5AbsTol = 1e-2;
constexpr int kBoundarySamples = 100;
constexpr double kPropertySeconds = 300;

struct Timed {
  HeightReport report;
  double seconds;
};

Timed timed(const std::function<HeightReport()>& f) {
  auto t0 = std::chrono::steady_clock::now();
  HeightReport r = f();
  return {r, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()};
}

bool rel_close(double got, double want, double tol) { return std::fabs(got - want) <= tol * std::fabs(want); }

int failures = 0;

void line(int id, bool pass, const std::string& what) {
  std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", id, what.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

void criterion1() {
  Timed t = timed([] { return self_intersection(examples::ramp()); });
  const HeightValue& v = t.report.value;
  const double err = std::fabs(v.value - 5.0 / 3.0);
  bool ok = !v.is_minus_infinity() && t.report.series.certified && !v.heuristic && v.abs_error <= kEx1AbsTol &&
            err <= kEx1AbsTol && t.seconds < kEx1Seconds;
  line(1, ok,
       "ex1 = " + fmt(v.value) + " +- " + fmt(v.abs_error) + " (5/3, certified " +
           (t.report.series.certified ? "yes" : "no") + ", " + fmt(t.seconds) + " s)");
}

void criterion2() {
  bool ok = true;
  std::string detail;
  for (auto [a, want, tol] : {std::tuple{frac(-1, 2), -2.0, kEx2RelTolHalf}, std::tuple{frac(-9, 10), -18.0, kEx2RelTolNineTenths}}) {
    Timed t = timed([&] { return self_intersection(examples::power(a)); });
    const HeightValue& v = t.report.value;
    bool good = !v.is_minus_infinity() && rel_close(v.value, want, tol) && t.seconds < kEx2Seconds;
    ok = ok && good;
    detail += "alpha " + to_string(a) + ": " + fmt(v.value) + " (" + fmt(t.seconds) + " s); ";
  }
  for (const Q& a : {Q(-1), frac(-3, 2)}) {
    Timed t = timed([&] { return self_intersection(examples::power(a)); });
    bool good = t.report.value.is_minus_infinity() && t.seconds < kEx2Seconds;
    ok = ok && good;
    detail += "alpha " + to_string(a) + ": " + (good ? "-inf" : to_string(t.report.value)) + " (" + fmt(t.seconds) + " s); ";
  }
  line(2, ok, "ex2 " + detail);
}

void criterion3() {
  Timed t = timed([] { return self_intersection(examples::power_family(frac(-1, 2))); });
  const HeightValue& v = t.report.value;
  bool ok = !v.is_minus_infinity() && rel_close(v.value, -4.0, kEx3RelTol) && t.report.series.certified &&
            t.seconds < kEx3Seconds;
  line(3, ok, "ex3 alpha -1/2 = " + fmt(v.value) + " (target -4, certified tail " +
                  (t.report.series.certified ? "yes" : "no") + ", " + fmt(t.seconds) + " s)");
}

void criterion4() {
  Timed t = timed([] { return self_intersection(examples::radial_family(frac(-1, 2))); });
  const HeightValue& v = t.report.value;
  const double want = -24 * M_PI;
  bool ok = !v.is_minus_infinity() && rel_close(v.value, want, kEx4RelTol) && t.seconds < kEx4Seconds;
  line(4, ok, "ex4 alpha -1/2 = " + fmt(v.value) + " (target " + fmt(want) + ", " + fmt(t.seconds) + " s)");
}

void criterion5() {
  AdelicDivisor D1 = examples::triangle_pole(), D2 = examples::segment();
  AdelicDivisor D3 = add(D1, D2);
  HeightValue a = mixed_intersection({D1, D1, D1}).value;
  HeightValue b = mixed_intersection({D2, D2, D2}).value;
  HeightValue c = mixed_intersection({D3, D3, D3}).value;
  bool ok = !a.is_minus_infinity() && std::fabs(a.value + 6) <= kEx5AbsTol && b.is_exact() && b.exact == 0 &&
            c.is_minus_infinity() && !c.trace.empty();
  line(5, ok, "D1^3 = " + to_string(a) + ", D2^3 = " + to_string(b) + ", (D1+D2)^3 = " + to_string(c) + " (" +
                  std::to_string(c.trace.size()) + " trace lines)");
}

void criterion6() {
  std::mt19937 rng(6);
  BoundaryDivisor B2 = standard_boundary_divisor(2);
  const auto& verts = B2.delta.vertices();
  int ones = 0;
  for (int i = 0; i < kBoundarySamples; ++i) {
    QVec y(2, Q(0));
    Q total = 0;
    std::vector<Q> w;
    for (size_t k = 0; k < verts.size(); ++k) {
      w.push_back(Q(static_cast<long>(rng() % 17)));
      total += w.back();
    }
    if (total == 0) {
      w[0] = 1;
      total = 1;
    }
    for (size_t k = 0; k < verts.size(); ++k) y = y + Q(w[k] / total) * verts[k];
    for (auto& c : y) c.canonicalize();
    GlobalRoofValue g = global_roof_eval(B2.roofs, y);
    if (g.exact && *g.exact == 1) ++ones;
  }
  NefVerdict nef = check_nef(B2.roofs);
  ModelDivisor can{2, {}, PADiff::of(B2.psi)};
  auto norm = boundary_norm(can, B2.green);
  BoundaryDivisor B1 = standard_boundary_divisor(1);
  HeightValue sq = mixed_intersection({B1.roofs, B1.roofs}).value;
  bool ok = ones == kBoundarySamples && nef.kind == NefVerdict::Kind::nef && nef.exact && norm && *norm == 1 &&
            sq.is_exact() && sq.exact == 4;
  line(6, ok, "roof == 1 at " + std::to_string(ones) + "/" + std::to_string(kBoundarySamples) +
                  " points, nef " + to_string(nef.kind) + ", |B_can| = " + (norm ? to_string(*norm) : "+inf") +
                  ", B^2 (d = 1) = " + to_string(sq));
}

void criterion7() {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<props::SuiteResult> suites = {
      props::lf_involution_suite(71),  props::supconv_duality_suite(72), props::mixed_diagonal_suite(73),
      props::nef_height_suite(74),     props::exact_numeric_suite(75),   props::boundary_norm_suite(76),
      props::fan_suite(77)};
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool ok = seconds < kPropertySeconds;
  std::string detail;
  for (const auto& s : suites) {
    ok = ok && s.ok();
    detail += s.name + " " + std::to_string(s.cases - s.failures) + "/" + std::to_string(s.cases);
    if (!s.ok()) detail += " [" + s.first_failure + "]";
    detail += "; ";
  }
  line(7, ok, detail + fmt(seconds) + " s");
}

}  // namespace

int main() {
  for (auto* c : {criterion1, criterion2, criterion3, criterion4, criterion5, criterion6, criterion7}) {
    try {
      c();
    } catch (const std::exception& e) {
      std::printf("FAIL criterion: exception %s\n", e.what());
      ++failures;
    }
  }
  return failures == 0 ? 0 : 1;
}
