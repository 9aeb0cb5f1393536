#include "toric/height.hpp"

#include <cmath>
#include <set>

namespace toric {

namespace {

Q factorial(int n) {
  Q f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

HeightValue labelled(HeightValue h, const std::string& label) {
  for (auto& t : h.trace) t = label + ": " + t;
  return h;
}

double tolerance(const HeightValue& sum, const HeightValue& term, const IntegrationConfig& cfg) {
  if (sum.is_exact() && term.is_exact()) return cfg.abs_tol;
  return std::max(cfg.abs_tol, cfg.rel_tol * std::fabs(sum.value));
}

// Integral of the default roof, which is repeated at infinitely many places.
HeightValue default_contribution(const HeightValue& per_place, const std::string& what) {
  if (per_place.is_minus_infinity()) return per_place;
  bool zero = per_place.is_exact() ? per_place.exact == 0
                                   : std::fabs(per_place.value) <= per_place.abs_error;
  if (zero) return HeightValue::of(0);
  if (per_place.value < 0)
    return HeightValue::minus_infinity({what + " is negative at infinitely many places"});
  throw Error(ErrorKind::invalid_input, what + " is positive at infinitely many places");
}

struct Series {
  HeightValue sum = HeightValue::of(0);
  SeriesSummary summary;
};

bool same_family(const FamilyDescriptor& a, const FamilyDescriptor& b) {
  if (!a.serializable() || !b.serializable()) return false;
  return a.kind() == b.kind() && a.alpha() == b.alpha() && a.templ() == b.templ() &&
         a.start() == b.start() && a.infinite_index() == b.infinite_index() &&
         a.weight() == b.weight() && a.body() == b.body();
}

// Sums term(n) for n = first, ... until the scaled tail bound or, without one,
// three consecutive negligible terms.
Series sum_series(long first, const HeightOptions& opt, const std::function<std::optional<Q>(long)>& tail,
                  const std::function<PlaceTerm(long)>& term, std::vector<PlaceTerm>& places) {
  Series s;
  s.summary.present = true;
  s.summary.first = first;
  int small = 0;
  for (long n = first; n < first + opt.max_terms; ++n) {
    PlaceTerm t = term(n);
    places.push_back(t);
    s.summary.last = n;
    if (t.value.is_minus_infinity()) {
      s.sum = t.value;
      s.summary.note = "member " + std::to_string(n) + " is not integrable";
      return s;
    }
    s.sum = s.sum + t.value;
    const double tol = tolerance(s.sum, t.value, opt.integration);
    if (auto b = tail(n)) {
      s.summary.tail = b;
      if (b->get_d() <= tol) {
        s.summary.certified = true;
        s.summary.note = "truncated with a certified geometric tail";
        return s;
      }
      continue;
    }
    small = std::fabs(t.value.value) + t.value.abs_error < tol ? small + 1 : 0;
    if (small >= 3) {
      s.summary.note = "heuristic truncation: no tail bound declared";
      s.sum.heuristic = true;
      return s;
    }
  }
  s.sum.budget_exceeded = true;
  if (s.summary.tail) {
    s.summary.note = "series budget exhausted before the tail bound met the tolerance";
  } else {
    s.summary.note = "heuristic truncation: series budget exhausted without a tail bound";
    s.sum.heuristic = true;
  }
  return s;
}

HeightValue finish(HeightValue total, const SeriesSummary& series) {
  if (total.is_minus_infinity() || !series.present || !series.tail || *series.tail == 0) return total;
  HeightValue h = HeightValue::approx(total.value, total.abs_error + series.tail->get_d());
  h.heuristic = total.heuristic;
  h.budget_exceeded = total.budget_exceeded;
  h.lower_bound_only = total.lower_bound_only;
  h.trace = total.trace;
  return h;
}

}  // namespace

HeightReport self_intersection(const AdelicDivisor& D, const HeightOptions& opt) {
  D.validate();
  const Q fact = factorial(D.dim + 1);
  const IntegrationConfig& cfg = opt.integration;
  if (auto ip = D.domain.inner_point_exact()) {
    GlobalRoofValue g = global_roof_eval(D, *ip);
    if (g.minus_infinity)
      throw Error(ErrorKind::precondition, "global roof is -inf at an interior point of the domain");
  }
  HeightReport rep;
  HeightValue total = HeightValue::of(0);
  for (const auto& pr : D.places) {
    HeightValue v = labelled(integrate(pr.roof, cfg, opt.exact_only), pr.place.label);
    HeightValue c = v.is_minus_infinity() ? v : Q(fact * pr.place.weight) * v;
    rep.places.push_back({pr.place.label, pr.place.weight, c});
    total = total + c;
  }
  {
    HeightValue v = default_contribution(integrate(D.default_roof, cfg, opt.exact_only), "default roof integral");
    rep.places.push_back({"default", 1, v});
    total = total + v;
  }
  if (D.family) {
    const FamilyDescriptor& F = *D.family;
    Series s = sum_series(
        F.start(), opt,
        [&](long n) -> std::optional<Q> {
          auto b = F.tail_bound(n);
          if (!b) return std::nullopt;
          return Q(fact * *b);
        },
        [&](long n) {
          Place p = F.place(n);
          HeightValue v = labelled(integrate(F.generator(n), cfg, opt.exact_only, F.breaks(n)), p.label);
          return PlaceTerm{p.label, p.weight, v.is_minus_infinity() ? v : Q(fact * p.weight) * v};
        },
        rep.places);
    rep.series = s.summary;
    total = total + s.sum;
  }
  rep.value = finish(total, rep.series);
  return rep;
}

HeightReport mixed_intersection(const std::vector<AdelicDivisor>& divisors, const HeightOptions& opt) {
  if (divisors.empty()) throw Error(ErrorKind::invalid_input, "mixed intersection of no divisors");
  const int d = divisors[0].dim;
  if (static_cast<int>(divisors.size()) != d + 1)
    throw Error(ErrorKind::invalid_input, "mixed intersection needs d + 1 divisors");
  for (const auto& D : divisors) {
    D.validate();
    if (D.dim != d) throw Error(ErrorKind::dimension_mismatch, "mixed intersection: dimensions differ");
  }
  const IntegrationConfig& cfg = opt.integration;
  auto weight_at = [&](const std::string& label) {
    std::optional<Q> w;
    for (const auto& D : divisors) {
      Q x = 1;
      if (const PlaceRoof* pr = D.find(label)) x = pr->place.weight;
      else if (D.family && D.family->index_of(label)) x = D.family->weight();
      else continue;
      if (w && *w != x) throw Error(ErrorKind::invalid_input, "place '" + label + "' has different weights");
      w = x;
    }
    return w.value_or(Q(1));
  };
  auto at = [&](const std::string& label) {
    std::vector<Roof> roofs;
    for (const auto& D : divisors) roofs.push_back(D.roof_at(label));
    Q w = weight_at(label);
    HeightValue v = labelled(mixed_integral(roofs, cfg, opt.exact_only), label);
    return PlaceTerm{label, w, v.is_minus_infinity() ? v : w * v};
  };

  std::set<std::string> family_labels;
  std::vector<const FamilyDescriptor*> fams;
  for (const auto& D : divisors)
    if (D.family) fams.push_back(&*D.family);
  std::set<std::string> labels;
  for (const auto& D : divisors)
    for (const auto& pr : D.places) labels.insert(pr.place.label);

  HeightReport rep;
  HeightValue total = HeightValue::of(0);
  auto in_family = [&](const std::string& l) {
    for (auto* F : fams)
      if (F->index_of(l)) return true;
    return false;
  };
  for (const auto& l : labels) {
    if (in_family(l)) continue;
    PlaceTerm t = at(l);
    rep.places.push_back(t);
    total = total + t.value;
  }
  {
    std::vector<Roof> defaults;
    for (const auto& D : divisors) defaults.push_back(D.default_roof);
    HeightValue v = default_contribution(mixed_integral(defaults, cfg, opt.exact_only), "default mixed integral");
    rep.places.push_back({"default", 1, v});
    total = total + v;
  }
  if (!fams.empty()) {
    long first = fams[0]->start();
    for (auto* F : fams) first = std::min<long>(first, F->start());
    bool identical = fams.size() == divisors.size();
    for (auto* F : fams) identical = identical && same_family(*F, *fams[0]);
    for (const auto& D : divisors) identical = identical && D.places.empty();
    const Q fact = factorial(d + 1);
    std::set<std::string> done(labels.begin(), labels.end());
    Series s = sum_series(
        first, opt,
        [&](long n) -> std::optional<Q> {
          if (!identical) return std::nullopt;
          auto b = fams[0]->tail_bound(n);
          if (!b) return std::nullopt;
          return Q(fact * *b);
        },
        [&](long n) {
          PlaceTerm acc{"", 1, HeightValue::of(0)};
          for (auto* F : fams) {
            if (n < F->start()) continue;
            std::string l = F->place(n).label;
            if (!done.insert(l).second) continue;
            PlaceTerm t = at(l);
            acc.label += (acc.label.empty() ? "" : ",") + l;
            acc.weight = t.weight;
            acc.value = acc.value + t.value;
          }
          return acc;
        },
        rep.places);
    rep.series = s.summary;
    total = total + s.sum;
  }
  rep.value = finish(total, rep.series);
  return rep;
}

}  // namespace toric
