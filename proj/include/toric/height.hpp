#pragma once

#include "toric/adelic.hpp"
#include "toric/integrate.hpp"

namespace toric {

// (d+1)! * weight * integral, or the mixed analogue, at one place.
struct PlaceTerm {
  std::string label;
  Q weight = 1;
  HeightValue value;
};

struct SeriesSummary {
  bool present = false;
  long first = 0;
  long last = 0;          // last index summed
  std::optional<Q> tail;  // certified bound on the omitted terms, already scaled
  bool certified = false;
  std::string note;
};

struct HeightReport {
  HeightValue value;
  std::vector<PlaceTerm> places;
  SeriesSummary series;
};

struct HeightOptions {
  IntegrationConfig integration;
  bool exact_only = false;
  long max_terms = 200;
};

HeightReport self_intersection(const AdelicDivisor& D, const HeightOptions& opt = {});

// Sum over places of weight * MI of the roofs of the d + 1 divisors.
HeightReport mixed_intersection(const std::vector<AdelicDivisor>& divisors,
                                const HeightOptions& opt = {});

}  // namespace toric
