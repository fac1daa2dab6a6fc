#pragma once

#include "bhlab/caps.hpp"
#include "bhlab/configurations.hpp"
#include "bhlab/distribution.hpp"
#include "bhlab/rational.hpp"

#include <json.hpp>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bhlab {

enum class Denominator { d, d_minus_one };

struct RatedConfiguration {
  Configuration conf;
  ConfStats stats;
  double exponent = 0;  // -log2 p / (d - 1)
};

struct RateReport {
  std::string formula;
  double rate = 0;
  bool vacuous = false;
  std::optional<Configuration> argopt;
  std::vector<RatedConfiguration> table;
  std::vector<std::size_t> ties;  // table rows tied with argopt, argopt included
};

double exponent_of(const ConfStats& stats, Denominator den = Denominator::d_minus_one);

RateReport rate_dr(int h);
RateReport rate_poltyrev(int h);
RateReport rate_distribution(const Distribution<Rational>& dist, int h, const Caps& caps = {});
RateReport rate_distribution(const Distribution<double>& dist, int h, const Caps& caps = {});
RateReport rate_bhg(int h, int g, const Caps& caps = {});
RateReport rate_bh_sharp(int h, int d, const Caps& caps = {});

struct SpecialValue {
  double value = 0;  // p^{1/(d-1)}
  ExactProbability p;
  int d = 0;
};
/// Block configuration of the suboptimality argument: p = binom(2h,h) 2^{-(2h+g-1)}, d = 2h-1+g.
SpecialValue poltyrev_special_config(int h, int g);
/// cmax(h,g+1) with the same d-1 normalization.
SpecialValue cmax_exponent(int h, int g);

/// p1^{1/a} < p2^{1/b}, decided exactly.
bool root_less(const Rational& p1, int a, const Rational& p2, int b);

struct OptimizeResult {
  std::size_t index = 0;
  std::vector<std::size_t> tied;
};
/// argmax of p(C)^{1/den}; ties go to the least configuration.
OptimizeResult optimize_exponent(std::span<const RatedConfiguration> confs, Denominator den);

nlohmann::json to_json(const RateReport& r);
std::string to_csv(const RateReport& r);

}  // namespace bhlab
