#include "bhlab/rates.hpp"

#include "bhlab/entropy.hpp"
#include "bhlab/errors.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>

namespace bhlab {

namespace {

int denominator_of(const ConfStats& s, Denominator den) { return den == Denominator::d ? s.d : s.d - 1; }

Rational central_binomial_mass(int h) {
  return Rational(binomial(2 * h, h), BigInt(1) << (2 * h));
}

RateReport single_row(std::string formula, Configuration conf, Rational p, int d, Denominator den) {
  RateReport r;
  r.formula = std::move(formula);
  RatedConfiguration row{std::move(conf), ConfStats{d, ExactProbability(std::move(p))}, 0};
  row.exponent = exponent_of(row.stats, den);
  r.rate = row.exponent;
  r.argopt = row.conf;
  r.table.push_back(std::move(row));
  r.ties = {0};
  return r;
}

RateReport minimize_over(std::string formula, const std::vector<Configuration>& family,
                         const std::function<ConfStats(const Configuration&)>& stats) {
  RateReport r;
  r.formula = std::move(formula);
  if (family.empty()) {
    r.vacuous = true;
    r.rate = std::numeric_limits<double>::infinity();
    return r;
  }
  for (const auto& c : family) {
    RatedConfiguration row{c, stats(c), 0};
    row.exponent = exponent_of(row.stats);
    r.table.push_back(std::move(row));
  }
  const auto best = optimize_exponent(r.table, Denominator::d_minus_one);
  r.argopt = r.table[best.index].conf;
  r.rate = r.table[best.index].exponent;
  r.ties = best.tied;
  return r;
}

}  // namespace

double exponent_of(const ConfStats& stats, Denominator den) {
  const int q = denominator_of(stats, den);
  if (q <= 0) throw Error(Errc::invalid_params, "exponent denominator must be positive");
  if (stats.p.value() == 0) return std::numeric_limits<double>::infinity();
  return -stats.p.log2() / q;
}

RateReport rate_dr(int h) {
  if (h < 1) throw Error(Errc::invalid_params, "h must be at least 1");
  return single_row("log2(4^h/binom(2h,h))/(2h)", cmax(h, 2), central_binomial_mass(h), 2 * h, Denominator::d);
}

RateReport rate_poltyrev(int h) {
  if (h < 1) throw Error(Errc::invalid_params, "h must be at least 1");
  return single_row("log2(4^h/binom(2h,h))/(2h-1)", cmax(h, 2), central_binomial_mass(h), 2 * h,
                    Denominator::d_minus_one);
}

RateReport rate_distribution(const Distribution<Rational>& dist, int h, const Caps& caps) {
  const auto sum = hfold(dist, h, caps);
  const int n0 = dist.dimension();
  RateReport r;
  r.formula = "H2(X^(h))/(n0(2h-1))";
  r.rate = collision_entropy(sum) / (n0 * (2.0 * h - 1));
  return r;
}

RateReport rate_distribution(const Distribution<double>& dist, int h, const Caps& caps) {
  const auto sum = hfold(dist, h, caps);
  const int n0 = dist.dimension();
  RateReport r;
  r.formula = "H2(X^(h))/(n0(2h-1))";
  r.rate = renyi(sum, 2.0) / (n0 * (2.0 * h - 1));
  return r;
}

RateReport rate_bhg(int h, int g, const Caps& caps) {
  if (h < 1 || g < 1) throw Error(Errc::invalid_params, "need h >= 1 and g >= 1");
  return minimize_over("min over Conf(<=h,g+1) of -log2 p(C)/(d(C)-1)", enumerate_conf_upto(h, g + 1, caps),
                       [&](const Configuration& c) { return conf_stats(c, caps); });
}

RateReport rate_bh_sharp(int h, int d, const Caps& caps) {
  return minimize_over("min over Conf#(<=h)[d] of -log2 p(C)/(d(C)-1)", enumerate_conf_sharp(h, d, caps),
                       [&](const Configuration& c) { return conf_stats(c, caps); });
}

SpecialValue poltyrev_special_config(int h, int g) {
  if (h < 1 || g < 1) throw Error(Errc::invalid_params, "need h >= 1 and g >= 1");
  SpecialValue s;
  s.d = 2 * h - 1 + g;
  s.p = ExactProbability(Rational(binomial(2 * h, h), BigInt(1) << (2 * h + g - 1)));
  s.value = std::exp2(s.p.log2() / (s.d - 1));
  return s;
}

SpecialValue cmax_exponent(int h, int g) {
  if (h < 1 || g < 1) throw Error(Errc::invalid_params, "need h >= 1 and g >= 1");
  SpecialValue s;
  s.d = h * (g + 1);
  s.p = cmax_p_closed(h, g);
  s.value = std::exp2(s.p.log2() / (s.d - 1));
  return s;
}

bool root_less(const Rational& p1, int a, const Rational& p2, int b) {
  return pow(p1, static_cast<unsigned>(b)) < pow(p2, static_cast<unsigned>(a));
}

OptimizeResult optimize_exponent(std::span<const RatedConfiguration> confs, Denominator den) {
  if (confs.empty()) throw Error(Errc::empty_family, "no configurations to optimize over");
  std::size_t best = 0;
  for (std::size_t i = 1; i < confs.size(); ++i) {
    const auto& a = confs[best].stats;
    const auto& b = confs[i].stats;
    if (root_less(a.p.value(), denominator_of(a, den), b.p.value(), denominator_of(b, den))) best = i;
  }
  OptimizeResult r;
  const auto& top = confs[best].stats;
  const int top_den = denominator_of(top, den);
  for (std::size_t i = 0; i < confs.size(); ++i) {
    const auto& s = confs[i].stats;
    const int q = denominator_of(s, den);
    if (pow(s.p.value(), static_cast<unsigned>(top_den)) == pow(top.p.value(), static_cast<unsigned>(q)))
      r.tied.push_back(i);
  }
  r.index = r.tied.front();
  for (auto i : r.tied)
    if (confs[i].conf < confs[r.index].conf) r.index = i;
  return r;
}

nlohmann::json to_json(const RateReport& r) {
  nlohmann::json j;
  j["formula"] = r.formula;
  j["rate"] = std::isinf(r.rate) ? nlohmann::json(nullptr) : nlohmann::json(r.rate);
  j["vacuous"] = r.vacuous;
  if (r.argopt) j["argopt"] = r.argopt->str();
  j["ties"] = r.ties;
  auto rows = nlohmann::json::array();
  for (const auto& row : r.table) {
    auto e = to_json(row.conf, row.stats);
    e["exponent"] = row.exponent;
    rows.push_back(std::move(e));
  }
  j["table"] = std::move(rows);
  return j;
}

std::string to_csv(const RateReport& r) {
  std::string out = "id,k,l,d,p,exponent\n";
  char buf[64];
  for (const auto& row : r.table) {
    std::snprintf(buf, sizeof buf, "%.12f", row.exponent);
    out += '"' + row.conf.str() + "\"," + std::to_string(row.conf.rows()) + ',' + std::to_string(row.conf.cols()) +
           ',' + std::to_string(row.stats.d) + ',' + row.stats.p.str() + ',' + buf + '\n';
  }
  return out;
}

}  // namespace bhlab
