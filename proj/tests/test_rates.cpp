#include <doctest.h>

#include "bhlab/entropy.hpp"
#include "bhlab/errors.hpp"
#include "bhlab/rates.hpp"
#include "bhlab/rng.hpp"

#include <cmath>

using namespace bhlab;

TEST_CASE("closed-form rates") {
  CHECK(rate_dr(1).rate == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(rate_dr(2).rate == doctest::Approx(std::log2(16.0 / 6) / 4).epsilon(1e-14));
  CHECK(rate_dr(3).rate == doctest::Approx(std::log2(64.0 / 20) / 6).epsilon(1e-14));
  CHECK(rate_poltyrev(1).rate == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(rate_poltyrev(2).rate == doctest::Approx(std::log2(8.0 / 3) / 3).epsilon(1e-14));
  for (int h = 1; h <= 64; ++h) CHECK(rate_dr(h).rate < rate_poltyrev(h).rate);
}

TEST_CASE("table rows reproduce exact exponents") {
  for (auto r : {rate_bhg(3, 1), rate_bhg(2, 2), rate_bh_sharp(2, 3), rate_dr(5)}) {
    for (const auto& row : r.table) {
      const double exact = -log2(row.stats.p.value());
      const int den = r.formula.find("(2h)") != std::string::npos ? row.stats.d : row.stats.d - 1;
      CHECK(std::abs(row.exponent - exact / den) <= 1e-12 * std::abs(exact / den));
    }
  }
}

TEST_CASE("rate_bhg with g=1 is Poltyrev") {
  for (int h = 1; h <= 5; ++h) {
    auto r = rate_bhg(h, 1);
    REQUIRE(r.argopt);
    CHECK(*r.argopt == cmax(h, 2));
    CHECK(r.rate == rate_poltyrev(h).rate);
    CHECK(r.ties.size() == 1);
  }
}

TEST_CASE("rate_bhg h=1") {
  for (int g = 1; g <= 4; ++g) {
    auto r = rate_bhg(1, g);
    CHECK(r.table.size() == 1);
    CHECK(r.rate == doctest::Approx(1.0));
  }
}

TEST_CASE("rate_bhg(2,2)") {
  auto r = rate_bhg(2, 2);
  CHECK(r.table.size() == 13);
  double best = 1e9;
  for (const auto& row : r.table) best = std::min(best, row.exponent);
  CHECK(r.rate == best);
}

TEST_CASE("sharp rates") {
  auto r = rate_bh_sharp(2, 2);
  CHECK_FALSE(r.vacuous);
  CHECK(std::isfinite(r.rate));
  double prev = 0;
  for (int d = 2; d <= 5; ++d) {
    auto s = rate_bh_sharp(2, d);
    const double v = s.vacuous ? INFINITY : s.rate;
    CHECK(v >= prev);
    prev = v;
  }
  Caps tight;
  tight.sharp_columns = 2;
  auto v = rate_bh_sharp(1, 9, tight);
  CHECK(v.vacuous);
  CHECK(std::isinf(v.rate));
}

TEST_CASE("distribution rates") {
  for (int h = 1; h <= 6; ++h)
    CHECK(rate_distribution(Distribution<Rational>::uniform_bits(1), h).rate == rate_poltyrev(h).rate);
  GroupElement zero = GroupElement::Zero(2);
  CHECK(rate_distribution(Distribution<Rational>::point_mass(zero), 3).rate == 0.0);
  auto biased = Distribution<Rational>::bits(1, {Rational(3, 4), Rational(1, 4)});
  const double expect = -std::log2((81.0 + 36 + 1) / 256) / 3;
  CHECK(rate_distribution(biased, 2).rate == doctest::Approx(expect).epsilon(1e-14));
  CHECK(rate_distribution(biased.cast<double>(), 2).rate == doctest::Approx(expect).epsilon(1e-12));
  CHECK_THROWS_AS(Distribution<Rational>::bits(1, {Rational(1, 2), Rational(1, 3)}), Error);
  CHECK_THROWS_AS(Distribution<double>::bits(1, {1.5, -0.5}), Error);
}

TEST_CASE("uniform maximizes the distribution rate") {
  for (int n0 : {1, 2})
    for (int h : {2, 3}) {
      const double top = rate_distribution(Distribution<double>::uniform_bits(n0), h).rate;
      CounterRng root(1000 * n0 + h);
      for (int trial = 0; trial < 1000; ++trial) {
        CounterRng rng = root.derive(trial);
        std::vector<double> p(std::size_t{1} << n0);
        double total = 0;
        for (auto& x : p) total += x = -std::log(rng.uniform());
        for (auto& x : p) x /= total;
        CHECK(rate_distribution(Distribution<double>::bits(n0, p), h).rate <= top);
      }
    }
}

TEST_CASE("special configuration") {
  auto s = poltyrev_special_config(100, 2);
  auto c = cmax_exponent(100, 2);
  CHECK(std::abs(s.value - 0.982312) <= 5e-6);
  CHECK(std::abs(c.value - 0.981414) <= 5e-6);
  CHECK(s.d == 201);
  CHECK(c.d == 300);
  CHECK(root_less(c.p.value(), c.d - 1, s.p.value(), s.d - 1));
  // g=1: the block configuration is cmax(h,2)
  for (int h = 1; h <= 5; ++h) {
    auto b = poltyrev_special_config(h, 1);
    auto m = cmax_exponent(h, 1);
    CHECK(b.p == m.p);
    CHECK_FALSE(root_less(m.p.value(), m.d - 1, b.p.value(), b.d - 1));
  }
}

TEST_CASE("optimize_exponent") {
  std::vector<RatedConfiguration> one{{cmax(2, 2), conf_stats(cmax(2, 2)), 0}};
  CHECK(optimize_exponent(one, Denominator::d).index == 0);
  CHECK_THROWS_AS(optimize_exponent(std::span<const RatedConfiguration>{}, Denominator::d), Error);

  for (int h = 1; h <= 5; ++h)
    for (auto den : {Denominator::d, Denominator::d_minus_one}) {
      std::vector<RatedConfiguration> rows;
      for (const auto& c : enumerate_conf_upto(h, 2)) rows.push_back({c, conf_stats(c), 0});
      auto r = optimize_exponent(rows, den);
      CHECK(rows[r.index].conf == cmax(h, 2));
    }

  std::vector<RatedConfiguration> pair;
  pair.push_back({cmax(100, 3), ConfStats{300, cmax_p_closed(100, 2)}, 0});
  pair.push_back({special_block_config(100, 2),
                  ConfStats{201, ExactProbability(Rational(binomial(200, 100), BigInt(1) << 201))}, 0});
  CHECK(optimize_exponent(pair, Denominator::d_minus_one).index == 1);

  // ties reported, least configuration wins
  std::vector<RatedConfiguration> tied;
  tied.push_back({cmax(1, 3), ConfStats{2, ExactProbability(Rational(1, 4))}, 0});
  tied.push_back({cmax(1, 2), ConfStats{2, ExactProbability(Rational(1, 4))}, 0});
  auto t = optimize_exponent(tied, Denominator::d);
  CHECK(t.tied.size() == 2);
  CHECK(tied[t.index].conf == cmax(1, 2));
}

TEST_CASE("csv and json") {
  auto r = rate_bhg(2, 1);
  auto csv = to_csv(r);
  CHECK(csv.rfind("id,k,l,d,p,exponent\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(r.table.size()) + 1);
  auto j = to_json(r);
  CHECK(j["table"].size() == r.table.size());
  CHECK(j["argopt"] == cmax(2, 2).str());
  auto v = to_json(rate_bh_sharp(1, 9, Caps{.sharp_columns = 2}));
  CHECK(v["vacuous"] == true);
  CHECK(v["rate"].is_null());
}
