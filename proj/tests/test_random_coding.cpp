#include <doctest.h>

#include "bhlab/errors.hpp"
#include "bhlab/random_coding.hpp"
#include "bhlab/rates.hpp"

#include <cmath>

using namespace bhlab;

namespace {

SamplingPlan plan_for(int h, int n, std::uint64_t t, std::uint64_t seed) {
  SamplingPlan p;
  p.h = h;
  p.n = n;
  p.t = t;
  p.seed = seed;
  return p;
}

}  // namespace

TEST_CASE("choose_t") {
  auto small = choose_t(plan_for(2, 1, 0, 0));
  CHECK(small.infeasible);
  CHECK(small.t == 0);

  std::uint64_t prev = 0;
  for (int n = 4; n <= 40; n += 4) {
    auto r = choose_t(plan_for(2, n, 0, 0));
    REQUIRE_FALSE(r.infeasible);
    CHECK(r.t >= prev);
    prev = r.t;
    // largest t with E(t) <= t/2
    auto plan = plan_for(2, n, 0, 0);
    CHECK(2 * expected_violations(plan, r.t) <= Rational(BigInt(r.t)));
    CHECK(2 * expected_violations(plan, r.t + 1) > Rational(BigInt(r.t + 1)));
  }
  const double target = std::exp2(rate_poltyrev(2).rate * 40);
  const double t40 = static_cast<double>(choose_t(plan_for(2, 40, 0, 0)).t);
  CHECK(t40 >= target / 4);
  CHECK(t40 <= target * 4);
}

TEST_CASE("sample_code") {
  auto a = sample_code(plan_for(2, 20, 200, 5));
  auto b = sample_code(plan_for(2, 20, 200, 5));
  CHECK(a == b);
  CHECK_FALSE(a == sample_code(plan_for(2, 20, 200, 6)));
  CHECK_FALSE(a == sample_code(plan_for(2, 20, 200, 5), 1));

  auto p = plan_for(2, 6, 10, 1);
  GroupElement v(1);
  v << 1;
  p.dist = Distribution<Rational>::point_mass(v);
  auto pm = sample_code(p);
  for (std::size_t i = 0; i < pm.size(); ++i) CHECK(pm.to_string(i) == "111111");

  auto u = sample_code(plan_for(2, 64, 1000, 9));
  for (int j = 0; j < 64; ++j) {
    int ones = 0;
    for (std::size_t i = 0; i < u.size(); ++i) ones += u.bit(i, j);
    CHECK(std::abs(ones - 500.0) <= 5 * std::sqrt(250.0));
  }

  auto bad = plan_for(2, 7, 10, 1);
  bad.n0 = 2;
  bad.dist = Distribution<Rational>::uniform_bits(2);
  CHECK_THROWS_AS(sample_code(bad), Error);

  auto wide = plan_for(2, 100, 5, 1);
  CHECK(sample_code(wide).length() == 100);
}

TEST_CASE("prune") {
  PackedWords ok(3);
  for (auto s : {"001", "010", "100"}) ok.push_back(s);
  auto r = prune(ok, 2);
  CHECK(r.code.size() == 3);
  CHECK(r.stats.words_removed == 0);

  PackedWords all(2);
  for (auto s : {"00", "01", "10", "11"}) all.push_back(s);
  auto q = prune(all, 2);
  CHECK(q.code.size() == 3);
  CHECK(q.stats.words_removed == 1);
  CHECK(q.code.words().to_string(0) == "01");
  CHECK(q.stats.verdict == "pass");

  PackedWords dup(3);
  for (auto s : {"011", "011", "100"}) dup.push_back(s);
  auto d = prune(dup, 2);
  CHECK(d.code.size() == 2);
  CHECK(d.stats.violations_per_k[1] == 1);
}

TEST_CASE("construct") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    auto r = construct(2, 16, seed);
    CHECK_FALSE(verify_bh(r.code, 2));
    CHECK(2 * r.code.size() >= r.stats.t);
    CHECK(r.stats.words_removed <= r.stats.violations_found);
    CHECK(r.stats.final_size + r.stats.violations_found >= r.stats.t);
  }
  auto a = construct(2, 18, 42), b = construct(2, 18, 42);
  CHECK(a.code == b.code);
  CHECK(to_json(a.stats) == to_json(b.stats));

  ConstructOptions g2;
  g2.g = 2;
  auto c = construct(2, 14, 7, g2);
  CHECK_FALSE(verify_bhg(c.code, 2, 2));

  ConstructOptions biased;
  biased.dist = Distribution<Rational>::bits(1, {Rational(3, 4), Rational(1, 4)});
  auto e = construct(3, 12, 3, biased);
  CHECK_FALSE(verify_bh(e.code, 3));

  ConstructOptions blocks;
  blocks.n0 = 2;
  auto f = construct(2, 16, 11, blocks);
  CHECK_FALSE(verify_bh(f.code, 2));

  CHECK_THROWS_AS(construct(2, 1, 1), Error);
}

TEST_CASE("realized rate over seeds") {
  // reduced n; the same bound as the full-size invariant
  const int n = 20;
  double total = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) total += construct(2, n, seed).code.rate();
  CHECK(total / 20 >= 0.8 * rate_poltyrev(2).rate - 2.0 / n);
}

TEST_CASE("biased blocks do not beat uniform on average") {
  ConstructOptions biased;
  biased.dist = Distribution<Rational>::bits(1, {Rational(3, 4), Rational(1, 4)});
  double u = 0, b = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    u += construct(3, 18, seed).code.rate();
    b += construct(3, 18, seed, biased).code.rate();
  }
  CHECK(b <= u);
}
