#include "bhlab/configurations.hpp"
#include "bhlab/constructions.hpp"
#include "bhlab/entropy.hpp"
#include "bhlab/errors.hpp"
#include "bhlab/oracle.hpp"
#include "bhlab/random_coding.hpp"
#include "bhlab/rates.hpp"
#include "bhlab/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

using namespace bhlab;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream notes;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      if (ok) notes << what;
      else notes << "; " << what;
      ok = false;
    }
  }
};

Configuration conf(std::vector<std::vector<int>> cols) { return Configuration::from_columns(cols); }

Rational pr(long long a, long long b) { return Rational(a, b); }

Vector<Rational> random_sequence(CounterRng& rng, int max_len) {
  const int len = 1 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(max_len));
  Vector<Rational> v(len);
  for (int i = 0; i < len; ++i) v[i] = Rational(static_cast<long long>(rng.next() % 10), 9);
  return v;
}

void criterion1(Check& c) {
  auto c12 = enumerate_conf(1, 2);
  c.expect(c12.size() == 1, "(1,2) count " + std::to_string(c12.size()));
  auto c22 = enumerate_conf(2, 2);
  std::vector<std::pair<int, Rational>> s22;
  for (const auto& x : c22) {
    auto s = conf_stats(x);
    s22.push_back({s.d, s.p.value()});
  }
  std::sort(s22.begin(), s22.end());
  c.expect(s22 == std::vector<std::pair<int, Rational>>{{2, pr(1, 2)}, {3, pr(1, 4)}, {4, pr(3, 8)}}, "(2,2) table");

  auto c23 = enumerate_conf(2, 3);
  const std::vector<std::pair<std::vector<std::vector<int>>, std::pair<int, Rational>>> listed = {
      {{{0, 0}, {1, 1}, {2, 2}}, {3, pr(1, 4)}},  {{{0, 1}, {2, 2}, {3, 3}}, {4, pr(1, 8)}},
      {{{0, 1}, {2, 3}, {4, 4}}, {5, pr(1, 16)}}, {{{0, 1}, {2, 3}, {4, 5}}, {6, pr(5, 32)}},
      {{{0, 1}, {1, 2}, {0, 2}}, {3, pr(1, 4)}},  {{{0, 1}, {2, 3}, {1, 3}}, {4, pr(1, 4)}},
      {{{0, 1}, {2, 3}, {3, 4}}, {5, pr(3, 16)}},
  };
  for (const auto& [cols, ds] : listed) {
    auto x = conf(cols);
    const bool present = std::find(c23.begin(), c23.end(), x) != c23.end();
    auto s = conf_stats(x);
    c.expect(present && s.d == ds.first && s.p.value() == ds.second, "(2,3) listed class " + x.str());
  }
  for (const auto& x : {conf({{0, 1}, {0, 2}, {0, 3}}), conf({{0, 1}, {0, 1}, {2, 3}})})
    c.expect(std::find(c23.begin(), c23.end(), x) == c23.end(), "rejected matrix present " + x.str());
  c.expect(c23.size() == 7, "(2,3) count " + std::to_string(c23.size()) + " != 7");
}

void criterion2(Check& c) {
  const std::size_t expected[] = {1, 3, 6, 15, 28, 66};
  for (int k = 1; k <= 6; ++k) {
    const auto got = enumerate_conf(k, 2).size();
    c.expect(got == expected[k - 1], "k=" + std::to_string(k) + " count " + std::to_string(got));
  }
}

void criterion3(Check& c) {
  for (int h = 1; h <= 5; ++h) {
    auto r = rate_bhg(h, 1);
    const auto top = cmax_p_closed(h, 1);
    bool ok = r.argopt && *r.argopt == cmax(h, 2) && r.ties.size() == 1;
    // exact: no row has a strictly smaller exponent than cmax
    for (const auto& row : r.table)
      ok = ok && !root_less(top.value(), 2 * h - 1, row.stats.p.value(), row.stats.d - 1);
    ok = ok && r.rate == rate_poltyrev(h).rate;
    c.expect(ok, "rate_bhg(" + std::to_string(h) + ",1)");
  }
  for (int h = 1; h <= 64; ++h) {
    double binom = 1;
    for (int i = 1; i <= h; ++i) binom = binom * (h + i) / i;
    const double lg = 2.0 * h - std::log2(binom);
    const double dr = rate_dr(h).rate, pol = rate_poltyrev(h).rate;
    c.expect(std::abs(dr - lg / (2 * h)) <= 1e-12 * std::abs(lg / (2 * h)), "rate_dr h=" + std::to_string(h));
    c.expect(std::abs(pol - lg / (2 * h - 1)) <= 1e-12 * std::abs(lg / (2 * h - 1)),
             "rate_poltyrev h=" + std::to_string(h));
  }
}

void criterion4(Check& c) {
  auto s = poltyrev_special_config(100, 2);
  auto m = cmax_exponent(100, 2);
  char buf[128];
  std::snprintf(buf, sizeof buf, "special %.7f cmax %.7f", s.value, m.value);
  c.expect(std::abs(s.value - 0.982312) <= 5e-6, std::string("special off: ") + buf);
  c.expect(std::abs(m.value - 0.981414) <= 5e-6, std::string("cmax off: ") + buf);
}

void criterion5(Check& c) {
  const std::pair<std::uint64_t, int> bc[] = {{3, 2}, {4, 2}, {5, 2}, {7, 2}, {3, 3}, {4, 3}};
  for (auto [q, h] : bc) {
    auto s = bose_chowla(q, h);
    const std::string tag = "bose_chowla(" + std::to_string(q) + "," + std::to_string(h) + ")";
    c.expect(!verify_bh(s.group_elements(), s.ambient(), h), tag + " group");
    c.expect(!verify_bh(residues_to_binary(s), h), tag + " binary");
  }
  for (std::uint64_t q : {2, 3, 5, 7, 11, 13})
    for (int h = 1; h < static_cast<int>(q); ++h) {
      auto s = power_map(q, h);
      const std::string tag = "power_map(" + std::to_string(q) + "," + std::to_string(h) + ")";
      c.expect(!verify_bh(s.group_elements(), s.ambient(), h), tag + " group");
      c.expect(!verify_bh(field_vectors_to_binary(s), h), tag + " binary");
    }
}

void criterion6(Check& c) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  const auto budget = std::chrono::seconds(120);

  ConstructOptions g2;
  g2.g = 2;
  try {
    auto a = construct(2, 30, 7, g2), b = construct(2, 30, 7, g2);
    c.expect(!verify_bhg(a.code, 2, 2), "g=2 n=30 code fails verify_bhg");
    c.expect(a.code == b.code && to_json(a.stats) == to_json(b.stats), "g=2 n=30 not deterministic");
  } catch (const Error& e) {
    c.expect(false, std::string("g=2 n=30: ") + e.what());
  }

  const double g2_secs = std::chrono::duration<double>(clock::now() - start).count();
  std::printf("       g=2 n=30 two runs: %.1fs\n", g2_secs);

  ConstructOptions big;
  big.oracle.caps.multisets = std::numeric_limits<std::uint64_t>::max();
  big.oracle.caps.streaming_multisets = std::numeric_limits<std::uint64_t>::max();
  big.oracle.deadline = start + budget;
  try {
    auto a = construct(2, 40, 42, big);
    c.expect(!verify_bh(a.code, 2, big.oracle), "n=40 code fails verify_bh");
    c.expect(2 * a.code.size() >= a.stats.t, "n=40 |C| < t/2");
    auto b = construct(2, 40, 42, big);
    c.expect(a.code == b.code, "n=40 not deterministic");
  } catch (const Error& e) {
    const auto t = choose_t([] {
      SamplingPlan p;
      p.h = 2;
      p.n = 40;
      return p;
    }());
    const double secs = std::chrono::duration<double>(clock::now() - start).count() - g2_secs;
    char buf[64];
    std::snprintf(buf, sizeof buf, " after %.1fs", secs);
    c.expect(false, "n=40 (t=" + std::to_string(t.t) + "): " + e.what() + buf);
  }
}

void criterion7(Check& c) {
  auto r = critical_alphas();
  c.expect(std::abs(r.lower - 1.29856) <= 1e-5, "lower " + std::to_string(r.lower));
  c.expect(std::abs(r.upper - 3.65986) <= 1e-5, "upper " + std::to_string(r.upper));
}

void criterion8(Check& c) {
  for (int n = 1; n <= 3; ++n)
    for (double a : {0.5, 1.5, 3.0}) {
      auto m = hessian_matrix(n, a);
      auto f = fd_hessian(n, a);
      double worst = 0;
      for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
          worst = std::max(worst, std::abs(static_cast<double>(f(i, j)) - m(i, j)) / std::abs(m(i, j)));
      c.expect(worst <= 1e-6, "fd n=" + std::to_string(n) + " a=" + std::to_string(a) + " rel " + std::to_string(worst));
    }
  for (int n = 1; n <= 4; ++n)
    for (int m = 1; m <= n; ++m)
      for (double a : {0.5, 1.2, 1.5, 2.0, 2.5, 3.0, 4.0}) {
        const double cl = quadratic_form_closed(n, a, m), ex = quadratic_form_explicit(n, a, m);
        c.expect(std::abs(cl - ex) <= 1e-10 * std::abs(ex),
                 "quadratic form n=" + std::to_string(n) + " m=" + std::to_string(m));
      }
}

void criterion9(Check& c) {
  for (double a : {1.2, 1.5, 1.9})
    for (int n = 1; n <= 6; ++n)
      for (int m = 1; m <= n; ++m) c.expect(quadratic_form_closed(n, a, m) > 0, "positivity n=" + std::to_string(n));
  c.expect(quadratic_form_closed(3, 3.0, 3) < 0, "alpha=3 n=3 not negative");

  const double star = critical_alphas().upper;
  int flips = 0;
  bool flip_at_star = false;
  double prev_a = 1.001;
  double prev = sidon_curvature_at_half(prev_a);
  for (int i = 1002; i <= 6000; ++i) {
    const double a = i * 1e-3;
    const double v = sidon_curvature_at_half(a);
    if ((v > 0) != (prev > 0)) {
      ++flips;
      flip_at_star = prev_a < star && star <= a;
    }
    prev = v;
    prev_a = a;
  }
  c.expect(flips == 1 && flip_at_star, "curvature sign changes " + std::to_string(flips));

  auto s = uniform_optimality_search(3, 3.0, 2, 0, 1);
  c.expect(s.perturbation_epsilon > 0 && s.perturbation_value > s.uniform_value, "perturbation does not increase");
}

void criterion10(Check& c) {
  CounterRng maj1(101);
  for (int trial = 0; trial < 1000; ++trial) {
    auto p = random_sequence(maj1, 9);
    const auto rhs = shift_add_C(rearrange_S(p), 1);
    for (int s : {-3, -2, -1, 1, 2, 3})
      if (!is_majorized_by(shift_add_C(p, s), rhs)) {
        c.expect(false, "Maj1 trial " + std::to_string(trial));
        break;
      }
  }

  CounterRng maj2(202);
  for (int trial = 0; trial < 1000; ++trial) {
    auto q = random_sequence(maj2, 9);
    Vector<Rational> p = q;
    const int transfers = 1 + static_cast<int>(maj2.next() % 4);
    for (int t = 0; t < transfers && p.size() > 1; ++t) {
      const auto i = static_cast<Eigen::Index>(maj2.next() % static_cast<std::uint64_t>(p.size()));
      const auto j = static_cast<Eigen::Index>(maj2.next() % static_cast<std::uint64_t>(p.size()));
      if (i == j) continue;
      const Eigen::Index rich = p[i] >= p[j] ? i : j, poor = rich == i ? j : i;
      const Rational delta = (p[rich] - p[poor]) * Rational(static_cast<long long>(maj2.next() % 5), 8);
      p[rich] -= delta;
      p[poor] += delta;
    }
    if (!is_majorized_by(p, q)) {
      c.expect(false, "Robin-Hood generator broke majorization");
      break;
    }
    if (!is_majorized_by(shift_add_C(rearrange_S(p), 1), shift_add_C(rearrange_S(q), 1))) {
      c.expect(false, "Maj2 trial " + std::to_string(trial));
      break;
    }
  }

  for (int d = 1; d <= 6; ++d) {
    std::vector<int> coef(d, 1);
    while (true) {
      const auto law = weighted_bit_sum_law(coef);
      for (int g = 1; g <= 3; ++g)
        if (power_sum(law, g) > cmax_p_closed(d, g).value()) c.expect(false, "power sum d=" + std::to_string(d));
      int i = 0;
      while (i < d && coef[i] == 3) coef[i++] = 1;
      if (i == d) break;
      ++coef[i];
    }
  }

  for (int h = 2; h <= 12; h += 2)
    for (int g = 1; g <= 4; ++g)
      for (int d = 1; d <= h; ++d)
        c.expect(!root_less(cmax_p_closed(h, g).value(), h * (g + 1), cmax_p_closed(d, g).value(), d * (g + 1)),
                 "monotonicity h=" + std::to_string(h) + " d=" + std::to_string(d) + " g=" + std::to_string(g));

  int odd_failures = 0;
  for (int h = 1; h <= 11; h += 2)
    for (int g = 1; g <= 4; ++g)
      for (int d = 1; d <= h; ++d)
        odd_failures += root_less(cmax_p_closed(h, g).value(), h * (g + 1), cmax_p_closed(d, g).value(), d * (g + 1));
  std::printf("       odd h scan: %d pairs with p(cmax(d))^(1/d(g+1)) > p(cmax(h))^(1/h(g+1))\n", odd_failures);
}

void criterion11(Check& c) {
  for (int n0 : {1, 2})
    for (int h : {2, 3}) {
      auto r = uniform_optimality_search(n0, 2.0, h, 10000, 1000 + 10 * n0 + h);
      c.expect(!r.counterexample && r.gap >= 0,
               "search n0=" + std::to_string(n0) + " h=" + std::to_string(h) + " gap " + std::to_string(r.gap));
    }
  const double h = 1024;
  const double ratio = rate_poltyrev(1024).rate / (std::log2(h) / (4 * h));
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.5f", ratio);
  c.expect(std::abs(ratio - 1) <= 0.15, std::string("h=2^10 ratio ") + buf + " outside 15%");
}

}  // namespace

int main() {
  struct Item {
    int id;
    const char* title;
    double limit;
    std::function<void(Check&)> run;
  };
  const std::vector<Item> items = {
      {1, "configuration tables", 1, criterion1},
      {2, "Conf(k,2) counts", 10, criterion2},
      {3, "rate formulas", 60, criterion3},
      {4, "suboptimality numbers at h=100 g=2", 5, criterion4},
      {5, "constructions pass oracles", 120, criterion5},
      {6, "random coding end to end", 120, criterion6},
      {7, "Renyi roots", 1, criterion7},
      {8, "Hessian consistency", 60, criterion8},
      {9, "sign claims", 30, criterion9},
      {10, "majorization lemmas", 120, criterion10},
      {11, "uniform optimality searches", 600, criterion11},
  };
  int failed = 0;
  for (const auto& item : items) {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      item.run(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > item.limit) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "runtime %.1fs over %.0fs", secs, item.limit);
      c.expect(false, buf);
    }
    std::printf("[%s] %2d %s (%.2fs)%s%s\n", c.ok ? "PASS" : "FAIL", item.id, item.title, secs,
                c.ok ? "" : ": ", c.notes.str().c_str());
    std::fflush(stdout);
    failed += !c.ok;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(items.size()) - failed, items.size());
  return failed == 0 ? 0 : 1;
}
