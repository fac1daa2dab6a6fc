#include <doctest.h>

#include "bhlab/configurations.hpp"
#include "bhlab/entropy.hpp"
#include "bhlab/errors.hpp"
#include "bhlab/rng.hpp"

#include <cmath>
#include <limits>

using namespace bhlab;

namespace {

Vector<Rational> seq(std::initializer_list<Rational> xs) {
  Vector<Rational> v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (const auto& x : xs) v[i++] = x;
  return v;
}

Rational r(long long a, long long b = 1) { return Rational(a, b); }

Vector<Rational> random_sequence(CounterRng& rng, int max_len) {
  const int len = 1 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(max_len));
  Vector<Rational> v(len);
  for (int i = 0; i < len; ++i) v[i] = Rational(static_cast<long long>(rng.next() % 7), 6);
  return v;
}

}  // namespace

TEST_CASE("renyi basics") {
  const double inf = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= 4; ++n) {
    auto u = Distribution<Rational>::uniform_bits(n);
    for (double a : {0.0, 0.5, 1.0, 2.0, 3.0, inf}) CHECK(renyi(u, a) == doctest::Approx(n).epsilon(1e-12));
  }
  GroupElement z = GroupElement::Zero(1);
  auto pm = Distribution<Rational>::point_mass(z);
  for (double a : {0.0, 0.5, 1.0, 2.0, inf}) CHECK(renyi(pm, a) == doctest::Approx(0.0));
  auto d = hfold(Distribution<Rational>::uniform_bits(1), 2);
  CHECK(renyi(d, 2.0) == doctest::Approx(std::log2(8.0 / 3)).epsilon(1e-14));
  CHECK(renyi(d, 1.0 + 1e-10) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK_THROWS_AS(renyi(d, -1.0), Error);
}

TEST_CASE("renyi is nonincreasing in alpha") {
  CounterRng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    Vector<double> p(5);
    for (Eigen::Index i = 0; i < p.size(); ++i) p[i] = -std::log(rng.uniform());
    p /= p.sum();
    double prev = renyi(p, 0.0);
    for (double a = 0.25; a <= 6; a += 0.25) {
      const double v = renyi(p, a);
      CHECK(v <= prev + 1e-12);
      prev = v;
    }
    CHECK(renyi(p, std::numeric_limits<double>::infinity()) <= prev + 1e-12);
  }
}

TEST_CASE("hfold") {
  auto d = hfold(Distribution<Rational>::uniform_bits(1), 2);
  REQUIRE(d.size() == 3);
  CHECK(d.mass(0) == r(1, 4));
  CHECK(d.mass(1) == r(1, 2));
  CHECK(d.mass(2) == r(1, 4));
  for (int h = 1; h <= 10; ++h) {
    auto b = hfold(Distribution<Rational>::uniform_bits(1), h);
    for (int i = 0; i <= h; ++i) CHECK(b.mass(i) == Rational(binomial(h, i), BigInt(1) << h));
    CHECK(collision_probability(b) == cmax_p_closed(h, 1).value());
  }
  GroupElement v(2);
  v << 1, 3;
  auto pm = hfold(Distribution<Rational>::point_mass(v), 4);
  REQUIRE(pm.size() == 1);
  CHECK(pm.support()[0] == GroupElement(v * 4));
  Caps tiny;
  tiny.hfold_support = 4;
  CHECK_THROWS_AS(hfold(Distribution<Rational>::uniform_bits(2), 3, tiny), Error);
}

TEST_CASE("hessian entries") {
  CHECK(hessian_entry(1, 2.0, 0) == doctest::Approx(5.0));
  for (int n = 1; n <= 4; ++n) {
    const double a = 1.7;
    CHECK(hessian_entry(n, a, n) ==
          doctest::Approx(4 * a * (a - 1) * std::exp2(a * n - 2 * a * n) + 2 * a * std::pow(std::exp2(-n), a - 1)));
  }
}

TEST_CASE("hessian matrix structure") {
  for (int n = 1; n <= 4; ++n)
    for (double a : {0.5, 1.5, 3.0}) {
      auto m = hessian_matrix(n, a);
      CHECK((m - m.transpose()).cwiseAbs().maxCoeff() == 0.0);
      Eigen::VectorXd row = m * Eigen::VectorXd::Ones(m.rows());
      CHECK((row.array() - row[0]).abs().maxCoeff() <= 1e-12 * m.cwiseAbs().maxCoeff() * m.rows());
    }
}

TEST_CASE("finite difference hessian") {
  for (int n = 1; n <= 2; ++n)
    for (double a : {0.5, 1.5, 3.0}) {
      auto m = hessian_matrix(n, a);
      auto f = fd_hessian(n, a);
      for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
          CHECK(std::abs(static_cast<double>(f(i, j)) - m(i, j)) <= 1e-6 * std::abs(m(i, j)));
    }
}

TEST_CASE("quadratic forms") {
  CHECK(quadratic_form_closed(1, 2.0, 1) == doctest::Approx(2.0));
  CHECK(quadratic_form_explicit(1, 2.0, 1) == doctest::Approx(2.0));
  CHECK(quadratic_form_closed(3, 3.0, 3) < 0);
  CHECK(std::pow(2 - 8.0, 3) + 16 * 2 == -184);
  for (int n = 1; n <= 6; ++n)
    for (int m = 1; m <= n; ++m) CHECK(quadratic_form_closed(n, 1.5, m) > 0);
  for (int n = 1; n <= 4; ++n)
    for (int m = 1; m <= n; ++m)
      for (double a : {0.5, 1.5, 2.5, 3.0}) {
        const double c = quadratic_form_closed(n, a, m), e = quadratic_form_explicit(n, a, m);
        CHECK(std::abs(c - e) <= 1e-10 * std::abs(e));
      }
  // m = n agrees with the form written through (2 - 2^a)^n
  for (int n = 1; n <= 5; ++n)
    for (double a : {1.2, 2.0, 3.0}) {
      const double other = (std::pow(2 - std::exp2(a), n) + std::exp2(n + 1) * (a - 1)) * std::exp2(1 + 2 * n - 2 * a * n) * a;
      CHECK(quadratic_form_closed(n, a, n) == doctest::Approx(other).epsilon(1e-12));
    }
  CHECK_THROWS_AS(quadratic_form_closed(3, 2.0, 0), Error);
  CHECK_THROWS_AS(quadratic_form_closed(3, 2.0, 4), Error);
}

TEST_CASE("h(a) = 2a - 1 - 2^(a-1)") {
  auto h = [](double a) { return 2 * a - 1 - std::exp2(a - 1); };
  CHECK(h(1.0) == 0.0);
  for (int i = 0; i <= 2000; ++i) {
    const double a = i * 1e-3;
    if (a < 1 - 1e-9) CHECK(h(a) < 0);
    if (a > 1 + 1e-9) CHECK(h(a) > 0);
    CHECK(2 - std::exp2(a - 1) * std::log(2.0) > 0);
  }
}

TEST_CASE("critical alphas") {
  auto c = critical_alphas();
  CHECK(std::abs(c.lower - 1.29856) <= 1e-5);
  CHECK(std::abs(c.upper - 3.65986) <= 1e-5);
  CHECK(std::exp2(2.0) * 2 - 8 + 2 == 2);
  CHECK(std::exp2(1.1) * 1.1 - 4.4 + 2 < 0);
}

TEST_CASE("two-point family") {
  for (double p : {0.0, 0.1, 0.3, 0.5, 0.9}) CHECK(sidon_two_point(p, 1.0).f == doctest::Approx(1.0));
  for (double a : {0.7, 1.2, 2.5, 4.0}) {
    auto t = sidon_two_point(0.5, a);
    CHECK(t.df == doctest::Approx(0.0));
    CHECK(t.d2f == doctest::Approx(sidon_curvature_at_half(a)).epsilon(1e-12));
    const double eps = 1e-4;
    const double fd = (sidon_two_point(0.5 + eps, a).f - 2 * t.f + sidon_two_point(0.5 - eps, a).f) / (eps * eps);
    CHECK(fd == doctest::Approx(t.d2f).epsilon(1e-5));
  }
  CHECK(sidon_curvature_at_half(4.0) == doctest::Approx(-0.25));
  CHECK(sidon_curvature_at_half(1.2) > 0);
}

TEST_CASE("uniform optimality search") {
  auto r = uniform_optimality_search(2, 2.0, 2, 500, 1);
  CHECK_FALSE(r.counterexample);
  CHECK(r.gap >= 0);
  auto s = uniform_optimality_search(3, 3.0, 2, 50, 1);
  CHECK(s.perturbation_value > s.uniform_value);
  CHECK(s.counterexample);
  auto j = to_json(s);
  CHECK(j["sampling_law"] == "dirichlet(1,...,1)");
  std::vector<double> point(4, 0.0);
  point[0] = 1;
  CHECK(hfold_renyi_bits(point, 2, 2, 2.0) == doctest::Approx(0.0));
}

TEST_CASE("rearrangements") {
  CHECK(rearrange_T(seq({r(2, 10), r(5, 10), r(3, 10)})) == seq({r(5, 10), r(3, 10), r(2, 10)}));
  CHECK(rearrange_T(seq({r(3), r(2), r(1)})) == seq({r(3), r(2), r(1)}));
  CHECK(rearrange_T(seq({r(1), r(1)})) == seq({r(1), r(1)}));
  CHECK(rearrange_S(seq({r(5, 10), r(3, 10), r(2, 10)})) == seq({r(2, 10), r(5, 10), r(3, 10)}));
  CHECK(rearrange_S(seq({r(7)})) == seq({r(7)}));
  CHECK(rearrange_S(seq({r(4, 10), r(3, 10), r(2, 10), r(1, 10)})) ==
        seq({r(2, 10), r(4, 10), r(3, 10), r(1, 10)}));
  CHECK(shift_add_C(seq({r(1, 2), r(1, 2)}), 1) == seq({r(1, 2), r(1), r(1, 2)}));
  CHECK(shift_add_C(seq({r(0), r(0)}), 2) == seq({r(0), r(0), r(0), r(0)}));
  CHECK(shift_add_C(seq({r(1)}), 5) == seq({r(1), r(0), r(0), r(0), r(0), r(1)}));
  CHECK_THROWS_AS(shift_add_C(seq({r(1)}), 0), Error);
  CHECK_THROWS_AS(rearrange_T(seq({r(-1)})), Error);
}

TEST_CASE("majorization") {
  CHECK(is_majorized_by(seq({r(1, 2), r(1, 2)}), seq({r(1), r(0)})));
  CHECK_FALSE(is_majorized_by(seq({r(1), r(0)}), seq({r(1, 2), r(1, 2)})));
  CHECK(is_majorized_by(seq({r(1, 4), r(1, 4), r(1, 4), r(1, 4)}), seq({r(1, 4), r(1, 2), r(1, 4)})));
}

TEST_CASE("majorization lemmas on random sequences") {
  CounterRng rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    auto p = random_sequence(rng, 8);
    for (int c : {-3, -2, -1, 1, 2, 3}) CHECK(is_majorized_by(shift_add_C(p, c), shift_add_C(rearrange_S(p), 1)));
  }
}

TEST_CASE("weighted bit sums") {
  auto law = weighted_bit_sum_law({1, 2});
  REQUIRE(law.size() == 4);
  for (const auto& x : law) CHECK(x == r(1, 4));
  for (int d = 1; d <= 4; ++d)
    for (int g = 1; g <= 3; ++g) CHECK(power_sum(weighted_bit_sum_law(std::vector<int>(d, 1)), g) == cmax_p_closed(d, g).value());
}
