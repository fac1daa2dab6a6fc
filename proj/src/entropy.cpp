#include "bhlab/entropy.hpp"

#include "bhlab/rng.hpp"

#include <bit>
#include <cmath>
#include <numeric>

namespace bhlab {

double renyi(const Vector<double>& p, double alpha) {
  if (!(alpha >= 0)) throw Error(Errc::invalid_params, "alpha must be non-negative");
  if (p.size() == 0) throw Error(Errc::invalid_distribution, "empty distribution");
  double total = 0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p[i] < 0) throw Error(Errc::invalid_distribution, "negative mass");
    total += p[i];
  }
  if (std::abs(total - 1.0) > 1e-12) throw Error(Errc::invalid_distribution, "masses do not sum to 1");

  if (alpha == 0) {
    Eigen::Index positive = 0;
    for (Eigen::Index i = 0; i < p.size(); ++i) positive += p[i] > 0;
    return std::log2(static_cast<double>(positive));
  }
  if (std::isinf(alpha)) return -std::log2(p.maxCoeff());
  if (std::abs(alpha - 1.0) <= 1e-9) {
    double h = 0;
    for (Eigen::Index i = 0; i < p.size(); ++i)
      if (p[i] > 0) h -= p[i] * std::log2(p[i]);
    return h;
  }
  if (alpha == 2.0) return -std::log2(p.squaredNorm());
  double s = 0;
  for (Eigen::Index i = 0; i < p.size(); ++i)
    if (p[i] > 0) s += std::pow(p[i], alpha);
  return std::log2(s) / (1.0 - alpha);
}

double hessian_entry(int n, double alpha, int distance) {
  if (n < 1 || distance < 0 || distance > n) throw Error(Errc::invalid_params, "need 0 <= d <= n and n >= 1");
  const double first = 4 * alpha * (alpha - 1) * std::pow(4 + std::exp2(alpha), n - distance) *
                       std::exp2(alpha * distance - 2 * alpha * n);
  const double second = 2 * alpha * std::pow(std::exp2(distance - 2.0 * n), alpha - 1);
  return first + second;
}

Eigen::MatrixXd hessian_matrix(int n, double alpha) {
  if (n < 1 || n > 12) throw Error(Errc::invalid_params, "n out of range for a dense Hessian");
  const Eigen::Index size = Eigen::Index{1} << n;
  std::vector<double> by_distance(n + 1);
  for (int d = 0; d <= n; ++d) by_distance[d] = hessian_entry(n, alpha, d);
  Eigen::MatrixXd a(size, size);
  for (Eigen::Index x = 0; x < size; ++x)
    for (Eigen::Index y = 0; y < size; ++y)
      a(x, y) = by_distance[std::popcount(static_cast<std::uint64_t>(x ^ y))];
  return a;
}

namespace {

std::vector<std::int64_t> ternary_index(int n) {
  std::vector<std::int64_t> t(std::size_t{1} << n);
  for (std::size_t x = 0; x < t.size(); ++x) {
    std::int64_t v = 0, w = 1;
    for (int j = 0; j < n; ++j, w *= 3)
      if ((x >> j) & 1u) v += w;
    t[x] = v;
  }
  return t;
}

}  // namespace

long double collision_objective(const Eigen::Matrix<long double, Eigen::Dynamic, 1>& p, int n, long double alpha) {
  const auto t = ternary_index(n);
  std::int64_t zsize = 1;
  for (int j = 0; j < n; ++j) zsize *= 3;
  std::vector<long double> c(static_cast<std::size_t>(zsize), 0.0L);
  for (std::size_t x = 0; x < t.size(); ++x)
    for (std::size_t y = 0; y < t.size(); ++y) c[t[x] + t[y]] += p[x] * p[y];
  long double f = 0;
  for (long double cz : c)
    if (cz > 0) f += std::pow(cz, alpha);
  return f;
}

Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic> fd_hessian(int n, long double alpha, long double step) {
  const Eigen::Index size = Eigen::Index{1} << n;
  using Vec = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  const Vec uniform = Vec::Constant(size, 1.0L / static_cast<long double>(size));
  Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic> hess(size, size);
  auto f_at = [&](Eigen::Index i, long double si, Eigen::Index j, long double sj) {
    Vec q = uniform;
    q[i] += si;
    q[j] += sj;
    return collision_objective(q, n, alpha);
  };
  for (Eigen::Index i = 0; i < size; ++i)
    for (Eigen::Index j = i; j < size; ++j) {
      const long double v = (f_at(i, step, j, step) - f_at(i, step, j, -step) - f_at(i, -step, j, step) +
                             f_at(i, -step, j, -step)) /
                            (4 * step * step);
      hess(i, j) = hess(j, i) = v;
    }
  return hess;
}

double quadratic_form_explicit(int n, double alpha, int m) {
  if (m < 1 || m > n) throw Error(Errc::invalid_params, "need 1 <= m <= n");
  const Eigen::MatrixXd a = hessian_matrix(n, alpha);
  const std::uint64_t mask = (std::uint64_t{1} << m) - 1;
  long double s = 0;
  for (Eigen::Index x = 0; x < a.rows(); ++x)
    for (Eigen::Index y = 0; y < a.cols(); ++y) {
      const int sign = (std::popcount(static_cast<std::uint64_t>(x) & mask) + std::popcount(static_cast<std::uint64_t>(y) & mask)) % 2 ? -1 : 1;
      s += sign * static_cast<long double>(a(x, y));
    }
  return static_cast<double>(s);
}

double quadratic_form_closed(int n, double alpha, int m) {
  if (m < 1 || m > n) throw Error(Errc::invalid_params, "need 1 <= m <= n");
  const double half = std::exp2(alpha - 1);
  return std::exp2(1 + 3.0 * n - 2 * alpha * n) * alpha * std::pow(1 + half, n - m) *
         (std::pow(1 - half, m) + 2 * alpha - 2);
}

namespace {

template <typename F>
double bisect(F f, double lo, double hi) {
  double flo = f(lo);
  for (int i = 0; i < 200 && hi - lo > 1e-14; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

CriticalAlphas critical_alphas() {
  const double lower = bisect([](double a) { return std::exp2(a) * a - 4 * a + 2; }, 1.1, 2.0);
  const double upper = bisect([](double a) { return std::exp2(a) - 4 * a + 2; }, 3.0, 4.0);
  return {lower, upper};
}

TwoPoint sidon_two_point(double p, double a) {
  if (!(p >= 0 && p <= 1) || !(a > 0)) throw Error(Errc::invalid_params, "need 0 <= p <= 1 and alpha > 0");
  const double q = 1 - p, m = 2 * p * q, s = 1 - 2 * p;
  TwoPoint r;
  r.f = std::pow(p, 2 * a) + std::pow(m, a) + std::pow(q, 2 * a);
  r.df = 2 * a * std::pow(p, 2 * a - 1) + 2 * a * s * std::pow(m, a - 1) - 2 * a * std::pow(q, 2 * a - 1);
  const double mixed = s == 0 ? 0.0 : 4 * a * (a - 1) * s * s * std::pow(m, a - 2);
  r.d2f = 2 * a * (2 * a - 1) * (std::pow(p, 2 * a - 2) + std::pow(q, 2 * a - 2)) + mixed - 4 * a * std::pow(m, a - 1);
  return r;
}

double sidon_curvature_at_half(double a) { return -std::exp2(3 - 2 * a) * (std::exp2(a) - 4 * a + 2) * a; }

double hfold_renyi_bits(const std::vector<double>& p, int n, int h, double alpha) {
  if (n < 1 || n > 12 || p.size() != (std::size_t{1} << n)) throw Error(Errc::invalid_params, "need 2^n masses");
  if (h < 1) throw Error(Errc::invalid_params, "h must be at least 1");
  std::vector<std::size_t> t(p.size());
  std::size_t size = 1;
  for (int j = 0; j < n; ++j) size *= static_cast<std::size_t>(h + 1);
  for (std::size_t x = 0; x < p.size(); ++x) {
    std::size_t v = 0, w = 1;
    for (int j = 0; j < n; ++j, w *= static_cast<std::size_t>(h + 1))
      if ((x >> j) & 1u) v += w;
    t[x] = v;
  }
  std::vector<double> cur(size, 0.0), next(size);
  cur[0] = 1.0;
  for (int step = 0; step < h; ++step) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t z = 0; z < size; ++z) {
      if (cur[z] == 0) continue;
      for (std::size_t x = 0; x < p.size(); ++x) next[z + t[x]] += cur[z] * p[x];
    }
    cur.swap(next);
  }
  Vector<double> law = Eigen::Map<Vector<double>>(cur.data(), static_cast<Eigen::Index>(cur.size()));
  const double total = law.sum();
  law /= total;
  return renyi(law, alpha);
}

SearchReport uniform_optimality_search(int n, double alpha, int h, std::size_t trials, std::uint64_t seed) {
  SearchReport r;
  r.n = n;
  r.h = h;
  r.alpha = alpha;
  r.trials = trials;
  r.seed = seed;
  const std::size_t size = std::size_t{1} << n;
  const std::vector<double> uniform(size, 1.0 / static_cast<double>(size));
  r.uniform_value = hfold_renyi_bits(uniform, n, h, alpha);

  const CounterRng root(seed);
  std::vector<double> p(size);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    CounterRng rng = root.derive(trial);
    double total = 0;
    for (auto& x : p) {
      x = -std::log(rng.uniform());
      total += x;
    }
    for (auto& x : p) x /= total;
    const double v = hfold_renyi_bits(p, n, h, alpha);
    if (v > r.best_value) {
      r.best_value = v;
      r.best_distribution = p;
      r.best_source = "dirichlet";
      r.best_trial = static_cast<long long>(trial);
    }
  }

  // p + eps v, v_x = (-1)^{#1(x)}, eps in (0, 2^-n]
  auto along = [&](double eps) {
    std::vector<double> q(size);
    for (std::size_t x = 0; x < size; ++x) q[x] = uniform[x] + (std::popcount(x) % 2 ? -eps : eps);
    return q;
  };
  auto value = [&](double eps) { return hfold_renyi_bits(along(eps), n, h, alpha); };
  const double inv_phi = (std::sqrt(5.0) - 1) / 2;
  double lo = 1e-3 * uniform[0], hi = uniform[0];
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = value(x1), f2 = value(x2);
  for (int i = 0; i < 100 && hi - lo > 1e-12 * uniform[0]; ++i) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = value(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = value(x1);
    }
  }
  r.perturbation_epsilon = 0.5 * (lo + hi);
  r.perturbation_value = value(r.perturbation_epsilon);
  if (r.perturbation_value > r.best_value) {
    r.best_value = r.perturbation_value;
    r.best_distribution = along(r.perturbation_epsilon);
    r.best_source = "perturbation";
    r.best_trial = -1;
  }
  r.gap = r.uniform_value - r.best_value;
  r.counterexample = r.best_value > r.uniform_value;
  return r;
}

nlohmann::json to_json(const SearchReport& r) {
  return {{"n", r.n},
          {"h", r.h},
          {"alpha", r.alpha},
          {"trials", r.trials},
          {"seed", r.seed},
          {"sampling_law", r.sampling_law},
          {"uniform_value", r.uniform_value},
          {"best_value", r.best_value},
          {"best_distribution", r.best_distribution},
          {"best_source", r.best_source},
          {"best_trial", r.best_trial},
          {"perturbation_epsilon", r.perturbation_epsilon},
          {"perturbation_value", r.perturbation_value},
          {"gap", r.gap},
          {"counterexample", r.counterexample}};
}

std::vector<Rational> weighted_bit_sum_law(const std::vector<int>& coefficients) {
  int top = 0;
  for (int c : coefficients) {
    if (c < 1) throw Error(Errc::invalid_params, "coefficients must be positive");
    top += c;
  }
  std::vector<BigInt> count(static_cast<std::size_t>(top) + 1, 0);
  count[0] = 1;
  int reach = 0;
  for (int c : coefficients) {
    for (int a = reach; a >= 0; --a) count[a + c] += count[a];
    reach += c;
  }
  const BigInt denom = BigInt(1) << coefficients.size();
  std::vector<Rational> law;
  law.reserve(count.size());
  for (const auto& k : count) law.emplace_back(k, denom);
  return law;
}

Rational power_sum(const std::vector<Rational>& law, int g) {
  Rational s = 0;
  for (const auto& p : law) s += pow(p, static_cast<unsigned>(g + 1));
  return s;
}

}  // namespace bhlab
