#pragma once

#include "bhlab/caps.hpp"
#include "bhlab/distribution.hpp"
#include "bhlab/errors.hpp"
#include "bhlab/rational.hpp"

#include <Eigen/Core>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace bhlab {

namespace detail {

struct LexLess {
  bool operator()(const GroupElement& a, const GroupElement& b) const { return lex_less(a, b); }
};

template <typename Scalar>
double as_double(const Scalar& x) {
  if constexpr (std::is_same_v<Scalar, Rational>)
    return to_double(x);
  else
    return static_cast<double>(x);
}

}  // namespace detail

/// Exact h-fold convolution over integer-vector addition.
template <typename Scalar>
Distribution<Scalar> hfold(const Distribution<Scalar>& dist, int h, const Caps& caps = {}) {
  if (h < 1) throw Error(Errc::invalid_params, "h must be at least 1");
  std::map<GroupElement, Scalar, detail::LexLess> cur;
  for (std::size_t i = 0; i < dist.size(); ++i)
    if (dist.mass(i) != Scalar(0)) cur[dist.support()[i]] += dist.mass(i);
  const auto base = cur;
  for (int step = 1; step < h; ++step) {
    std::map<GroupElement, Scalar, detail::LexLess> next;
    for (const auto& [x, px] : cur)
      for (const auto& [y, py] : base) {
        next[x + y] += px * py;
        if (next.size() > caps.hfold_support)
          throw Error(Errc::cap_exceeded, "h-fold support exceeds cap " + std::to_string(caps.hfold_support));
      }
    cur = std::move(next);
  }
  std::vector<GroupElement> support;
  Vector<Scalar> mass(static_cast<Eigen::Index>(cur.size()));
  Eigen::Index i = 0;
  for (auto& [x, px] : cur) {
    support.push_back(x);
    mass[i++] = px;
  }
  return Distribution<Scalar>(std::move(support), std::move(mass));
}

/// Sum of squared masses.
template <typename Scalar>
Scalar collision_probability(const Distribution<Scalar>& dist) {
  Scalar s(0);
  for (Eigen::Index i = 0; i < dist.masses().size(); ++i) s += dist.masses()[i] * dist.masses()[i];
  return s;
}

/// Renyi entropy in bits of a probability vector. alpha = infinity is allowed.
double renyi(const Vector<double>& p, double alpha);

template <typename Scalar>
double renyi(const Distribution<Scalar>& dist, double alpha) {
  if constexpr (std::is_same_v<Scalar, Rational>) {
    if (alpha == 2.0) return -log2(collision_probability(dist));
  }
  Vector<double> p(dist.masses().size());
  for (Eigen::Index i = 0; i < p.size(); ++i) p[i] = detail::as_double(dist.masses()[i]);
  return renyi(p, alpha);
}

inline double collision_entropy(const Distribution<Rational>& dist) { return -log2(collision_probability(dist)); }

// Hessian of f(p) = sum_z c_z^alpha, c = p * p on {0,1}^n, at the uniform point.

double hessian_entry(int n, double alpha, int distance);
Eigen::MatrixXd hessian_matrix(int n, double alpha);
/// f at an arbitrary point of R^{2^n}.
long double collision_objective(const Eigen::Matrix<long double, Eigen::Dynamic, 1>& p, int n, long double alpha);
/// Central differences of f at uniform.
Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic> fd_hessian(int n, long double alpha, long double step = 1e-5L);
/// v^t A v with v_x = (-1)^{x_1+...+x_m}.
double quadratic_form_explicit(int n, double alpha, int m);
double quadratic_form_closed(int n, double alpha, int m);

struct CriticalAlphas {
  double lower;  // root of 2^a a - 4a + 2 in [1.1, 2]
  double upper;  // root of 2^a - 4a + 2 in [3, 4]
};
CriticalAlphas critical_alphas();

struct TwoPoint {
  double f, df, d2f;
};
/// f(p) = p^{2a} + (2p(1-p))^a + (1-p)^{2a} and its first two derivatives.
TwoPoint sidon_two_point(double p, double alpha);
/// -2^{3-2a} (2^a - 4a + 2) a.
double sidon_curvature_at_half(double alpha);

struct SearchReport {
  int n = 0, h = 0;
  double alpha = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::string sampling_law = "dirichlet(1,...,1)";
  double uniform_value = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  std::vector<double> best_distribution;
  std::string best_source;
  long long best_trial = -1;
  double perturbation_epsilon = 0;
  double perturbation_value = 0;
  double gap = 0;  // uniform - best
  bool counterexample = false;
};

/// H_alpha of the h-fold sum of a law on {0,1}^n given as 2^n masses (little-endian index).
double hfold_renyi_bits(const std::vector<double>& p, int n, int h, double alpha);
SearchReport uniform_optimality_search(int n, double alpha, int h, std::size_t trials, std::uint64_t seed);
nlohmann::json to_json(const SearchReport& r);

// Majorization on finitely supported non-negative sequences (p_a)_{a >= 0}.

namespace detail {
template <typename Scalar>
void check_nonneg(const Vector<Scalar>& s) {
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] < Scalar(0)) throw Error(Errc::invalid_params, "sequence has a negative entry");
}
}  // namespace detail

template <typename Scalar>
Vector<Scalar> rearrange_T(Vector<Scalar> s) {
  detail::check_nonneg(s);
  std::sort(s.begin(), s.end(), [](const Scalar& a, const Scalar& b) { return b < a; });
  return s;
}

/// ... T4 T2 T0 T1 T3 T5 ... with the zeros on the left dropped.
template <typename Scalar>
Vector<Scalar> rearrange_S(const Vector<Scalar>& s) {
  Vector<Scalar> t = rearrange_T(s);
  Eigen::Index m = t.size();
  while (m > 0 && t[m - 1] == Scalar(0)) --m;
  Vector<Scalar> out(m);
  Eigen::Index pos = 0;
  for (Eigen::Index j = (m - 1) / 2; j >= 1; --j) out[pos++] = t[2 * j];
  if (m > 0) out[pos++] = t[0];
  for (Eigen::Index j = 1; j < m; j += 2) out[pos++] = t[j];
  return out;
}

/// (p_a + p_{a-c})_{a >= 0}.
template <typename Scalar>
Vector<Scalar> shift_add_C(const Vector<Scalar>& s, int c) {
  if (c == 0) throw Error(Errc::invalid_params, "shift must be nonzero");
  detail::check_nonneg(s);
  const Eigen::Index len = s.size();
  const Eigen::Index out_len = c > 0 ? len + c : len;
  Vector<Scalar> out(out_len);
  for (Eigen::Index a = 0; a < out_len; ++a) {
    Scalar v = a < len ? s[a] : Scalar(0);
    const Eigen::Index b = a - c;
    if (b >= 0 && b < len) v += s[b];
    out[a] = v;
  }
  return out;
}

/// p is majorized by q: prefix sums of T(p) never exceed those of T(q).
template <typename Scalar>
bool is_majorized_by(const Vector<Scalar>& p, const Vector<Scalar>& q) {
  const Vector<Scalar> tp = rearrange_T(p), tq = rearrange_T(q);
  const Eigen::Index len = std::max(tp.size(), tq.size());
  Scalar sp(0), sq(0);
  for (Eigen::Index i = 0; i < len; ++i) {
    if (i < tp.size()) sp += tp[i];
    if (i < tq.size()) sq += tq[i];
    if (sq < sp) return false;
  }
  return true;
}

/// Law of sum_i c_i X_i with X_i uniform bits, indexed by the value.
std::vector<Rational> weighted_bit_sum_law(const std::vector<int>& coefficients);
/// sum_a P(X = a)^{g+1} for the law above.
Rational power_sum(const std::vector<Rational>& law, int g);

}  // namespace bhlab
