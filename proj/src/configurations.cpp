#include "bhlab/configurations.hpp"

#include "bhlab/errors.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

namespace bhlab {

namespace {

using u64 = std::uint64_t;
using Matrix = std::vector<std::vector<int>>;  // variables x columns

u64 radix_power(int base, int exp) {
  u64 r = 1;
  for (int i = 0; i < exp; ++i) {
    if (r > (~u64{0} >> 1) / static_cast<u64>(base)) throw Error(Errc::invalid_params, "configuration too large to encode");
    r *= static_cast<u64>(base);
  }
  return r;
}

// Minimum over signature-preserving column orders of the sorted variable codes.
std::pair<std::vector<u64>, std::vector<int>> canonical_key(const Matrix& m, int k, int l) {
  const int d = static_cast<int>(m.size());
  radix_power(k + 1, l);
  std::vector<int> spread(d, 0), total(d, 0);
  for (int v = 0; v < d; ++v)
    for (int j = 0; j < l; ++j) {
      spread[v] += m[v][j] > 0;
      total[v] += m[v][j];
    }
  std::vector<std::vector<std::tuple<int, int, int>>> sig(l);
  for (int j = 0; j < l; ++j) {
    for (int v = 0; v < d; ++v)
      if (m[v][j] > 0) sig[j].emplace_back(m[v][j], spread[v], total[v]);
    std::sort(sig[j].begin(), sig[j].end());
  }
  std::vector<int> order(l);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return sig[a] < sig[b]; });
  std::vector<std::pair<int, int>> blocks;
  for (int i = 0; i < l;) {
    int j = i;
    while (j < l && sig[order[j]] == sig[order[i]]) ++j;
    blocks.emplace_back(i, j);
    i = j;
  }

  std::vector<u64> best;
  std::vector<int> best_order;
  std::vector<u64> codes(d);
  auto evaluate = [&] {
    for (int v = 0; v < d; ++v) {
      u64 c = 0;
      for (int j = 0; j < l; ++j) c = c * static_cast<u64>(k + 1) + static_cast<u64>(m[v][order[j]]);
      codes[v] = c;
    }
    std::sort(codes.begin(), codes.end());
    if (best.empty() || codes < best) {
      best = codes;
      best_order = order;
    }
  };
  auto rec = [&](auto&& self, std::size_t b) -> void {
    if (b == blocks.size()) {
      evaluate();
      return;
    }
    auto first = order.begin() + blocks[b].first;
    auto last = order.begin() + blocks[b].second;
    std::sort(first, last);
    do {
      self(self, b + 1);
    } while (std::next_permutation(first, last));
  };
  rec(rec, 0);
  return {best, best_order};
}

Matrix to_matrix(const std::vector<std::vector<int>>& columns, int& k) {
  if (columns.empty()) throw Error(Errc::invalid_params, "configuration needs at least one column");
  k = static_cast<int>(columns.front().size());
  if (k < 1) throw Error(Errc::invalid_params, "columns must be nonempty");
  std::map<int, int> ids;
  for (const auto& col : columns) {
    if (static_cast<int>(col.size()) != k) throw Error(Errc::invalid_params, "columns of different sizes");
    for (int x : col) ids.emplace(x, static_cast<int>(ids.size()));
  }
  Matrix m(ids.size(), std::vector<int>(columns.size(), 0));
  for (std::size_t j = 0; j < columns.size(); ++j)
    for (int x : columns[j]) ++m[ids[x]][j];
  return m;
}

Configuration from_matrix_columns(const Matrix& m) {
  const int l = static_cast<int>(m.front().size());
  std::vector<std::vector<int>> cols(l);
  for (std::size_t v = 0; v < m.size(); ++v)
    for (int j = 0; j < l; ++j)
      for (int t = 0; t < m[v][j]; ++t) cols[j].push_back(static_cast<int>(v));
  return Configuration::from_columns(cols);
}

// Vector partitions of (k,...,k) into multiplicity vectors with a zero entry.
template <class F>
void for_each_vector_partition(int k, int l, int max_parts, F&& f) {
  const u64 base = static_cast<u64>(k + 1);
  const u64 count = radix_power(k + 1, l);
  std::vector<std::vector<int>> vectors;
  for (u64 code = count; code-- > 1;) {
    std::vector<int> v(l);
    u64 c = code;
    bool has_zero = false;
    for (int j = l - 1; j >= 0; --j) {
      v[j] = static_cast<int>(c % base);
      c /= base;
      has_zero |= v[j] == 0;
    }
    if (has_zero) vectors.push_back(std::move(v));
  }
  std::vector<int> rest(l, k);
  std::vector<int> chosen;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    int lead = 0;
    while (lead < l && rest[lead] == 0) ++lead;
    if (lead == l) {
      f(chosen, vectors);
      return;
    }
    if (max_parts >= 0 && static_cast<int>(chosen.size()) >= max_parts) return;
    for (std::size_t i = start; i < vectors.size(); ++i) {
      const auto& v = vectors[i];
      if (v[lead] == 0) {
        bool earlier = false;
        for (int j = 0; j < lead; ++j) earlier |= v[j] != 0;
        if (!earlier) break;  // all later vectors are zero up to `lead` as well
        continue;
      }
      bool fits = true;
      for (int j = 0; j < l && fits; ++j) fits = v[j] <= rest[j];
      if (!fits) continue;
      for (int j = 0; j < l; ++j) rest[j] -= v[j];
      chosen.push_back(static_cast<int>(i));
      self(self, i);
      chosen.pop_back();
      for (int j = 0; j < l; ++j) rest[j] += v[j];
    }
  };
  rec(rec, 0);
}

std::vector<Configuration> enumerate_impl(int k, int l, int max_variables) {
  std::set<Configuration> found;
  for_each_vector_partition(k, l, max_variables, [&](const std::vector<int>& chosen, const std::vector<std::vector<int>>& vectors) {
    // property 4: distinct columns
    for (int a = 0; a < l; ++a)
      for (int b = a + 1; b < l; ++b) {
        bool same = true;
        for (int i : chosen) same &= vectors[i][a] == vectors[i][b];
        if (same) return;
      }
    Matrix m;
    for (int i : chosen) m.push_back(vectors[i]);
    found.insert(from_matrix_columns(m));
  });
  return {found.begin(), found.end()};
}

void check_shape(int k, int l) {
  if (k < 1) throw Error(Errc::invalid_params, "k must be at least 1");
  if (l < 2) throw Error(Errc::invalid_params, "l must be at least 2");
}

}  // namespace

Configuration Configuration::from_columns(const std::vector<std::vector<int>>& columns) {
  int k = 0;
  Matrix m = to_matrix(columns, k);
  const int l = static_cast<int>(columns.size());
  auto [key, order] = canonical_key(m, k, l);
  Configuration c;
  c.k_ = k;
  c.l_ = l;
  c.d_ = static_cast<int>(m.size());
  c.key_ = key;
  // Decode the key into columns, then number variables by first occurrence.
  std::vector<std::vector<int>> cols(l);
  for (int v = 0; v < c.d_; ++v) {
    u64 code = key[v];
    for (int j = l - 1; j >= 0; --j) {
      const int mult = static_cast<int>(code % static_cast<u64>(k + 1));
      code /= static_cast<u64>(k + 1);
      for (int t = 0; t < mult; ++t) cols[j].push_back(v);
    }
  }
  std::vector<int> relabel(c.d_, -1);
  int next = 0;
  for (auto& col : cols) {
    for (int& x : col) {
      if (relabel[x] < 0) relabel[x] = next++;
      x = relabel[x];
    }
    std::sort(col.begin(), col.end());
  }
  c.columns_ = std::move(cols);
  return c;
}

std::vector<std::vector<int>> Configuration::multiplicities() const {
  Matrix m(d_, std::vector<int>(l_, 0));
  for (int j = 0; j < l_; ++j)
    for (int x : columns_[j]) ++m[x][j];
  return m;
}

bool Configuration::is_valid() const {
  if (l_ < 2) return false;
  for (const auto& row : multiplicities())
    if (std::all_of(row.begin(), row.end(), [](int x) { return x > 0; })) return false;
  for (int a = 0; a < l_; ++a)
    for (int b = a + 1; b < l_; ++b)
      if (columns_[a] == columns_[b]) return false;
  return true;
}

bool Configuration::is_separable() const {
  for (const auto& row : multiplicities())
    if (std::count_if(row.begin(), row.end(), [](int x) { return x > 0; }) > 1) return false;
  return true;
}

std::string Configuration::str() const {
  std::string s = "(";
  for (int j = 0; j < l_; ++j) {
    if (j) s += '|';
    for (std::size_t i = 0; i < columns_[j].size(); ++i) {
      const int x = columns_[j][i];
      if (d_ <= 26) {
        s += static_cast<char>('a' + x);
      } else {
        if (i) s += ' ';
        s += "x" + std::to_string(x);
      }
    }
  }
  return s + ")";
}

std::strong_ordering operator<=>(const Configuration& a, const Configuration& b) {
  if (auto c = a.k_ <=> b.k_; c != 0) return c;
  if (auto c = a.l_ <=> b.l_; c != 0) return c;
  if (auto c = a.d_ <=> b.d_; c != 0) return c;
  return a.key_ <=> b.key_;
}

std::vector<Configuration> enumerate_conf(int k, int l, const Caps& caps, int max_variables) {
  check_shape(k, l);
  if (k * l > caps.conf_cells)
    throw Error(Errc::cap_exceeded, "k*l = " + std::to_string(k * l) + " exceeds cap " + std::to_string(caps.conf_cells));
  return enumerate_impl(k, l, max_variables);
}

std::vector<Configuration> enumerate_conf_upto(int h, int l, const Caps& caps) {
  if (h < 1) throw Error(Errc::invalid_params, "h must be at least 1");
  std::vector<Configuration> out;
  for (int k = 1; k <= h; ++k) {
    auto part = enumerate_conf(k, l, caps);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

std::vector<Configuration> enumerate_sconf(int k, int l, const Caps& caps) {
  auto all = enumerate_conf(k, l, caps);
  std::vector<Configuration> out;
  std::copy_if(all.begin(), all.end(), std::back_inserter(out), [](const Configuration& c) { return c.is_separable(); });
  return out;
}

std::vector<Configuration> enumerate_sconf_upto(int h, int l, const Caps& caps) {
  if (h < 1) throw Error(Errc::invalid_params, "h must be at least 1");
  std::vector<Configuration> out;
  for (int k = 1; k <= h; ++k) {
    auto part = enumerate_sconf(k, l, caps);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

std::vector<Configuration> enumerate_conf_sharp(int h, int d, const Caps& caps) {
  if (h < 1) throw Error(Errc::invalid_params, "h must be at least 1");
  if (d < h) throw Error(Errc::invalid_params, "d must be at least h");
  std::vector<Configuration> out;
  for (int k = 1; k <= h; ++k) {
    const int max_vars = d + k;
    const int lower = d + 1 - h + k;
    const int after_removal = d - h + k;
    // every column owns a private variable, so l <= d(C) <= d + k
    const int max_cols = std::min(caps.sharp_columns, max_vars);
    for (int l = 2; l <= max_cols; ++l) {
      for (auto& c : enumerate_impl(k, l, max_vars)) {
        if (c.variables() < lower) continue;
        const auto m = c.multiplicities();
        bool ok = true;
        for (int j = 0; j < l && ok; ++j) {
          int remaining = 0;
          for (const auto& row : m) {
            int elsewhere = 0;
            for (int t = 0; t < l; ++t)
              if (t != j) elsewhere += row[t];
            remaining += elsewhere > 0;
          }
          ok = remaining <= after_removal;
        }
        if (ok) out.push_back(std::move(c));
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

ConfStats conf_stats(const Configuration& c, const Caps& caps) {
  const int d = c.variables();
  if (d > caps.conf_variables)
    throw Error(Errc::cap_exceeded, "d(C) = " + std::to_string(d) + " exceeds cap " + std::to_string(caps.conf_variables));
  const int l = c.cols();
  const auto m = c.multiplicities();
  // diff[v][j] = contribution of variable v to (column j+1) - (column 0)
  std::vector<std::vector<int>> diff(d, std::vector<int>(l - 1));
  for (int v = 0; v < d; ++v)
    for (int j = 1; j < l; ++j) diff[v][j - 1] = m[v][j] - m[v][0];
  std::vector<int> acc(l - 1, 0);
  std::vector<char> x(d, 0);
  u64 hits = 0;
  const u64 total = u64{1} << d;
  for (u64 step = 0;; ++step) {
    if (std::all_of(acc.begin(), acc.end(), [](int a) { return a == 0; })) ++hits;
    if (step + 1 == total) break;
    const int v = std::countr_zero(step + 1);
    const int sign = x[v] ? -1 : 1;
    x[v] ^= 1;
    for (int j = 0; j < l - 1; ++j) acc[j] += sign * diff[v][j];
  }
  return {d, ExactProbability(Rational(BigInt(hits), BigInt(1) << d))};
}

namespace {

template <typename Acc>
Acc weighted_equal_sum(const std::vector<std::vector<int>>& m, int l, const std::vector<GroupElement>& points,
                       const std::vector<u64>& weights) {
  const int d = static_cast<int>(m.size());
  const int dim = static_cast<int>(points.front().size());
  std::vector<std::int64_t> sums(static_cast<std::size_t>(l) * dim, 0);
  Acc total = 0;
  auto rec = [&](auto&& self, int v, const Acc& w) -> void {
    if (v == d) {
      for (int j = 1; j < l; ++j)
        if (!std::equal(sums.begin() + j * dim, sums.begin() + (j + 1) * dim, sums.begin())) return;
      total += w;
      return;
    }
    for (std::size_t s = 0; s < points.size(); ++s) {
      for (int j = 0; j < l; ++j)
        if (m[v][j])
          for (int t = 0; t < dim; ++t) sums[j * dim + t] += m[v][j] * points[s][t];
      self(self, v + 1, w * Acc(weights[s]));
      for (int j = 0; j < l; ++j)
        if (m[v][j])
          for (int t = 0; t < dim; ++t) sums[j * dim + t] -= m[v][j] * points[s][t];
    }
  };
  rec(rec, 0, Acc(1));
  return total;
}

}  // namespace

ConfStats conf_stats_general(const Configuration& c, const Distribution<Rational>& dist, const Caps& caps) {
  std::vector<GroupElement> points;
  std::vector<Rational> probs;
  for (std::size_t i = 0; i < dist.size(); ++i)
    if (dist.mass(i) > 0) {
      points.push_back(dist.support()[i]);
      probs.push_back(dist.mass(i));
    }
  const int d = c.variables();
  const double leaves = d * std::log2(static_cast<double>(points.size()));
  if (leaves > caps.conf_variables + 1e-9)
    throw Error(Errc::cap_exceeded, "support^d(C) assignments exceed 2^" + std::to_string(caps.conf_variables));
  BigInt den = 1;
  for (const auto& p : probs) den = boost::multiprecision::lcm(den, boost::multiprecision::denominator(p));
  if (den > BigInt(~u64{0} >> 8)) throw Error(Errc::cap_exceeded, "distribution denominators too large");
  std::vector<u64> weights;
  for (const auto& p : probs) weights.push_back(static_cast<u64>(boost::multiprecision::numerator(p) * (den / boost::multiprecision::denominator(p))));
  const auto m = c.multiplicities();
  const BigInt scale = boost::multiprecision::pow(den, static_cast<unsigned>(d));
  BigInt hits;
  if (log2(den) * d < 120) {
    unsigned __int128 t = weighted_equal_sum<unsigned __int128>(m, c.cols(), points, weights);
    hits = BigInt(static_cast<u64>(t >> 64));
    hits <<= 64;
    hits += BigInt(static_cast<u64>(t));
  } else {
    hits = weighted_equal_sum<BigInt>(m, c.cols(), points, weights);
  }
  return {d, ExactProbability(Rational(hits, scale))};
}

Configuration cmax(int h, int l) {
  if (h < 1 || l < 1) throw Error(Errc::invalid_params, "cmax needs h, l >= 1");
  std::vector<std::vector<int>> cols(l);
  for (int j = 0; j < l; ++j)
    for (int i = 0; i < h; ++i) cols[j].push_back(j * h + i);
  return Configuration::from_columns(cols);
}

ExactProbability cmax_p_closed(int d, int g) {
  if (d < 0 || g < 0) throw Error(Errc::invalid_params, "cmax_p_closed needs d, g >= 0");
  BigInt s = 0;
  for (int i = 0; i <= d; ++i) s += boost::multiprecision::pow(binomial(d, i), static_cast<unsigned>(g + 1));
  return ExactProbability(Rational(s, BigInt(1) << (d * (g + 1))));
}

Configuration special_block_config(int h, int g) {
  if (h < 1 || g < 1) throw Error(Errc::invalid_params, "special block configuration needs h, g >= 1");
  std::vector<std::vector<int>> cols(g + 1);
  for (int i = 0; i < h; ++i) cols[0].push_back(i);
  for (int j = 1; j <= g; ++j) {
    cols[j].push_back(h + j - 1);
    for (int i = 1; i < h; ++i) cols[j].push_back(h + g + i - 1);
  }
  return Configuration::from_columns(cols);
}

nlohmann::json to_json(const Configuration& c, const ConfStats& stats) {
  return {{"k", c.rows()}, {"l", c.cols()}, {"columns", c.columns()}, {"d", stats.d}, {"p", stats.p.str()}};
}

}  // namespace bhlab
