#include "bhlab/random_coding.hpp"

#include "bhlab/configurations.hpp"
#include "bhlab/errors.hpp"
#include "bhlab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bhlab {

void SamplingPlan::validate() const {
  if (n < 1) throw Error(Errc::invalid_params, "n must be positive");
  if (n0 < 1 || n % n0 != 0) throw Error(Errc::invalid_params, "n0 must divide n");
  if (h < 1 || g < 1) throw Error(Errc::invalid_params, "need h >= 1 and g >= 1");
  if (dist.dimension() != n0) throw Error(Errc::invalid_distribution, "distribution is not on n0-bit blocks");
  for (const auto& v : dist.support())
    for (Eigen::Index j = 0; j < v.size(); ++j)
      if (v[j] != 0 && v[j] != 1) throw Error(Errc::invalid_distribution, "support must be 0/1 blocks");
}

namespace {

bool is_uniform_bits(const Distribution<Rational>& dist) {
  const auto m = dist.size();
  if (m != (std::size_t{1} << dist.dimension())) return false;
  for (std::size_t i = 0; i < m; ++i)
    if (dist.mass(i) != Rational(1, static_cast<long long>(m))) return false;
  return true;
}

struct Term {
  int d;
  Rational weight;
};

std::vector<Term> violation_terms(const SamplingPlan& plan, const Caps& caps) {
  const auto family = enumerate_conf_upto(plan.h, plan.g + 1, caps);
  const bool uniform = is_uniform_bits(plan.dist);
  const auto blocks = static_cast<unsigned>(plan.n / plan.n0);
  std::vector<Term> terms;
  for (const auto& c : family) {
    if (uniform) {
      const auto s = conf_stats(c, caps);
      terms.push_back({s.d, pow(s.p.value(), static_cast<unsigned>(plan.n))});
    } else {
      const auto s = conf_stats_general(c, plan.dist, caps);
      terms.push_back({s.d, pow(s.p.value(), blocks)});
    }
  }
  return terms;
}

Rational expected(const std::vector<Term>& terms, std::uint64_t t) {
  Rational e = 0;
  for (const auto& term : terms) {
    if (term.d > 0 && static_cast<std::uint64_t>(term.d) > t) continue;
    BigInt falling = 1;
    for (int i = 0; i < term.d; ++i) falling *= t - static_cast<std::uint64_t>(i);
    e += Rational(falling) * term.weight;
  }
  return e;
}

bool acceptable(const std::vector<Term>& terms, std::uint64_t t) {
  return 2 * expected(terms, t) <= Rational(BigInt(t));
}

constexpr std::uint64_t kMaxT = std::uint64_t{1} << 40;

}  // namespace

Rational expected_violations(const SamplingPlan& plan, std::uint64_t t, const Caps& caps) {
  plan.validate();
  return expected(violation_terms(plan, caps), t);
}

ChooseT choose_t(const SamplingPlan& plan, const Caps& caps) {
  plan.validate();
  const auto terms = violation_terms(plan, caps);
  ChooseT r;
  if (!acceptable(terms, 2)) {
    r.infeasible = true;
    return r;
  }
  std::uint64_t lo = 2, hi = 4;
  while (hi <= kMaxT && acceptable(terms, hi)) {
    lo = hi;
    hi *= 2;
  }
  if (hi > kMaxT) {
    r.t = lo;
  } else {
    while (hi - lo > 1) {
      const std::uint64_t mid = lo + (hi - lo) / 2;
      (acceptable(terms, mid) ? lo : hi) = mid;
    }
    r.t = lo;
  }
  const Rational e = expected(terms, r.t);
  r.log2_expected = e == 0 ? -std::numeric_limits<double>::infinity() : log2(e);
  return r;
}

PackedWords sample_code(const SamplingPlan& plan, std::uint64_t attempt) {
  plan.validate();
  const auto& dist = plan.dist;
  std::vector<double> cdf(dist.size());
  Rational acc = 0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    acc += dist.mass(i);
    cdf[i] = to_double(acc);
  }
  cdf.back() = 1.0;
  std::vector<std::vector<int>> blocks(dist.size());
  for (std::size_t i = 0; i < dist.size(); ++i)
    for (int j = 0; j < plan.n0; ++j) blocks[i].push_back(static_cast<int>(dist.support()[i][j]));

  const int nblocks = plan.n / plan.n0;
  const CounterRng stream = CounterRng(plan.seed).derive(attempt);
  PackedWords words(plan.n);
  words.reserve(plan.t);
  std::string text(static_cast<std::size_t>(plan.n), '0');
  for (std::uint64_t w = 0; w < plan.t; ++w) {
    CounterRng rng = stream.derive(w);
    std::uint64_t packed = 0;
    for (int b = 0; b < nblocks; ++b) {
      const double u = static_cast<double>(rng.next() >> 11) * 0x1.0p-53;
      const auto pick = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
      const auto& block = blocks[std::min(pick, blocks.size() - 1)];
      for (int j = 0; j < plan.n0; ++j) {
        const int pos = b * plan.n0 + j;
        if (plan.n <= 64)
          packed |= static_cast<std::uint64_t>(block[j]) << pos;
        else
          text[static_cast<std::size_t>(pos)] = block[j] ? '1' : '0';
      }
    }
    if (plan.n <= 64)
      words.push_back_word(packed);
    else
      words.push_back(text);
  }
  return words;
}

Construction prune(const PackedWords& words, int h, int g, const OracleOptions& opts) {
  if (h < 1 || g < 1) throw Error(Errc::invalid_params, "need h >= 1 and g >= 1");
  const auto violations =
      g == 1 ? find_minimal_violations(words, h, opts) : find_minimal_violations_bhg(words, h, g, opts);
  ConstructionStats s;
  s.n = words.length();
  s.h = h;
  s.g = g;
  s.t = words.size();
  s.violations_found = violations.size();
  s.violations_per_k.assign(static_cast<std::size_t>(h) + 1, 0);
  std::vector<char> alive(words.size(), 1);
  for (const auto& v : violations) {
    ++s.violations_per_k[v.columns.front().size()];
    std::vector<std::vector<int>> cols;
    bool intact = true;
    std::size_t least = words.size();
    for (const auto& col : v.columns) {
      cols.emplace_back(col.begin(), col.end());
      for (auto i : col) {
        intact = intact && alive[i];
        least = std::min(least, i);
      }
    }
    ++s.violations_per_class[Configuration::from_columns(cols).str()];
    if (intact) {
      alive[least] = 0;
      ++s.words_removed;
    }
  }
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < words.size(); ++i)
    if (alive[i]) keep.push_back(i);
  Construction out{BinaryCode(words.select(keep)), std::move(s)};
  auto& st = out.stats;
  st.final_size = out.code.size();
  st.final_rate = out.code.rate();
  const auto check = g == 1 ? verify_bh(out.code, h, opts) : verify_bhg(out.code, h, g, opts);
  st.verdict = check ? "fail" : "pass";
  if (check) throw std::logic_error("pruned code still has a violation");
  return out;
}

Construction construct(int h, int n, std::uint64_t seed, const ConstructOptions& options) {
  SamplingPlan plan;
  plan.n = n;
  plan.n0 = options.n0;
  plan.dist = options.dist ? *options.dist : Distribution<Rational>::uniform_bits(options.n0);
  plan.h = h;
  plan.g = options.g;
  plan.seed = seed;
  const auto ct = choose_t(plan, options.oracle.caps);
  if (ct.infeasible) throw Error(Errc::infeasible, "no t >= 2 with E(t) <= t/2 at this n");
  plan.t = ct.t;
  for (int attempt = 0; attempt < options.attempts; ++attempt) {
    auto result = prune(sample_code(plan, static_cast<std::uint64_t>(attempt)), h, options.g, options.oracle);
    if (2 * result.stats.final_size >= plan.t) {
      result.stats.n0 = plan.n0;
      result.stats.seed = seed;
      result.stats.attempts = attempt + 1;
      return result;
    }
  }
  throw Error(Errc::infeasible, "final size below t/2 after " + std::to_string(options.attempts) + " attempts");
}

nlohmann::json to_json(const ConstructionStats& s) {
  return {{"n", s.n},
          {"n0", s.n0},
          {"h", s.h},
          {"g", s.g},
          {"seed", s.seed},
          {"t", s.t},
          {"attempts", s.attempts},
          {"violations_found", s.violations_found},
          {"violations_per_k", s.violations_per_k},
          {"violations_per_class", s.violations_per_class},
          {"words_removed", s.words_removed},
          {"final_size", s.final_size},
          {"final_rate", s.final_rate},
          {"verdict", s.verdict}};
}

}  // namespace bhlab
