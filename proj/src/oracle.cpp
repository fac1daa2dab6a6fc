#include "bhlab/oracle.hpp"

#include "bhlab/errors.hpp"
#include "bhlab/rational.hpp"
#include "streaming_scan.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>

namespace bhlab {

namespace {

using u64 = std::uint64_t;

inline u64 mix64(u64 x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

u64 hash_element(const GroupElement& x) {
  u64 h = 0x243F6A8885A308D3ULL;
  for (Eigen::Index i = 0; i < x.size(); ++i) h = mix64(h ^ static_cast<u64>(x[i]));
  return h;
}

BigInt multiset_count(std::size_t n, int k) {
  return binomial(static_cast<unsigned>(n + k - 1), static_cast<unsigned>(k));
}

void reduce_in_place(GroupElement& x, const GroupElement& moduli) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const std::int64_t m = moduli[i];
    if (m > 0 && (x[i] >= m || x[i] < 0)) x[i] = ((x[i] % m) + m) % m;
  }
}

// Visits all size-k multisets in lexicographic order with their sums.
template <class F>
void for_each_multiset(const std::vector<GroupElement>& el, const AbelianAmbient& ambient, int k, F&& f) {
  const std::size_t n = el.size();
  if (n == 0) return;
  std::vector<std::size_t> idx(k, 0);
  std::vector<GroupElement> partial(k + 1, ambient.zero());
  auto rec = [&](auto&& self, int level, std::size_t start) -> void {
    for (std::size_t i = start; i < n; ++i) {
      idx[level] = i;
      partial[level + 1] = partial[level] + el[i];
      reduce_in_place(partial[level + 1], ambient.moduli());
      if (level + 1 == k)
        f(idx, partial[k]);
      else
        self(self, level + 1, i);
    }
  };
  rec(rec, 0, 0);
}

std::vector<SumClass> hashed_classes(const std::vector<GroupElement>& el, const AbelianAmbient& ambient, int k,
                                     std::size_t min_size, const OracleOptions& opts) {
  std::vector<u64> hashes;
  hashes.reserve(static_cast<std::size_t>(multiset_count(el.size(), k)));
  for_each_multiset(el, ambient, k, [&](const std::vector<std::size_t>&, const GroupElement& s) { hashes.push_back(hash_element(s)); });
  std::sort(hashes.begin(), hashes.end());
  std::vector<u64> repeated;
  for (std::size_t i = 0; i < hashes.size();) {
    std::size_t j = i;
    while (j < hashes.size() && hashes[j] == hashes[i]) ++j;
    if (j - i >= min_size) repeated.push_back(hashes[i]);
    i = j;
  }
  hashes.clear();
  hashes.shrink_to_fit();

  struct Entry {
    u64 hash;
    GroupElement sum;
    IndexMultiset members;
  };
  std::vector<Entry> entries;
  for_each_multiset(el, ambient, k, [&](const std::vector<std::size_t>& idx, const GroupElement& s) {
    const u64 h = hash_element(s);
    if (!std::binary_search(repeated.begin(), repeated.end(), h)) return;
    if (entries.size() >= opts.caps.multisets) throw Error(Errc::cap_exceeded, "too many colliding multisets");
    entries.push_back({h, s, idx});
  });
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.hash != b.hash) return a.hash < b.hash;
    if (a.sum != b.sum) return lex_less(a.sum, b.sum);
    return a.members < b.members;
  });
  std::vector<SumClass> out;
  for (std::size_t i = 0; i < entries.size();) {
    std::size_t j = i;
    while (j < entries.size() && entries[j].hash == entries[i].hash && entries[j].sum == entries[i].sum) ++j;
    if (j - i >= min_size) {
      SumClass c{entries[i].sum, {}};
      for (std::size_t t = i; t < j; ++t) c.members.push_back(std::move(entries[t].members));
      out.push_back(std::move(c));
    }
    i = j;
  }
  std::sort(out.begin(), out.end(), [](const SumClass& a, const SumClass& b) { return a.members < b.members; });
  return out;
}

void check_hashed_cap(std::size_t n, int k, const OracleOptions& opts) {
  if (multiset_count(n, k) > opts.caps.multisets)
    throw Error(Errc::cap_exceeded, "binom(" + std::to_string(n) + "+" + std::to_string(k) + "-1, " + std::to_string(k) +
                                        ") multisets exceed the enumeration cap " + std::to_string(opts.caps.multisets));
}

bool disjoint(const IndexMultiset& a, const IndexMultiset& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) return false;
    if (a[i] < b[j]) ++i;
    else ++j;
  }
  return true;
}

bool contains(const IndexMultiset& a, std::size_t x) { return std::binary_search(a.begin(), a.end(), x); }

void check_h(int h) {
  if (h < 1) throw Error(Errc::invalid_params, "h must be at least 1");
}

// Generic verdicts over a list of classes.
std::optional<Violation> least_pair(const std::vector<SumClass>& classes, std::size_t size) {
  std::optional<Violation> best;
  for (const auto& c : classes) {
    if (c.members.size() < size) continue;
    Violation v{c.sum, {c.members.begin(), c.members.begin() + size}};
    if (!best || v.columns < best->columns) best = std::move(v);
  }
  return best;
}

std::optional<Violation> sharp_verdict(const std::vector<SumClass>& classes, int d) {
  std::optional<Violation> best;
  for (const auto& c : classes) {
    std::set<std::size_t> support;
    for (const auto& m : c.members) support.insert(m.begin(), m.end());
    if (support.size() <= static_cast<std::size_t>(d)) continue;
    Violation v{c.sum, c.members};
    if (!best || v.columns < best->columns) best = std::move(v);
  }
  return best;
}

void bhg_violations_from(const std::vector<SumClass>& classes, int g, std::vector<Violation>& out, u64 cap) {
  const std::size_t l = static_cast<std::size_t>(g) + 1;
  for (const auto& c : classes) {
    const std::size_t s = c.members.size();
    if (s < l) continue;
    std::vector<std::size_t> pick(l);
    for (std::size_t i = 0; i < l; ++i) pick[i] = i;
    for (;;) {
      // no index may occur in every column
      bool common = false;
      for (std::size_t x : c.members[pick[0]]) {
        bool everywhere = true;
        for (std::size_t i = 1; i < l && everywhere; ++i) everywhere = contains(c.members[pick[i]], x);
        if (everywhere) {
          common = true;
          break;
        }
      }
      if (!common) {
        if (out.size() >= cap) throw Error(Errc::cap_exceeded, "too many minimal violations");
        Violation v{c.sum, {}};
        for (std::size_t i : pick) v.columns.push_back(c.members[i]);
        out.push_back(std::move(v));
      }
      std::size_t i = l;
      while (i > 0 && pick[i - 1] == s - l + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < l; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
}

template <class Classes>
std::vector<Violation> minimal_bh(int h, Classes&& classes_for_k, u64 cap) {
  check_h(h);
  std::vector<Violation> out;
  for (int k = 1; k <= h; ++k) {
    for (const auto& c : classes_for_k(k)) {
      for (std::size_t a = 0; a < c.members.size(); ++a)
        for (std::size_t b = a + 1; b < c.members.size(); ++b)
          if (disjoint(c.members[a], c.members[b])) {
            if (out.size() >= cap) throw Error(Errc::cap_exceeded, "too many minimal violations");
            out.push_back({c.sum, {c.members[a], c.members[b]}});
          }
    }
  }
  std::sort(out.begin(), out.end(), [](const Violation& x, const Violation& y) { return x.columns < y.columns; });
  return out;
}

template <class Classes>
std::vector<Violation> minimal_bhg(int h, int g, Classes&& classes_for_k, u64 cap) {
  check_h(h);
  if (g < 1) throw Error(Errc::invalid_params, "g must be at least 1");
  std::vector<Violation> out;
  for (int k = 1; k <= h; ++k) bhg_violations_from(classes_for_k(k), g, out, cap);
  std::sort(out.begin(), out.end(), [](const Violation& x, const Violation& y) { return x.columns < y.columns; });
  return out;
}

}  // namespace

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("BHLAB_THREADS")) {
    const int t = std::atoi(env);
    if (t > 0) return t;
  }
  return 1;
}

std::vector<SumClass> collision_classes(const std::vector<GroupElement>& elements, const AbelianAmbient& ambient,
                                        int k, std::size_t min_size, const OracleOptions& opts) {
  if (k < 1) throw Error(Errc::invalid_params, "multiset size must be at least 1");
  if (min_size < 2) throw Error(Errc::invalid_params, "min_size must be at least 2");
  for (const auto& e : elements)
    if (e.size() != ambient.rank()) throw Error(Errc::invalid_params, "element rank does not match the ambient group");
  check_hashed_cap(elements.size(), k, opts);
  return hashed_classes(elements, ambient, k, min_size, opts);
}

std::vector<SumClass> collision_classes(const PackedWords& words, int k, std::size_t min_size,
                                        const OracleOptions& opts) {
  if (k < 1) throw Error(Errc::invalid_params, "multiset size must be at least 1");
  if (min_size < 2) throw Error(Errc::invalid_params, "min_size must be at least 2");
  if (words.empty()) return {};
  if (words.length() == 0) {
    std::vector<GroupElement> el(words.size(), GroupElement::Zero(1));
    return collision_classes(el, AbelianAmbient::integer_vectors(1), k, min_size, opts);
  }
  const BigInt count = multiset_count(words.size(), k);
  Engine engine = opts.engine;
  if (engine == Engine::automatic) {
    if (count <= opts.caps.multisets && words.size() <= 4096)
      engine = Engine::hashed;
    else if (words.length() <= 64 && k <= 15)
      engine = Engine::streaming;
    else
      engine = Engine::hashed;
  }
  if (engine == Engine::streaming) {
    if (count > opts.caps.streaming_multisets)
      throw Error(Errc::cap_exceeded, "multiset count exceeds the streaming cap " + std::to_string(opts.caps.streaming_multisets));
    return detail::streaming_collision_classes(words, k, min_size, opts);
  }
  check_hashed_cap(words.size(), k, opts);
  return hashed_classes(words.to_group_elements(), AbelianAmbient::integer_vectors(words.length()), k, min_size, opts);
}

std::optional<Violation> verify_bh(const std::vector<GroupElement>& elements, const AbelianAmbient& ambient, int h,
                                   const OracleOptions& opts) {
  check_h(h);
  return least_pair(collision_classes(elements, ambient, h, 2, opts), 2);
}

std::optional<Violation> verify_bh(const PackedWords& words, int h, const OracleOptions& opts) {
  check_h(h);
  return least_pair(collision_classes(words, h, 2, opts), 2);
}

std::optional<Violation> verify_bh(const BinaryCode& code, int h, const OracleOptions& opts) {
  return verify_bh(code.words(), h, opts);
}

std::optional<Violation> verify_bhg(const std::vector<GroupElement>& elements, const AbelianAmbient& ambient, int h,
                                    int g, const OracleOptions& opts) {
  check_h(h);
  if (g < 1) throw Error(Errc::invalid_params, "g must be at least 1");
  return least_pair(collision_classes(elements, ambient, h, g + 1, opts), g + 1);
}

std::optional<Violation> verify_bhg(const PackedWords& words, int h, int g, const OracleOptions& opts) {
  check_h(h);
  if (g < 1) throw Error(Errc::invalid_params, "g must be at least 1");
  return least_pair(collision_classes(words, h, g + 1, opts), g + 1);
}

std::optional<Violation> verify_bhg(const BinaryCode& code, int h, int g, const OracleOptions& opts) {
  return verify_bhg(code.words(), h, g, opts);
}

std::optional<Violation> verify_bh_sharp(const std::vector<GroupElement>& elements, const AbelianAmbient& ambient,
                                         int h, int d, const OracleOptions& opts) {
  check_h(h);
  if (d < h) throw Error(Errc::invalid_params, "d must be at least h");
  return sharp_verdict(collision_classes(elements, ambient, h, 2, opts), d);
}

std::optional<Violation> verify_bh_sharp(const PackedWords& words, int h, int d, const OracleOptions& opts) {
  check_h(h);
  if (d < h) throw Error(Errc::invalid_params, "d must be at least h");
  return sharp_verdict(collision_classes(words, h, 2, opts), d);
}

std::optional<Violation> verify_bh_sharp(const BinaryCode& code, int h, int d, const OracleOptions& opts) {
  return verify_bh_sharp(code.words(), h, d, opts);
}

std::vector<Violation> find_minimal_violations(const std::vector<GroupElement>& elements,
                                               const AbelianAmbient& ambient, int h, const OracleOptions& opts) {
  return minimal_bh(h, [&](int k) { return collision_classes(elements, ambient, k, 2, opts); }, opts.caps.multisets);
}

std::vector<Violation> find_minimal_violations(const PackedWords& words, int h, const OracleOptions& opts) {
  return minimal_bh(h, [&](int k) { return collision_classes(words, k, 2, opts); }, opts.caps.multisets);
}

std::vector<Violation> find_minimal_violations_bhg(const std::vector<GroupElement>& elements,
                                                   const AbelianAmbient& ambient, int h, int g,
                                                   const OracleOptions& opts) {
  return minimal_bhg(h, g, [&](int k) { return collision_classes(elements, ambient, k, g + 1, opts); }, opts.caps.multisets);
}

std::vector<Violation> find_minimal_violations_bhg(const PackedWords& words, int h, int g,
                                                   const OracleOptions& opts) {
  return minimal_bhg(h, g, [&](int k) { return collision_classes(words, k, g + 1, opts); }, opts.caps.multisets);
}

nlohmann::json to_json(const Violation& v) {
  nlohmann::json j;
  j["sum"] = std::vector<std::int64_t>(v.sum.data(), v.sum.data() + v.sum.size());
  j["columns"] = v.columns;
  return j;
}

}  // namespace bhlab
