#include "streaming_scan.hpp"

#include "bhlab/errors.hpp"
#include "bhlab/rational.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

namespace bhlab::detail {

namespace {

using u64 = std::uint64_t;
using u32 = std::uint32_t;

constexpr u64 kMaxTuples = u64{1} << 22;
constexpr std::size_t kMaxSlots = std::size_t{1} << 23;
constexpr std::size_t kMaxCounters = std::size_t{1} << 26;

template <int P>
struct Key {
  u64 w[P];
  bool operator==(const Key& o) const {
    for (int i = 0; i < P; ++i)
      if (w[i] != o.w[i]) return false;
    return true;
  }
  bool operator<(const Key& o) const {
    for (int i = P - 1; i >= 0; --i)
      if (w[i] != o.w[i]) return w[i] < o.w[i];
    return false;
  }
};

template <int P>
inline u64 hash_key(const Key<P>& k) {
  u64 h = k.w[0] * 0x9E3779B97F4A7C15ULL;
  for (int i = 1; i < P; ++i) h = (h ^ (h >> 29) ^ k.w[i]) * 0xBF58476D1CE4E5B9ULL;
  return h ^ (h >> 31);
}

// Bit-sliced accumulation: plane i holds bit i of every coordinate's count.
template <int P>
inline void add_word(Key<P>& s, u64 w) {
  u64 c = w;
  for (int i = 0; i < P; ++i) {
    const u64 t = s.w[i] & c;
    s.w[i] ^= c;
    c = t;
  }
}

struct Buckets {
  std::vector<u64> words;      // grouped by bucket, index order inside
  std::vector<u32> index;      // original word index
  std::vector<std::size_t> offset;  // nonempty bucket b spans [offset[b], offset[b+1])
  std::vector<u64> prefix;     // prefix value of nonempty bucket b
};

struct Tuple {
  u64 sigma;
  u64 work;
  u32 first;  // position in the flat bucket-id array
};

struct Group {
  std::size_t begin, end;  // tuple range
  u64 work;
};

template <int P>
struct Hit {
  Key<P> key;
  u32 first;  // position in the flat member array
};

class DeadlineGuard {
 public:
  DeadlineGuard(const std::optional<std::chrono::steady_clock::time_point>& deadline, std::atomic<bool>& stop)
      : deadline_(deadline), stop_(stop) {}
  void tick() {
    if (stop_.load(std::memory_order_relaxed)) throw Error(Errc::budget_exceeded, "scan stopped");
    if (!deadline_ || (++calls_ & 63u)) return;
    if (std::chrono::steady_clock::now() > *deadline_) {
      stop_ = true;
      throw Error(Errc::budget_exceeded, "oracle scan exceeded its deadline");
    }
  }

 private:
  const std::optional<std::chrono::steady_clock::time_point>& deadline_;
  std::atomic<bool>& stop_;
  u64 calls_ = 0;
};

template <int P>
class Scanner {
 public:
  Scanner(const Buckets& bk, const std::vector<u32>& tuple_buckets, int k, std::size_t min_size, u64 max_hits,
          bool narrow_pairs)
      : bk_(bk), tb_(tuple_buckets), k_(k), min_size_(min_size), max_hits_(max_hits), narrow_(narrow_pairs) {}

  void run(const std::vector<Tuple>& tuples, const std::vector<Group>& groups, std::size_t gbegin, std::size_t gend,
           DeadlineGuard& guard) {
    for (std::size_t g = gbegin; g < gend; ++g) {
      const Group& grp = groups[g];
      if (narrow_) {
        run_pairs(tuples, grp, guard);
        continue;
      }
      const u64 rounds = std::max<u64>(1, (2 * grp.work + kMaxSlots - 1) / kMaxSlots);
      const std::size_t want = std::bit_ceil(static_cast<std::size_t>(2 * grp.work / rounds + 64));
      prepare_table(std::min(want, kMaxSlots));
      for (u64 r = 0; r < rounds; ++r) {
        rounds_ = rounds;
        round_ = r;
        next_stamp();
        hot_ = false;
        for (std::size_t t = grp.begin; t < grp.end; ++t) {
          guard.tick();
          for_each(&tb_[tuples[t].first], [this](const Key<P>& key, const std::size_t*) { insert(key); });
        }
        if (!hot_) continue;
        for (std::size_t t = grp.begin; t < grp.end; ++t) {
          guard.tick();
          for_each(&tb_[tuples[t].first], [this](const Key<P>& key, const std::size_t* pos) { collect(key, pos); });
        }
      }
    }
  }

  std::vector<Hit<P>> hits;
  std::vector<u32> members;

 private:
  // k = 2 and n <= 32: the sum packs into one word, (x ^ y) | (x & y) << 32.
  template <class F>
  void for_each_pair(const u32* buckets, F&& f) {
    const std::size_t a0 = bk_.offset[buckets[0]], a1 = bk_.offset[buckets[0] + 1];
    const std::size_t b0 = bk_.offset[buckets[1]], b1 = bk_.offset[buckets[1] + 1];
    const bool same = buckets[0] == buckets[1];
    for (std::size_t x = a0; x < a1; ++x) {
      const u64 wx = bk_.words[x];
      for (std::size_t y = same ? x : b0; y < b1; ++y) {
        const u64 wy = bk_.words[y];
        f((wx ^ wy) | ((wx & wy) << 32), x, y);
      }
    }
  }

  // Saturating per-hash counters first; only sums whose counter reaches min_size are compared exactly.
  void run_pairs(const std::vector<Tuple>& tuples, const Group& grp, DeadlineGuard& guard) {
    const u64 rounds = std::max<u64>(1, (16 * grp.work + kMaxCounters - 1) / kMaxCounters);
    const std::size_t slots =
        std::min(kMaxCounters, std::bit_ceil(static_cast<std::size_t>(16 * grp.work / rounds + 64)));
    const int shift = 64 - std::countr_zero(slots);
    auto in_round = [rounds](u64 key, u64 r) {
      return rounds == 1 || ((key * 0xBF58476D1CE4E5B9ULL) >> 40) % rounds == r;
    };
    const std::uint8_t need = static_cast<std::uint8_t>(std::min<std::size_t>(min_size_, 255));
    for (u64 r = 0; r < rounds; ++r) {
      counters_.assign(slots, 0);
      for (std::size_t t = grp.begin; t < grp.end; ++t) {
        guard.tick();
        for_each_pair(&tb_[tuples[t].first], [&](u64 key, std::size_t, std::size_t) {
          if (!in_round(key, r)) return;
          std::uint8_t& c1 = counters_[(key * 0x9E3779B97F4A7C15ULL) >> shift];
          c1 = static_cast<std::uint8_t>(c1 + (c1 != 255));
          std::uint8_t& c2 = counters_[(key * 0xD6E8FEB86659FD93ULL) >> shift];
          c2 = static_cast<std::uint8_t>(c2 + (c2 != 255));
        });
      }
      candidates_.clear();
      for (std::size_t t = grp.begin; t < grp.end; ++t) {
        guard.tick();
        for_each_pair(&tb_[tuples[t].first], [&](u64 key, std::size_t x, std::size_t y) {
          if (!in_round(key, r)) return;
          if (counters_[(key * 0x9E3779B97F4A7C15ULL) >> shift] >= need &&
              counters_[(key * 0xD6E8FEB86659FD93ULL) >> shift] >= need)
            candidates_.push_back({key, static_cast<u32>(x), static_cast<u32>(y)});
        });
      }
      std::sort(candidates_.begin(), candidates_.end(), [](const Candidate& a, const Candidate& b) {
        return a.key != b.key ? a.key < b.key : (a.x != b.x ? a.x < b.x : a.y < b.y);
      });
      for (std::size_t i = 0; i < candidates_.size();) {
        std::size_t j = i;
        while (j < candidates_.size() && candidates_[j].key == candidates_[i].key) ++j;
        if (j - i >= min_size_) {
          Key<P> full{};
          full.w[0] = candidates_[i].key & 0xffffffffULL;
          full.w[1] = candidates_[i].key >> 32;
          for (std::size_t m = i; m < j; ++m) {
            if (hits.size() >= max_hits_) throw Error(Errc::cap_exceeded, "too many colliding multisets to collect");
            hits.push_back({full, static_cast<u32>(members.size())});
            members.push_back(bk_.index[candidates_[m].x]);
            members.push_back(bk_.index[candidates_[m].y]);
          }
        }
        i = j;
      }
    }
  }

  struct Candidate {
    u64 key;
    u32 x, y;
  };
  std::vector<std::uint8_t> counters_;
  std::vector<Candidate> candidates_;

  struct Slot {
    Key<P> key;
    u32 count;
    u32 stamp;
  };

  void prepare_table(std::size_t slots) {
    if (table_.size() < slots) {
      table_.assign(slots, Slot{});
      stamp_ = 0;
    }
    mask_ = slots - 1;
  }

  void next_stamp() {
    if (++stamp_ == 0) {
      for (auto& s : table_) s.stamp = 0;
      stamp_ = 1;
    }
  }

  bool in_round(u64 h) const { return rounds_ == 1 || (h >> 40) % rounds_ == round_; }

  void insert(const Key<P>& key) {
    const u64 h = hash_key(key);
    if (!in_round(h)) return;
    std::size_t i = h & mask_;
    for (;;) {
      Slot& s = table_[i];
      if (s.stamp != stamp_) {
        s.key = key;
        s.count = 1;
        s.stamp = stamp_;
        return;
      }
      if (s.key == key) {
        if (++s.count == min_size_) hot_ = true;
        return;
      }
      i = (i + 1) & mask_;
    }
  }

  void collect(const Key<P>& key, const std::size_t* pos) {
    const u64 h = hash_key(key);
    if (!in_round(h)) return;
    std::size_t i = h & mask_;
    for (;;) {
      const Slot& s = table_[i];
      if (s.stamp != stamp_) return;
      if (s.key == key) {
        if (s.count < min_size_) return;
        if (hits.size() >= max_hits_) throw Error(Errc::cap_exceeded, "too many colliding multisets to collect");
        hits.push_back({key, static_cast<u32>(members.size())});
        for (int l = 0; l < k_; ++l) members.push_back(bk_.index[pos[l]]);
        return;
      }
      i = (i + 1) & mask_;
    }
  }

  template <class F>
  void for_each(const u32* buckets, F&& f) {
    std::size_t pos[16];
    if (k_ == 2) {
      const std::size_t a0 = bk_.offset[buckets[0]], a1 = bk_.offset[buckets[0] + 1];
      const std::size_t b0 = bk_.offset[buckets[1]], b1 = bk_.offset[buckets[1] + 1];
      const bool same = buckets[0] == buckets[1];
      for (std::size_t x = a0; x < a1; ++x) {
        const u64 wx = bk_.words[x];
        pos[0] = x;
        for (std::size_t y = same ? x : b0; y < b1; ++y) {
          Key<P> key{};
          key.w[0] = wx ^ bk_.words[y];
          if constexpr (P > 1) key.w[1] = wx & bk_.words[y];
          pos[1] = y;
          f(key, pos);
        }
      }
      return;
    }
    Key<P> acc{};
    recurse(0, buckets, acc, pos, f);
  }

  template <class F>
  void recurse(int level, const u32* buckets, const Key<P>& acc, std::size_t* pos, F& f) {
    if (level == k_) {
      f(acc, pos);
      return;
    }
    const u32 b = buckets[level];
    std::size_t lo = bk_.offset[b];
    const std::size_t hi = bk_.offset[b + 1];
    if (level > 0 && buckets[level - 1] == b) lo = pos[level - 1];
    for (std::size_t x = lo; x < hi; ++x) {
      Key<P> next = acc;
      add_word(next, bk_.words[x]);
      pos[level] = x;
      recurse(level + 1, buckets, next, pos, f);
    }
  }

  const Buckets& bk_;
  const std::vector<u32>& tb_;
  int k_;
  std::size_t min_size_;
  u64 max_hits_;
  std::vector<Slot> table_;
  std::size_t mask_ = 0;
  u32 stamp_ = 0;
  u64 rounds_ = 1, round_ = 0;
  bool hot_ = false;
  bool narrow_;
};

u64 multiset_count(u64 n, int k) {
  constexpr u64 top = ~u64{0} >> 1;
  unsigned __int128 c = 1;
  for (int i = 1; i <= k; ++i) {
    c = c * (n + static_cast<u64>(i) - 1) / static_cast<u64>(i);
    if (c > top) return top;
  }
  return static_cast<u64>(c);
}

int choose_prefix_bits(int n, std::size_t words, int k, int planes) {
  int best = 0;
  for (int p = 1; p <= std::min(n, 24) && p * planes <= 64; ++p) {
    const u64 buckets = std::min<u64>(u64{1} << p, words);
    if (multiset_count(buckets, k) > kMaxTuples) break;
    best = p;
  }
  return best;
}

std::vector<SumClass> identical_words(const PackedWords& words, std::size_t min_size) {
  std::vector<std::size_t> order(words.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return words.word64(a) < words.word64(b); });
  std::vector<SumClass> out;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && words.word64(order[j]) == words.word64(order[i])) ++j;
    if (j - i >= min_size) {
      SumClass c{words.to_group_element(order[i]), {}};
      for (std::size_t t = i; t < j; ++t) c.members.push_back({order[t]});
      std::sort(c.members.begin(), c.members.end());
      out.push_back(std::move(c));
    }
    i = j;
  }
  return out;
}

template <int P>
std::vector<SumClass> scan(const PackedWords& words, int k, std::size_t min_size, const OracleOptions& opts) {
  const int n = words.length();
  const std::size_t N = words.size();
  const int p = choose_prefix_bits(n, N, k, P);
  const u64 pmask = p == 64 ? ~u64{0} : ((u64{1} << p) - 1);

  // Counting sort by prefix, preserving index order.
  Buckets bk;
  {
    std::vector<u64> prefixes(N);
    for (std::size_t i = 0; i < N; ++i) prefixes[i] = words.word64(i) & pmask;
    std::vector<u32> order(N);
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(), [&](u32 a, u32 b) { return prefixes[a] < prefixes[b]; });
    bk.words.reserve(N);
    bk.index.reserve(N);
    for (std::size_t i = 0; i < N; ++i) {
      const u32 w = order[i];
      if (i == 0 || prefixes[w] != prefixes[order[i - 1]]) {
        bk.offset.push_back(i);
        bk.prefix.push_back(prefixes[w]);
      }
      bk.words.push_back(words.word64(w));
      bk.index.push_back(w);
    }
    bk.offset.push_back(N);
  }
  const u32 B = static_cast<u32>(bk.prefix.size());

  // All k-multisets of nonempty buckets, with their prefix-sum signature.
  std::vector<Tuple> tuples;
  std::vector<u32> tuple_buckets;
  {
    std::vector<u32> cur(k, 0);
    for (;;) {
      Key<P> s{};
      u64 work = 1;
      for (int l = 0; l < k;) {
        int r = l;
        while (r < k && cur[r] == cur[l]) ++r;
        const u64 size = bk.offset[cur[l] + 1] - bk.offset[cur[l]];
        work *= multiset_count(size, r - l);
        l = r;
      }
      for (int l = 0; l < k; ++l) add_word(s, bk.prefix[cur[l]]);
      u64 sigma = 0;
      for (int i = 0; i < P; ++i) sigma |= s.w[i] << (i * p);
      tuples.push_back({sigma, work, static_cast<u32>(tuple_buckets.size())});
      tuple_buckets.insert(tuple_buckets.end(), cur.begin(), cur.end());
      int l = k - 1;
      while (l >= 0 && cur[l] == B - 1) --l;
      if (l < 0) break;
      ++cur[l];
      for (int m = l + 1; m < k; ++m) cur[m] = cur[l];
    }
  }
  std::stable_sort(tuples.begin(), tuples.end(), [](const Tuple& a, const Tuple& b) { return a.sigma < b.sigma; });
  std::vector<Group> groups;
  u64 total = 0;
  for (std::size_t i = 0; i < tuples.size();) {
    std::size_t j = i;
    u64 work = 0;
    while (j < tuples.size() && tuples[j].sigma == tuples[i].sigma) work += tuples[j++].work;
    groups.push_back({i, j, work});
    total += work;
    i = j;
  }

  const int threads = std::max(1, std::min<int>(resolve_threads(opts.threads), static_cast<int>(groups.size())));
  std::vector<std::size_t> cut{0};
  {
    u64 acc = 0;
    for (std::size_t g = 0; g < groups.size() && static_cast<int>(cut.size()) < threads; ++g) {
      acc += groups[g].work;
      if (acc * threads >= total * cut.size()) cut.push_back(g + 1);
    }
    while (cut.size() <= static_cast<std::size_t>(threads)) cut.push_back(groups.size());
    cut.back() = groups.size();
  }

  std::atomic<bool> stop{false};
  std::vector<Scanner<P>> scanners;
  scanners.reserve(threads);
  for (int t = 0; t < threads; ++t) scanners.emplace_back(bk, tuple_buckets, k, min_size, opts.caps.multisets, k == 2 && n <= 32);
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto work = [&](int t) {
    try {
      DeadlineGuard guard(opts.deadline, stop);
      scanners[t].run(tuples, groups, cut[t], cut[t + 1], guard);
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
      stop = true;
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  // Merge: sort hits by key, then form classes.
  struct Ref {
    int scanner;
    std::size_t hit;
  };
  std::vector<Ref> refs;
  for (int t = 0; t < threads; ++t)
    for (std::size_t i = 0; i < scanners[t].hits.size(); ++i) refs.push_back({t, i});
  std::sort(refs.begin(), refs.end(), [&](const Ref& a, const Ref& b) {
    return scanners[a.scanner].hits[a.hit].key < scanners[b.scanner].hits[b.hit].key;
  });
  std::vector<SumClass> out;
  for (std::size_t i = 0; i < refs.size();) {
    const Key<P>& key = scanners[refs[i].scanner].hits[refs[i].hit].key;
    SumClass c;
    c.sum = GroupElement(n);
    for (int j = 0; j < n; ++j) {
      std::int64_t v = 0;
      for (int b = 0; b < P; ++b) v |= static_cast<std::int64_t>((key.w[b] >> j) & 1u) << b;
      c.sum[j] = v;
    }
    std::size_t j = i;
    while (j < refs.size() && scanners[refs[j].scanner].hits[refs[j].hit].key == key) {
      const auto& sc = scanners[refs[j].scanner];
      const u32 first = sc.hits[refs[j].hit].first;
      IndexMultiset m(sc.members.begin() + first, sc.members.begin() + first + k);
      std::sort(m.begin(), m.end());
      c.members.push_back(std::move(m));
      ++j;
    }
    std::sort(c.members.begin(), c.members.end());
    out.push_back(std::move(c));
    i = j;
  }
  return out;
}

}  // namespace

std::vector<SumClass> streaming_collision_classes(const PackedWords& words, int k, std::size_t min_size,
                                                  const OracleOptions& opts) {
  if (words.length() > 64) throw Error(Errc::invalid_params, "streaming engine needs word length <= 64");
  if (k < 1 || k > 15) throw Error(Errc::invalid_params, "streaming engine supports 1 <= k <= 15");
  if (min_size < 2) throw Error(Errc::invalid_params, "min_size must be at least 2");
  if (words.size() >= (std::size_t{1} << 31)) throw Error(Errc::cap_exceeded, "too many words");
  std::vector<SumClass> out;
  if (words.empty()) return out;
  if (k == 1) {
    out = identical_words(words, min_size);
  } else {
    switch (std::bit_width(static_cast<unsigned>(k))) {
      case 2: out = scan<2>(words, k, min_size, opts); break;
      case 3: out = scan<3>(words, k, min_size, opts); break;
      default: out = scan<4>(words, k, min_size, opts); break;
    }
  }
  std::sort(out.begin(), out.end(), [](const SumClass& a, const SumClass& b) { return a.members < b.members; });
  return out;
}

}  // namespace bhlab::detail
