#pragma once
// Length-indexed subset-sum tables.  reach(l, g) == true iff some
// subsequence of length exactly l sums to g.  One bitset row per length;
// adding one sequence element is a shifted-OR of every row into the next,
// which is the bounded-knapsack step done copy by copy.
//
// Row layout: the group index splits as idx = p * cyc + c (cyc = last
// presentation factor).  A row holds prefix_count stripes of cyc bits.
// Adding a fixed element g = (pg, cg) permutes stripes through the prefix
// add table and rotates each stripe by cg.

#include "sequence.hpp"

#include <cstring>
#include <optional>

namespace zerosum {

namespace detail {

inline u64 lowmask(u32 n) { return n >= 64 ? ~0ull : ((1ull << n) - 1); }

/* dst |= src rotated left by c inside a window of cyc bits (W words). */
inline void or_rotated(u64* dst, const u64* src, u32 W, u32 cyc, u32 c) {
  if (W == 1) {
    u64 x = src[0];
    u64 r = c ? ((x << c) | (x >> (cyc - c))) : x;
    dst[0] |= r & lowmask(cyc);
    return;
  }
  auto or_chunk = [&](u64 bits, u32 len, u32 pos) {
    u32 w = pos >> 6, b = pos & 63;
    dst[w] |= bits << b;
    if (b && b + len > 64) dst[w + 1] |= bits >> (64 - b);
  };
  for (u32 w = 0; w < W; ++w) {
    u64 x = src[w];
    if (!x) continue;
    u32 a = w * 64;
    u32 len = std::min<u32>(64, cyc - a);
    x &= lowmask(len);
    if (!x) continue;
    u32 q = a + c;
    if (q >= cyc) q -= cyc;
    u32 first = std::min(len, cyc - q);
    or_chunk(x & lowmask(first), first, q);
    if (first < len) or_chunk(x >> first, len - first, 0);
  }
}

} // namespace detail

/* Incremental DP core shared by the frozen table, the witness extractor and
   the exhaustive search (which needs push/pop along the DFS path). */
class ReachEngine {
 public:
  ReachEngine() = default;
  ReachEngine(GroupSpec g, u32 max_len, bool track_undo = false)
      : g_(std::move(g)),
        max_len_(max_len),
        track_(track_undo),
        cyc_(g_.cyc()),
        pc_(g_.prefix_count()),
        sw_(g_.stripe_words()),
        rw_(g_.row_words()),
        padd_(&g_.prefix_add_table()) {
    if (g_.order() > (1u << 20))
      throw std::invalid_argument("group too large for reach tables");
    rows_.assign((std::size_t)(max_len_ + 1) * rw_, 0);
    rows_[0] |= 1;  // the empty subsequence reaches 0 at length 0
  }

  const GroupSpec& group() const { return g_; }
  u32 length() const { return len_; }
  u32 max_length() const { return max_len_; }

  void push(u32 idx) {
    if (len_ >= max_len_) throw std::logic_error("reach engine is full");
    u32 pg = idx / cyc_, cg = idx % cyc_;
    if (track_) {
      std::size_t need = (std::size_t)len_ * rw_;
      std::size_t base = arena_.size();
      arena_.resize(base + need);
      if (need) std::memcpy(arena_.data() + base, rows_.data() + rw_, need * 8);
      marks_.push_back(base);
    }
    for (u32 l = len_ + 1; l-- > 0;) {
      const u64* src = row(l);
      u64* dst = rows_.data() + (std::size_t)(l + 1) * rw_;
      if (pc_ == 1) {
        detail::or_rotated(dst, src, sw_, cyc_, cg);
      } else {
        const u32* padd = padd_->data();
        for (u32 p = 0; p < pc_; ++p) {
          const u64* s = src + (std::size_t)p * sw_;
          bool any = false;
          for (u32 w = 0; w < sw_; ++w) any |= (s[w] != 0);
          if (!any) continue;
          u32 q = padd[(std::size_t)p * pc_ + pg];
          detail::or_rotated(dst + (std::size_t)q * sw_, s, sw_, cyc_, cg);
        }
      }
    }
    ++len_;
  }

  void pop() {
    if (!len_) throw std::logic_error("reach engine is empty");
    if (!track_) throw std::logic_error("engine built without undo tracking");
    --len_;
    std::size_t base = marks_.back();
    marks_.pop_back();
    std::size_t need = (std::size_t)len_ * rw_;
    if (need) std::memcpy(rows_.data() + rw_, arena_.data() + base, need * 8);
    std::memset(rows_.data() + (std::size_t)(len_ + 1) * rw_, 0, rw_ * 8);
    arena_.resize(base);
  }

  bool reachable(u32 l, u32 idx) const {
    if (l > len_) return false;
    u32 p = idx / cyc_, c = idx % cyc_;
    const u64* r = row(l) + (std::size_t)p * sw_ + (c >> 6);
    return (*r >> (c & 63)) & 1;
  }

  bool zero_reachable(u32 l) const { return l <= len_ && (row(l)[0] & 1); }

  const u64* row(u32 l) const { return rows_.data() + (std::size_t)l * rw_; }
  u32 row_words() const { return rw_; }

  std::vector<u32> row_indices(u32 l) const {
    std::vector<u32> out;
    const u64* r = row(l);
    for (u32 p = 0; p < pc_; ++p)
      for (u32 w = 0; w < sw_; ++w) {
        u64 x = r[(std::size_t)p * sw_ + w];
        while (x) {
          u32 b = (u32)__builtin_ctzll(x);
          x &= x - 1;
          out.push_back(p * cyc_ + w * 64 + b);
        }
      }
    return out;
  }

 private:
  GroupSpec g_;
  u32 max_len_ = 0, len_ = 0;
  bool track_ = false;
  u32 cyc_ = 1, pc_ = 1, sw_ = 1, rw_ = 1;
  const std::vector<u32>* padd_ = nullptr;
  std::vector<u64> rows_;
  std::vector<u64> arena_;        // saved rows 1..len, one span per push
  std::vector<std::size_t> marks_;
};

/* Frozen table for a whole sequence. */
class ReachTable {
 public:
  ReachTable() = default;
  explicit ReachTable(const Sequence& s)
      : eng_(s.group(), (u32)s.length()) {
    for (auto [idx, k] : s.entries())
      for (u32 i = 0; i < k; ++i) eng_.push(idx);
  }
  const GroupSpec& group() const { return eng_.group(); }
  u32 length() const { return eng_.length(); }
  bool reachable(u32 len, u32 idx) const { return eng_.reachable(len, idx); }
  bool reachable(u32 len, const Element& e) const {
    return eng_.reachable(len, e.index());
  }
  std::vector<u32> row_indices(u32 len) const { return eng_.row_indices(len); }

 private:
  ReachEngine eng_;
};

inline ReachTable reach_table(const Sequence& s) { return ReachTable(s); }

/* All sums of nonempty subsequences, ascending. */
inline std::vector<u32> subsums(const Sequence& s) {
  ReachTable t(s);
  std::vector<bool> hit(s.group().order(), false);
  for (u32 l = 1; l <= t.length(); ++l)
    for (u32 idx : t.row_indices(l)) hit[idx] = true;
  std::vector<u32> out;
  for (u32 i = 0; i < hit.size(); ++i)
    if (hit[i]) out.push_back(i);
  return out;
}

inline bool has_zero_sum_of_length(const Sequence& s, u32 len) {
  if (len > s.length())
    throw std::invalid_argument("queried length exceeds the sequence length");
  if (len == 0) return true;  // the empty subsequence
  return ReachTable(s).reachable(len, 0);
}

/* Zero-sum subsequence of length in [1, exp(G)]. */
inline bool has_short_zero_sum(const Sequence& s) {
  ReachTable t(s);
  u32 top = std::min<u64>(s.length(), (u64)s.group().exponent());
  for (u32 l = 1; l <= top; ++l)
    if (t.reachable(l, 0)) return true;
  return false;
}

inline bool has_nonempty_zero_sum(const Sequence& s) {
  ReachTable t(s);
  for (u32 l = 1; l <= s.length(); ++l)
    if (t.reachable(l, 0)) return true;
  return false;
}

struct ZeroSumWitness {
  Sequence sub;
  Element target;
};

/* Backtracks through per-element DP snapshots, then re-verifies the result
   by direct summation before returning it. */
inline std::optional<Sequence> extract_subsequence(const Sequence& s, u32 len,
                                                   u32 target) {
  const GroupSpec& g = s.group();
  std::vector<std::pair<u32, u32>> entries(s.entries().begin(), s.entries().end());
  std::vector<ReachEngine> snaps;
  snaps.reserve(entries.size() + 1);
  snaps.emplace_back(g, (u32)s.length());
  for (auto [idx, k] : entries) {
    ReachEngine next = snaps.back();
    for (u32 i = 0; i < k; ++i) next.push(idx);
    snaps.push_back(std::move(next));
  }
  if (len > s.length() || !snaps.back().reachable(len, target)) return std::nullopt;

  Sequence out(g);
  u32 want_len = len, want = target;
  for (std::size_t j = entries.size(); j-- > 0;) {
    auto [idx, k] = entries[j];
    bool placed = false;
    for (u32 c = 0; c <= std::min(k, want_len); ++c) {
      u32 rest = g.add(want, g.neg(g.scalar(c, idx)));
      if (snaps[j].reachable(want_len - c, rest)) {
        if (c) out.add(idx, c);
        want_len -= c;
        want = rest;
        placed = true;
        break;
      }
    }
    if (!placed) throw std::logic_error("reach table reconstruction failed");
  }
  if (want_len != 0 || want != 0)
    throw std::logic_error("reach table reconstruction failed");
  if (out.length() != len || out.sum().index() != target || !out.subsequence_of(s))
    throw std::logic_error("extracted witness failed re-verification");
  return out;
}

inline std::optional<ZeroSumWitness> witness_zero_sum_of_length(const Sequence& s,
                                                                u32 len) {
  auto sub = extract_subsequence(s, len, 0);
  if (!sub) return std::nullopt;
  return ZeroSumWitness{*sub, zero_of(s.group())};
}

inline std::optional<ZeroSumWitness> witness_short_zero_sum(const Sequence& s) {
  u32 top = (u32)std::min<u64>(s.length(), (u64)s.group().exponent());
  for (u32 l = 1; l <= top; ++l)
    if (auto w = witness_zero_sum_of_length(s, l)) return w;
  return std::nullopt;
}

inline std::optional<ZeroSumWitness> witness_nonempty_zero_sum(const Sequence& s) {
  for (u32 l = 1; l <= s.length(); ++l)
    if (auto w = witness_zero_sum_of_length(s, l)) return w;
  return std::nullopt;
}

} // namespace zerosum
