#pragma once
// Certified exhaustive computation of the zero-sum invariants.
//
//   D(G)   = 1 + max length of a sequence with no nonempty zero-sum subseq.
//   eta(G) = 1 + max length without a zero-sum of length in [1, exp(G)].
//   s(G)   = 1 + max length without a zero-sum of length exactly exp(G).
//
// The search walks multisets as non-decreasing index strings (DFS), keeps
// the reach table incrementally, and prunes any node whose orbit under
// Aut(G) contains a lexicographically smaller representative.  Rejection
// only ever discards nodes that are not the lex-min of their orbit, and the
// lex-min representative of an orbit has lex-min prefixes, so the value is
// exact whenever the tree is fully explored.

#include "reach.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <mutex>
#include <thread>

namespace zerosum {

enum class FreenessKind { NONEMPTY_ZERO_SUM, SHORT_ZERO_SUM, EXP_LENGTH_ZERO_SUM };

inline const char* kind_name(FreenessKind k) {
  switch (k) {
    case FreenessKind::NONEMPTY_ZERO_SUM: return "d";
    case FreenessKind::SHORT_ZERO_SUM: return "eta";
    case FreenessKind::EXP_LENGTH_ZERO_SUM: return "s";
  }
  return "?";
}

/* Anti-monotone freeness predicates, computed from scratch (the oracle the
   incremental search is tested against). */
inline bool is_free(const Sequence& s, FreenessKind k) {
  switch (k) {
    case FreenessKind::NONEMPTY_ZERO_SUM:
      return !has_nonempty_zero_sum(s);
    case FreenessKind::SHORT_ZERO_SUM:
      return !has_short_zero_sum(s);
    case FreenessKind::EXP_LENGTH_ZERO_SUM:
      return s.length() < (u64)s.group().exponent() ||
             !has_zero_sum_of_length(s, (u32)s.group().exponent());
  }
  return false;
}

struct SearchBudget {
  u64 max_nodes = 0;       // 0 = unlimited
  double max_seconds = 0;  // 0 = unlimited
  int workers = 0;         // 0 = ZEROSUM_THREADS or hardware concurrency
  bool deterministic = false;
  int canonicalize = -1;   // -1 auto, 0 off, 1 on (refuses oversized groups)
  u64 canon_group_limit = 64;
  std::size_t aut_cap = 4096;
};

struct SearchStats {
  u64 nodes = 0;
  u64 iso_rejected = 0;
  u64 unfree_pruned = 0;
  u64 elapsed_ms = 0;
  bool hit_node_budget = false;
  bool hit_time_budget = false;
};

struct InvariantResult {
  std::string kind;
  GroupSpec group;
  int value = 0;        // exact iff exhaustive, else best lower bound
  Sequence witness;     // free sequence of length value-1, re-verified
  bool exhaustive = false;
  SearchStats stats;
};

inline int resolve_workers(const SearchBudget& b) {
  if (b.deterministic) return 1;
  if (b.workers > 0) return b.workers;
  if (const char* env = std::getenv("ZEROSUM_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc ? (int)hc : 1;
}

namespace detail {

/* Incremental orbit-minimality filter.  For each automorphism (as an index
   permutation) we track how the sorted image of the current prefix compares
   with the prefix itself: still equal, or strictly greater with the prefix
   value at the first differing position.  Appending x >= max(prefix) updates
   each state in O(1); the image can only drop below the prefix when the
   appended image value is small, which is exactly the reject test. */
class IsoRejector {
 public:
  IsoRejector(u32 order, std::vector<const u32*> perms)
      : n_(order), perms_(std::move(perms)) {
    state_.assign(perms_.size(), TIE);
    bound_.assign(perms_.size(), 0);
    scratch_.assign(n_, 0);
  }

  std::size_t active() const { return perms_.size(); }

  /* Returns false when the new prefix is provably not lex-min in its orbit.
     The caller must pop() either way before trying another element. */
  bool push(u32 x) {
    marks_.push_back((u32)log_.size());
    stack_.push_back(x);
    for (std::size_t a = 0; a < perms_.size(); ++a) {
      u32 w = perms_[a][x];
      if (state_[a] == TIE) {
        if (w == x) continue;
        if (w < x) return false;
        log_.push_back({(u32)a, TIE, bound_[a]});
        state_[a] = GT;
        bound_[a] = x;
      } else {
        if (w < bound_[a]) return false;
        if (w > bound_[a]) continue;
        u32 nb = 0;
        int c = recompare(a, nb);
        if (c < 0) return false;
        log_.push_back({(u32)a, GT, bound_[a]});
        if (c == 0) state_[a] = TIE;
        else bound_[a] = nb;
      }
    }
    return true;
  }

  void pop() {
    u32 mark = marks_.back();
    marks_.pop_back();
    stack_.pop_back();
    while (log_.size() > mark) {
      const Entry& e = log_.back();
      state_[e.a] = e.st;
      bound_[e.a] = e.bd;
      log_.pop_back();
    }
  }

 private:
  enum : u8 { TIE = 0, GT = 1 };
  struct Entry { u32 a; u8 st; u32 bd; };

  /* Full multiset comparison of the a-th image with the prefix:
     -1 image < prefix, 0 equal, +1 greater (nb = first differing value). */
  int recompare(std::size_t a, u32& nb) {
    const u32* p = perms_[a];
    for (u32 v : stack_) { --scratch_[v]; ++scratch_[p[v]]; }
    int result = 0;
    for (u32 v = 0; v < n_; ++v)
      if (scratch_[v]) {
        result = scratch_[v] > 0 ? -1 : 1;
        nb = v;
        break;
      }
    for (u32 v : stack_) { scratch_[v] = 0; scratch_[p[v]] = 0; }
    return result;
  }

  u32 n_;
  std::vector<const u32*> perms_;
  std::vector<u8> state_;
  std::vector<u32> bound_;
  std::vector<int> scratch_;
  std::vector<Entry> log_;
  std::vector<u32> marks_;
  std::vector<u32> stack_;
};

struct SharedSearch {
  std::atomic<u64> nodes{0};
  std::atomic<bool> stop{false};
  std::atomic<bool> node_budget_hit{false};
  std::atomic<bool> time_budget_hit{false};
  u64 max_nodes = 0;
  double max_seconds = 0;
  u64 batch = 4096;  // nodes between budget checks; finer for tiny budgets
  std::chrono::steady_clock::time_point start;

  bool charge(u64 batch) {
    u64 total = nodes.fetch_add(batch, std::memory_order_relaxed) + batch;
    if (max_nodes && total > max_nodes) {
      node_budget_hit.store(true, std::memory_order_relaxed);
      stop.store(true, std::memory_order_relaxed);
    } else if (max_seconds > 0) {
      double el = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start).count();
      if (el > max_seconds) {
        time_budget_hit.store(true, std::memory_order_relaxed);
        stop.store(true, std::memory_order_relaxed);
      }
    }
    return !stop.load(std::memory_order_relaxed);
  }
};

struct WorkerBest {
  std::vector<u32> seq;  // best free sequence found (indices, non-decreasing)
  bool valid = false;
};

/* Incremental freeness of the engine's current sequence, using only the
   rows a fresh push can change. */
inline bool engine_free(const ReachEngine& eng, FreenessKind kind, u32 exp) {
  u32 len = eng.length();
  switch (kind) {
    case FreenessKind::NONEMPTY_ZERO_SUM:
      for (u32 l = 1; l <= len; ++l)
        if (eng.zero_reachable(l)) return false;
      return true;
    case FreenessKind::SHORT_ZERO_SUM: {
      u32 top = std::min(len, exp);
      for (u32 l = 1; l <= top; ++l)
        if (eng.zero_reachable(l)) return false;
      return true;
    }
    case FreenessKind::EXP_LENGTH_ZERO_SUM:
      return len < exp || !eng.zero_reachable(exp);
  }
  return true;
}

/* One DFS worker walking the subtree under a fixed prefix. */
class SearchWorker {
 public:
  SearchWorker(const GroupSpec& g, FreenessKind kind, u32 cap,
               const std::vector<const u32*>& perms, SharedSearch& shared)
      : g_(g), kind_(kind), n_((u32)g.order()),
        exp_((u32)g.exponent()),
        reach_(g, cap, /*track_undo=*/true),
        iso_(n_, perms),
        shared_(shared) {}

  u64 iso_rejected = 0, unfree_pruned = 0;
  WorkerBest best;

  bool replay(const std::vector<u32>& prefix) {
    for (u32 x : prefix) {
      if (!iso_.push(x)) throw std::logic_error("task prefix not canonical");
      reach_.push(x);
      if (!incr_free()) throw std::logic_error("task prefix not free");
      stack_.push_back(x);
    }
    note(stack_);
    return true;
  }

  /* Children of the current node, recursing depth-first. */
  void run() {
    if (stopped_ || shared_.stop.load(std::memory_order_relaxed)) {
      stopped_ = true;
      return;
    }
    u32 from = stack_.empty() ? 0 : stack_.back();
    for (u32 x = from; x < n_; ++x) {
      if (!iso_.push(x)) {
        ++iso_rejected;
        iso_.pop();
        continue;
      }
      reach_.push(x);
      if (!incr_free()) {
        ++unfree_pruned;
        reach_.pop();
        iso_.pop();
        continue;
      }
      stack_.push_back(x);
      note(stack_);
      if (++pending_ >= shared_.batch) {
        if (!shared_.charge(pending_)) stopped_ = true;
        pending_ = 0;
      }
      if (!stopped_ && !shared_.stop.load(std::memory_order_relaxed)) run();
      stack_.pop_back();
      reach_.pop();
      iso_.pop();
      if (stopped_) return;
    }
  }

  void flush() {
    if (pending_) {
      shared_.charge(pending_);
      pending_ = 0;
    }
  }

  bool stopped() const { return stopped_; }

 private:
  bool incr_free() const { return engine_free(reach_, kind_, exp_); }

  void note(const std::vector<u32>& s) {
    if (!best.valid || s.size() > best.seq.size()) {
      best.seq = s;
      best.valid = true;
    }
  }

  GroupSpec g_;
  FreenessKind kind_;
  u32 n_, exp_;
  ReachEngine reach_;
  IsoRejector iso_;
  SharedSearch& shared_;
  std::vector<u32> stack_;
  u64 pending_ = 0;
  bool stopped_ = false;
};

struct SearchOutcome {
  u32 max_len = 0;
  std::vector<u32> witness;
  bool exhaustive = false;
  SearchStats stats;
};

inline bool better(const std::vector<u32>& a, const std::vector<u32>& b) {
  // longer wins; ties broken toward the lexicographically smaller sequence,
  // which makes the parallel merge order-independent
  if (a.size() != b.size()) return a.size() > b.size();
  return a < b;
}

inline SearchOutcome search_max_free(const GroupSpec& g, FreenessKind kind,
                                     const SearchBudget& budget) {
  auto t0 = std::chrono::steady_clock::now();
  bool canon = budget.canonicalize == 1 ||
               (budget.canonicalize < 0 && g.order() <= budget.canon_group_limit);
  std::vector<const u32*> perms;
  AutomorphismSet auts;
  if (canon) {
    auts = automorphisms(g, budget.canon_group_limit);  // throws when oversized
    for (const auto& p : auts.perms()) {
      bool ident = true;
      for (u32 x = 0; x < p.size() && ident; ++x) ident = (p[x] == x);
      if (!ident) perms.push_back(p.data());
      if (perms.size() >= budget.aut_cap) break;
    }
  }

  u32 cap = (u32)std::min<u64>(g.order() + (u64)g.exponent() + 2, (u64)100000);
  SharedSearch shared;
  shared.max_nodes = budget.max_nodes;
  shared.max_seconds = budget.max_seconds;
  if (budget.max_nodes && budget.max_nodes < 4096) shared.batch = 1;
  else if (budget.max_nodes && budget.max_nodes < 65536) shared.batch = 64;
  shared.start = t0;

  int workers = resolve_workers(budget);
  SearchOutcome out;
  u64 iso_rej = 0, unfree = 0;
  std::vector<u32> bestseq;  // the empty sequence is always free and canonical
  auto merge = [&](const WorkerBest& w, u64 ir, u64 uf) {
    iso_rej += ir;
    unfree += uf;
    if (w.valid && better(w.seq, bestseq)) bestseq = w.seq;
  };

  if (workers <= 1) {
    SearchWorker w(g, kind, cap, perms, shared);
    shared.charge(1);  // root node
    w.run();
    w.flush();
    merge(w.best, w.iso_rejected, w.unfree_pruned);
  } else {
    // Serial pre-pass: collect the canonical free prefixes of depth <= 2 as
    // tasks; workers pull them from a shared counter.
    std::vector<std::vector<u32>> tasks;
    {
      IsoRejector iso((u32)g.order(), perms);
      u64 nodes = 1;  // root
      std::vector<u32> stack;
      u32 n = (u32)g.order();
      auto free_now = [&] { return is_free(seq_from_indices(g, stack), kind); };
      for (u32 x = 0; x < n; ++x) {
        if (!iso.push(x)) { iso.pop(); continue; }
        stack.push_back(x);
        if (free_now()) {
          ++nodes;
          if (better(stack, bestseq)) bestseq = stack;
          for (u32 y = x; y < n; ++y) {
            if (!iso.push(y)) { iso.pop(); continue; }
            stack.push_back(y);
            if (free_now()) {
              ++nodes;
              if (better(stack, bestseq)) bestseq = stack;
              tasks.push_back(stack);
            }
            stack.pop_back();
            iso.pop();
          }
        }
        stack.pop_back();
        iso.pop();
      }
      shared.charge(nodes);
    }
    std::atomic<std::size_t> next{0};
    std::mutex mtx;
    auto body = [&] {
      while (true) {
        std::size_t i = next.fetch_add(1);
        if (i >= tasks.size() || shared.stop.load(std::memory_order_relaxed)) break;
        SearchWorker w(g, kind, cap, perms, shared);
        w.replay(tasks[i]);
        w.run();
        w.flush();
        std::lock_guard<std::mutex> lk(mtx);
        merge(w.best, w.iso_rejected, w.unfree_pruned);
      }
    };
    std::vector<std::thread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(body);
    for (auto& t : pool) t.join();
  }

  out.exhaustive = !shared.stop.load();
  out.stats.nodes = shared.nodes.load();
  out.stats.iso_rejected = iso_rej;
  out.stats.unfree_pruned = unfree;
  out.stats.hit_node_budget = shared.node_budget_hit.load();
  out.stats.hit_time_budget = shared.time_budget_hit.load();
  out.stats.elapsed_ms =
      budget.deterministic
          ? 0
          : (u64)std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - t0).count();
  out.max_len = (u32)bestseq.size();
  out.witness = bestseq;
  return out;
}

} // namespace detail

inline InvariantResult run_invariant(const GroupSpec& g, FreenessKind kind,
                                     const SearchBudget& budget = {}) {
  auto out = detail::search_max_free(g, kind, budget);
  InvariantResult r;
  r.kind = kind_name(kind);
  r.group = g;
  r.value = (int)out.max_len + 1;
  r.witness = seq_from_indices(g, out.witness);
  r.exhaustive = out.exhaustive;
  r.stats = out.stats;
  if (!is_free(r.witness, kind))
    throw std::logic_error("search produced a non-free witness");
  return r;
}

inline InvariantResult davenport(const GroupSpec& g, const SearchBudget& b = {}) {
  return run_invariant(g, FreenessKind::NONEMPTY_ZERO_SUM, b);
}
inline InvariantResult eta(const GroupSpec& g, const SearchBudget& b = {}) {
  return run_invariant(g, FreenessKind::SHORT_ZERO_SUM, b);
}
inline InvariantResult egz(const GroupSpec& g, const SearchBudget& b = {}) {
  return run_invariant(g, FreenessKind::EXP_LENGTH_ZERO_SUM, b);
}

/* 1 + sum (d_i - 1) over the invariant factor chain; D(G) >= d_star(G). */
inline int d_star(const GroupSpec& g) {
  int v = 1;
  for (int d : g.invariant_factors()) v += d - 1;
  return v;
}

/* Lexicographically smallest sorted image over the full automorphism group. */
inline Sequence canonical_form(const Sequence& s, u64 canon_limit = 64) {
  AutomorphismSet auts = automorphisms(s.group(), canon_limit);
  std::vector<u32> flat = s.expand();
  std::vector<u32> best = flat, tmp;
  std::sort(best.begin(), best.end());
  for (const auto& p : auts.perms()) {
    tmp.clear();
    for (u32 v : flat) tmp.push_back(p[v]);
    std::sort(tmp.begin(), tmp.end());
    if (tmp < best) best = tmp;
  }
  return seq_from_indices(s.group(), best);
}

} // namespace zerosum
