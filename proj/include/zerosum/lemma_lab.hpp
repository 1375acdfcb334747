#pragma once
// Executable forms of the structural lemmas, plus a falsification harness
// that hunts for counterexamples by exhaustive sweep or seeded sampling.
//
// Each checker separates three things: hypothesis violations are caller
// errors (std::invalid_argument); a conclusion that fails on a
// hypothesis-satisfying instance is reported as a violation (and would
// refute the lemma); evidence returned with any outcome is re-verified
// before the report is built, so a buggy search cannot fabricate support.

#include <bit>
#include <chrono>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "zerosum/constructions.hpp"
#include "zerosum/group.hpp"
#include "zerosum/invariants.hpp"
#include "zerosum/reach.hpp"
#include "zerosum/rng.hpp"
#include "zerosum/sequence.hpp"

namespace zerosum {

/* Working frame for the lemmas over G = Z_2^r x Z_n: phi projects onto the
   elementary part, psi onto the cyclic part, e is a chosen generator of the
   cyclic image. */
struct SplitContext {
  GroupSpec G;
  u32 r = 0, n = 0;
  Homomorphism phi;  // G -> Z_2^r
  Homomorphism psi;  // G -> Z_n
  Element e;         // generator of the psi image
};

inline SplitContext make_split(u32 r, u32 n, u32 e_res = 1) {
  if (r < 1 || n < 1) throw std::invalid_argument("make_split: need r, n >= 1");
  if (n == 1) e_res = 0;
  if (e_res >= n || std::gcd((u64)e_res, (u64)n) != 1)
    throw std::invalid_argument("make_split: e must generate Z_n");
  std::vector<int> gf(r, 2);
  gf.push_back((int)n);
  SplitContext ctx;
  ctx.G = make_group(gf);
  ctx.r = r;
  ctx.n = n;
  GroupSpec h = make_group(std::vector<int>(r, 2));
  GroupSpec k = make_group({(int)n});
  std::vector<Element> phi_img, psi_img;
  for (u32 i = 0; i < r; ++i) {
    phi_img.push_back(unit_of(h, (int)i));
    psi_img.push_back(zero_of(k));
  }
  phi_img.push_back(zero_of(h));
  psi_img.push_back(unit_of(k, 0));
  ctx.phi = make_hom(ctx.G, h, phi_img);
  ctx.psi = make_hom(ctx.G, k, psi_img);
  ctx.e = Element(k, e_res);
  return ctx;
}

/* The element of G with the given phi-image index and psi residue. */
inline Element split_element(const SplitContext& ctx, u32 h_idx, u32 k_res) {
  return Element(ctx.G, h_idx * ctx.n + k_res % ctx.n);
}

enum class LemmaOutcome { holds, violated, vacuous, witness_found };

inline const char* outcome_name(LemmaOutcome o) {
  switch (o) {
    case LemmaOutcome::holds: return "holds-on-instance";
    case LemmaOutcome::violated: return "violated";
    case LemmaOutcome::vacuous: return "vacuous";
    case LemmaOutcome::witness_found: return "witness-found";
  }
  return "?";
}

struct LemmaReport {
  std::string lemma;
  LemmaOutcome outcome = LemmaOutcome::holds;
  std::vector<Sequence> evidence;  // meaning depends on the lemma
  std::string note;
  u64 checked = 0;  // qualifying configurations examined
};

namespace detail {

/* Per-position tables for subset scans.  Positions follow expand() order,
   so reports are deterministic.  phi-image indices over Z_2^r compose by
   xor; psi residues add mod n. */
struct LabTables {
  std::vector<u32> pos, phi, psi;
};

inline LabTables lab_tables(const Sequence& s, const SplitContext& ctx) {
  if (s.group() != ctx.G)
    throw std::invalid_argument("sequence does not live over the context group");
  if (s.length() > 24) throw std::invalid_argument("sequence too long for subset scan");
  LabTables t;
  t.pos = s.expand();
  for (u32 idx : t.pos) {
    t.phi.push_back(idx / ctx.n);
    t.psi.push_back(idx % ctx.n);
  }
  return t;
}

template <class Fn>
inline void for_each_ksubset(u32 length, u32 k, Fn&& fn) {
  if (k == 0 || k > length) return;
  u32 end = 1u << length;
  u32 m = (1u << k) - 1;
  while (m < end) {
    fn(m);
    u32 c = m & (0u - m);
    u32 rr = m + c;
    m = (((m ^ rr) >> 2) / c) | rr;
  }
}

inline Sequence subset_of(const Sequence& s, const std::vector<u32>& pos, u32 mask) {
  Sequence v(s.group());
  for (u32 mm = mask; mm; mm &= mm - 1) v.add(pos[(u32)std::countr_zero(mm)]);
  return v;
}

inline std::string seq_note(const Sequence& s) {
  std::string out = "[";
  bool first = true;
  for (u32 idx : s.expand()) {
    if (!first) out += ",";
    first = false;
    out += std::to_string(idx);
  }
  return out + "]";
}

inline void check_internal(bool ok, const char* what) {
  if (!ok) throw std::logic_error(std::string("lemma evidence failed re-verification: ") + what);
}

} // namespace detail

/* Property (*): every subsequence V of size 3..5 whose phi-image sums to
   zero has psi-sum e (sizes 3, 4) or e or 2e (size 5). */
inline LemmaReport star_check(const Sequence& s, const SplitContext& ctx) {
  detail::LabTables t = detail::lab_tables(s, ctx);
  u32 L = (u32)t.pos.size();
  u32 ev = ctx.e.index(), ev2 = (2 * ctx.e).index();
  LemmaReport rep{"STAR", LemmaOutcome::holds, {}, "", 0};
  u32 bad_mask = 0, bad_k = 0;
  for (u32 k = 3; k <= 5 && !bad_mask; ++k) {
    detail::for_each_ksubset(L, k, [&](u32 mask) {
      if (bad_mask) return;
      u32 ph = 0;
      u64 ps = 0;
      for (u32 mm = mask; mm; mm &= mm - 1) {
        u32 i = (u32)std::countr_zero(mm);
        ph ^= t.phi[i];
        ps += t.psi[i];
      }
      if (ph) return;
      ++rep.checked;
      u32 res = (u32)(ps % ctx.n);
      bool ok = (res == ev) || (k == 5 && res == ev2);
      if (!ok) { bad_mask = mask; bad_k = k; }
    });
  }
  if (bad_mask) {
    Sequence v = detail::subset_of(s, t.pos, bad_mask);
    detail::check_internal(v.subsequence_of(s), "not a subsequence");
    detail::check_internal(seq_map(v, ctx.phi).sum().is_zero(), "phi sum not zero");
    u32 res = seq_map(v, ctx.psi).sum().index();
    detail::check_internal(res != ev && (bad_k != 5 || res != ev2), "psi sum allowed");
    rep.outcome = LemmaOutcome::violated;
    rep.evidence.push_back(v);
    rep.note = "size-" + std::to_string(bad_k) + " subsequence " + detail::seq_note(v) +
               " has psi-sum " + std::to_string(res);
  } else if (rep.checked == 0) {
    rep.outcome = LemmaOutcome::vacuous;
    rep.note = "no subsequence of size 3..5 has zero phi-sum";
  } else {
    rep.note = std::to_string(rep.checked) + " qualifying subsequences conform";
  }
  return rep;
}

/* If every 4-element subsequence with zero phi-sum has the same full sum,
   then psi takes a single value on S.  Hypotheses: phi(S) squarefree with
   support exactly the nonzero elements of Z_2^r, r >= 3. */
inline LemmaReport p1_check(const Sequence& s, const SplitContext& ctx) {
  if (ctx.r < 3) throw std::invalid_argument("p1_check: need r >= 3");
  Sequence shadow = seq_map(s, ctx.phi);
  if (!shadow.squarefree() || shadow.mult((u32)0) != 0 ||
      s.length() != (1ull << ctx.r) - 1)
    throw std::invalid_argument("p1_check: phi(S) must enumerate the nonzero elements once");
  detail::LabTables t = detail::lab_tables(s, ctx);
  u32 L = (u32)t.pos.size();
  const GroupSpec& g = ctx.G;

  LemmaReport rep{"SUPP_P1", LemmaOutcome::holds, {}, "", 0};
  bool have_first = false;
  u32 first_mask = 0, first_sum = 0, other_mask = 0, other_sum = 0;
  detail::for_each_ksubset(L, 4, [&](u32 mask) {
    if (other_mask) return;
    u32 ph = 0, full = 0;
    for (u32 mm = mask; mm; mm &= mm - 1) {
      u32 i = (u32)std::countr_zero(mm);
      ph ^= t.phi[i];
      full = g.add(full, t.pos[i]);
    }
    if (ph) return;
    ++rep.checked;
    if (!have_first) {
      have_first = true;
      first_mask = mask;
      first_sum = full;
    } else if (full != first_sum) {
      other_mask = mask;
      other_sum = full;
    }
  });

  if (other_mask) {
    Sequence t1 = detail::subset_of(s, t.pos, first_mask);
    Sequence t2 = detail::subset_of(s, t.pos, other_mask);
    detail::check_internal(seq_map(t1, ctx.phi).sum().is_zero() &&
                           seq_map(t2, ctx.phi).sum().is_zero(), "phi sums not zero");
    detail::check_internal(t1.sum().index() == first_sum &&
                           t2.sum().index() == other_sum && first_sum != other_sum,
                           "sums do not differ");
    rep.outcome = LemmaOutcome::vacuous;
    rep.evidence = {t1, t2};
    rep.note = "premise fails: quadruples " + detail::seq_note(t1) + " and " +
               detail::seq_note(t2) + " have different sums";
    return rep;
  }

  std::set<u32> psi_supp(t.psi.begin(), t.psi.end());
  if (psi_supp.size() == 1) {
    rep.note = "premise holds on " + std::to_string(rep.checked) +
               " quadruples; psi support is a single residue";
  } else {
    rep.outcome = LemmaOutcome::violated;
    rep.evidence = {s};
    rep.note = "premise holds but psi takes " + std::to_string(psi_supp.size()) + " values";
  }
  return rep;
}

/* Over Z_2^4 x Z_n (n odd): a 10-element S with squarefree nonzero
   phi-image always yields either (a) two subsequences of size 3..4 with
   zero phi-sum and different psi-sums, or (b) a genuine zero-sum
   subsequence of size 3..4.  Neither existing would refute the counting
   lemma behind it. */
inline LemmaReport imp_find(const Sequence& s, const SplitContext& ctx) {
  if (ctx.r != 4 || ctx.n < 3 || ctx.n % 2 == 0)
    throw std::invalid_argument("imp_find: context must be Z_2^4 x Z_n, n odd >= 3");
  if (s.length() != 10) throw std::invalid_argument("imp_find: need |S| = 10");
  Sequence shadow = seq_map(s, ctx.phi);
  if (!shadow.squarefree() || shadow.mult((u32)0) != 0)
    throw std::invalid_argument("imp_find: phi(S) must be squarefree and avoid zero");

  detail::LabTables t = detail::lab_tables(s, ctx);
  u32 L = (u32)t.pos.size();
  std::vector<std::pair<u32, u32>> relations;  // (mask, psi residue)
  for (u32 k = 3; k <= 4; ++k) {
    detail::for_each_ksubset(L, k, [&](u32 mask) {
      u32 ph = 0;
      u64 ps = 0;
      for (u32 mm = mask; mm; mm &= mm - 1) {
        u32 i = (u32)std::countr_zero(mm);
        ph ^= t.phi[i];
        ps += t.psi[i];
      }
      if (ph == 0) relations.emplace_back(mask, (u32)(ps % ctx.n));
    });
  }

  LemmaReport rep{"IMP", LemmaOutcome::holds, {}, "", relations.size()};
  if (relations.empty()) {
    rep.outcome = LemmaOutcome::violated;
    rep.evidence = {s};
    rep.note = "no subsequence of size 3..4 has zero phi-sum";
    return rep;
  }
  for (std::size_t i = 1; i < relations.size(); ++i) {
    if (relations[i].second != relations[0].second) {
      Sequence t1 = detail::subset_of(s, t.pos, relations[0].first);
      Sequence t2 = detail::subset_of(s, t.pos, relations[i].first);
      detail::check_internal(seq_map(t1, ctx.phi).sum().is_zero() &&
                             seq_map(t2, ctx.phi).sum().is_zero(), "phi sums not zero");
      detail::check_internal(seq_map(t1, ctx.psi).sum() != seq_map(t2, ctx.psi).sum(),
                             "psi sums equal");
      rep.outcome = LemmaOutcome::witness_found;
      rep.evidence = {t1, t2};
      rep.note = "(a) psi-sums " + std::to_string(relations[0].second) + " vs " +
                 std::to_string(relations[i].second);
      return rep;
    }
  }
  if (relations[0].second == 0) {
    Sequence v = detail::subset_of(s, t.pos, relations[0].first);
    detail::check_internal(v.sum().is_zero(), "sum not zero");
    rep.outcome = LemmaOutcome::witness_found;
    rep.evidence = {v};
    rep.note = "(b) zero-sum subsequence " + detail::seq_note(v);
    return rep;
  }
  rep.outcome = LemmaOutcome::violated;
  rep.evidence = {s};
  rep.note = "all " + std::to_string(relations.size()) + " relations share nonzero psi-sum " +
             std::to_string(relations[0].second);
  return rep;
}

/* Over Z_2^4 x Z_3: every 12-element S with squarefree phi-image has a
   zero-sum subsequence of length 1..6. */
inline LemmaReport sho_check(const Sequence& s, const SplitContext& ctx) {
  if (ctx.r != 4 || ctx.n != 3)
    throw std::invalid_argument("sho_check: context must be Z_2^4 x Z_3");
  if (s.length() != 12) throw std::invalid_argument("sho_check: need |S| = 12");
  if (!seq_map(s, ctx.phi).squarefree())
    throw std::invalid_argument("sho_check: phi(S) must be squarefree");
  LemmaReport rep{"SHO", LemmaOutcome::witness_found, {}, "", 1};
  if (auto w = witness_short_zero_sum(s)) {
    detail::check_internal(w->sub.length() >= 1 && w->sub.length() <= 6 &&
                           w->sub.sum().is_zero() && w->sub.subsequence_of(s),
                           "short zero-sum");
    rep.evidence = {w->sub};
    rep.note = "zero-sum subsequence of length " + std::to_string(w->sub.length());
  } else {
    rep.outcome = LemmaOutcome::violated;
    rep.evidence = {s};
    rep.note = "no zero-sum subsequence of length 1..6";
  }
  return rep;
}

/* Over Z_2^3 x Z_2n (n even >= 2) with theta the doubling map: an
   8-element S with squarefree nonzero theta-image yields, for any k
   coprime to n, a subsequence T of size 3..4 with theta(sigma(T)) = 0 and
   sigma(T) != 2k e. */
inline LemmaReport eimp1_find(const Sequence& s, i64 k) {
  const GroupSpec& g = s.group();
  const auto& f = g.factors();
  if (f.size() != 4 || f[0] != 2 || f[1] != 2 || f[2] != 2 || f[3] % 4 != 0 || f[3] < 4)
    throw std::invalid_argument("eimp1_find: group must be Z_2^3 x Z_2n with n even");
  u32 n = (u32)f[3] / 2;
  if (k < 1 || std::gcd((u64)k, (u64)n) != 1)
    throw std::invalid_argument("eimp1_find: need k >= 1 coprime to n");
  if (s.length() != 8) throw std::invalid_argument("eimp1_find: need |S| = 8");
  Homomorphism theta = doubling_hom(g);
  Sequence shadow = seq_map(s, theta);
  if (!shadow.squarefree() || shadow.mult((u32)0) != 0)
    throw std::invalid_argument("eimp1_find: theta(S) must be squarefree and avoid zero");

  Element e = unit_of(g, 3);
  u32 banned = (2 * k * e).index();
  std::vector<u32> pos = s.expand();
  LemmaReport rep{"EIMP1", LemmaOutcome::violated, {}, "", 0};
  u32 found_mask = 0;
  for (u32 ksz = 3; ksz <= 4 && !found_mask; ++ksz) {
    detail::for_each_ksubset((u32)pos.size(), ksz, [&](u32 mask) {
      if (found_mask) return;
      u32 full = 0;
      for (u32 mm = mask; mm; mm &= mm - 1)
        full = g.add(full, pos[(u32)std::countr_zero(mm)]);
      ++rep.checked;
      if (theta.apply_index(full) == 0 && full != banned) found_mask = mask;
    });
  }
  if (found_mask) {
    Sequence t = detail::subset_of(s, pos, found_mask);
    detail::check_internal(t.subsequence_of(s) && t.length() >= 3 && t.length() <= 4,
                           "shape");
    detail::check_internal(theta.apply(t.sum()).is_zero() && t.sum().index() != banned,
                           "kernel/offset condition");
    rep.outcome = LemmaOutcome::witness_found;
    rep.evidence = {t};
    rep.note = "sigma(T) = " + std::to_string(t.sum().index()) + ", banned " +
               std::to_string(banned);
  } else {
    rep.evidence = {s};
    rep.note = "no qualifying subsequence of size 3..4";
  }
  return rep;
}

/* ------------------------------------------------------------------ */
/* Falsification harness                                              */

struct FalsifyConfig {
  std::string lemma;
  int mode = -1;           // -1 auto, 0 random, 1 exhaustive
  u64 samples = 10000;     // random-mode instances
  u64 seed = 1;
  u32 n_max = 0;           // sweep bound for the cyclic lemmas (0 = default)
  double max_seconds = 0;  // 0 = unlimited
};

struct FalsifyOutcome {
  std::string lemma;
  std::string mode;
  u64 instances = 0;
  u64 counterexamples = 0;
  u64 seed = 0;
  u64 elapsed_ms = 0;
  bool completed = true;  // false when the time budget cut the sweep short
  std::vector<std::string> notes;
};

inline const std::vector<std::string>& registered_lemmas() {
  static const std::vector<std::string> ids = {
      "CYCLIC_1", "CYCLIC_3", "SUM", "SUPP_P1", "IMP",
      "SHO",      "STAR_XX1", "LL1", "EIMP1"};
  return ids;
}

namespace detail {

struct Stopwatch {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double limit = 0;
  bool expired() const {
    if (limit <= 0) return false;
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() >
           limit;
  }
  u64 ms() const {
    return (u64)std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - t0)
        .count();
  }
};

inline void note_counterexample(FalsifyOutcome& out, const std::string& text) {
  ++out.counterexamples;
  if (out.notes.size() < 8) out.notes.push_back(text);
}

/* DFS over non-decreasing index strings that stay free; calls leaf() at the
   target length.  Freeness is anti-monotone, so pruning is sound. */
template <class Leaf>
inline void enumerate_free_leaves(const GroupSpec& g, FreenessKind kind, u32 target,
                                  const Stopwatch& watch, bool& completed, Leaf&& leaf) {
  ReachEngine eng(g, target, true);
  u32 order = (u32)g.order();
  u32 exp = (u32)g.exponent();
  std::vector<u32> stack;
  auto rec = [&](auto&& self, u32 from) -> void {
    if (watch.expired()) { completed = false; return; }
    if (stack.size() == target) { leaf(stack); return; }
    for (u32 x = from; x < order && completed; ++x) {
      eng.push(x);
      if (engine_free(eng, kind, exp)) {
        stack.push_back(x);
        self(self, x);
        stack.pop_back();
      }
      eng.pop();
    }
  };
  rec(rec, 0);
}

inline void falsify_cyclic_1(const FalsifyConfig& cfg, FalsifyOutcome& out,
                             const Stopwatch& watch) {
  u32 top = cfg.n_max ? cfg.n_max : 12;
  for (u32 n = 2; n <= top && out.completed; ++n) {
    GroupSpec g = make_group({(int)n});
    enumerate_free_leaves(g, FreenessKind::NONEMPTY_ZERO_SUM, n - 1, watch,
                          out.completed, [&](const std::vector<u32>& stack) {
      ++out.instances;
      bool powerform = stack.front() == stack.back() &&
                       (u32)Element(g, stack[0]).ord() == n;
      if (!powerform)
        note_counterexample(out, "C_" + std::to_string(n) +
                                     ": maximal zero-sum free sequence is not g^{n-1}");
    });
  }
}

inline void falsify_cyclic_3(const FalsifyConfig& cfg, FalsifyOutcome& out,
                             const Stopwatch& watch) {
  u32 top = cfg.n_max ? cfg.n_max : 8;
  for (u32 n = 2; n <= top && out.completed; ++n) {
    GroupSpec g = make_group({(int)n});
    enumerate_free_leaves(g, FreenessKind::EXP_LENGTH_ZERO_SUM, 2 * n - 2, watch,
                          out.completed, [&](const std::vector<u32>& stack) {
      ++out.instances;
      Sequence s = seq_from_indices(g, stack);
      auto supp = s.support();
      bool pairform = supp.size() == 2 && s.mult(supp[0]) == n - 1 &&
                      s.mult(supp[1]) == n - 1 &&
                      (u32)(Element(g, supp[0]) - Element(g, supp[1])).ord() == n;
      if (!pairform)
        note_counterexample(out, "C_" + std::to_string(n) +
                                     ": length-(2n-2) sequence without length-n zero-sum "
                                     "is not (g h)^{n-1}: " + seq_note(s));
    });
  }
}

inline void falsify_sum(const FalsifyConfig&, FalsifyOutcome& out,
                        const Stopwatch& watch) {
  GroupSpec g = make_group({2, 2, 2, 2});
  for (u32 mask = 0; mask < (1u << 15) && out.completed; ++mask) {
    if (std::popcount(mask) < 9) continue;
    if (watch.expired()) { out.completed = false; break; }
    Sequence w_seq(g);
    for (u32 mm = mask; mm; mm &= mm - 1) w_seq.add((u32)std::countr_zero(mm) + 1);
    for (u32 mm = mask; mm; mm &= mm - 1) {
      u32 wi = (u32)std::countr_zero(mm) + 1;
      ++out.instances;
      try {
        auto pairs = sum_pairs(w_seq, Element(g, wi));
        std::set<u32> seen;
        bool ok = pairs.size() + 8 >= w_seq.length();
        for (const Sequence& p : pairs) {
          ok = ok && p.length() == 2 && p.sum().index() == wi;
          for (u32 idx : p.expand())
            ok = ok && idx != wi && w_seq.mult(idx) == 1 && seen.insert(idx).second;
        }
        if (!ok)
          note_counterexample(out, "pair family fails re-verification at W=" +
                                       seq_note(w_seq) + " w=" + std::to_string(wi));
      } catch (const lemma_falsified& ex) {
        note_counterexample(out, ex.what());
      }
    }
  }
}

inline void falsify_supp_p1_exhaustive(FalsifyOutcome& out, const Stopwatch& watch) {
  for (u32 n : {3u, 5u}) {
    SplitContext ctx = make_split(3, n);
    std::vector<u32> psi(7, 0);
    bool more = true;
    while (more && out.completed) {
      if (watch.expired()) { out.completed = false; break; }
      Sequence s(ctx.G);
      for (u32 i = 0; i < 7; ++i) s.add(split_element(ctx, i + 1, psi[i]));
      ++out.instances;
      LemmaReport rep = p1_check(s, ctx);
      if (rep.outcome == LemmaOutcome::violated)
        note_counterexample(out, "n=" + std::to_string(n) + " S=" + seq_note(s) +
                                     ": " + rep.note);
      // odometer over psi assignments
      more = false;
      for (u32 i = 0; i < 7; ++i) {
        if (++psi[i] < n) { more = true; break; }
        psi[i] = 0;
      }
    }
  }
}

inline void falsify_supp_p1_random(const FalsifyConfig& cfg, FalsifyOutcome& out,
                                   const Stopwatch& watch) {
  const u32 ns[3] = {3, 5, 7};
  std::map<std::pair<u32, u32>, SplitContext> cache;
  for (u64 i = 0; i < cfg.samples && out.completed; ++i) {
    if (watch.expired()) { out.completed = false; break; }
    std::mt19937_64 rng = instance_rng(cfg.seed, i);
    u32 r = (i % 2) ? 4 : 3;
    u32 n = ns[i % 3];
    auto key = std::make_pair(r, n);
    if (!cache.count(key)) cache.emplace(key, make_split(r, n));
    const SplitContext& ctx = cache.at(key);
    u32 count = (1u << r) - 1;
    Sequence s(ctx.G);
    u32 style = i % 8;
    u32 base = (u32)uniform_below(rng, n);
    for (u32 v = 1; v <= count; ++v) {
      u32 res = style == 0 ? base
              : style == 1 ? (v == 1 ? (base + 1) % n : base)
                           : (u32)uniform_below(rng, n);
      s.add(split_element(ctx, v, res));
    }
    ++out.instances;
    LemmaReport rep = p1_check(s, ctx);
    if (rep.outcome == LemmaOutcome::violated)
      note_counterexample(out, "r=" + std::to_string(r) + " n=" + std::to_string(n) +
                                   " S=" + seq_note(s) + ": " + rep.note);
  }
}

inline void falsify_imp(const FalsifyConfig& cfg, FalsifyOutcome& out,
                        const Stopwatch& watch) {
  const u32 ns[4] = {3, 5, 7, 9};
  std::map<u32, SplitContext> cache;
  for (u64 i = 0; i < cfg.samples && out.completed; ++i) {
    if (watch.expired()) { out.completed = false; break; }
    std::mt19937_64 rng = instance_rng(cfg.seed, i);
    u32 n = ns[i % 4];
    if (!cache.count(n)) cache.emplace(n, make_split(4, n));
    const SplitContext& ctx = cache.at(n);
    Sequence s(ctx.G);
    for (u32 v : sample_distinct(rng, 15, 10))
      s.add(split_element(ctx, v + 1, (u32)uniform_below(rng, n)));
    ++out.instances;
    LemmaReport rep = imp_find(s, ctx);
    if (rep.outcome == LemmaOutcome::violated)
      note_counterexample(out, "n=" + std::to_string(n) + " S=" + seq_note(s) + ": " +
                                   rep.note);
  }
}

inline void falsify_sho(const FalsifyConfig& cfg, FalsifyOutcome& out,
                        const Stopwatch& watch) {
  SplitContext ctx = make_split(4, 3);
  for (u64 i = 0; i < cfg.samples && out.completed; ++i) {
    if (watch.expired()) { out.completed = false; break; }
    std::mt19937_64 rng = instance_rng(cfg.seed, i);
    Sequence s(ctx.G);
    for (u32 v : sample_distinct(rng, 16, 12))
      s.add(split_element(ctx, v, (u32)uniform_below(rng, 3)));
    ++out.instances;
    LemmaReport rep = sho_check(s, ctx);
    if (rep.outcome == LemmaOutcome::violated)
      note_counterexample(out, "S=" + seq_note(s) + ": " + rep.note);
  }
}

inline void falsify_star_xx1(const FalsifyConfig& cfg, FalsifyOutcome& out,
                             const Stopwatch& watch) {
  SplitContext ctx1 = make_split(4, 3, 1), ctx2 = make_split(4, 3, 2);
  for (u64 i = 0; i < cfg.samples && out.completed; ++i) {
    if (watch.expired()) { out.completed = false; break; }
    std::mt19937_64 rng = instance_rng(cfg.seed, i);
    Sequence s(ctx1.G);
    for (u32 v : sample_distinct(rng, 15, 9))
      s.add(split_element(ctx1, v + 1, (u32)uniform_below(rng, 3)));
    for (const SplitContext* ctx : {&ctx1, &ctx2}) {
      ++out.instances;
      LemmaReport rep = star_check(s, *ctx);
      if (rep.outcome != LemmaOutcome::violated)
        note_counterexample(out, "S=" + seq_note(s) + " satisfies (*) for e=" +
                                     std::to_string(ctx->e.index()));
    }
  }
}

inline void falsify_ll1(const FalsifyConfig& cfg, FalsifyOutcome& out,
                        const Stopwatch& watch) {
  const u32 ns[2] = {3, 5};
  std::map<std::pair<u32, u32>, SplitContext> cache;
  for (u64 i = 0; i < cfg.samples && out.completed; ++i) {
    if (watch.expired()) { out.completed = false; break; }
    std::mt19937_64 rng = instance_rng(cfg.seed, i);
    u32 n = ns[i % 2];
    bool constant = (i % 4 == 0);
    u32 base = (u32)uniform_below(rng, n);
    std::vector<u32> phis = sample_distinct(rng, 15, 8);
    for (u32 e = 1; e < n && out.completed; ++e) {
      if (std::gcd((u64)e, (u64)n) != 1) continue;
      auto key = std::make_pair(n, e);
      if (!cache.count(key)) cache.emplace(key, make_split(4, n, e));
      const SplitContext& ctx = cache.at(key);
      Sequence s(ctx.G);
      for (u32 v : phis)
        s.add(split_element(ctx, v + 1, constant ? base : (u32)uniform_below(rng, n)));
      ++out.instances;
      LemmaReport rep = star_check(s, ctx);
      if (rep.outcome == LemmaOutcome::violated) continue;  // (*) fails, nothing claimed
      u32 half = ((n + 1) / 2 * e) % n;
      if (seq_map(s, ctx.psi).mult(half) > 0)
        note_counterexample(out, "n=" + std::to_string(n) + " e=" + std::to_string(e) +
                                     " S=" + seq_note(s) +
                                     ": (*) holds yet (n+1)/2 e lies in the psi support");
    }
  }
}

inline void falsify_eimp1(const FalsifyConfig& cfg, FalsifyOutcome& out,
                          const Stopwatch& watch) {
  for (u64 i = 0; i < cfg.samples && out.completed; ++i) {
    if (watch.expired()) { out.completed = false; break; }
    std::mt19937_64 rng = instance_rng(cfg.seed, i);
    u32 n = (i % 2) ? 4 : 2;
    GroupSpec g = make_group({2, 2, 2, (int)(2 * n)});
    Sequence s(g);
    for (u32 code : sample_distinct(rng, 15, 8)) {
      ++code;  // theta-image label in 1..15: bits (b1 b2 b3 parity)
      u32 x4 = 2 * (u32)uniform_below(rng, n) + (code & 1);
      s.add(g.index_of({(int)((code >> 3) & 1), (int)((code >> 2) & 1),
                        (int)((code >> 1) & 1), (int)x4}));
    }
    i64 k = (n == 2) ? 1 : (uniform_below(rng, 2) ? 3 : 1);
    ++out.instances;
    LemmaReport rep = eimp1_find(s, k);
    if (rep.outcome == LemmaOutcome::violated)
      note_counterexample(out, "n=" + std::to_string(n) + " k=" + std::to_string(k) +
                                   " S=" + seq_note(s) + ": " + rep.note);
  }
}

} // namespace detail

inline FalsifyOutcome falsify(const FalsifyConfig& cfg) {
  const auto& ids = registered_lemmas();
  if (std::find(ids.begin(), ids.end(), cfg.lemma) == ids.end()) {
    std::string msg = "unknown lemma '" + cfg.lemma + "'; registered:";
    for (const auto& id : ids) msg += " " + id;
    throw std::invalid_argument(msg);
  }
  bool has_exhaustive = cfg.lemma == "CYCLIC_1" || cfg.lemma == "CYCLIC_3" ||
                        cfg.lemma == "SUM" || cfg.lemma == "SUPP_P1";
  bool has_random = !(cfg.lemma == "CYCLIC_1" || cfg.lemma == "CYCLIC_3" ||
                      cfg.lemma == "SUM");
  bool exhaustive = cfg.mode == -1 ? has_exhaustive : cfg.mode == 1;
  if (exhaustive && !has_exhaustive)
    throw std::invalid_argument("no exhaustive enumeration for " + cfg.lemma);
  if (!exhaustive && !has_random)
    throw std::invalid_argument(cfg.lemma + " is checked by exhaustive sweep only");

  FalsifyOutcome out;
  out.lemma = cfg.lemma;
  out.mode = exhaustive ? "exhaustive" : "random";
  out.seed = cfg.seed;
  detail::Stopwatch watch{std::chrono::steady_clock::now(), cfg.max_seconds};

  if (cfg.lemma == "CYCLIC_1") detail::falsify_cyclic_1(cfg, out, watch);
  else if (cfg.lemma == "CYCLIC_3") detail::falsify_cyclic_3(cfg, out, watch);
  else if (cfg.lemma == "SUM") detail::falsify_sum(cfg, out, watch);
  else if (cfg.lemma == "SUPP_P1") {
    if (exhaustive) detail::falsify_supp_p1_exhaustive(out, watch);
    else detail::falsify_supp_p1_random(cfg, out, watch);
  }
  else if (cfg.lemma == "IMP") detail::falsify_imp(cfg, out, watch);
  else if (cfg.lemma == "SHO") detail::falsify_sho(cfg, out, watch);
  else if (cfg.lemma == "STAR_XX1") detail::falsify_star_xx1(cfg, out, watch);
  else if (cfg.lemma == "LL1") detail::falsify_ll1(cfg, out, watch);
  else detail::falsify_eimp1(cfg, out, watch);

  out.elapsed_ms = watch.ms();
  return out;
}

} // namespace zerosum
