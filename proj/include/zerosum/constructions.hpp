#pragma once
// Explicit extremal sequences and the structural decompositions behind them.
// Constructors validate their parameters; structural checkers distinguish a
// caller error (std::invalid_argument) from a refuted mathematical claim
// (lemma_falsified).

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "zerosum/group.hpp"
#include "zerosum/reach.hpp"
#include "zerosum/sequence.hpp"

namespace zerosum {

/* (g h)^{n-1} over a cyclic group of order n.  Whenever g - h generates,
   this has no zero-sum subsequence of length exactly n, so it realizes
   s(C_n) >= 2n - 1. */
inline Sequence cyclic_extremal(u32 n, const Element& g, const Element& h) {
  if (n == 0) throw std::invalid_argument("cyclic_extremal: order must be positive");
  const GroupSpec& grp = g.group();
  if (h.group() != grp) throw std::invalid_argument("cyclic_extremal: mixed groups");
  if (grp.rank() != 1 || grp.factors()[0] != (i64)n)
    throw std::invalid_argument("cyclic_extremal: group is not C_n as presented");
  if ((u32)(g - h).ord() != n)
    throw std::invalid_argument("cyclic_extremal: g - h does not generate");
  Sequence s(grp);
  if (n > 1) {
    s.add(g, n - 1);
    s.add(h, n - 1);
  }
  return s;
}

inline Sequence cyclic_extremal(u32 n, u32 g_res = 0, u32 h_res = 1) {
  GroupSpec grp = make_group({(int)n});
  return cyclic_extremal(n, Element(grp, g_res % std::max<u32>(n, 1)),
                         Element(grp, h_res % std::max<u32>(n, 1)));
}

/* Structure of a long zero-sum free sequence over C_n: some generator g
   writes S as g^{k_1} ... with k = sum k_i < n and subsequence sums exactly
   {g, 2g, ..., kg}.  Requires |S| > n/2.  A hypothesis-satisfying S with no
   such representation would refute the structure theorem, so that case
   throws lemma_falsified rather than returning. */
struct CyclicStructure {
  Element g;            // generator realizing the representation
  std::vector<u32> ks;  // exponents k_i, ascending, one per copy group
  u32 k = 0;            // sum of the k_i
};

inline CyclicStructure cyclic_structure(const Sequence& s) {
  const GroupSpec& grp = s.group();
  if (grp.rank() != 1)
    throw std::invalid_argument("cyclic_structure: group is not presented as C_n");
  u64 n = grp.order();
  if (2 * s.length() <= n)
    throw std::invalid_argument("cyclic_structure: need |S| > n/2");
  if (has_nonempty_zero_sum(s))
    throw std::invalid_argument("cyclic_structure: sequence has a zero-sum subsequence");

  std::vector<u32> sums = subsums(s);   // ascending residues, 0 absent by freeness
  std::set<u32> sumset(sums.begin(), sums.end());

  for (u32 u = 1; u < n; ++u) {
    if (std::gcd((u64)u, n) != 1) continue;
    // digits k_i = s_i * u^{-1}; accumulate via repeated subtraction-free scan
    u64 uinv = 0;
    for (u64 t = 1; t < n; ++t) if ((t * u) % n == 1) { uinv = t; break; }
    std::vector<u32> ks;
    u64 total = 0;
    bool ok = true;
    for (u32 v : s.support()) {
      u32 ki = (u32)(((u64)v * uinv) % n);
      u32 m = s.mult(v);
      for (u32 c = 0; c < m; ++c) ks.push_back(ki);
      total += (u64)ki * m;
      if (total >= n) { ok = false; break; }
    }
    if (!ok) continue;
    // sum set must be exactly {u, 2u, ..., total*u}
    if (sumset.size() != total) continue;
    bool exact = true;
    for (u64 t = 1; t <= total; ++t)
      if (!sumset.count((u32)((t * u) % n))) { exact = false; break; }
    if (!exact) continue;
    std::sort(ks.begin(), ks.end());
    return CyclicStructure{Element(grp, u), std::move(ks), (u32)total};
  }
  throw lemma_falsified(
      "cyclic_structure: zero-sum free sequence of length " +
      std::to_string(s.length()) + " over C_" + std::to_string(n) +
      " admits no generator representation");
}

/* The groups the two witness families live over: Z_2^{r-1} x Z_2n. */
inline GroupSpec witness_group(u32 r, u32 n) {
  if (r < 1 || n < 1) throw std::invalid_argument("witness parameters must be >= 1");
  std::vector<int> f(r - 1, 2);
  f.push_back(2 * (int)n);
  return make_group(f);
}

/* e^{2n-1} prod_i e_i (e_i + e): no zero-sum subsequence of length at most
   exp(G) = 2n, so eta(Z_2^{r-1} x Z_2n) >= 2n + 2r - 2. */
inline Sequence eta_witness(u32 r, u32 n) {
  GroupSpec g = witness_group(r, n);
  Element e = unit_of(g, (int)r - 1);
  Sequence s(g);
  s.add(e, 2 * n - 1);
  for (u32 i = 0; i + 1 < r; ++i) {
    Element ei = unit_of(g, (int)i);
    s.add(ei);
    s.add(ei + e);
  }
  return s;
}

/* 0^{2n-1} e^{2n-1} prod_i e_i (e_i + e): no zero-sum subsequence of length
   exactly exp(G) = 2n, so s(Z_2^{r-1} x Z_2n) >= 4n + 2r - 3. */
inline Sequence s_witness(u32 r, u32 n) {
  Sequence s = eta_witness(r, n);
  s.add(zero_of(s.group()), 2 * n - 1);
  return s;
}

/* Split S along a homomorphism h with image of exponent <= 2: greedily pair
   off copies whose h-images agree.  Each pair's h-image sums to zero, the
   pair count k is the maximum possible, and h(rest) is squarefree. */
struct PairDecomposition {
  std::vector<Sequence> pairs;  // k two-element subsequences
  Sequence rest;                // what is left; h(rest) squarefree
};

inline PairDecomposition pair_decomposition(const Sequence& s, const Homomorphism& h) {
  if (h.domain() != s.group())
    throw std::invalid_argument("pair_decomposition: domain mismatch");
  for (const Element& im : h.images())
    if (!(2 * im).is_zero())
      throw std::invalid_argument("pair_decomposition: image must have exponent <= 2");

  // bucket expanded copies by h-image, preserving ascending element order
  std::map<u32, std::vector<u32>> buckets;
  for (u32 idx : s.expand()) buckets[h.apply_index(idx)].push_back(idx);

  PairDecomposition out{{}, Sequence(s.group())};
  u64 expected = 0;
  for (auto& [img, copies] : buckets) {
    (void)img;
    expected += copies.size() / 2;
    std::size_t i = 0;
    for (; i + 1 < copies.size(); i += 2)
      out.pairs.push_back(seq_from_indices(s.group(), {copies[i], copies[i + 1]}));
    if (i < copies.size()) out.rest.add(copies[i]);
  }

  // sanity: maximality, reconstruction, squarefree shadow
  if (out.pairs.size() != expected)
    throw std::logic_error("pair_decomposition: lost a pair");
  Sequence rebuilt = out.rest;
  for (const Sequence& p : out.pairs) rebuilt = seq_concat(rebuilt, p);
  if (!(rebuilt == s)) throw std::logic_error("pair_decomposition: reconstruction failed");
  if (!seq_map(out.rest, h).squarefree())
    throw std::logic_error("pair_decomposition: residue shadow not squarefree");
  return out;
}

/* Over C_2^4: a squarefree W of nonzero elements with |W| >= 9 and w in
   supp(W) always contains at least |W| - 8 disjoint two-element
   subsequences summing to w.  Greedy proof made executable: walk the seven
   pairs {a, w + a} partitioning the nonzero elements other than w and keep
   those lying inside W - w.  Fewer than |W| - 8 survivors would refute the
   counting argument, hence lemma_falsified. */
inline std::vector<Sequence> sum_pairs(const Sequence& w_seq, const Element& w) {
  const GroupSpec& g = w_seq.group();
  if (g.factors() != std::vector<int>{2, 2, 2, 2})
    throw std::invalid_argument("sum_pairs: group must be presented as C_2^4");
  if (w.group() != g) throw std::invalid_argument("sum_pairs: mixed groups");
  if (!w_seq.squarefree()) throw std::invalid_argument("sum_pairs: W must be squarefree");
  if (w_seq.mult((u32)0) != 0)
    throw std::invalid_argument("sum_pairs: W must avoid the zero element");
  if (w_seq.length() < 9) throw std::invalid_argument("sum_pairs: need |W| >= 9");
  if (w_seq.mult(w) == 0) throw std::invalid_argument("sum_pairs: w must occur in W");

  u32 wi = w.index();
  std::vector<bool> used(16, false);
  used[0] = used[wi] = true;
  std::vector<Sequence> kept;
  for (u32 a = 1; a < 16; ++a) {
    if (used[a]) continue;
    u32 b = a ^ wi;           // the partner; addition in C_2^4 is xor on indices
    used[a] = used[b] = true;
    if (w_seq.mult(a) && w_seq.mult(b))
      kept.push_back(seq_from_indices(g, {a, b}));
  }
  if (kept.size() + 8 < w_seq.length())
    throw lemma_falsified("sum_pairs: only " + std::to_string(kept.size()) +
                          " pairs inside a W of size " + std::to_string(w_seq.length()));
  return kept;
}

} // namespace zerosum
