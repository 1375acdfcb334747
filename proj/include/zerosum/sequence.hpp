#pragma once
// Sequences over a finite abelian group: finite multisets, written
// multiplicatively in the literature.  Stored as index -> multiplicity.

#include "group.hpp"

#include <map>

namespace zerosum {

class Sequence {
 public:
  Sequence() = default;
  explicit Sequence(GroupSpec g) : g_(std::move(g)) {}

  const GroupSpec& group() const { return g_; }
  const std::map<u32, u32>& entries() const { return mult_; }
  u64 length() const { return len_; }
  bool empty() const { return len_ == 0; }

  u32 mult(u32 idx) const {
    auto it = mult_.find(idx);
    return it == mult_.end() ? 0 : it->second;
  }
  u32 mult(const Element& e) const { return mult(checked_index(e)); }

  void add(u32 idx, u32 k = 1) {
    if (idx >= g_.order()) throw std::invalid_argument("element index out of range");
    if (!k) return;
    mult_[idx] += k;
    len_ += k;
  }
  void add(const Element& e, u32 k = 1) { add(checked_index(e), k); }

  void remove(u32 idx, u32 k = 1) {
    auto it = mult_.find(idx);
    if (it == mult_.end() || it->second < k)
      throw std::invalid_argument("removing more copies than present");
    it->second -= k;
    len_ -= k;
    if (!it->second) mult_.erase(it);
  }

  Element sum() const {
    u32 acc = 0;
    for (auto [idx, k] : mult_) acc = g_.add(acc, g_.scalar(k, idx));
    return Element(g_, acc);
  }

  std::vector<u32> support() const {
    std::vector<u32> s;
    for (auto [idx, k] : mult_) s.push_back(idx);
    return s;
  }

  bool squarefree() const {
    for (auto [idx, k] : mult_)
      if (k > 1) return false;
    return true;
  }

  /* Indices expanded with multiplicity, ascending. */
  std::vector<u32> expand() const {
    std::vector<u32> out;
    out.reserve(len_);
    for (auto [idx, k] : mult_)
      for (u32 i = 0; i < k; ++i) out.push_back(idx);
    return out;
  }

  bool subsequence_of(const Sequence& big) const {
    if (g_ != big.g_) throw std::invalid_argument("sequences over different groups");
    for (auto [idx, k] : mult_)
      if (big.mult(idx) < k) return false;
    return true;
  }

  friend bool operator==(const Sequence& a, const Sequence& b) {
    return a.g_ == b.g_ && a.mult_ == b.mult_;
  }
  friend bool operator!=(const Sequence& a, const Sequence& b) { return !(a == b); }

 private:
  u32 checked_index(const Element& e) const {
    if (e.group() != g_) throw std::invalid_argument("element of a different group");
    return e.index();
  }
  GroupSpec g_;
  std::map<u32, u32> mult_;
  u64 len_ = 0;
};

inline Sequence seq_from(const GroupSpec& g, const std::vector<Element>& elems) {
  Sequence s(g);
  for (const auto& e : elems) s.add(e);
  return s;
}

inline Sequence seq_from_indices(const GroupSpec& g, const std::vector<u32>& idxs) {
  Sequence s(g);
  for (u32 i : idxs) s.add(i);
  return s;
}

inline Sequence seq_concat(const Sequence& a, const Sequence& b) {
  if (a.group() != b.group())
    throw std::invalid_argument("sequences over different groups");
  Sequence out = a;
  for (auto [idx, k] : b.entries()) out.add(idx, k);
  return out;
}

/* a with the sub-multiset b removed; throws when b is not a subsequence. */
inline Sequence seq_minus(const Sequence& a, const Sequence& b) {
  if (a.group() != b.group())
    throw std::invalid_argument("sequences over different groups");
  Sequence out = a;
  for (auto [idx, k] : b.entries()) out.remove(idx, k);
  return out;
}

/* Every element shifted by b; sum shifts by |S| * b. */
inline Sequence seq_translate(const Sequence& s, const Element& b) {
  if (b.group() != s.group())
    throw std::invalid_argument("translation element of a different group");
  Sequence out(s.group());
  for (auto [idx, k] : s.entries())
    out.add(s.group().add(idx, b.index()), k);
  return out;
}

inline Sequence seq_map(const Sequence& s, const Homomorphism& h) {
  if (s.group() != h.domain())
    throw std::invalid_argument("sequence not over the homomorphism domain");
  Sequence out(h.codomain());
  for (auto [idx, k] : s.entries()) out.add(h.apply_index(idx), k);
  return out;
}

} // namespace zerosum
