#pragma once
// Finite abelian groups G = Z_{n_1} x ... x Z_{n_r}, presentation kept
// verbatim.  Elements are dense residue vectors.  Every element also has a
// mixed-radix index (first factor most significant, last factor fastest)
// so subset-sum tables can be keyed by a flat integer.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace zerosum {

using u8 = std::uint8_t;
using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;

/* Thrown when a procedure encoding a proved statement meets an instance that
   contradicts it.  Harnesses catch this and record a falsification event;
   it is never swallowed silently. */
struct lemma_falsified : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::vector<std::pair<i64, int>> factorize(i64 n) {
  std::vector<std::pair<i64, int>> out;
  for (i64 p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      int e = 0;
      while (n % p == 0) { n /= p; ++e; }
      out.push_back({p, e});
    }
  if (n > 1) out.push_back({n, 1});
  return out;
}

/* Divisibility chain d_1 | d_2 | ... | d_k of the group: group the prime
   powers of the presentation, take per prime the j-th largest power. */
inline std::vector<int> invariant_chain(const std::vector<int>& factors) {
  std::vector<std::pair<i64, std::vector<int>>> primes;  // prime -> exponents desc
  for (int f : factors)
    for (auto [p, e] : factorize(f)) {
      auto it = std::find_if(primes.begin(), primes.end(),
                             [&](auto& pr) { return pr.first == p; });
      if (it == primes.end()) { primes.push_back({p, {e}}); it = primes.end() - 1; }
      else it->second.push_back(e);
    }
  std::size_t depth = 0;
  for (auto& [p, es] : primes) {
    std::sort(es.rbegin(), es.rend());
    depth = std::max(depth, es.size());
  }
  std::vector<int> chain;
  for (std::size_t j = 0; j < depth; ++j) {
    i64 d = 1;
    for (auto& [p, es] : primes)
      if (j < es.size()) {
        i64 pw = 1;
        for (int t = 0; t < es[j]; ++t) pw *= p;
        d *= pw;
      }
    chain.push_back((int)d);
  }
  std::reverse(chain.begin(), chain.end());  // ascending, d_i | d_{i+1}
  return chain;
}

struct GroupData {
  std::vector<int> factors;
  std::vector<int> invariant;
  u64 order = 1;
  int exponent = 1;

  // bitset row layout: index = prefix * cyc + last_residue
  u32 cyc = 1;           // last factor (1 for the trivial group)
  u32 prefix_count = 1;  // order / cyc
  u32 stripe_words = 1;  // words per cyc-stripe
  u32 row_words = 1;     // prefix_count * stripe_words

  mutable std::once_flag add_once;
  mutable std::vector<u32> prefix_add;  // [a*prefix_count+b] mixed-radix sum
};

} // namespace detail

class GroupSpec {
 public:
  GroupSpec() : d_(trivial()) {}
  explicit GroupSpec(std::shared_ptr<const detail::GroupData> d) : d_(std::move(d)) {}

  const std::vector<int>& factors() const { return d_->factors; }
  const std::vector<int>& invariant_factors() const { return d_->invariant; }
  u64 order() const { return d_->order; }
  int exponent() const { return d_->exponent; }
  int rank() const { return (int)d_->factors.size(); }

  bool operator==(const GroupSpec& o) const {
    return d_ == o.d_ || d_->factors == o.d_->factors;
  }
  bool operator!=(const GroupSpec& o) const { return !(*this == o); }

  u32 index_of(const std::vector<int>& res) const {
    const auto& f = d_->factors;
    if (res.size() != f.size())
      throw std::invalid_argument("residue vector has wrong rank");
    u64 idx = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      int r = res[i] % f[i];
      if (r < 0) r += f[i];
      idx = idx * f[i] + r;
    }
    return (u32)idx;
  }

  std::vector<int> residues_of(u32 idx) const {
    const auto& f = d_->factors;
    std::vector<int> res(f.size());
    for (std::size_t i = f.size(); i-- > 0;) {
      res[i] = (int)(idx % f[i]);
      idx /= (u32)f[i];
    }
    return res;
  }

  u32 add(u32 a, u32 b) const {
    const auto& f = d_->factors;
    u32 out = 0, mul = 1;
    // digits combine independently; walk from the fastest factor up
    for (std::size_t i = f.size(); i-- > 0;) {
      u32 n = (u32)f[i];
      u32 da = a % n, db = b % n;
      a /= n; b /= n;
      u32 s = da + db; if (s >= n) s -= n;
      out += s * mul;
      mul *= n;
    }
    return out;
  }

  u32 neg(u32 a) const {
    const auto& f = d_->factors;
    u32 out = 0, mul = 1;
    for (std::size_t i = f.size(); i-- > 0;) {
      u32 n = (u32)f[i];
      u32 da = a % n; a /= n;
      out += (da ? n - da : 0) * mul;
      mul *= n;
    }
    return out;
  }

  u32 scalar(i64 k, u32 a) const {
    const auto& f = d_->factors;
    u32 out = 0, mul = 1;
    for (std::size_t i = f.size(); i-- > 0;) {
      u32 n = (u32)f[i];
      i64 da = (i64)(a % n); a /= n;
      i64 s = (k % n) * da % n; if (s < 0) s += n;
      out += (u32)s * mul;
      mul *= n;
    }
    return out;
  }

  int order_of(u32 a) const {
    const auto& f = d_->factors;
    i64 o = 1;
    for (std::size_t i = f.size(); i-- > 0;) {
      i64 n = f[i], da = (i64)(a % (u32)n); a /= (u32)n;
      o = std::lcm(o, n / std::gcd(da, n));
    }
    return (int)o;
  }

  // bitset layout accessors (used by the reach tables)
  u32 cyc() const { return d_->cyc; }
  u32 prefix_count() const { return d_->prefix_count; }
  u32 stripe_words() const { return d_->stripe_words; }
  u32 row_words() const { return d_->row_words; }

  const std::vector<u32>& prefix_add_table() const {
    std::call_once(d_->add_once, [this] {
      u32 pc = d_->prefix_count, cyc = d_->cyc;
      auto& t = d_->prefix_add;
      t.resize((std::size_t)pc * pc);
      for (u32 a = 0; a < pc; ++a)
        for (u32 b = 0; b < pc; ++b)
          t[(std::size_t)a * pc + b] = add(a * cyc, b * cyc) / cyc;
    });
    return d_->prefix_add;
  }

 private:
  static std::shared_ptr<const detail::GroupData> trivial() {
    static std::shared_ptr<const detail::GroupData> t =
        std::make_shared<detail::GroupData>();
    return t;
  }
  std::shared_ptr<const detail::GroupData> d_;
};

inline GroupSpec make_group(const std::vector<int>& factors) {
  auto d = std::make_shared<detail::GroupData>();
  d->factors = factors;
  for (int f : factors) {
    if (f < 1) throw std::invalid_argument("cyclic factor must be >= 1");
    d->order *= (u64)f;
    if (d->order > (1ull << 30)) throw std::invalid_argument("group too large");
    d->exponent = (int)std::lcm((i64)d->exponent, (i64)f);
  }
  d->invariant = detail::invariant_chain(factors);
  d->cyc = factors.empty() ? 1 : (u32)factors.back();
  d->prefix_count = (u32)(d->order / d->cyc);
  d->stripe_words = (d->cyc + 63) / 64;
  d->row_words = d->prefix_count * d->stripe_words;
  return GroupSpec(std::move(d));
}

class Element {
 public:
  Element() = default;
  Element(GroupSpec g, std::vector<int> res) : g_(std::move(g)) {
    idx_ = g_.index_of(res);
  }
  Element(GroupSpec g, u32 idx) : g_(std::move(g)), idx_(idx) {
    if (idx >= g_.order()) throw std::invalid_argument("element index out of range");
  }

  const GroupSpec& group() const { return g_; }
  u32 index() const { return idx_; }
  std::vector<int> residues() const { return g_.residues_of(idx_); }
  bool is_zero() const { return idx_ == 0; }
  int ord() const { return g_.order_of(idx_); }

  friend Element operator+(const Element& a, const Element& b) {
    check(a, b);
    return Element(a.g_, a.g_.add(a.idx_, b.idx_));
  }
  friend Element operator-(const Element& a, const Element& b) {
    check(a, b);
    return Element(a.g_, a.g_.add(a.idx_, a.g_.neg(b.idx_)));
  }
  friend Element operator-(const Element& a) {
    return Element(a.g_, a.g_.neg(a.idx_));
  }
  friend Element operator*(i64 k, const Element& a) {
    return Element(a.g_, a.g_.scalar(k, a.idx_));
  }
  friend bool operator==(const Element& a, const Element& b) {
    check(a, b);
    return a.idx_ == b.idx_;
  }
  friend bool operator!=(const Element& a, const Element& b) { return !(a == b); }
  friend bool operator<(const Element& a, const Element& b) {
    check(a, b);
    return a.idx_ < b.idx_;
  }

 private:
  static void check(const Element& a, const Element& b) {
    if (a.g_ != b.g_) throw std::invalid_argument("elements of different groups");
  }
  GroupSpec g_;
  u32 idx_ = 0;
};

inline Element zero_of(const GroupSpec& g) { return Element(g, (u32)0); }

/* Generator e_i of the i-th presentation factor. */
inline Element unit_of(const GroupSpec& g, int i) {
  std::vector<int> r(g.rank(), 0);
  r.at((std::size_t)i) = 1;
  return Element(g, r);
}

class Homomorphism {
 public:
  Homomorphism() = default;
  Homomorphism(GroupSpec dom, GroupSpec cod, std::vector<Element> images)
      : dom_(std::move(dom)), cod_(std::move(cod)), img_(std::move(images)) {}

  const GroupSpec& domain() const { return dom_; }
  const GroupSpec& codomain() const { return cod_; }
  const std::vector<Element>& images() const { return img_; }

  Element apply(const Element& x) const {
    if (x.group() != dom_) throw std::invalid_argument("element not in domain");
    u32 acc = 0, idx = x.index();
    const auto& f = dom_.factors();
    for (std::size_t i = f.size(); i-- > 0;) {
      u32 n = (u32)f[i];
      u32 digit = idx % n; idx /= n;
      if (digit) acc = cod_.add(acc, cod_.scalar((i64)digit, img_[i].index()));
    }
    return Element(cod_, acc);
  }

  u32 apply_index(u32 idx) const { return apply(Element(dom_, idx)).index(); }

  /* Full index map; the price is one pass over the domain. */
  std::vector<u32> index_table() const {
    std::vector<u32> t(dom_.order());
    for (u64 x = 0; x < dom_.order(); ++x) t[x] = apply_index((u32)x);
    return t;
  }

 private:
  GroupSpec dom_, cod_;
  std::vector<Element> img_;
};

/* Validates that mapping the i-th generator to images[i] extends to a
   homomorphism: n_i * images[i] must vanish. */
inline Homomorphism make_hom(const GroupSpec& dom, const GroupSpec& cod,
                             const std::vector<Element>& images) {
  if (images.size() != (std::size_t)dom.rank())
    throw std::invalid_argument("need one image per presentation factor");
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (images[i].group() != cod)
      throw std::invalid_argument("image " + std::to_string(i) + " not in codomain");
    if (!((i64)dom.factors()[i] * images[i]).is_zero())
      throw std::invalid_argument(
          "image of generator " + std::to_string(i) + " violates its order");
  }
  return Homomorphism(dom, cod, images);
}

/* For G = Z_2^{r-1} x Z_{2n}: fixes the exponent-2 generators and sends the
   generator e of the Z_{2n} factor to n*e.  Kernel is <2e>, size n. */
inline Homomorphism doubling_hom(const GroupSpec& g) {
  int big = -1;
  for (int i = 0; i < g.rank(); ++i) {
    if (g.factors()[i] == 2) continue;
    if (g.factors()[i] % 2 != 0 || big >= 0)
      throw std::invalid_argument("group is not of the form Z_2^{r-1} x Z_{2n}");
    big = i;
  }
  if (big < 0) {
    if (g.rank() == 0) throw std::invalid_argument("trivial group has no doubling map");
    big = g.rank() - 1;  // all factors equal 2: n = 1, the map fixes everything
  }
  i64 n = g.factors()[big] / 2;
  std::vector<Element> images;
  for (int i = 0; i < g.rank(); ++i)
    images.push_back(i == big ? n * unit_of(g, i) : unit_of(g, i));
  return make_hom(g, g, images);
}

class AutomorphismSet {
 public:
  AutomorphismSet() = default;
  AutomorphismSet(GroupSpec g, std::vector<std::vector<u32>> image_tuples,
                  std::vector<std::vector<u32>> perms)
      : g_(std::move(g)), tuples_(std::move(image_tuples)), perms_(std::move(perms)) {}

  const GroupSpec& group() const { return g_; }
  std::size_t size() const { return perms_.size(); }
  const std::vector<std::vector<u32>>& perms() const { return perms_; }

  Homomorphism hom(std::size_t i) const {
    std::vector<Element> images;
    for (u32 t : tuples_.at(i)) images.push_back(Element(g_, t));
    return Homomorphism(g_, g_, std::move(images));
  }

 private:
  GroupSpec g_;
  std::vector<std::vector<u32>> tuples_;
  std::vector<std::vector<u32>> perms_;
};

/* Brute-force enumeration: generator images range over the n_i-torsion,
   keep the bijective tuples.  Refuses oversized groups so callers can fall
   back to running without canonicalization. */
inline AutomorphismSet automorphisms(const GroupSpec& g, u64 bound = 64) {
  if (g.order() > bound)
    throw std::domain_error("automorphism enumeration bound exceeded");
  u32 n = (u32)g.order();
  int r = g.rank();
  std::vector<std::vector<u32>> torsion(r);
  for (int i = 0; i < r; ++i)
    for (u32 x = 0; x < n; ++x)
      if (g.scalar(g.factors()[i], x) == 0) torsion[i].push_back(x);

  std::vector<std::vector<u32>> tuples, perms;
  std::vector<u32> tup(r);
  std::vector<u32> perm(n);
  std::vector<u8> seen(n);
  // scalar multiples of each candidate image, indexed by digit value
  auto apply_all = [&]() {
    for (u32 x = 0; x < n; ++x) {
      u32 acc = 0, idx = x;
      for (int i = r - 1; i >= 0; --i) {
        u32 ni = (u32)g.factors()[i];
        u32 digit = idx % ni; idx /= ni;
        if (digit) acc = g.add(acc, g.scalar(digit, tup[i]));
      }
      perm[x] = acc;
    }
    std::fill(seen.begin(), seen.end(), u8(0));
    for (u32 x = 0; x < n; ++x) {
      if (seen[perm[x]]) return false;
      seen[perm[x]] = 1;
    }
    return true;
  };
  // odometer over torsion candidates
  std::vector<std::size_t> pos(r, 0);
  while (true) {
    for (int i = 0; i < r; ++i) tup[i] = torsion[i][pos[i]];
    if (apply_all()) { tuples.push_back(tup); perms.push_back(perm); }
    int i = r - 1;
    while (i >= 0 && ++pos[i] == torsion[i].size()) { pos[i] = 0; --i; }
    if (i < 0) break;
  }
  return AutomorphismSet(g, std::move(tuples), std::move(perms));
}

} // namespace zerosum
