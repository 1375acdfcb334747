// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure.  Every search below runs to completion unless a criterion
// explicitly allows an honest partial result, in which case the line says
// which outcome was obtained.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "zerosum/certify.hpp"
#include "../support/oracles.hpp"

using namespace zerosum;
namespace fs = std::filesystem;

namespace {

struct Ctx {
  std::unique_ptr<InvariantCache> cache;
  std::vector<GroupSpec> pool;  // groups with d, eta, s all verified-exhaustive
};

InvariantResult compute(Ctx& ctx, const GroupSpec& g, FreenessKind kind,
                        const SearchBudget& budget = {}) {
  return run_with_cache(g, kind, budget, ctx.cache.get()).first;
}

bool value_ok(const InvariantResult& r, u64 expected) {
  return r.exhaustive && (u64)r.value == expected;
}

std::string show(const GroupSpec& g) {
  std::string s = "[";
  for (int f : g.factors()) s += std::to_string(f) + ",";
  if (s.size() > 1) s.pop_back();
  return s + "]";
}

// --- criterion bodies ------------------------------------------------------

bool cyclic_exactness(Ctx& ctx, std::string& note) {
  for (u32 n = 1; n <= 8; ++n) {
    GroupSpec g = make_group({(int)n});
    auto d = compute(ctx, g, FreenessKind::NONEMPTY_ZERO_SUM);
    auto e = compute(ctx, g, FreenessKind::SHORT_ZERO_SUM);
    auto s = compute(ctx, g, FreenessKind::EXP_LENGTH_ZERO_SUM);
    if (!value_ok(d, n) || !value_ok(e, n) || !value_ok(s, 2 * n - 1)) {
      note = "mismatch at n=" + std::to_string(n);
      return false;
    }
    ctx.pool.push_back(g);
  }
  note = "D=eta=n and s=2n-1 verified-exhaustive for n=1..8";
  return true;
}

bool rank_two_closed_forms(Ctx& ctx, std::string& note) {
  const std::pair<u64, u64> pairs[] = {{2, 2}, {2, 4}, {3, 3}, {2, 6}};
  for (auto [n1, n2] : pairs) {
    GroupSpec g = make_group({(int)n1, (int)n2});
    auto d = compute(ctx, g, FreenessKind::NONEMPTY_ZERO_SUM);
    auto e = compute(ctx, g, FreenessKind::SHORT_ZERO_SUM);
    auto s = compute(ctx, g, FreenessKind::EXP_LENGTH_ZERO_SUM);
    if (!value_ok(d, n1 + n2 - 1) || !value_ok(e, 2 * n1 + n2 - 2) ||
        !value_ok(s, 2 * n1 + 2 * n2 - 3)) {
      note = "mismatch over " + show(g);
      return false;
    }
    ctx.pool.push_back(g);
  }
  note = "D, eta, s match the closed forms on (2,2) (2,4) (3,3) (2,6)";
  return true;
}

bool elementary_two_groups(Ctx& ctx, std::string& note) {
  for (u32 r = 1; r <= 3; ++r) {
    GroupSpec g = make_group(std::vector<int>(r, 2));
    auto d = compute(ctx, g, FreenessKind::NONEMPTY_ZERO_SUM);
    auto e = compute(ctx, g, FreenessKind::SHORT_ZERO_SUM);
    auto s = compute(ctx, g, FreenessKind::EXP_LENGTH_ZERO_SUM);
    if (!value_ok(e, 1ull << r) || !value_ok(s, (1ull << r) + 1) ||
        !d.exhaustive) {
      note = "mismatch at r=" + std::to_string(r);
      return false;
    }
    ctx.pool.push_back(g);
  }
  // r = 4 under an explicit node budget; a matching witness is an
  // acceptable outcome if the search cannot finish
  SearchBudget budget;
  budget.max_nodes = 1000000000;
  budget.canonicalize = 1;
  GroupSpec g16 = make_group({2, 2, 2, 2});
  auto e16 = compute(ctx, g16, FreenessKind::SHORT_ZERO_SUM, budget);
  auto s16 = compute(ctx, g16, FreenessKind::EXP_LENGTH_ZERO_SUM, budget);
  auto ok = [](const InvariantResult& r, u64 expected) {
    return value_ok(r, expected) ||
           (!r.exhaustive && r.witness.length() + 1 == expected);
  };
  if (!ok(e16, 16) || !ok(s16, 17)) {
    note = "rank-4 search disagrees with eta=16, s=17";
    return false;
  }
  bool full = e16.exhaustive && s16.exhaustive;
  if (full) {
    auto d16 = compute(ctx, g16, FreenessKind::NONEMPTY_ZERO_SUM, budget);
    if (d16.exhaustive) ctx.pool.push_back(g16);
  }
  note = std::string("eta=2^r, s=2^r+1 for r<=3 exhaustive; r=4 ") +
         (full ? "verified-exhaustive" : "budget-exhausted with matching witness");
  return true;
}

bool th1_1_n2(Ctx& ctx, std::string& note) {
  GroupSpec g = make_group({2, 2, 4});
  auto e = compute(ctx, g, FreenessKind::SHORT_ZERO_SUM);
  auto s = compute(ctx, g, FreenessKind::EXP_LENGTH_ZERO_SUM);
  if (!value_ok(e, 8) || !value_ok(s, 11)) {
    note = "expected eta=8, s=11";
    return false;
  }
  auto d = compute(ctx, g, FreenessKind::NONEMPTY_ZERO_SUM);
  if (d.exhaustive) ctx.pool.push_back(g);
  note = "eta=8 and s=11 verified-exhaustive";
  return true;
}

bool th1_1_n3(Ctx& ctx, std::string& note) {
  GroupSpec g = make_group({2, 2, 6});
  Sequence w = s_witness(3, 3);
  if (w.length() != 14 || !oracle::is_free(w, FreenessKind::EXP_LENGTH_ZERO_SUM)) {
    note = "length-14 witness failed";
    return false;
  }
  auto e = compute(ctx, g, FreenessKind::SHORT_ZERO_SUM);
  if (!value_ok(e, 10)) {
    note = "expected eta=10 exhaustive";
    return false;
  }
  auto s = compute(ctx, g, FreenessKind::EXP_LENGTH_ZERO_SUM);
  if (s.exhaustive && s.value != 15) {
    note = "exhaustive s disagrees with 15";
    return false;
  }
  if (s.exhaustive) {
    auto d = compute(ctx, g, FreenessKind::NONEMPTY_ZERO_SUM);
    if (d.exhaustive) ctx.pool.push_back(g);
  }
  note = s.exhaustive ? "eta=10 exhaustive; s=15 verified-exhaustive"
                      : "eta=10 exhaustive; s>=15 witnessed, upper bound "
                        "budget-exhausted";
  return true;
}

bool th1_2_n2(Ctx& ctx, std::string& note) {
  GroupSpec g = make_group({2, 2, 2, 4});
  Sequence w = eta_witness(4, 2);
  if (w.length() != 9 || !oracle::is_free(w, FreenessKind::SHORT_ZERO_SUM)) {
    note = "length-9 witness failed";
    return false;
  }
  auto e = compute(ctx, g, FreenessKind::SHORT_ZERO_SUM);
  if (e.exhaustive && e.value != 10) {
    note = "exhaustive eta disagrees with 10";
    return false;
  }
  if (!e.exhaustive && e.witness.length() + 1 != 10) {
    note = "partial search lost the length-9 witness";
    return false;
  }
  if (e.exhaustive) {
    auto d = compute(ctx, g, FreenessKind::NONEMPTY_ZERO_SUM);
    auto s = compute(ctx, g, FreenessKind::EXP_LENGTH_ZERO_SUM);
    if (d.exhaustive && s.exhaustive) ctx.pool.push_back(g);
  }
  note = e.exhaustive ? "eta=10 verified-exhaustive"
                      : "eta>=10 witnessed, upper bound budget-exhausted";
  return true;
}

bool witness_grid(Ctx&, std::string& note) {
  for (u32 r = 1; r <= 5; ++r)
    for (u32 n = 1; n <= 50; ++n) {
      Sequence we = eta_witness(r, n);
      if (we.length() != 2 * (u64)n + 2 * r - 3 ||
          !is_free(we, FreenessKind::SHORT_ZERO_SUM)) {
        note = "eta witness failed at r=" + std::to_string(r) +
               ", n=" + std::to_string(n);
        return false;
      }
      Sequence ws = s_witness(r, n);
      if (ws.length() != 4 * (u64)n + 2 * r - 4 ||
          !is_free(ws, FreenessKind::EXP_LENGTH_ZERO_SUM)) {
        note = "s witness failed at r=" + std::to_string(r) +
               ", n=" + std::to_string(n);
        return false;
      }
    }
  // the r=4, n=36 instance bounds s(Z_2^3 x Z_72) from below at 149; the
  // matching upper bound is beyond desk scale, and the certificate must say
  // so rather than pretend
  Sequence big = s_witness(4, 36);
  if (big.length() != 148 || big.group().factors() != std::vector<int>{2, 2, 2, 72} ||
      !is_free(big, FreenessKind::EXP_LENGTH_ZERO_SUM)) {
    note = "r=4, n=36 lower-bound witness failed";
    return false;
  }
  RunConfig capped;
  capped.budget.max_nodes = 100000;
  Certificate cert = certify_th1_2_eta(36, capped, nullptr);
  if (cert.status == "falsified" || cert.status == "verified-exhaustive") {
    note = "n=36 eta certificate claims more than the budget allows: " +
           cert.status;
    return false;
  }
  note = "500 witnesses pass; s([2,2,2,72]) >= 149; n=36 eta certificate "
         "honestly reports " + cert.status;
  return true;
}

bool th2_tightness(Ctx& ctx, std::string& note) {
  RunConfig cfg;
  Certificate c = certify_th2_bound(3, 3, cfg, ctx.cache.get());
  bool exhaustive = c.status == "verified-exhaustive";
  if (exhaustive) {
    if (c.evidence["s"]["value"] != 15 || c.evidence["tight"] != true) {
      note = "bound 15 is not tight at r=3, n=3";
      return false;
    }
    note = "s([2,2,6]) = 15 = 4n+2^3-5 exhaustively: bound tight";
    return true;
  }
  if (c.status == "falsified") {
    note = "a witness exceeded the bound";
    return false;
  }
  note = "witness and bound coexist; search budget-exhausted";
  return true;
}

bool sum_lemma_sweep(Ctx&, std::string& note) {
  FalsifyConfig fc;
  fc.lemma = "SUM";
  fc.mode = 1;
  FalsifyOutcome out = falsify(fc);
  if (!out.completed || out.instances != 97140 || out.counterexamples != 0) {
    note = "instances=" + std::to_string(out.instances) +
           " counterexamples=" + std::to_string(out.counterexamples);
    return false;
  }
  note = "all 97140 (W, w) instances yield >= |W|-8 disjoint pairs";
  return true;
}

bool star_violation_suite(Ctx&, std::string& note) {
  FalsifyConfig fc;
  fc.lemma = "STAR_XX1";
  fc.mode = 0;
  fc.samples = 100000;
  fc.seed = 20260814;
  FalsifyOutcome out = falsify(fc);
  if (!out.completed || out.counterexamples != 0 ||
      out.instances != 2 * fc.samples) {
    note = "instances=" + std::to_string(out.instances) +
           " counterexamples=" + std::to_string(out.counterexamples);
    return false;
  }
  note = "100000 random length-9 sequences violate (*) for both e in C_3\\{0}";
  return true;
}

bool lemma_registry_sweep(Ctx&, std::string& note) {
  struct Job {
    const char* lemma;
    int mode;
    u64 samples;
    u32 n_max;
    u64 expect_instances;  // 0 = no exact count expected
  };
  const Job jobs[] = {
      {"CYCLIC_1", 1, 0, 12, 45},
      {"CYCLIC_3", 1, 0, 8, 61},
      {"SHO", 0, 10000, 0, 0},
      {"EIMP1", 0, 10000, 0, 0},
      {"SUPP_P1", 1, 0, 0, 80312},
  };
  std::string counts;
  for (const Job& job : jobs) {
    FalsifyConfig fc;
    fc.lemma = job.lemma;
    fc.mode = job.mode;
    fc.samples = job.samples;
    fc.n_max = job.n_max;
    fc.seed = 20260814;
    FalsifyOutcome out = falsify(fc);
    bool ok = out.completed && out.counterexamples == 0 &&
              (job.expect_instances == 0 || out.instances == job.expect_instances);
    if (!ok) {
      note = std::string(job.lemma) + ": instances=" +
             std::to_string(out.instances) +
             " counterexamples=" + std::to_string(out.counterexamples);
      return false;
    }
    counts += std::string(job.lemma) + "=" + std::to_string(out.instances) + " ";
  }
  note = "zero counterexamples (" + counts.substr(0, counts.size() - 1) + ")";
  return true;
}

bool global_properties(Ctx& ctx, std::string& note) {
  RunConfig cfg;
  for (const GroupSpec& g : ctx.pool) {
    Certificate chain = certify_chain(g, cfg, ctx.cache.get());
    Certificate gao = certify_gao(g, cfg, ctx.cache.get());
    if (chain.status != "verified-exhaustive" ||
        gao.status != "verified-exhaustive") {
      note = "relation certificate failed over " + show(g);
      return false;
    }
  }

  // reach-table freeness vs. full 2^|S| subset enumeration
  std::vector<GroupSpec> gs;
  for (std::vector<int> f :
       {std::vector<int>{5}, {8}, {12}, {2, 4}, {3, 3}, {2, 6}, {7},
        {2, 2, 2}, {9}, {2, 2, 4}})
    gs.push_back(make_group(f));
  std::mt19937_64 rng(20260814);
  for (u32 i = 0; i < 10000; ++i) {
    const GroupSpec& g = gs[i % gs.size()];
    u32 len = 1 + (u32)(rng() % 12);
    Sequence s = oracle::random_sequence(g, len, rng);
    for (FreenessKind k :
         {FreenessKind::NONEMPTY_ZERO_SUM, FreenessKind::SHORT_ZERO_SUM,
          FreenessKind::EXP_LENGTH_ZERO_SUM})
      if (is_free(s, k) != oracle::is_free(s, k)) {
        note = "reach/enumeration disagreement over " + show(g);
        return false;
      }
  }

  // deterministic mode must reproduce certificates byte for byte
  RunConfig det;
  det.budget.deterministic = true;
  std::string once =
      certificate_to_json(certify_chain(make_group({3, 3}), det, nullptr)).dump();
  std::string twice =
      certificate_to_json(certify_chain(make_group({3, 3}), det, nullptr)).dump();
  if (once != twice || once.empty()) {
    note = "deterministic reruns differ";
    return false;
  }

  note = "chain and Gao hold on " + std::to_string(ctx.pool.size()) +
         " exhausted groups; 10000 reach/enumeration agreements; "
         "deterministic reruns byte-identical";
  return true;
}

}  // namespace

int main() {
  Ctx ctx;
  fs::path cache_path =
      fs::temp_directory_path() /
      ("zerosum-acceptance-" + std::to_string(::getpid()) + ".jsonl");
  fs::remove(cache_path);
  ctx.cache = std::make_unique<InvariantCache>(cache_path.string());

  struct Item {
    int id;
    const char* label;
    std::function<bool(Ctx&, std::string&)> fn;
  };
  const std::vector<Item> items = {
      {1, "cyclic exactness D=eta=n, s=2n-1 for n in [1,8]", cyclic_exactness},
      {2, "rank-two closed forms at desk scale", rank_two_closed_forms},
      {3, "elementary 2-groups eta=2^r, s=2^r+1", elementary_two_groups},
      {4, "eta([2,2,4])=8 and s([2,2,4])=11", th1_1_n2},
      {5, "eta([2,2,6])=10 and s([2,2,6])=15", th1_1_n3},
      {6, "eta([2,2,2,4])=10", th1_2_n2},
      {7, "witness constructions r in [1,5], n in [1,50] plus s >= 149 over "
          "[2,2,2,72]", witness_grid},
      {8, "s upper bound tight at r=3, n=3", th2_tightness},
      {9, "pairing lemma exhaustive over squarefree W in Z_2^4", sum_lemma_sweep},
      {10, "length-9 sequences violate (*) for every generator", star_violation_suite},
      {11, "lemma registry sweep finds no counterexamples", lemma_registry_sweep},
      {12, "chain + Gao relations, reach/enumeration agreement, determinism",
       global_properties},
  };

  int failures = 0;
  for (const Item& item : items) {
    auto t0 = std::chrono::steady_clock::now();
    std::string note;
    bool ok = false;
    try {
      ok = item.fn(ctx, note);
    } catch (const std::exception& e) {
      note = std::string("exception: ") + e.what();
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
    std::printf("[%s] criterion %2d: %s — %s (%lld ms)\n",
                ok ? "PASS" : "FAIL", item.id, item.label,
                note.empty() ? "no detail" : note.c_str(),
                (long long)ms);
    std::fflush(stdout);
    failures += ok ? 0 : 1;
  }

  std::printf("%d/%zu criteria passed\n", (int)items.size() - failures,
              items.size());
  fs::remove(cache_path);
  return failures == 0 ? 0 : 1;
}
