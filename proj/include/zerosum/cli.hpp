#pragma once
// Command-line front end.  cli_main takes argv-style arguments (program name
// excluded) plus output streams, so tests can drive every subcommand
// in-process.  Exit codes:
//   0   verified / found / clean sweep
//   1   falsified, or the requested object provably does not exist
//   2   budget exhausted before a verdict
//   64  usage or input errors
//   70  unexpected internal failure

#include <algorithm>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zerosum/certify.hpp"
#include "zerosum/json_io.hpp"

namespace zerosum {
namespace detail {

inline GroupSpec group_from_csv(const std::string& csv) {
  if (csv.empty()) throw std::invalid_argument("--group is required here");
  std::vector<int> factors;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t pos = 0;
    int v = std::stoi(item, &pos);
    if (pos != item.size())
      throw std::invalid_argument("bad group factor '" + item + "'");
    factors.push_back(v);
  }
  if (factors.empty()) throw std::invalid_argument("empty group spec");
  return make_group(factors);
}

inline FreenessKind kind_from_name(const std::string& name) {
  if (name == "d") return FreenessKind::NONEMPTY_ZERO_SUM;
  if (name == "eta") return FreenessKind::SHORT_ZERO_SUM;
  if (name == "s") return FreenessKind::EXP_LENGTH_ZERO_SUM;
  throw std::invalid_argument("unknown invariant kind '" + name + "'");
}

inline std::string format_csv(const GroupSpec& g) {
  std::string s;
  for (int f : g.factors()) {
    if (!s.empty()) s += ',';
    s += std::to_string(f);
  }
  return s;
}

inline std::string format_factors(const GroupSpec& g) {
  return "[" + format_csv(g) + "]";
}

inline std::string format_element(const Element& e) {
  std::string s;
  for (int r : e.group().residues_of(e.index())) {
    if (!s.empty()) s += ',';
    s += std::to_string(r);
  }
  return s;
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open " + path);
  std::stringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

inline bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

/* Sequence input: a .json file carries its own group; flat text and --seq
   need --group.  Inline sequences separate elements with ';'. */
inline Sequence load_sequence(const std::string& group_csv,
                              const std::string& file,
                              const std::string& inline_seq) {
  if (file.empty() == inline_seq.empty())
    throw std::invalid_argument("need exactly one of --file / --seq");
  if (!file.empty() && ends_with(file, ".json")) {
    Sequence s = sequence_from_json(json::parse(read_file(file)));
    if (!group_csv.empty() &&
        s.group().factors() != group_from_csv(group_csv).factors())
      throw std::invalid_argument("--group disagrees with the file's group");
    return s;
  }
  GroupSpec g = group_from_csv(group_csv);
  std::string text = file.empty() ? inline_seq : read_file(file);
  if (file.empty()) std::replace(text.begin(), text.end(), ';', '\n');
  return sequence_from_text(g, text);
}

inline void emit_json(const std::string& path, const json& j) {
  if (path.empty()) return;
  std::ofstream f(path);
  if (!f) throw std::invalid_argument("cannot write " + path);
  f << j.dump(2) << '\n';
}

inline int status_exit(const std::string& status) {
  if (status.rfind("verified", 0) == 0) return 0;
  if (status == "falsified") return 1;
  return 2;
}

/* Options shared by every subcommand. */
struct CliCommon {
  int threads = 0;
  u64 max_nodes = 0;
  double max_seconds = 0;
  u64 seed = 1;
  bool deterministic = false;
  std::string json_out;
  std::string cache_path = "zerosum-cache.jsonl";
  bool no_cache = false;
};

inline void add_common(CLI::App* sub, CliCommon& c) {
  sub->add_option("--threads", c.threads, "worker threads (0 = auto)");
  sub->add_option("--budget-nodes", c.max_nodes,
                  "search node budget (0 = unlimited)");
  sub->add_option("--budget-secs", c.max_seconds,
                  "time budget in seconds (0 = unlimited)");
  sub->add_option("--seed", c.seed, "random seed");
  sub->add_flag("--deterministic", c.deterministic,
                "reproducible single-threaded search, timestamp-free output");
  sub->add_option("--json-out", c.json_out, "write the full JSON result here");
  sub->add_option("--cache", c.cache_path, "invariant cache file (JSONL)");
  sub->add_flag("--no-cache", c.no_cache, "skip reading and writing the cache");
}

inline RunConfig run_config(const CliCommon& c) {
  RunConfig cfg;
  cfg.budget.max_nodes = c.max_nodes;
  cfg.budget.max_seconds = c.max_seconds;
  cfg.budget.workers = c.threads;
  cfg.budget.deterministic = c.deterministic;
  cfg.seed = c.seed;
  cfg.cache_path = c.no_cache ? std::string() : c.cache_path;
  return cfg;
}

}  // namespace detail

inline int cli_main(std::vector<std::string> args, std::ostream& out,
                    std::ostream& err) {
  using detail::CliCommon;
  CLI::App app{"zero-sum invariants of finite abelian groups: exhaustive "
               "search, extremal constructions, and claim certification"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  CliCommon common;

  // invariant: compute or certify one of d / eta / s
  auto* inv = app.add_subcommand(
      "invariant", "compute d, eta, or s by exhaustive search");
  std::string inv_group, inv_kind;
  u64 inv_expected = 0;
  bool inv_show_witness = false;
  inv->add_option("--group", inv_group, "invariant factors, e.g. 2,2,4")
      ->required();
  inv->add_option("--kind", inv_kind, "d | eta | s")
      ->required()
      ->check(CLI::IsMember({"d", "eta", "s"}));
  inv->add_option("--expected", inv_expected,
                  "claimed value to certify (0 = just compute)");
  inv->add_flag("--show-witness", inv_show_witness,
                "print the extremal free sequence");
  detail::add_common(inv, common);

  // witness: build an extremal sequence from its closed form
  auto* wit = app.add_subcommand(
      "witness", "construct an extremal sequence and self-check it");
  std::string wit_construction, wit_out;
  u32 wit_r = 0, wit_n = 0, wit_g = 0, wit_h = 1;
  wit->add_option("--construction", wit_construction,
                  "eta | s (over Z_2^{r-1} x Z_2n) or cyclic (over Z_n)")
      ->required()
      ->check(CLI::IsMember({"eta", "s", "cyclic"}));
  wit->add_option("--r", wit_r, "rank parameter for eta/s");
  wit->add_option("--n", wit_n, "size parameter")->required();
  wit->add_option("--g-res", wit_g, "first cyclic residue (default 0)");
  wit->add_option("--h-res", wit_h, "second cyclic residue (default 1)");
  wit->add_option("--out", wit_out, "write the sequence as flat text here");
  detail::add_common(wit, common);

  // check: does a given sequence have a qualifying zero-sum subsequence?
  auto* chk = app.add_subcommand(
      "check", "search one sequence for a zero-sum subsequence");
  std::string chk_group, chk_file, chk_seq, chk_kind;
  u32 chk_length = 0;
  chk->add_option("--group", chk_group, "invariant factors, e.g. 2,2,4");
  chk->add_option("--file", chk_file, "sequence file (.json or flat text)");
  chk->add_option("--seq", chk_seq, "inline sequence, elements split by ';'");
  chk->add_option("--kind", chk_kind,
                  "d (nonempty) | eta (length <= exp) | s (length = exp)")
      ->check(CLI::IsMember({"d", "eta", "s"}));
  chk->add_option("--length", chk_length, "exact zero-sum length to look for");
  detail::add_common(chk, common);

  // decompose: recover the structure the representation results promise
  auto* dec = app.add_subcommand(
      "decompose", "structure a sequence (cyclic exponents or doubling pairs)");
  std::string dec_group, dec_file, dec_seq;
  dec->add_option("--group", dec_group, "invariant factors");
  dec->add_option("--file", dec_file, "sequence file (.json or flat text)");
  dec->add_option("--seq", dec_seq, "inline sequence, elements split by ';'");
  detail::add_common(dec, common);

  // lemma: counterexample hunt over one registered statement
  auto* lem = app.add_subcommand(
      "lemma", "hunt for counterexamples to a registered statement");
  std::string lem_id, lem_mode = "auto";
  u64 lem_samples = 10000;
  u32 lem_nmax = 0;
  bool lem_list = false;
  lem->add_option("--id", lem_id, "statement id (see --list)");
  lem->add_option("--mode", lem_mode, "auto | random | exhaustive")
      ->check(CLI::IsMember({"auto", "random", "exhaustive"}));
  lem->add_option("--samples", lem_samples, "random-mode instance count");
  lem->add_option("--n-max", lem_nmax, "sweep bound for the cyclic statements");
  lem->add_flag("--list", lem_list, "list registered statement ids");
  detail::add_common(lem, common);

  // certify: full claim certificates
  auto* cer = app.add_subcommand(
      "certify", "produce a certificate for a supported claim");
  std::string cer_claim, cer_group;
  u32 cer_n = 0, cer_r = 0, cer_n1 = 0, cer_n2 = 0;
  cer->add_option("--claim", cer_claim, "claim id")
      ->required()
      ->check(CLI::IsMember({"TH1_1", "TH1_2_ETA", "TH2_BOUND", "THEOREM_A",
                             "CHAIN", "GAO", "ETAF_GATE"}));
  cer->add_option("--n", cer_n, "n parameter (TH1_1, TH1_2_ETA, TH2_BOUND)");
  cer->add_option("--r", cer_r, "r parameter (TH2_BOUND)");
  cer->add_option("--n1", cer_n1, "first invariant factor (THEOREM_A)");
  cer->add_option("--n2", cer_n2, "second invariant factor (THEOREM_A)");
  cer->add_option("--group", cer_group, "invariant factors (CHAIN, GAO)");
  detail::add_common(cer, common);

  // chain / gao: shortcuts for the two relation certificates
  auto* chn = app.add_subcommand(
      "chain", "certify d <= eta <= s - exp + 1 <= |G| on one group");
  std::string chn_group;
  chn->add_option("--group", chn_group, "invariant factors")->required();
  detail::add_common(chn, common);

  auto* gao = app.add_subcommand(
      "gao", "certify s = eta + exp - 1 on one group");
  std::string gao_group;
  gao->add_option("--group", gao_group, "invariant factors")->required();
  detail::add_common(gao, common);

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : 64;
  }

  auto print_certificate = [&](const Certificate& c) {
    out << c.claim << ": " << c.status << "\n";
    for (const auto& [key, v] : c.evidence.items())
      if (v.is_object() && v.contains("value"))
        out << "  " << key
            << detail::format_factors(group_from_json(c.evidence.at("group")))
            << " = " << v.at("value").get<i64>() << "  ["
            << v.at("status").get<std::string>() << "]\n";
    detail::emit_json(common.json_out, certificate_to_json(c));
  };

  auto with_cache = [&](const RunConfig& cfg, auto&& fn) -> int {
    std::optional<InvariantCache> cache;
    if (!cfg.cache_path.empty()) cache.emplace(cfg.cache_path);
    return fn(cache ? &*cache : nullptr);
  };

  try {
    if (inv->parsed()) {
      GroupSpec g = detail::group_from_csv(inv_group);
      FreenessKind kind = detail::kind_from_name(inv_kind);
      RunConfig cfg = detail::run_config(common);
      return with_cache(cfg, [&](InvariantCache* cache) {
        ValuePart part = certify_value(g, kind, inv_expected, cfg, cache);
        out << kind_name(kind) << detail::format_factors(g) << " = "
            << part.res.value << (part.res.exhaustive ? "" : "  (lower bound)")
            << "  [" << part.status << "]"
            << (part.from_cache ? "  (cached)" : "") << "\n";
        out << "nodes " << part.res.stats.nodes << ", "
            << part.res.stats.elapsed_ms << " ms\n";
        if (inv_show_witness) out << sequence_to_text(part.res.witness);
        detail::emit_json(common.json_out, part_to_json(part));
        return detail::status_exit(part.status);
      });
    }

    if (wit->parsed()) {
      Sequence s = [&] {
        if (wit_construction == "eta") {
          if (wit_r == 0) throw std::invalid_argument("eta witness needs --r");
          return eta_witness(wit_r, wit_n);
        }
        if (wit_construction == "s") {
          if (wit_r == 0) throw std::invalid_argument("s witness needs --r");
          return s_witness(wit_r, wit_n);
        }
        return cyclic_extremal(wit_n, wit_g, wit_h);
      }();
      // eta witnesses avoid short zero-sums; s and cyclic witnesses avoid
      // zero-sums of length exactly exp
      FreenessKind kind = wit_construction == "eta"
                              ? FreenessKind::SHORT_ZERO_SUM
                              : FreenessKind::EXP_LENGTH_ZERO_SUM;
      if (!is_free(s, kind))
        throw std::logic_error("constructed witness failed its self-check");
      std::ostringstream text;
      text << "# group " << detail::format_csv(s.group()) << "\n"
           << "# length " << s.length() << "\n"
           << sequence_to_text(s);
      if (!wit_out.empty()) {
        std::ofstream f(wit_out);
        if (!f) throw std::invalid_argument("cannot write " + wit_out);
        f << text.str();
        out << "wrote " << s.length() << " elements over "
            << detail::format_factors(s.group()) << " to " << wit_out << "\n";
      } else {
        out << text.str();
      }
      detail::emit_json(common.json_out, sequence_to_json(s));
      return 0;
    }

    if (chk->parsed()) {
      if (chk_kind.empty() == (chk_length == 0))
        throw std::invalid_argument("need exactly one of --kind / --length");
      Sequence s = detail::load_sequence(chk_group, chk_file, chk_seq);
      std::optional<ZeroSumWitness> w;
      if (chk_length > 0) {
        w = witness_zero_sum_of_length(s, chk_length);
      } else if (chk_kind == "d") {
        w = witness_nonempty_zero_sum(s);
      } else if (chk_kind == "eta") {
        w = witness_short_zero_sum(s);
      } else {
        w = witness_zero_sum_of_length(s, (u32)s.group().exponent());
      }
      if (w) {
        if (!w->sub.sum().is_zero())
          throw std::logic_error("witness does not sum to zero");
        out << "zero-sum subsequence found (length " << w->sub.length()
            << "):\n"
            << sequence_to_text(w->sub);
        detail::emit_json(common.json_out, json{{"exists", true},
                                                {"witness",
                                                 sequence_to_json(w->sub)}});
        return 0;
      }
      out << "no qualifying zero-sum subsequence\n";
      detail::emit_json(common.json_out, json{{"exists", false}});
      return 1;
    }

    if (dec->parsed()) {
      Sequence s = detail::load_sequence(dec_group, dec_file, dec_seq);
      const GroupSpec& g = s.group();
      if (g.rank() == 1) {
        CyclicStructure cs = cyclic_structure(s);
        out << "cyclic structure over " << detail::format_factors(g)
            << ": g = " << cs.g.index() << ", k = " << cs.k << ", exponents";
        for (u32 ki : cs.ks) out << " " << ki;
        out << "\n";
        detail::emit_json(common.json_out,
                          json{{"generator", element_to_json(cs.g)},
                               {"k", cs.k},
                               {"ks", cs.ks},
                               {"type", "cyclic-structure"}});
        return 0;
      }
      Homomorphism h = doubling_hom(g);
      PairDecomposition pd = pair_decomposition(s, h);
      out << pd.pairs.size() << " pairs, " << pd.rest.length()
          << " elements left over\n";
      json jpairs = json::array();
      for (const Sequence& p : pd.pairs) {
        std::vector<u32> idx = p.expand();
        out << "pair: " << detail::format_element(Element(g, idx[0])) << " | "
            << detail::format_element(Element(g, idx[1])) << "\n";
        jpairs.push_back(sequence_to_json(p));
      }
      detail::emit_json(common.json_out,
                        json{{"pairs", jpairs},
                             {"rest", sequence_to_json(pd.rest)},
                             {"type", "pair-decomposition"}});
      return 0;
    }

    if (lem->parsed()) {
      if (lem_list) {
        for (const std::string& id : registered_lemmas()) out << id << "\n";
        return 0;
      }
      if (lem_id.empty())
        throw std::invalid_argument("--id is required (or use --list)");
      FalsifyConfig fc;
      fc.lemma = lem_id;
      fc.mode = lem_mode == "auto" ? -1 : lem_mode == "random" ? 0 : 1;
      fc.samples = lem_samples;
      fc.seed = common.seed;
      fc.n_max = lem_nmax;
      fc.max_seconds = common.max_seconds;
      FalsifyOutcome fo = falsify(fc);
      out << fo.lemma << " (" << fo.mode << "): instances=" << fo.instances
          << " counterexamples=" << fo.counterexamples
          << " completed=" << (fo.completed ? "yes" : "no") << " ("
          << fo.elapsed_ms << " ms)\n";
      for (const std::string& note : fo.notes) out << "  " << note << "\n";
      detail::emit_json(common.json_out, falsify_to_json(fo));
      if (fo.counterexamples > 0) return 1;
      return fo.completed ? 0 : 2;
    }

    RunConfig cfg = detail::run_config(common);
    if (cer->parsed()) {
      return with_cache(cfg, [&](InvariantCache* cache) {
        Certificate c;
        if (cer_claim == "TH1_1") {
          c = certify_th1_1(cer_n, cfg, cache);
        } else if (cer_claim == "TH1_2_ETA") {
          c = certify_th1_2_eta(cer_n, cfg, cache);
        } else if (cer_claim == "TH2_BOUND") {
          c = certify_th2_bound(cer_r, cer_n, cfg, cache);
        } else if (cer_claim == "THEOREM_A") {
          c = certify_theorem_a(cer_n1, cer_n2, cfg, cache);
        } else if (cer_claim == "CHAIN") {
          c = certify_chain(detail::group_from_csv(cer_group), cfg, cache);
        } else if (cer_claim == "GAO") {
          c = certify_gao(detail::group_from_csv(cer_group), cfg, cache);
        } else {
          c = certify_etaf_gate(cfg);
        }
        print_certificate(c);
        return detail::status_exit(c.status);
      });
    }
    if (chn->parsed()) {
      return with_cache(cfg, [&](InvariantCache* cache) {
        Certificate c =
            certify_chain(detail::group_from_csv(chn_group), cfg, cache);
        print_certificate(c);
        return detail::status_exit(c.status);
      });
    }
    if (gao->parsed()) {
      return with_cache(cfg, [&](InvariantCache* cache) {
        Certificate c =
            certify_gao(detail::group_from_csv(gao_group), cfg, cache);
        print_certificate(c);
        return detail::status_exit(c.status);
      });
    }
    err << "no subcommand selected\n";
    return 64;
  } catch (const lemma_falsified& e) {
    err << "falsified: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 64;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 70;
  }
}

}  // namespace zerosum
