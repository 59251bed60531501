#pragma once

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <hypex/hypex.hpp>

namespace hypex::cli {

enum exit_code : int {
  ok = 0,
  property_fails = 2,
  bad_parameter = 3,
  budget_exceeded = 4,
  io_failure = 5,
};

inline const char *pattern_grammar =
    "Pattern specs (grammar v1):\n"
    "  qkr:K:R    Q_K(R), 2 <= R <= K\n"
    "  ik:K:I     two K-edges sharing exactly I vertices, 0 <= I < K\n"
    "  file:PATH  a K-graph read from PATH (text or JSON)\n"
    "  bes:K:V:E  every K-graph with E edges on at most V vertices\n";

struct pattern_spec {
  enum class kind { q, i, file, bes } type;
  std::size_t k = 0;
  std::size_t a = 0; ///< r, i or v
  std::size_t b = 0; ///< e for bes
  std::string path;
};

inline std::size_t parse_size(const std::string &s, const std::string &spec) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
    throw param_error("bad pattern spec '" + spec + "'");
  return std::stoull(s);
}

inline pattern_spec parse_pattern(const std::string &spec) {
  auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw param_error("bad pattern spec '" + spec + "'");
  const std::string head = spec.substr(0, colon), rest = spec.substr(colon + 1);
  if (head == "file") {
    if (rest.empty())
      throw param_error("bad pattern spec '" + spec + "'");
    return {pattern_spec::kind::file, 0, 0, 0, rest};
  }
  std::vector<std::string> fields;
  std::stringstream ss(rest);
  for (std::string f; std::getline(ss, f, ':');)
    fields.push_back(f);
  if (head == "qkr" && fields.size() == 2)
    return {pattern_spec::kind::q, parse_size(fields[0], spec), parse_size(fields[1], spec), 0, {}};
  if (head == "ik" && fields.size() == 2)
    return {pattern_spec::kind::i, parse_size(fields[0], spec), parse_size(fields[1], spec), 0, {}};
  if (head == "bes" && fields.size() == 3)
    return {pattern_spec::kind::bes, parse_size(fields[0], spec), parse_size(fields[1], spec),
            parse_size(fields[2], spec), {}};
  throw param_error("unknown pattern spec '" + spec + "'");
}

/// Adds the members a spec names to `fam`. File patterns must match its k.
inline void add_to_family(forbidden_family &fam, const pattern_spec &p, const std::string &text) {
  switch (p.type) {
  case pattern_spec::kind::q:
    fam.add(q_pattern(p.k, p.a));
    break;
  case pattern_spec::kind::i:
    fam.add(i_pattern(p.k, p.a));
    break;
  case pattern_spec::kind::bes: {
    auto bes = bes_family(p.k, p.a, p.b);
    for (const auto &m : bes.members())
      fam.add(m.graph, m.name);
    break;
  }
  case pattern_spec::kind::file: {
    auto g = read_hg_file(p.path);
    fam.add(g, text);
    break;
  }
  }
}

/// The uniformity a spec fixes, reading the file when needed.
inline std::size_t spec_k(const pattern_spec &p) {
  if (p.type == pattern_spec::kind::file)
    return read_hg_file(p.path).k();
  return p.k;
}

inline forbidden_family family_from(const std::vector<std::string> &specs, std::size_t k) {
  if (specs.empty())
    throw param_error("at least one --forbid/--pattern spec is required");
  std::vector<pattern_spec> parsed;
  for (const auto &s : specs)
    parsed.push_back(parse_pattern(s));
  if (k == 0)
    k = spec_k(parsed.front());
  forbidden_family fam(k);
  for (std::size_t i = 0; i < parsed.size(); ++i)
    add_to_family(fam, parsed[i], specs[i]);
  return fam;
}

inline void emit(std::ostream &out, const json &j) { out << j.dump() << '\n'; }

/// Writes `h` to `path`, or to `out` when no path is given.
inline void write_artifact(const hypergraph &h, const std::string &path, bool as_json,
                           std::ostream &out) {
  if (path.empty()) {
    if (as_json)
      out << to_json(h).dump(1) << '\n';
    else
      write_hg(out, h);
  } else {
    write_hg_file(path, h, as_json);
  }
}

inline void write_text(const std::string &text, const std::string &path, std::ostream &out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f || !(f << text))
    throw parse_error("cannot write " + path);
}

struct options {
  unsigned threads = 0;
  std::uint64_t budget = search_budget::default_nodes();

  // shared
  std::size_t n = 0, k = 0, r = 0, t = 0, p = 0;
  std::string out_path, input;
  bool as_json = false, verify = false, exact = false;
  std::vector<std::uint64_t> set;
  std::vector<std::string> patterns;

  // construct modular
  std::string goodset = "exact";
  std::uint64_t alpha = 0, beta = 0;
  std::vector<std::uint64_t> m;

  // construct lift
  std::string base_path;
  std::size_t base_search = 0, n2 = 0;

  // search turan
  std::size_t max_candidates = 64;

  // tables
  std::vector<std::uint64_t> primes;
  std::vector<std::size_t> ns;
  std::size_t nmin = 0, nmax = 0;
};

class runner {
public:
  runner(std::ostream &out, std::ostream &err) : out_(out), err_(err) {}

  int construct(const std::string &kind, const options &o) {
    hypergraph h;
    q_pattern check(3, 3);
    if (kind == "modular") {
      modular_config cfg;
      cfg.k = o.k;
      cfg.p = o.p;
      cfg.alpha = o.alpha;
      cfg.beta = o.beta;
      cfg.m = o.m;
      if (!o.set.empty()) {
        cfg.s = o.set;
      } else if (o.goodset == "exact") {
        cfg.s = max_good_set(o.p, o.k, {o.budget}).elements;
      } else if (o.goodset == "behrend" || o.goodset == "behrend-tuned") {
        behrend_policy pol;
        pol.tuned = o.goodset == "behrend-tuned";
        cfg.s = behrend_good_set(o.p, o.k, pol).elements;
      } else {
        throw param_error("--goodset must be exact, behrend or behrend-tuned");
      }
      h = construct_modular(cfg);
      check = q_pattern(o.k, 3);
    } else if (kind == "split") {
      h = construct_split({o.n, o.k, o.r, true});
      check = q_pattern(o.k, o.r);
    } else if (kind == "lift") {
      hypergraph base;
      if (!o.base_path.empty()) {
        base = read_hg_file(o.base_path);
      } else if (o.base_search > 0) {
        forbidden_family fam(o.r);
        fam.add(q_pattern(o.r, o.r)).add(i_pattern(o.r, o.r - 1));
        auto res = ex_exact(o.base_search, o.r, fam, {o.budget}, o.max_candidates);
        if (res.budget_hit)
          throw budget_error("lift: base search ran out of budget", to_json(res));
        base = res.witness;
      } else {
        throw param_error("lift needs --base PATH or --base-search N1");
      }
      h = construct_lift({o.r, base, o.n2, true});
      check = q_pattern(2 * o.r - 1, o.r);
    } else if (kind == "star") {
      h = centered_family(o.n, o.k);
      check = q_pattern(o.k, o.k);
    } else {
      throw param_error("unknown construction '" + kind + "'");
    }
    write_artifact(h, o.out_path, o.as_json, o.out_path.empty() ? out_ : err_);
    err_ << kind << ": " << h.size() << " edges on " << h.n() << " vertices\n";
    if (!o.out_path.empty())
      emit(out_, {{"construction", kind}, {"edges", h.size()}, {"n", h.n()}, {"k", h.k()},
                  {"file", o.out_path}});
    if (o.verify) {
      if (auto emb = find_q_copy(h, check)) {
        emit(out_, to_json(*emb, check));
        return property_fails;
      }
      err_ << "verified " << check.name() << "-free\n";
    }
    return ok;
  }

  int check(const std::string &kind, const options &o) {
    if (kind == "goodset") {
      if (auto v = find_good_set_violation(o.set, o.p, o.k)) {
        emit(out_, {{"p", o.p}, {"k", o.k}, {"violation", to_json(*v)}});
        return property_fails;
      }
      emit(out_, {{"p", o.p}, {"k", o.k}, {"good", true}});
      return ok;
    }
    if (kind == "ap-free") {
      if (auto prog = find_progression(o.set, o.n, o.k)) {
        emit(out_, {{"n", o.n}, {"k", o.k}, {"progression", *prog}});
        return property_fails;
      }
      emit(out_, {{"n", o.n}, {"k", o.k}, {"ap_free", true}});
      return ok;
    }
    std::vector<pattern_spec> specs;
    for (const auto &s : o.patterns)
      specs.push_back(parse_pattern(s));
    if (o.input.empty())
      throw param_error("check " + kind + " needs --input");
    const auto h = read_hg_file(o.input);
    if (kind == "audit") {
      auto rep = shadow_clique_audit(h);
      emit(out_, to_json(rep));
      return rep.pass ? ok : property_fails;
    }
    if (kind == "q-free" || kind == "i-free") {
      if (o.patterns.size() != 1)
        throw param_error("check " + kind + " takes exactly one --pattern");
      const auto &spec = specs.front();
      if (kind == "q-free") {
        if (spec.type != pattern_spec::kind::q)
          throw param_error("check q-free needs a qkr:K:R pattern");
        q_pattern pat(spec.k, spec.a);
        if (auto emb = find_q_copy(h, pat)) {
          emit(out_, to_json(*emb, pat));
          return property_fails;
        }
        emit(out_, {{"pattern", pat.name()}, {"free", true}});
        return ok;
      }
      if (spec.type != pattern_spec::kind::i)
        throw param_error("check i-free needs an ik:K:I pattern");
      i_pattern pat(spec.k, spec.a);
      if (auto pair = find_i_copy(h, pat)) {
        emit(out_, i_certificate_json(*pair, pat));
        return property_fails;
      }
      emit(out_, {{"pattern", pat.name()}, {"free", true}});
      return ok;
    }
    if (kind == "family-free") {
      auto fam = family_from(o.patterns, h.k());
      if (auto cert = family_copy(h, fam)) {
        emit(out_, *cert);
        return property_fails;
      }
      emit(out_, {{"family", fam.id()}, {"free", true}});
      return ok;
    }
    throw param_error("unknown check '" + kind + "'");
  }

  int search(const std::string &kind, const options &o) {
    if (kind == "packing") {
      auto pk = o.exact ? exact_max_packing(o.n, o.r, o.t, {o.budget})
                        : greedy_packing(o.n, o.r, o.t);
      if (!o.out_path.empty())
        write_hg_file(o.out_path, pk.edges, o.as_json);
      emit(out_, {{"n", o.n}, {"r", o.r}, {"t", o.t}, {"exact", o.exact},
                  {"value", pk.edges.size()}, {"edges", pk.edges.edge_list()}});
      return ok;
    }
    if (kind == "goodset") {
      good_set g = o.exact ? max_good_set(o.p, o.k, {o.budget}) : behrend_good_set(o.p, o.k);
      auto j = to_json(g);
      j["value"] = g.elements.size();
      emit(out_, j);
      return ok;
    }
    if (kind == "apfree") {
      auto a = max_ap_free(o.n, o.k, {o.budget});
      auto j = to_json(a);
      j["value"] = a.elements.size();
      emit(out_, j);
      return ok;
    }
    if (kind == "turan") {
      auto fam = family_from(o.patterns, o.k);
      auto res = ex_exact(o.n, fam.k(), fam, {o.budget}, o.max_candidates);
      if (!o.out_path.empty())
        write_hg_file(o.out_path, res.witness, o.as_json);
      auto j = to_json(res);
      j["value"] = res.max_edges;
      emit(out_, j);
      if (res.budget_hit) {
        err_ << "budget exhausted; value is a lower bound\n";
        return budget_exceeded;
      }
      return ok;
    }
    throw param_error("unknown search '" + kind + "'");
  }

  int table(const std::string &kind, const options &o) {
    std::ostringstream csv;
    if (kind == "modular-growth") {
      csv << growth_csv(modular_growth(o.k, o.primes, {o.budget}));
    } else if (kind == "split-growth") {
      csv << growth_csv(split_growth(o.k, o.r, o.ns));
    } else if (kind == "density") {
      auto fam = family_from(o.patterns, o.k);
      std::vector<std::size_t> ns;
      for (std::size_t n = std::max(o.nmin, fam.k()); n <= o.nmax; ++n)
        ns.push_back(n);
      csv << "n,k,ex,binomial,ratio\n";
      for (const auto &pt : density_trend(fam.k(), fam, ns, {o.budget}, o.max_candidates))
        csv << pt.n << ',' << fam.k() << ',' << pt.ex << ',' << pt.total << ','
            << std::setprecision(10) << pt.ratio << '\n';
    } else if (kind == "chain") {
      csv << "n,k,r,ex,budget_hit\n";
      bool partial = false;
      for (std::size_t n = std::max(o.nmin, o.k); n <= o.nmax; ++n) {
        auto rep = monotone_chain_check(n, o.k, {o.budget}, o.max_candidates);
        partial = partial || rep.lower_bound_only;
        for (std::size_t i = 0; i < rep.rs.size(); ++i)
          csv << n << ',' << o.k << ',' << rep.rs[i] << ',' << rep.values[i] << ','
              << (rep.budget_hit[i] ? 1 : 0) << '\n';
      }
      write_text(csv.str(), o.out_path, out_);
      if (partial) {
        err_ << "budget exhausted; chain holds for lower bounds only\n";
        return budget_exceeded;
      }
      return ok;
    } else {
      throw param_error("unknown table '" + kind + "'");
    }
    write_text(csv.str(), o.out_path, out_);
    return ok;
  }

private:
  std::ostream &out_;
  std::ostream &err_;
};

/// Runs one command line (without the program name). Never throws.
inline int run(std::vector<std::string> args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Extremal hypergraph constructions, checkers and exact searches"};
  app.footer(pattern_grammar);
  app.require_subcommand(1, 1);
  options o;
  std::string kind;
  app.add_option("--threads", o.threads, "worker threads (0 = all cores)");
  app.add_option("--budget", o.budget, "node budget for exact searches (default: $HYPEX_BUDGET or 2e8)");

  auto *construct = app.add_subcommand("construct", "build a construction and write it");
  construct->add_option("kind", kind, "modular | split | lift | star")->required();
  construct->add_option("--n", o.n);
  construct->add_option("--k", o.k);
  construct->add_option("--r", o.r);
  construct->add_option("--p", o.p);
  construct->add_option("--goodset", o.goodset, "exact | behrend | behrend-tuned");
  construct->add_option("--set", o.set, "explicit good set")->delimiter(',');
  construct->add_option("--alpha", o.alpha);
  construct->add_option("--beta", o.beta);
  construct->add_option("--m", o.m, "coefficient permutation")->delimiter(',');
  construct->add_option("--base", o.base_path, "lift base file");
  construct->add_option("--base-search", o.base_search, "lift base from the exact search on N1 vertices");
  construct->add_option("--n2", o.n2);
  construct->add_option("--max-candidates", o.max_candidates);
  construct->add_option("--out", o.out_path);
  construct->add_flag("--json", o.as_json);
  construct->add_flag("--verify", o.verify);

  auto *check = app.add_subcommand("check", "run a checker; exit 2 with a certificate on failure");
  check->add_option("kind", kind, "q-free | i-free | family-free | goodset | ap-free | audit")
      ->required();
  check->add_option("--pattern", o.patterns, "pattern spec (repeatable for family-free)");
  check->add_option("--input", o.input);
  check->add_option("--p", o.p);
  check->add_option("--k", o.k);
  check->add_option("--n", o.n);
  check->add_option("--set", o.set)->delimiter(',');

  auto *search = app.add_subcommand("search", "exact or greedy searches");
  search->add_option("kind", kind, "packing | goodset | apfree | turan")->required();
  search->add_option("--n", o.n);
  search->add_option("--k", o.k);
  search->add_option("--r", o.r);
  search->add_option("--t", o.t);
  search->add_option("--p", o.p);
  search->add_option("--forbid", o.patterns, "pattern spec (repeatable)");
  search->add_option("--max-candidates", o.max_candidates, "limit on C(n,k) for turan");
  search->add_option("--out", o.out_path, "witness file");
  search->add_flag("--json", o.as_json);
  search->add_flag("--exact", o.exact);

  auto *table = app.add_subcommand("table", "CSV tables");
  table->add_option("kind", kind, "modular-growth | split-growth | density | chain")->required();
  table->add_option("--k", o.k);
  table->add_option("--r", o.r);
  table->add_option("--primes", o.primes)->delimiter(',');
  table->add_option("--ns", o.ns)->delimiter(',');
  table->add_option("--forbid", o.patterns);
  table->add_option("--nmin", o.nmin);
  table->add_option("--nmax", o.nmax);
  table->add_option("--max-candidates", o.max_candidates);
  table->add_option("--out", o.out_path);

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << '\n';
    return bad_parameter;
  }

  set_threads(o.threads);
  runner run(out, err);
  try {
    if (construct->parsed())
      return run.construct(kind, o);
    if (check->parsed())
      return run.check(kind, o);
    if (search->parsed())
      return run.search(kind, o);
    return run.table(kind, o);
  } catch (const certificate_error &e) {
    emit(out, e.certificate());
    err << "error: " << e.what() << '\n';
    return property_fails;
  } catch (const invariant_error &e) {
    emit(out, {{"invariant_violation", e.what()}});
    err << "error: " << e.what() << '\n';
    return property_fails;
  } catch (const budget_error &e) {
    if (!e.best_known().is_null())
      emit(out, {{"best_known", e.best_known()}});
    err << "error: " << e.what() << '\n';
    return budget_exceeded;
  } catch (const parse_error &e) {
    err << "error: " << e.what() << '\n';
    return io_failure;
  } catch (const error &e) {
    err << "error: " << e.what() << '\n';
    return bad_parameter;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return bad_parameter;
  }
}

} // namespace hypex::cli
