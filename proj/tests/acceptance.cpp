#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include <hypex/hypex.hpp>

#include "oracles.hpp"

using namespace hypex;

namespace {

// every certified-free output is kept for the audit and D(e) criteria
struct certified {
  hypergraph h;
  std::size_t r;
  std::optional<partition> parts;
  std::string label;
};

std::vector<certified> outputs;
std::vector<certified> modular_outputs;

bool require(bool cond, const std::string &what, std::ostringstream &why) {
  if (!cond)
    why << what << "; ";
  return cond;
}

bool modular_check(std::uint64_t k, std::uint64_t p, std::vector<std::uint64_t> s,
                   std::ostringstream &why) {
  modular_config cfg;
  cfg.k = k;
  cfg.p = p;
  cfg.s = s;
  auto h = construct_modular(cfg);
  std::uint64_t expect = s.size();
  for (std::uint64_t i = 2; i < k; ++i)
    expect *= p;
  std::string tag = "k=" + std::to_string(k) + " p=" + std::to_string(p);
  bool ok = require(h.size() == expect, tag + " edge count", why);
  ok = require(!find_q_copy(h, q_pattern(k, 3)), tag + " contains Q_k(3)", why) && ok;
  certified c{h, 3, modular_partition(k, p), tag};
  outputs.push_back(c);
  modular_outputs.push_back(c);
  return ok;
}

bool crit1(std::ostringstream &why) {
  bool ok = true;
  for (std::uint64_t p : {7, 11, 13}) {
    auto s = max_good_set(p, 5).elements;
    why << "s_5(" << p << ")=" << s.size() << "; ";
    ok = modular_check(5, p, s, why) && ok;
  }
  return ok;
}

bool crit2(std::ostringstream &why) {
  bool ok = true;
  for (std::uint64_t k : {6, 7}) {
    auto s = behrend_good_set(11, k, behrend_policy{true}).elements;
    why << "k=" << k << " |S|=" << s.size() << "; ";
    ok = require(oracle::is_k_good(s, 11, k), "behrend set not good", why) && ok;
    ok = modular_check(k, 11, s, why) && ok;
  }
  return ok;
}

bool crit3(std::ostringstream &why) {
  bool ok = true;
  for (auto [k, r] : std::vector<std::pair<std::size_t, std::size_t>>{{4, 3}, {5, 4}, {6, 4}})
    for (std::size_t n : {12, 16, 20}) {
      auto h = construct_split({n, k, r, true});
      auto h1 = greedy_packing(n / 2, r - 1, r - 2).edges.size();
      std::string tag = "split n=" + std::to_string(n) + " k=" + std::to_string(k);
      ok = require(h.size() == h1 * detail::binomial(n - n / 2, k - r + 1), tag + " count", why) && ok;
      ok = require(!find_q_copy(h, q_pattern(k, r)), tag + " contains Q_k(r)", why) && ok;
      outputs.push_back({h, r, std::nullopt, tag});
    }
  return ok;
}

bool crit4(std::ostringstream &why) {
  bool ok = true;
  for (std::size_t n1 : {6, 7}) {
    forbidden_family fam(3);
    fam.add(q_pattern(3, 3)).add(i_pattern(3, 2));
    auto base = ex_exact(n1, 3, fam);
    ok = require(!base.budget_hit, "base search budget", why) && ok;
    auto h = construct_lift({3, base.witness, n1, true});
    std::string tag = "lift n1=" + std::to_string(n1);
    ok = require(h.size() == base.witness.size() * detail::binomial(n1, 2), tag + " count", why) && ok;
    ok = require(!find_q_copy(h, q_pattern(5, 3)), tag + " contains Q_5(3)", why) && ok;
    outputs.push_back({h, 3, std::nullopt, tag});
  }
  return ok;
}

bool crit5(std::ostringstream &why) {
  std::size_t violations = 0, cases = 0;
  for (std::size_t n = 1; n <= 40; ++n)
    for (std::size_t r = 1; r <= 6 && r <= n; ++r)
      for (std::size_t t = 1; t < r; ++t) {
        auto g = greedy_packing(n, r, t);
        auto per = detail::binomial(r, t);
        ++cases;
        if (static_cast<unsigned __int128>(g.edges.size()) * per * per < detail::binomial(n, t))
          ++violations;
      }
  why << cases << " cases, " << violations << " violations; ";
  return violations == 0;
}

bool crit6(std::ostringstream &why) {
  auto a = exact_max_packing(7, 3, 2).edges.size();
  auto b = exact_max_packing(6, 3, 2).edges.size();
  bool ok = require(a == 7, "P(7,3,2) != 7", why);
  ok = require(b == 4, "P(6,3,2) != 4", why) && ok;
  ok = require(b == oracle::max_packing(6, 3, 2), "P(6,3,2) disagrees with enumeration", why) && ok;
  ok = require(a * 3 <= detail::binomial(7, 2) && b * 3 <= detail::binomial(6, 2), "upper bound", why) && ok;
  return ok;
}

bool crit7(std::ostringstream &why) {
  bool ok = true;
  for (std::uint64_t p : {5, 7, 11, 13, 17}) {
    const auto r3 = oracle::r3(p);
    for (std::uint64_t k = 3; k < p; ++k) {
      auto g = max_good_set(p, k);
      std::string tag = "p=" + std::to_string(p) + " k=" + std::to_string(k);
      ok = require(g.elements == oracle::max_good_set(p, k), tag + " disagrees", why) && ok;
      ok = require(g.elements.size() <= r3, tag + " exceeds r_3", why) && ok;
    }
  }
  return ok;
}

bool crit8(std::ostringstream &why) {
  std::mt19937_64 rng(20240601);
  std::size_t failures = 0;
  for (int round = 0; round < 200; ++round) {
    std::size_t k = 1 + rng() % 4, n = k + rng() % (15 - k);
    auto h = oracle::random_hypergraph(rng, n, k, rng() % 121);
    auto red = kpartite_reduce(h, rng());
    if (red.graph.size() < transversal_floor(k, h.size()))
      ++failures;
  }
  why << failures << " of 200 below the floor; ";
  return failures == 0;
}

bool crit9(std::ostringstream &why) {
  bool ok = true;
  std::size_t audited = 0;
  for (const auto &c : modular_outputs) {
    const auto k = c.h.k();
    if (find_q_copy(c.h, q_pattern(k, k)) || find_i_copy(c.h, i_pattern(k, k - 1)))
      continue;
    ++audited;
    ok = require(shadow_clique_audit(c.h).pass, c.label + " audit failed", why) && ok;
  }
  for (std::size_t k : {3, 4, 5})
    ok = require(!shadow_clique_audit(generate_i(k, k - 1)).pass,
                 "audit passed on I_" + std::to_string(k), why) && ok;
  why << audited << " modular outputs audited; ";
  return ok && audited > 0;
}

bool crit10(std::ostringstream &why) {
  bool ok = true;
  for (const auto &c : outputs) {
    partition parts = c.parts ? *c.parts : kpartite_reduce(c.h, 1).partition;
    hypergraph host = c.parts ? c.h : kpartite_reduce(c.h, 1).graph;
    std::size_t worst = 0;
    for (const auto &d : d_sets(host, parts))
      worst = std::max(worst, d.parts.size());
    ok = require(worst <= c.r - 1, c.label + " max |D(e)| = " + std::to_string(worst), why) && ok;
  }
  why << outputs.size() << " outputs; ";
  return ok;
}

bool crit11(std::ostringstream &why) {
  bool ok = true;
  std::size_t compared = 0;
  for (std::size_t k = 2; k <= 4; ++k)
    for (std::size_t n = k; detail::binomial(n, k) <= 20; ++n) {
      std::vector<forbidden_family> fams;
      for (std::size_t r = 2; r <= k; ++r)
        fams.emplace_back(k).add(q_pattern(k, r));
      for (std::size_t i = 0; i < k; ++i)
        fams.emplace_back(k).add(i_pattern(k, i));
      if (k >= 3)
        fams.emplace_back(k).add(q_pattern(k, 3)).add(i_pattern(k, k - 1));
      if (k == 3)
        fams.push_back(bes_family(3, 6, 3));
      for (const auto &fam : fams) {
        std::vector<hypergraph> gs;
        for (const auto &m : fam.members())
          gs.push_back(m.graph);
        ++compared;
        ok = require(ex_exact(n, k, fam).max_edges == oracle::ex(n, k, gs),
                     "n=" + std::to_string(n) + " " + fam.id(), why) && ok;
      }
    }
  forbidden_family i32(3);
  i32.add(i_pattern(3, 2));
  ok = require(ex_exact(7, 3, i32).max_edges == 7, "ex(7, I_3(2)) != 7", why) && ok;
  for (std::size_t n = 4; n <= 7; ++n) {
    auto c = monotone_chain_check(n, 4);
    ok = require(c.holds && !c.lower_bound_only, "chain at n=" + std::to_string(n), why) && ok;
  }
  why << compared << " families compared; ";
  return ok;
}

bool crit12(std::ostringstream &why) {
  bool ok = true;
  for (std::size_t n = 4; n <= 10; ++n) {
    auto h = centered_family(n, 3);
    ok = require(h.size() == detail::binomial(n - 1, 2), "star count", why) && ok;
    ok = require(!find_q_copy(h, q_pattern(3, 3)), "star contains Q_3(3)", why) && ok;
  }
  forbidden_family q33(3);
  q33.add(q_pattern(3, 3));
  auto v = ex_exact(6, 3, q33).max_edges;
  why << "ex(6, Q_3(3)) = " << v << "; ";
  return ok && v >= 10;
}

} // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<bool(std::ostringstream &)>>> criteria{
      {"modular construction, k=5, p in {7,11,13}", crit1},
      {"modular construction, k in {6,7}, p=11, digit-sphere sets", crit2},
      {"split construction counts and freeness", crit3},
      {"lift construction over searched bases", crit4},
      {"greedy packing size floor", crit5},
      {"exact packing values", crit6},
      {"good-set maxima and the r_3 bound", crit7},
      {"k-partite reduction floor", crit8},
      {"shadow-clique audit", crit9},
      {"D(e) bound on certified outputs", crit10},
      {"exact Turan search against enumeration", crit11},
      {"centered family", crit12},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    std::ostringstream why;
    bool pass = false;
    auto start = std::chrono::steady_clock::now();
    try {
      pass = criteria[i].second(why);
    } catch (const std::exception &e) {
      why << "exception: " << e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (pass ? "PASS" : "FAIL") << ' ' << i + 1 << ": " << criteria[i].first << " ("
              << std::fixed << std::setprecision(1) << secs << "s) " << why.str() << std::endl;
    failed += !pass;
  }
  return failed == 0 ? 0 : 1;
}
