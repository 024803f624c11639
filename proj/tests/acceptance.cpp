// Acceptance run: one PASS/FAIL line per criterion, exit 0 iff all pass.

#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <rackworks/cli.hpp>

#include "hemi_fixtures.hpp"
#include "instances.hpp"
#include "oracles.hpp"

using namespace rackworks;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string &what) {
    if (!ok) {
      pass = false;
      if (!detail.empty())
        detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(3);
  ss << v;
  return ss.str();
}

Outcome rack_axioms() {
  Outcome o;
  Stopwatch clock;
  for (const auto &[name, g] : groups::catalog()) {
    const auto r = conjugation_rack(g);
    o.require(check_rack(r).valid, name + " fails check_rack");
    o.require(oracle::rows_are_permutations(r.table) && oracle::self_distributive(r.table),
              name + " fails the naive oracle");
    const int e = g.identity();
    for (int x = 0; x < g.size(); ++x)
      o.require(r.op(e, x) == x && r.op(x, e) == e, name + " not pointed at the identity");
  }
  const double ms = clock.ms();
  o.require(ms < 1000, "runtime " + fmt(ms) + " ms");
  o.detail = o.pass ? "6 groups, " + fmt(ms) + " ms" : o.detail;
  return o;
}

Outcome augmented_racks() {
  Outcome o;
  const auto family = instances::augmented_family();
  o.require(family.size() >= 20, "only " + std::to_string(family.size()) + " instances");
  for (const auto &[name, d] : family) {
    const auto r = augmented_rack(d);
    o.require(check_rack(r).valid && oracle::self_distributive(r.table) &&
                  oracle::rows_are_permutations(r.table),
              name + " is not a rack");
  }
  int rejected = 0;
  for (const auto &v : instances::augmented_violators()) {
    try {
      augmented_rack(v.data);
      o.require(false, v.name + " accepted");
    } catch (const HypothesisError &e) {
      const bool ok = e.rule() == v.rule && !e.witness().empty();
      o.require(ok, v.name + " rejected as " + e.rule());
      rejected += ok;
    }
  }
  o.require(rejected == 5, std::to_string(rejected) + " of 5 violators rejected");
  if (o.pass)
    o.detail = std::to_string(family.size()) + " racks, 5 violators rejected with witnesses";
  return o;
}

Outcome enumeration() {
  Outcome o;
  for (int n = 1; n <= 3; ++n) {
    const auto naive = oracle::naive_racks(n);
    const auto labeled = enumerate_racks(n, false);
    const auto classes = enumerate_racks(n, true);
    o.require(labeled.labeled == naive.size(), "labeled count differs at n=" + std::to_string(n));
    o.require(classes.iso_classes == static_cast<std::size_t>(oracle::count_classes(naive)),
              "class count differs at n=" + std::to_string(n));
  }
  Stopwatch clock;
  const auto four = enumerate_racks(4, true);
  const double ms = clock.ms();
  o.require(ms < 5000, "n=4 took " + fmt(ms) + " ms");
  for (int n = 1; n <= 4; ++n) {
    const auto reps = n == 4 ? four : enumerate_racks(n, true);
    for (std::size_t i = 0; i < reps.racks.size(); ++i)
      for (std::size_t j = i + 1; j < reps.racks.size(); ++j)
        o.require(!oracle::isomorphic(reps.racks[i].table, reps.racks[j].table),
                  "isomorphic representatives at n=" + std::to_string(n));
  }
  if (o.pass)
    o.detail = "n=4: " + std::to_string(four.labeled) + " labeled, " +
               std::to_string(four.iso_classes) + " classes in " + fmt(ms) + " ms";
  return o;
}

Outcome covez() {
  Outcome o;
  Stopwatch clock;
  o.require(verify_covez_identity().pass(), "polynomial identity");
  o.require(covez_group_check().pass(), "group law at t=0");
  std::vector<Rational> ts{Rational(0), Rational(1), Rational(-2), Rational(3, 7)};
  for (const auto &t : ts) {
    const auto s = covez_tangent_bracket(t);
    o.require(s == covez_leibniz(t), "tangent bracket differs at t=" + to_string(t));
    const auto lr = check_leibniz(s);
    o.require(lr.valid, "Leibniz identity fails at t=" + to_string(t));
    o.require(lr.antisymmetric == (t == 0), "antisymmetry wrong at t=" + to_string(t));
  }
  o.require(bundle_nontriviality_witness(ts).pass(), "non-triviality witness");
  const double ms = clock.ms();
  o.require(ms < 1000, "runtime " + fmt(ms) + " ms");
  if (o.pass)
    o.detail = "t in {0,1,-2,3/7}, " + fmt(ms) + " ms";
  return o;
}

Outcome groupoid_rackoids() {
  Outcome o;
  Stopwatch clock;
  const int k = 4;
  const auto pair = groupoids::pair(k);
  const auto rk = rackoid_from_groupoid(pair);
  o.require(check_rackoid(rk, true).valid, "pair(4) rackoid");
  // Conjugating (m, n) by Σ gives (f(m), f(n)) for f the underline of Σ.
  for (std::size_t b = 0; b < rk.bis.size(); ++b)
    for (int a = 0; a < pair.arrows(); ++a) {
      const auto &u = rk.bis[b].underline;
      o.require(rk.op[b][a] == u[pair.s(a)] * k + u[pair.t(a)], "pair(4) conjugation table");
    }
  ArrowSet distinct;
  for (int a = 0; a < pair.arrows(); ++a)
    if (pair.s(a) != pair.t(a))
      distinct.insert(a);
  for (int a : distinct)
    o.require(conjugacy_class(pair, a) == distinct,
              "class of arrow " + std::to_string(a) + " is not the s!=t set");

  Table swap(2, std::vector<int>(3));
  swap[0] = {0, 1, 2};
  swap[1] = {1, 0, 2};
  const auto action = groupoids::action(groups::cyclic(2), swap);
  o.require(validate(action).valid, "Z2 action groupoid invalid");
  o.require(check_rackoid(rackoid_from_groupoid(action), true).valid, "Z2 action rackoid");
  const double ms = clock.ms();
  o.require(ms < 10000, "runtime " + fmt(ms) + " ms");
  if (o.pass)
    o.detail = std::to_string(rk.bis.size()) + " bisections on pair(4), " + fmt(ms) + " ms";
  return o;
}

Outcome augmented_rackoids() {
  Outcome o;
  const auto d = instances::two_parallel_copies(3);
  const auto r = augmented_rackoid(d.X, d.g, d.fold, d.action);
  o.require(check_rackoid(r, true).valid, "augmented rackoid (unital)");
  o.require(check_rackoid(restrict_st_distinct(r).rackoid, false).valid,
            "restriction to s!=t arrows");
  for (int k = 1; k <= 3; ++k) {
    const auto t = instances::z2_torsor(k);
    const auto fp = fiber_product_rackoid(t.q, t.g, t.act);
    o.require(fp.rackoid.pc.arrows == 4 * k, "fiber product size");
    o.require(check_rackoid(fp.rackoid, false).valid, "fiber product k=" + std::to_string(k));
    for (std::size_t x = 0; x < fp.pairs.size(); ++x)
      o.require(t.act[fp.p[x]][fp.pairs[x].second] == fp.pairs[x].first,
                "p(y1, y2) does not move y2 to y1");
  }
  if (o.pass)
    o.detail = "fold over pair(3): " + std::to_string(r.bis.size()) +
               " bisections; Z2 torsors k=1..3";
  return o;
}

Outcome hemi_self_distributivity() {
  Outcome o;
  Rng rng(1);
  const auto cat = hemi_catalog::mixed(1000);
  const auto els = hemi_catalog::elements(rng, 2, 20);
  const auto triples = sample_triples(rng, cat.size(), els.size(), 100);
  const auto r = check_hemi_axioms(cat, els, triples, 1e-6);
  const double worst = r.extra["max_residual"].get<double>();
  o.require(r.pass() && worst < 1e-6, "max residual " + fmt(worst));

  Rng small(4);
  const auto els4 = hemi_catalog::elements(small, 2, 4);
  const auto t4 = sample_triples(small, cat.size(), els4.size(), 8);
  std::vector<double> res;
  for (int steps : {10, 20, 40})
    res.push_back(hemi_sd_residual(with_steps(hemi_catalog::mixed(), steps), els4, t4).residual);
  double order = 1e9;
  for (int i = 0; i + 1 < 3; ++i)
    order = std::min(order, std::log2(res[i] / res[i + 1]));
  o.require(order >= 3.5, "observed order " + fmt(order));
  if (o.pass)
    o.detail = "max residual " + fmt(worst) + ", observed order " + fmt(order);
  return o;
}

bool bitwise_equal(const SectionValue &a, const SectionValue &b) {
  return a.vec.size() == b.vec.size() &&
         std::memcmp(a.vec.data(), b.vec.data(), a.vec.size() * sizeof(double)) == 0 &&
         std::memcmp(a.covec.data(), b.covec.data(), a.covec.size() * sizeof(double)) == 0;
}

Outcome bracket_recovery() {
  Outcome o;
  double worst = 0;
  for (const auto &c : hemi_catalog::bracket_cases()) {
    const auto got = hemi_bracket(c.b, c.a, c.p, 1e-3).value;
    const auto want = lie_oracle(c.b, c.a, c.p);
    double num = 0, den = 0;
    for (std::size_t i = 0; i < want.vec.size(); ++i) {
      num = std::max({num, std::abs(got.vec[i] - want.vec[i]),
                      std::abs(got.covec[i] - want.covec[i])});
      den = std::max({den, std::abs(want.vec[i]), std::abs(want.covec[i])});
    }
    const double rel = num / std::max(den, 1e-300);
    worst = std::max(worst, rel);
    o.require(rel < 1e-3, c.name + " relative error " + fmt(rel));

    auto b2 = c.b;
    for (auto &e : b2.beta)
      e = expr::add(expr::scale(5, e), expr::variable(0));
    o.require(bitwise_equal(got, hemi_bracket(b2, c.a, c.p, 1e-3).value),
              c.name + " depends on alpha");
  }
  Rng rng(9);
  for (int trial = 0; trial < 5; ++trial) {
    auto b = fixture::random_section(rng, 2);
    b.X = expr::zeros(2);
    const auto a = fixture::random_section(rng, 2);
    const auto r = hemi_bracket(b, a, fixture::random_point(rng, 2)).value;
    for (int i = 0; i < 2; ++i)
      o.require(r.vec[i] == 0.0 && r.covec[i] == 0.0, "X = 0 gives a nonzero bracket");
  }
  if (o.pass)
    o.detail = "5 cases, worst relative error " + fmt(worst);
  return o;
}

Outcome algebroid_laws() {
  Outcome o;
  Rng rng(8);
  double worst = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(3));
    const auto a = fixture::random_section(rng, n);
    const auto b = fixture::random_section(rng, n);
    const auto c = fixture::random_section(rng, n);
    const auto p = fixture::random_point(rng, n);
    const auto lhs = lie_oracle(c, bracket_of(b, a), p);
    const auto r1 = lie_oracle(bracket_of(c, b), a, p);
    const auto r2 = lie_oracle(b, bracket_of(c, a), p);
    for (int i = 0; i < n; ++i)
      worst = std::max({worst, std::abs(lhs.vec[i] - r1.vec[i] - r2.vec[i]),
                        std::abs(lhs.covec[i] - r1.covec[i] - r2.covec[i])});
  }
  o.require(worst < 1e-10, "oracle Leibniz residual " + fmt(worst));

  const auto cat = hemi_catalog::mixed();
  const auto cases = hemi_catalog::bracket_cases();
  const auto f = parse_expr("cos(x1)*x2 + atan(x2)", 2);
  double numeric = 0;
  for (std::size_t i = 0; i < cat.size(); ++i) {
    const auto r = check_ad_identities(cat[i], cat[(i + 1) % cat.size()], cases[3].b,
                                       cases[4].a, f, {{0.2, -0.3}, {-0.5, 0.4}}, 1e-3);
    o.require(r.pass(), "Ad/anchor identities fail for sigma=" + std::to_string(i));
    for (const auto &c : r.checks)
      numeric = std::max(numeric, c.residual);
  }
  if (o.pass)
    o.detail = "oracle Leibniz " + fmt(worst) + ", worst Ad/anchor residual " + fmt(numeric);
  return o;
}

std::string run_cli(const std::vector<std::string> &args) {
  std::vector<const char *> argv{"rackworks", "--json"};
  for (const auto &a : args)
    argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  auto j = nlohmann::json::parse(out.str(), nullptr, false);
  if (j.is_discarded())
    return "exit " + std::to_string(code) + " unparsable";
  j.erase("time_ms");
  return std::to_string(code) + j.dump();
}

Outcome reproducibility(double elapsed_ms) {
  Outcome o;
  const std::string data = RACKWORKS_DATA_DIR;
  const std::vector<std::vector<std::string>> commands = {
      {"--seed", "5", "hemi", "selfdist", "--dim", "2", "--samples", "100"},
      {"--seed", "5", "hemi", "selfdist", "--dim", "1", "--samples", "50"},
      {"--seed", "9", "hemi", "selfdist", "--dim", "2", "--catalog", data + "/hemi_mixed.json"},
      {"--seed", "5", "hemi", "bracket", "--dim", "2", "--X", "-x2,x1", "--Y", "x2^2,0",
       "--beta", "x1*x2,1", "--point", "0.3,-0.5"},
      {"--seed", "5", "hemi", "ad-check", "--dim", "2", "--f", "sin(x1)*x2", "--X", "-x2,x1",
       "--Y", "x2,x1", "--beta", "x1,cos(x2)", "--points", "0.1,0.2;-0.4,0.6"},
      {"--seed", "5", "covez", "verify"},
      {"--seed", "5", "enumerate", "racks", "--n", "4", "--up-to-iso"},
      {"--seed", "5", "augment", data + "/fiber_product.json"},
  };
  Stopwatch clock;
  for (const auto &c : commands) {
    const auto first = run_cli(c);
    o.require(first == run_cli(c), "rerun differs: " + c[2] + " " + c[3]);
  }
  Rng a(42), b(42);
  o.require(covez_sampled_residual(0.75, a, 50) == covez_sampled_residual(0.75, b, 50),
            "sampled covez residual differs");
  const double total = elapsed_ms + clock.ms();
  o.require(total < 60000, "wall clock " + fmt(total / 1000) + " s");
  if (o.pass)
    o.detail = std::to_string(commands.size()) + " seeded commands rerun identically; " +
               "criteria 1-10 in " + fmt(total / 1000) + " s";
  return o;
}

} // namespace

int main() {
  Stopwatch clock;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"rack axioms on conjugation racks", rack_axioms},
      {"augmented racks and violators", augmented_racks},
      {"rack enumeration", enumeration},
      {"Covez bundle exactness", covez},
      {"groupoid to rackoid", groupoid_rackoids},
      {"augmented and fiber-product rackoids", augmented_rackoids},
      {"hemi self-distributivity", hemi_self_distributivity},
      {"bracket recovery", bracket_recovery},
      {"tangent algebroid laws", algebroid_laws},
  };
  int failed = 0;
  auto print = [&](int index, const std::string &name, const Outcome &o) {
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << index << ": " << name;
    if (!o.detail.empty())
      std::cout << " (" << o.detail << ")";
    std::cout << "\n" << std::flush;
    failed += !o.pass;
  };
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception &e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    print(static_cast<int>(i) + 1, criteria[i].first, o);
  }
  Outcome last;
  try {
    last = reproducibility(clock.ms());
  } catch (const std::exception &e) {
    last.require(false, std::string("exception: ") + e.what());
  }
  print(10, "wall clock and seeded reproducibility", last);
  std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criteria fail")
            << "\n";
  return failed == 0 ? 0 : 1;
}
