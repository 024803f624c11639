#pragma once

// The rackworks command line: verb-noun subcommands, text or --json output.
// Exit codes: 0 all checks pass, 1 a check fails, 2 usage or input error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "covez.hpp"
#include "enumerate.hpp"
#include "hemi.hpp"
#include "io.hpp"
#include "rackoid.hpp"
#include "report.hpp"

namespace rackworks::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

struct Globals {
  bool json = false;
  std::uint64_t seed = 1;
};

namespace detail {

inline int emit(Report r, const Globals &g, std::ostream &out) {
  if (g.json)
    out << r.to_json().dump(2) << "\n";
  else
    out << r.to_text();
  return r.pass() ? kExitPass : kExitFail;
}

inline void hypothesis_line(Report &r, const HypothesisError &e) {
  r.add("hypothesis/" + e.rule(), false, "witness " + witness_string(e.witness()));
}

inline std::vector<std::string> split(const std::string &s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string piece;
  while (std::getline(ss, piece, sep))
    out.push_back(piece);
  return out;
}

inline std::vector<HemiBisection> hemi_catalog_for(const std::string &file, int dim) {
  if (!file.empty())
    return io::hemi_catalog_from_json(io::read_json_file(file), dim);
  if (dim == 2)
    return hemi_catalog::mixed();
  if (dim == 1)
    return hemi_catalog::translations();
  throw InputError("no built-in catalog for dimension " + std::to_string(dim) +
                   "; pass --catalog");
}

inline nlohmann::json section_json(const SectionValue &v) {
  return {{"vector", v.vec}, {"covector", v.covec}};
}

inline SectionA section_from(const std::string &field, const std::string &form, int n) {
  return {field.empty() ? expr::zeros(n) : parse_expr_list(field, n),
          form.empty() ? expr::zeros(n) : parse_expr_list(form, n)};
}

inline void require_dim(int dim) {
  if (dim < 1 || dim > kMaxDim)
    throw InputError("--dim must be in [1," + std::to_string(kMaxDim) + "]");
}

} // namespace detail

/// Runs one command line. Reports go to out, diagnostics to err.
inline int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  CLI::App app{"Finite and numeric rackoid toolkit", "rackworks"};
  // Plain --help only: hemi subcommands use --h for the difference spacing.
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  Globals g;
  app.add_flag("--json", g.json, "Machine-readable JSON output");
  app.add_option("--seed", g.seed, "Seed for sampled checks (mt19937_64)");

  // check
  auto *check = app.add_subcommand("check", "Validate a structure file");
  check->require_subcommand(1);
  std::string checkFile;
  auto *checkRack = check->add_subcommand("rack", "Rack axioms");
  auto *checkGroup = check->add_subcommand("group", "Group axioms");
  auto *checkGroupoid = check->add_subcommand("groupoid", "Groupoid axioms");
  auto *checkRackoid = check->add_subcommand("rackoid", "Rackoid axioms (unital if units given)");
  for (auto *c : {checkRack, checkGroup, checkGroupoid, checkRackoid})
    c->add_option("file", checkFile, "JSON file")->required();

  // enumerate
  auto *enumerate = app.add_subcommand("enumerate", "Enumerate finite structures");
  enumerate->require_subcommand(1);
  auto *enumRacks = enumerate->add_subcommand("racks", "All racks on n points");
  int enumN = 0;
  bool upToIso = false, enumList = false;
  enumRacks->add_option("--n", enumN, "Carrier size (1..5)")->required();
  enumRacks->add_flag("--up-to-iso", upToIso, "One representative per isomorphism class");
  enumRacks->add_flag("--list", enumList, "Include the tables in the output");

  // groupoid tools
  std::string groupoidFile, outFile;
  auto *conjRackoid =
      app.add_subcommand("conj-rackoid", "Conjugation rackoid of a groupoid");
  conjRackoid->add_option("groupoid", groupoidFile, "Groupoid JSON file")->required();
  conjRackoid->add_option("-o,--output", outFile, "Write the rackoid here");
  auto *conjClass = app.add_subcommand("conjugacy-class", "Conjugacy class of an arrow");
  int arrow = -1;
  conjClass->add_option("groupoid", groupoidFile, "Groupoid JSON file")->required();
  conjClass->add_option("--arrow", arrow, "Arrow index")->required();
  auto *quotient = app.add_subcommand("quotient", "Coarse quotient of a groupoid");
  quotient->add_option("groupoid", groupoidFile, "Groupoid JSON file")->required();
  quotient->add_option("-o,--output", outFile, "Write the quotient groupoid here");
  auto *augment = app.add_subcommand("augment", "Augmented rack, rackoid or fiber product");
  std::string specFile;
  augment->add_option("spec", specFile, "Augment spec JSON file")->required();
  augment->add_option("-o,--output", outFile, "Write the resulting structure here");

  // covez
  auto *covez = app.add_subcommand("covez", "The Covez bundle of racks");
  covez->require_subcommand(1);
  auto *covezVerify = covez->add_subcommand("verify", "Polynomial identities and group law");
  auto *covezBracket = covez->add_subcommand("bracket", "Tangent Leibniz bracket at t");
  std::string tValue, tList;
  covezBracket->add_option("--t", tValue, "Parameter as p/q or decimal")->required();
  auto *covezNontrivial = covez->add_subcommand("nontrivial", "Non-triviality witness");
  covezNontrivial->add_option("--t-list", tList, "Comma-separated parameters")->required();

  // leibniz
  auto *leibniz = app.add_subcommand("leibniz", "Leibniz algebras");
  leibniz->require_subcommand(1);
  auto *leibnizCheck = leibniz->add_subcommand("check", "Leibniz identity of structure constants");
  std::string leibnizFile;
  leibnizCheck->add_option("file", leibnizFile, "Leibniz JSON file")->required();

  // hemi
  auto *hemi = app.add_subcommand("hemi", "Hemisemidirect rackoid on T*M x M, M = R^n");
  hemi->require_subcommand(1);
  int dim = 0, samples = 100, elementsCount = 20, steps = kDefaultStepsPerUnit, sigma = 0,
      tau = 1;
  double tol = -1, h = 1e-3;
  std::string catalogFile, X, Y, alpha, beta, point, fExpr;
  std::optional<int> stepsOverride;
  auto *hemiSd = hemi->add_subcommand("selfdist", "Sampled rackoid axioms on a catalog");
  hemiSd->add_option("--dim", dim, "Dimension n (1..3)")->required();
  hemiSd->add_option("--catalog", catalogFile, "Catalog JSON (built-in for n = 1, 2)");
  hemiSd->add_option("--samples", samples, "Sampled (sigma, tau, element) triples");
  hemiSd->add_option("--elements", elementsCount, "Random arrows to act on");
  hemiSd->add_option("--tol", tol, "Residual tolerance (default 1e-6)");
  hemiSd->add_option("--steps", stepsOverride, "RK4 steps per unit time");
  auto *hemiBracket = hemi->add_subcommand("bracket", "Bracket [b,a] by differentiating the action");
  hemiBracket->add_option("--dim", dim, "Dimension n (1..3)")->required();
  hemiBracket->add_option("--X", X, "Vector field of b")->required();
  hemiBracket->add_option("--alpha", alpha, "1-form of b (never enters the result)");
  hemiBracket->add_option("--Y", Y, "Vector field of a");
  hemiBracket->add_option("--beta", beta, "1-form of a")->required();
  hemiBracket->add_option("--point", point, "Comma-separated point")->required();
  hemiBracket->add_option("--h", h, "Difference spacing");
  hemiBracket->add_option("--steps", steps, "RK4 steps per unit time");
  hemiBracket->add_option("--tol", tol, "Relative tolerance against the oracle (default 1e-3)");
  auto *hemiAd = hemi->add_subcommand("ad-check", "Adjoint and anchor identities");
  hemiAd->add_option("--dim", dim, "Dimension n (1..3)")->required();
  hemiAd->add_option("--catalog", catalogFile, "Catalog JSON (built-in for n = 1, 2)");
  hemiAd->add_option("--sigma", sigma, "Catalog index of Sigma (-1: identity)");
  hemiAd->add_option("--tau", tau, "Catalog index of T (-1: identity)");
  hemiAd->add_option("--f", fExpr, "Function f")->required();
  hemiAd->add_option("--X", X, "Vector field of b");
  hemiAd->add_option("--alpha", alpha, "1-form of b");
  hemiAd->add_option("--Y", Y, "Vector field of a");
  hemiAd->add_option("--beta", beta, "1-form of a");
  hemiAd->add_option("--points", point, "Points separated by ';'")->required();
  hemiAd->add_option("--h", h, "Difference spacing");
  hemiAd->add_option("--steps", steps, "RK4 steps per unit time");
  hemiAd->add_option("--tol", tol, "Residual tolerance (default 1e-3)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    Stopwatch clock;
    Report r;
    auto finish = [&](Report &rep) {
      rep.time_ms = clock.ms();
      return detail::emit(std::move(rep), g, out);
    };

    if (check->parsed()) {
      const auto j = io::read_json_file(checkFile);
      if (checkRack->parsed()) {
        r.title = "check rack";
        add_check_report(r, "rack", check_rack(io::rack_from_json(j)));
      } else if (checkGroup->parsed()) {
        r.title = "check group";
        add_check_report(r, "group", check_group(io::group_table_from_json(j)));
      } else if (checkGroupoid->parsed()) {
        r.title = "check groupoid";
        add_check_report(r, "groupoid", validate(io::groupoid_from_json(j)));
      } else {
        r.title = "check rackoid";
        const auto rk = io::rackoid_from_json(j);
        add_check_report(r, "rackoid", check_rackoid(rk, rk.pc.unital()));
        r.extra["unital"] = rk.pc.unital();
        r.extra["bisections"] = rk.bis.size();
      }
      return finish(r);
    }

    if (enumRacks->parsed()) {
      r.title = "enumerate racks";
      const auto e = enumerate_racks(enumN, upToIso);
      r.add("enumerate n=" + std::to_string(enumN), true,
            "labeled=" + std::to_string(e.labeled) +
                " classes=" + std::to_string(e.iso_classes));
      r.extra["n"] = enumN;
      r.extra["labeled"] = e.labeled;
      r.extra["iso_classes"] = e.iso_classes;
      if (enumList) {
        nlohmann::json tables = nlohmann::json::array();
        for (const auto &rk : e.racks)
          tables.push_back(rk.table);
        r.extra["racks"] = tables;
      }
      return finish(r);
    }

    if (conjRackoid->parsed()) {
      r.title = "conjugation rackoid";
      const auto gr = io::groupoid_from_json(io::read_json_file(groupoidFile));
      const auto v = validate(gr);
      add_check_report(r, "groupoid", v);
      if (v.valid) {
        const auto rk = rackoid_from_groupoid(gr);
        add_check_report(r, "rackoid", check_rackoid(rk, true));
        r.extra["bisections"] = rk.bis.size();
        if (!outFile.empty())
          io::write_json_file(outFile, io::to_json(rk));
      }
      return finish(r);
    }

    if (conjClass->parsed()) {
      r.title = "conjugacy class";
      const auto gr = io::groupoid_from_json(io::read_json_file(groupoidFile));
      const auto v = validate(gr);
      add_check_report(r, "groupoid", v);
      if (v.valid) {
        try {
          const auto cls = conjugacy_class(gr, arrow);
          r.extra["arrow"] = arrow;
          r.extra["class"] = std::vector<int>(cls.begin(), cls.end());
          if (gr.s(arrow) != gr.t(arrow)) {
            const auto orbit = st_distinct_orbit_arrows(gr, arrow);
            r.add("class = s!=t arrows over the orbit", cls == orbit);
          } else {
            r.add("class computed", true);
          }
        } catch (const HypothesisError &e) {
          detail::hypothesis_line(r, e);
        }
      }
      return finish(r);
    }

    if (quotient->parsed()) {
      r.title = "coarse quotient";
      const auto gr = io::groupoid_from_json(io::read_json_file(groupoidFile));
      const auto v = validate(gr);
      add_check_report(r, "groupoid", v);
      if (v.valid) {
        const auto q = coarse_quotient(gr);
        add_check_report(r, "quotient", validate(q.groupoid));
        r.extra["class_of"] = q.class_of;
        r.extra["arrows"] = q.groupoid.arrows();
        if (!outFile.empty())
          io::write_json_file(outFile, io::to_json(q.groupoid));
      }
      return finish(r);
    }

    if (augment->parsed()) {
      const auto j = io::read_json_file(specFile);
      io::detail::require_kind(j, "augment");
      const auto mode = io::detail::get<std::string>(j, "mode");
      r.title = "augment " + mode;
      try {
        if (mode == "rack") {
          AugmentedRackData d{FiniteGroup(io::detail::get<Table>(j, "group")),
                              io::detail::get<int>(j, "m"),
                              io::detail::get<std::vector<int>>(j, "p"),
                              io::detail::get<Table>(j, "action")};
          const auto rk = augmented_rack(d);
          add_check_report(r, "rack", check_rack(rk));
          if (!outFile.empty())
            io::write_json_file(outFile, io::to_json(rk));
        } else if (mode == "rackoid" || mode == "fiber-product") {
          const auto gr = io::groupoid_from_json(io::detail::field(j, "groupoid"));
          RackoidTable rk;
          if (mode == "rackoid") {
            rk = augmented_rackoid(io::detail::precategory(io::detail::field(j, "X")), gr,
                                   io::detail::get<std::vector<int>>(j, "p"),
                                   io::detail::get<Table>(j, "action"));
          } else {
            const auto fp = fiber_product_rackoid(io::detail::get<std::vector<int>>(j, "q"), gr,
                                                  io::detail::get<Table>(j, "act"));
            rk = fp.rackoid;
            nlohmann::json pairs = nlohmann::json::array();
            for (const auto &[a, b] : fp.pairs)
              pairs.push_back({a, b});
            r.extra["pairs"] = pairs;
          }
          add_check_report(r, "rackoid", check_rackoid(rk, rk.pc.unital()));
          r.extra["bisections"] = rk.bis.size();
          if (!outFile.empty())
            io::write_json_file(outFile, io::to_json(rk));
        } else {
          throw InputError("augment: unknown mode '" + mode + "'");
        }
      } catch (const HypothesisError &e) {
        detail::hypothesis_line(r, e);
      }
      return finish(r);
    }

    if (covezVerify->parsed()) {
      r = verify_covez_identity();
      for (auto &c : covez_group_check().checks)
        r.checks.push_back(std::move(c));
      r.title = "covez verify";
      return finish(r);
    }
    if (covezBracket->parsed()) {
      const Rational t = parse_rational(tValue);
      r.title = "covez bracket t=" + to_string(t);
      const auto s = covez_tangent_bracket(t);
      r.add("equals closed-form bracket", s == covez_leibniz(t));
      const auto lr = check_leibniz(s);
      r.add("leibniz-identity", lr.valid,
            lr.valid ? "" : "witness " + witness_string(lr.violations.front().witness));
      r.extra["antisymmetric"] = lr.antisymmetric;
      r.extra["structure"] = io::to_json(s);
      return finish(r);
    }
    if (covezNontrivial->parsed()) {
      std::vector<Rational> sample;
      for (const auto &piece : detail::split(tList, ','))
        sample.push_back(parse_rational(piece));
      r = bundle_nontriviality_witness(sample);
      r.title = "covez nontrivial";
      return finish(r);
    }

    if (leibnizCheck->parsed()) {
      r.title = "leibniz check";
      const auto s = io::leibniz_from_json(io::read_json_file(leibnizFile));
      const auto lr = check_leibniz(s);
      r.add("leibniz-identity", lr.valid,
            lr.valid ? "" : "witness " + witness_string(lr.violations.front().witness));
      r.extra["dim"] = s.dim();
      r.extra["antisymmetric"] = lr.antisymmetric;
      return finish(r);
    }

    if (hemiSd->parsed()) {
      detail::require_dim(dim);
      if (samples < 1 || elementsCount < 1)
        throw InputError("--samples and --elements must be positive");
      auto cat = detail::hemi_catalog_for(catalogFile, dim);
      if (stepsOverride) {
        if (*stepsOverride < 1)
          throw InputError("--steps must be positive");
        cat = with_steps(std::move(cat), *stepsOverride);
      }
      Rng rng(g.seed);
      const auto els = hemi_catalog::elements(rng, dim, elementsCount);
      const auto triples = sample_triples(rng, cat.size(), els.size(), samples);
      r = check_hemi_axioms(cat, els, triples, tol < 0 ? 1e-6 : tol);
      r.extra["seed"] = g.seed;
      r.extra["rng"] = Rng::algorithm();
      return detail::emit(std::move(r), g, out);
    }

    if (hemiBracket->parsed()) {
      detail::require_dim(dim);
      r.title = "hemi bracket";
      const auto b = detail::section_from(X, alpha, dim);
      const auto a = detail::section_from(Y, beta, dim);
      const auto p = io::parse_point(point, dim);
      const auto oracle = lie_oracle(b, a, p);
      try {
        const auto res = hemi_bracket(b, a, p, h, steps);
        double num = 0, den = 0;
        for (int i = 0; i < dim; ++i) {
          num = std::max({num, std::abs(res.value.vec[i] - oracle.vec[i]),
                          std::abs(res.value.covec[i] - oracle.covec[i])});
          den = std::max({den, std::abs(oracle.vec[i]), std::abs(oracle.covec[i])});
        }
        const double rel = num / std::max(den, 1.0);
        r.add("matches coordinate oracle", rel < (tol < 0 ? 1e-3 : tol), "", rel);
        r.extra["bracket"] = detail::section_json(res.value);
        r.extra["error_estimate"] = res.error_estimate;
      } catch (const NumericError &e) {
        r.error("bracket", e.what());
      }
      r.extra["oracle"] = detail::section_json(oracle);
      return finish(r);
    }

    if (hemiAd->parsed()) {
      detail::require_dim(dim);
      const auto cat = detail::hemi_catalog_for(catalogFile, dim);
      auto pick = [&](int i) {
        if (i == -1)
          return HemiBisection::identity(dim);
        if (i < 0 || i >= static_cast<int>(cat.size()))
          throw InputError("catalog index " + std::to_string(i) + " out of range");
        return cat[i];
      };
      std::vector<std::vector<double>> pts;
      for (const auto &piece : detail::split(point, ';'))
        pts.push_back(io::parse_point(piece, dim));
      try {
        r = check_ad_identities(pick(sigma), pick(tau), detail::section_from(X, alpha, dim),
                                detail::section_from(Y, beta, dim), parse_expr(fExpr, dim), pts,
                                tol < 0 ? 1e-3 : tol, h, steps);
      } catch (const NumericError &e) {
        r.title = "hemi adjoint identities";
        r.error("ad-check", e.what());
      }
      return detail::emit(std::move(r), g, out);
    }
  } catch (const InputError &e) {
    err << "rackworks: " << e.what() << "\n";
    return kExitUsage;
  } catch (const HypothesisError &e) {
    err << "rackworks: " << e.what() << "\n";
    return kExitFail;
  } catch (const NumericError &e) {
    err << "rackworks: numeric failure: " << e.what() << "\n";
    return kExitFail;
  }
  err << "rackworks: no command\n";
  return kExitUsage;
}

} // namespace rackworks::cli
