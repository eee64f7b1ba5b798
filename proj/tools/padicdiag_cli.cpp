// Command line driver. Talks to the library only through padicdiag.h.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "padicdiag/padicdiag.h"

namespace {

constexpr uint64_t kDefaultSeed = 20240601;

// exit codes
constexpr int kChecksFailed = 1;
constexpr int kUsage = 2;
constexpr int kIo = 3;

struct ScenarioDeleter {
  void operator()(pd_scenario* s) const { pd_scenario_free(s); }
};
struct ReportDeleter {
  void operator()(pd_report* r) const { pd_report_free(r); }
};
using ScenarioPtr = std::unique_ptr<pd_scenario, ScenarioDeleter>;
using ReportPtr = std::unique_ptr<pd_report, ReportDeleter>;

struct ApiError {
  pd_status status;
  std::string message;
};

void ok(pd_status s, const std::string& what) {
  if (s != PD_OK) throw ApiError{s, what + ": " + pd_last_error()};
}

std::string take(char* s) {
  std::string out = s == nullptr ? "" : s;
  pd_string_free(s);
  return out;
}

struct Options {
  std::optional<uint64_t> p;
  std::optional<int> k, c, radius, precision, samples;
  std::optional<uint64_t> seed;
  std::optional<std::string> mutate;
  std::string config, out, format = "text", preset, input, x;
  std::optional<int> a, j;
  std::vector<std::string> sets;
  bool no_timing = false;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--p", o.p, "prime p (odd)");
  cmd->add_option("--k", o.k, "weight k >= 2");
  cmd->add_option("--c", o.c, "level c >= 1");
  cmd->add_option("--radius", o.radius, "tree radius R");
  cmd->add_option("--precision", o.precision, "p-adic digits");
  cmd->add_option("--samples", o.samples, "random samples per sampled check");
  cmd->add_option("--seed", o.seed, "seed for randomized checks (default " + std::to_string(kDefaultSeed) + ")");
  cmd->add_option("--config", o.config, "sectioned key-value config file");
  cmd->add_option("--preset", o.preset, "theorem | theorem-minus | pi-action");
  cmd->add_option("--set", o.sets, "section.key=value override (repeatable)");
  cmd->add_option("--mutate", o.mutate, "none | boundary-sign | pi-identity");
  cmd->add_option("--out", o.out, "write the report here instead of stdout");
  cmd->add_option("--format", o.format, "json | text")
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();
  cmd->add_flag("--no-timing", o.no_timing, "omit timings from the report");
}

void set(pd_scenario* s, const std::string& key, const std::string& value) {
  ok(pd_scenario_set(s, key.c_str(), value.c_str()), "--" + key);
}

ScenarioPtr make_scenario(const Options& o, const std::vector<std::pair<std::string, std::string>>& suites) {
  pd_scenario* raw = nullptr;
  ok(pd_scenario_new(&raw), "scenario");
  ScenarioPtr s(raw);
  if (!o.preset.empty()) ok(pd_scenario_apply_preset(s.get(), o.preset.c_str()), "--preset");
  if (!o.config.empty()) ok(pd_scenario_load_file(s.get(), o.config.c_str()), "--config");
  if (o.p) set(s.get(), "field.p", std::to_string(*o.p));
  if (o.k) set(s.get(), "representation.k", std::to_string(*o.k));
  if (o.c) set(s.get(), "representation.c", std::to_string(*o.c));
  if (o.radius) set(s.get(), "tree.radius", std::to_string(*o.radius));
  if (o.precision) set(s.get(), "field.precision", std::to_string(*o.precision));
  if (o.samples) set(s.get(), "run.samples", std::to_string(*o.samples));
  if (!o.x.empty()) set(s.get(), "deformation.x", o.x);
  if (o.a) set(s.get(), "phimod.a", std::to_string(*o.a));
  if (o.j) set(s.get(), "phimod.j_max", std::to_string(*o.j));
  if (o.seed) set(s.get(), "run.seed", std::to_string(*o.seed));
  if (o.mutate) set(s.get(), "run.mutation", *o.mutate);
  for (const auto& [suite, on] : suites) set(s.get(), "suites." + suite, on);
  for (const auto& kv : o.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ApiError{PD_ERR_INVALID_ARGUMENT, "--set expects section.key=value, got '" + kv + "'"};
    set(s.get(), kv.substr(0, eq), kv.substr(eq + 1));
  }
  ok(pd_scenario_validate(s.get()), "config");
  return s;
}

int emit(const pd_report* r, const Options& o) {
  const pd_format fmt = o.format == "json" ? PD_FORMAT_JSON : PD_FORMAT_TEXT;
  const int timing = o.no_timing ? 0 : 1;
  if (!o.out.empty()) {
    ok(pd_report_write(r, fmt, timing, o.out.c_str()), "--out");
  } else {
    char* text = nullptr;
    ok(pd_report_to_string(r, fmt, timing, &text), "report");
    std::cout << take(text);
  }
  size_t failed = 0, passed = 0, skipped = 0;
  ok(pd_report_count(r, PD_CHECK_FAIL, &failed), "report");
  ok(pd_report_count(r, PD_CHECK_PASS, &passed), "report");
  ok(pd_report_count(r, PD_CHECK_SKIPPED, &skipped), "report");
  std::cerr << passed << " passed, " << failed << " failed, " << skipped << " skipped\n";
  return pd_report_passed(r) ? 0 : kChecksFailed;
}

int run(const Options& o, const std::vector<std::pair<std::string, std::string>>& suites) {
  ScenarioPtr s = make_scenario(o, suites);
  char* seed = nullptr;
  ok(pd_scenario_get(s.get(), "run.seed", &seed), "run.seed");
  std::cerr << "seed: " << take(seed) << "\n";
  pd_report* raw = nullptr;
  ok(pd_run_scenario(s.get(), &raw), "run");
  ReportPtr r(raw);
  return emit(r.get(), o);
}

std::vector<std::pair<std::string, std::string>> only(std::initializer_list<const char*> on) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const char* s : {"axioms", "integral", "deformation", "tree", "reduction", "phimod", "approximation"}) {
    bool sel = false;
    for (const char* t : on) sel = sel || std::string(s) == t;
    out.push_back({s, sel ? "true" : "false"});
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-level checks for p-adic diagrams, tree homology and phi-modules"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(pd_version()));

  Options o;
  std::function<int()> action;

  auto* diagram = app.add_subcommand("diagram", "build, check or deform a principal-series diagram");
  diagram->require_subcommand(1);
  auto* d_build = diagram->add_subcommand("build", "build the diagram and print its shape");
  auto* d_check = diagram->add_subcommand("check", "check the diagram axioms");
  auto* d_deform = diagram->add_subcommand("deform", "deformation isomorphisms and congruences");
  d_deform->add_option("--x", o.x, "comma separated deformation parameters (default 1 + p^(a+j))");
  for (auto* c : {d_build, d_check, d_deform}) add_common(c, o);
  d_build->callback([&] { action = [&] { return run(o, only({})); }; });
  d_check->callback([&] { action = [&] { return run(o, only({"axioms"})); }; });
  d_deform->callback([&] { action = [&] { return run(o, only({"integral", "deformation"})); }; });

  auto* tree = app.add_subcommand("tree", "chains on the Bruhat-Tits tree");
  tree->require_subcommand(1);
  auto* t_hom = tree->add_subcommand("homology", "boundary checks, H_1 and reduction compatibility");
  add_common(t_hom, o);
  t_hom->callback([&] { action = [&] { return run(o, only({"integral", "tree", "reduction"})); }; });

  auto* phimod = app.add_subcommand("phimod", "filtered phi-modules");
  phimod->require_subcommand(1);
  auto* p_an = phimod->add_subcommand("analyze", "polygons, admissibility, semisimplicity, reduction type");
  auto* p_ap = phimod->add_subcommand("approximate", "approximation sequence a_p(j)");
  p_ap->add_option("--a", o.a, "starting exponent a");
  p_ap->add_option("--j", o.j, "last index j");
  for (auto* c : {p_an, p_ap}) add_common(c, o);
  p_an->callback([&] { action = [&] { return run(o, only({"phimod"})); }; });
  p_ap->callback([&] { action = [&] { return run(o, only({"approximation"})); }; });

  auto* verify = app.add_subcommand("verify", "run a verification grid");
  verify->require_subcommand(1);
  auto* v_quick = verify->add_subcommand("quick", "p = 3, c = 1, R <= 1");
  auto* v_full = verify->add_subcommand("full", "p = 3, c <= 2, R <= 3, k <= 7");
  for (auto* c : {v_quick, v_full}) {
    c->add_option("--seed", o.seed, "seed for randomized checks (default " + std::to_string(kDefaultSeed) + ")");
    c->add_option("--mutate", o.mutate, "none | boundary-sign | pi-identity");
    c->add_option("--out", o.out, "write the report here instead of stdout");
    c->add_option("--format", o.format, "json | text")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
    c->add_flag("--no-timing", o.no_timing, "omit timings from the report");
    c->callback([&, c] {
      const pd_verify_level lv = c == v_quick ? PD_VERIFY_QUICK : PD_VERIFY_FULL;
      action = [&, lv] {
        const uint64_t seed = o.seed.value_or(kDefaultSeed);
        std::cerr << "seed: " << seed << "\n";
        pd_report* raw = nullptr;
        ok(pd_verify(lv, seed, o.mutate.value_or("none").c_str(), &raw), "verify");
        ReportPtr r(raw);
        double ms = 0;
        ok(pd_report_total_ms(r.get(), &ms), "verify");
        std::cerr << "verify took " << ms / 1000.0 << " s\n";
        return emit(r.get(), o);
      };
    });
  }

  auto* report = app.add_subcommand("report", "run every suite, or re-emit a saved JSON report");
  add_common(report, o);
  report->add_option("--input", o.input, "saved JSON report to convert");
  report->callback([&] {
    action = [&] {
      if (o.input.empty()) return run(o, only({"axioms", "integral", "deformation", "tree", "reduction", "phimod",
                                               "approximation"}));
      std::ifstream in(o.input);
      if (!in) throw ApiError{PD_ERR_IO, "cannot read '" + o.input + "'"};
      std::stringstream ss;
      ss << in.rdbuf();
      pd_report* raw = nullptr;
      ok(pd_report_from_json(ss.str().c_str(), &raw), o.input);
      ReportPtr r(raw);
      return emit(r.get(), o);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  try {
    return action ? action() : kUsage;
  } catch (const ApiError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.status == PD_ERR_IO ? kIo : kUsage;
  }
}
