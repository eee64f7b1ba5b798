#include "padicdiag/scenario.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <chrono>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <random>
#include <sstream>

#include "padicdiag/phimod.hpp"
#include "padicdiag/tree_homology.hpp"

namespace padicdiag {

namespace {

// ------------------------------------------------------------ value parsing

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* b = value.data();
  const char* e = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(b, e, out);
  if (ec != std::errc() || ptr != e || value.empty())
    throw InvalidArgument(key + ": expected an integer, got '" + value + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "yes" || value == "on" || value == "1") return true;
  if (value == "false" || value == "no" || value == "off" || value == "0") return false;
  throw InvalidArgument(key + ": expected true or false, got '" + value + "'");
}

mpq_class parse_rational(const std::string& key, const std::string& value) {
  mpq_class q;
  if (value.empty() || q.set_str(value, 10) != 0 || q.get_den() == 0)
    throw InvalidArgument(key + ": expected a rational number, got '" + value + "'");
  q.canonicalize();
  return q;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!trim(item).empty()) out.push_back(trim(item));
  return out;
}

int64_t vp_int(mpz_class n, uint64_t p) {
  if (n == 0) return kInfiniteOrd;
  int64_t v = 0;
  while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
    n /= static_cast<unsigned long>(p);
    ++v;
  }
  return v;
}

int64_t vp(const mpq_class& q, uint64_t p) {
  if (q == 0) return kInfiniteOrd;
  return vp_int(q.get_num(), p) - vp_int(q.get_den(), p);
}

std::string q_string(const mpq_class& q) { return q.get_str(); }

struct ThetaSpec {
  int conductor = 0;
  mpq_class value = 1;
};

ThetaSpec parse_theta(const std::string& key, const std::string& s) {
  if (s == "trivial") return {0, 1};
  if (s == "quadratic") return {1, -1};
  const auto colon = s.find(':');
  if (colon == std::string::npos)
    throw InvalidArgument(key + ": expected trivial, quadratic or <conductor>:<value>, got '" + s + "'");
  ThetaSpec t;
  t.conductor = parse_number<int>(key, trim(s.substr(0, colon)));
  t.value = parse_rational(key, trim(s.substr(colon + 1)));
  if (t.conductor < 0) throw InvalidArgument(key + ": conductor must be non-negative");
  return t;
}

// ---------------------------------------------------------------- key table

struct KeyInfo {
  std::function<std::string(const ScenarioConfig&)> get;
  std::function<void(ScenarioConfig&, const std::string&, const std::string&)> set;
};

template <typename T>
KeyInfo int_key(T ScenarioConfig::*m) {
  return {[m](const ScenarioConfig& c) { return std::to_string(c.*m); },
          [m](ScenarioConfig& c, const std::string& k, const std::string& v) { c.*m = parse_number<T>(k, v); }};
}

KeyInfo str_key(std::string ScenarioConfig::*m) {
  return {[m](const ScenarioConfig& c) { return c.*m; },
          [m](ScenarioConfig& c, const std::string&, const std::string& v) { c.*m = v; }};
}

const std::vector<std::pair<std::string, KeyInfo>>& key_table() {
  static const std::vector<std::pair<std::string, KeyInfo>> table = [] {
    std::vector<std::pair<std::string, KeyInfo>> t = {
        {"field.p", int_key(&ScenarioConfig::p)},
        {"field.extension", str_key(&ScenarioConfig::extension)},
        {"field.precision", int_key(&ScenarioConfig::precision)},
        {"representation.k", int_key(&ScenarioConfig::k)},
        {"representation.c", int_key(&ScenarioConfig::c)},
        {"representation.theta1", str_key(&ScenarioConfig::theta1)},
        {"representation.theta2", str_key(&ScenarioConfig::theta2)},
        {"representation.lambda", str_key(&ScenarioConfig::lambda)},
        {"representation.sign", int_key(&ScenarioConfig::sign)},
        {"representation.lambda1", str_key(&ScenarioConfig::lambda1)},
        {"representation.lambda2", str_key(&ScenarioConfig::lambda2)},
        {"deformation.x", str_key(&ScenarioConfig::x)},
        {"deformation.steps", int_key(&ScenarioConfig::steps)},
        {"tree.radius", int_key(&ScenarioConfig::radius)},
        {"tree.reduction_n", int_key(&ScenarioConfig::reduction_n)},
        {"tree.reduction_radius", int_key(&ScenarioConfig::reduction_radius)},
        {"phimod.a", int_key(&ScenarioConfig::approx_a)},
        {"phimod.j_max", int_key(&ScenarioConfig::approx_j)},
        {"run.seed", int_key(&ScenarioConfig::seed)},
        {"run.samples", int_key(&ScenarioConfig::samples)},
        {"run.mutation", str_key(&ScenarioConfig::mutation)},
        {"run.label", str_key(&ScenarioConfig::label)},
    };
    for (const char* s : {"axioms", "integral", "deformation", "tree", "reduction", "phimod", "approximation"}) {
      const std::string name = s;
      t.push_back({"suites." + name,
                   {[name](const ScenarioConfig& c) { return std::string(c.suites.at(name) ? "true" : "false"); },
                    [name](ScenarioConfig& c, const std::string& k, const std::string& v) {
                      c.suites[name] = parse_bool(k, v);
                    }}});
    }
    return t;
  }();
  return table;
}

const KeyInfo& find_key(const std::string& key) {
  for (const auto& [name, info] : key_table())
    if (name == key) return info;
  throw InvalidArgument("unknown configuration key '" + key + "'");
}

// line of "key" inside "[section]" for diagnostics, 0 if not found
int line_of(const std::string& text, const std::string& dotted) {
  const auto dot = dotted.find('.');
  const std::string section = dotted.substr(0, dot), key = dotted.substr(dot + 1);
  std::istringstream in(text);
  std::string current;
  int n = 0;
  for (std::string line; std::getline(in, line);) {
    ++n;
    const std::string t = trim(line);
    if (t.empty() || t[0] == ';' || t[0] == '#') continue;
    if (t.front() == '[') {
      current = trim(t.substr(1, t.find(']') - 1));
      continue;
    }
    if (current == section && trim(t.substr(0, t.find('='))) == key) return n;
  }
  return 0;
}

// ------------------------------------------------------------ field, lambdas

const FieldContext& field_for(const ScenarioConfig& cfg) {
  std::string poly = cfg.extension;
  if (poly == "auto") poly = cfg.lambda == "theorem" && cfg.k % 2 == 0 ? "x^2-" + std::to_string(cfg.p) : "trivial";
  const FieldContext& f0 = make_field(cfg.p, poly, cfg.precision);
  if (f0.e() == 1) return f0;
  return make_field(cfg.p, poly, cfg.precision * f0.e());
}

mpq_class random_unit(std::mt19937_64& rng, uint64_t p) {
  std::uniform_int_distribution<int64_t> dist(1, 60);
  auto draw = [&] {
    for (;;) {
      const int64_t v = dist(rng);
      if (v % static_cast<int64_t>(p) != 0) return v;
    }
  };
  mpq_class q(draw(), draw());
  q.canonicalize();
  return rng() % 2 == 0 ? q : mpq_class(-q);
}

struct Lambdas {
  FieldElement l1, l2;
  std::string l1_text, l2_text;
};

Lambdas make_lambdas(const ScenarioConfig& cfg, const FieldContext& ctx) {
  const FieldElement p = FieldElement::from_int(ctx, static_cast<int64_t>(cfg.p));
  if (cfg.lambda == "theorem") {
    const FieldElement lam = weight_lambda(ctx, cfg.k, cfg.sign);
    const std::string ex = (cfg.k - 1) % 2 == 0 ? std::to_string((cfg.k - 1) / 2) : std::to_string(cfg.k - 1) + "/2";
    const std::string s = std::string(cfg.sign < 0 ? "-" : "") + std::to_string(cfg.p) + "^" + ex;
    return {lam.inverse(), p * lam.inverse(), "1/(" + s + ")", std::to_string(cfg.p) + "/(" + s + ")"};
  }
  if (cfg.lambda == "explicit") {
    const mpq_class a = parse_rational("representation.lambda1", cfg.lambda1);
    const mpq_class b = parse_rational("representation.lambda2", cfg.lambda2);
    return {FieldElement::from_rational(ctx, a), FieldElement::from_rational(ctx, b), q_string(a), q_string(b)};
  }
  std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  const mpq_class u1 = random_unit(rng, cfg.p), u2 = random_unit(rng, cfg.p);
  mpq_class b = u2;
  if (cfg.lambda == "random-normalized") {
    // lambda2 = u2 p^{2-k} keeps the central character integral
    mpz_class pk;
    mpz_ui_pow_ui(pk.get_mpz_t(), cfg.p, static_cast<unsigned long>(cfg.k - 2));
    b = u2 / mpq_class(pk);
    b.canonicalize();
  }
  return {FieldElement::from_rational(ctx, u1), FieldElement::from_rational(ctx, b), q_string(u1), q_string(b)};
}

SmoothCharacter make_theta(const std::string& key, const std::string& s, const FieldContext& ctx) {
  const ThetaSpec t = parse_theta(key, s);
  if (t.conductor == 0) return SmoothCharacter::unramified(FieldElement::one(ctx));
  return SmoothCharacter::make(FieldElement::one(ctx), t.conductor, FieldElement::from_rational(ctx, t.value));
}

// ---------------------------------------------------------------- recording

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t).count();
}

class Recorder {
 public:
  Recorder(RunReport& rep, std::string scenario) : rep_(rep), scenario_(std::move(scenario)) {}

  CheckRecord& add(const std::string& suite, const std::string& name, CheckStatus st, std::string detail = {},
                   ordered_json params = ordered_json::object()) {
    CheckRecord r;
    r.suite = suite;
    r.name = suite + "." + name;
    r.scenario = scenario_;
    r.parameters = std::move(params);
    r.status = st;
    r.detail = std::move(detail);
    r.time_ms = ms_since(mark_);
    mark_ = Clock::now();
    rep_.checks.push_back(std::move(r));
    return rep_.checks.back();
  }
  CheckRecord& check(const std::string& suite, const std::string& name, bool ok, std::string detail = {},
                     ordered_json params = ordered_json::object()) {
    return add(suite, name, ok ? CheckStatus::Pass : CheckStatus::Fail, std::move(detail), std::move(params));
  }
  CheckRecord& skip(const std::string& suite, const std::string& name, std::string why) {
    return add(suite, name, CheckStatus::Skipped, std::move(why));
  }
  void restart() { mark_ = Clock::now(); }
  /// Runs body; an exception becomes a failed "<suite>.error" record.
  template <typename F>
  void guarded(const std::string& suite, F&& body) {
    restart();
    try {
      body();
    } catch (const Error& e) {
      auto& r = add(suite, "error", CheckStatus::Fail, e.what());
      r.witnesses["error_code"] = static_cast<int>(e.code());
    } catch (const std::exception& e) {
      auto& r = add(suite, "error", CheckStatus::Fail, e.what());
      r.witnesses["error_code"] = static_cast<int>(ErrorCode::Internal);
    }
  }

 private:
  RunReport& rep_;
  std::string scenario_;
  Clock::time_point mark_ = Clock::now();
};

std::string bracket(const std::string& name, const std::string& param) { return name + "[" + param + "]"; }

ordered_json valuation_json(const Valuation& v) {
  if (v.infinite) return "inf";
  return v.to_string();
}

}  // namespace

// ------------------------------------------------------------ ScenarioConfig

void ScenarioConfig::set(const std::string& key, const std::string& value) {
  find_key(key).set(*this, key, trim(value));
}

std::string ScenarioConfig::get(const std::string& key) const { return find_key(key).get(*this); }

std::vector<std::string> ScenarioConfig::keys() {
  std::vector<std::string> out;
  for (const auto& [name, info] : key_table()) out.push_back(name);
  return out;
}

void ScenarioConfig::validate() const {
  if (p == 2) throw InvalidArgument("field.p: p = 2 is not supported; the construction assumes p > 2");
  if (p < 2 || !is_prime(p)) throw InvalidArgument("field.p: " + std::to_string(p) + " is not an odd prime");
  if (precision < 1) throw InvalidArgument("field.precision must be positive");
  if (k < 2) throw InvalidArgument("representation.k must be at least 2");
  if (c < 1) throw InvalidArgument("representation.c must be at least 1");
  if (sign != 1 && sign != -1) throw InvalidArgument("representation.sign must be 1 or -1");
  for (const auto& [key, s] : {std::pair{"representation.theta1", theta1}, {"representation.theta2", theta2}}) {
    const ThetaSpec t = parse_theta(key, s);
    if (t.conductor > c)
      throw InvalidArgument(std::string(key) + ": conductor " + std::to_string(t.conductor) + " exceeds the level c = " +
                            std::to_string(c));
    if (t.conductor > 0 && vp(t.value, p) != 0)
      throw InvalidArgument(std::string(key) + ": the value at the generator must be a unit");
  }
  if (lambda != "theorem" && lambda != "explicit" && lambda != "random" && lambda != "random-normalized")
    throw InvalidArgument("representation.lambda: expected theorem, explicit, random or random-normalized, got '" +
                          lambda + "'");
  if (lambda == "explicit") {
    for (const auto& [key, s] : {std::pair{"representation.lambda1", lambda1}, {"representation.lambda2", lambda2}})
      if (parse_rational(key, s) == 0) throw InvalidArgument(std::string(key) + " must be nonzero");
  }
  if (radius < 0 || radius > 6) throw InvalidArgument("tree.radius must lie in [0, 6]");
  if (samples < 1) throw InvalidArgument("run.samples must be positive");
  if (steps < 1) throw InvalidArgument("deformation.steps must be positive");
  if (approx_a < 1) throw InvalidArgument("phimod.a must be positive");
  if (approx_j < 0) throw InvalidArgument("phimod.j_max must be non-negative");
  if (reduction_n < 1 || reduction_n > precision)
    throw InvalidArgument("tree.reduction_n must lie in [1, field.precision]");
  if (mutation != "none" && mutation != "boundary-sign" && mutation != "pi-identity")
    throw InvalidArgument("run.mutation: expected none, boundary-sign or pi-identity, got '" + mutation + "'");
  int64_t depth = steps;
  if (x != "auto") {
    const auto items = split_list(x);
    if (items.empty()) throw InvalidArgument("deformation.x: empty list");
    depth = 0;
    for (const auto& item : items) {
      const mpq_class q = parse_rational("deformation.x", item);
      if (q == 1) throw InvalidArgument("deformation.x: x = 1 is not a deformation");
      const int64_t v = vp(q - 1, p);
      if (v < 1) throw InvalidArgument("deformation.x: " + item + " is not congruent to 1 mod p");
      depth = std::max(depth, v);
    }
  }
  if (precision < c + 1 + depth)
    throw InvalidArgument("field.precision = " + std::to_string(precision) + " is below c + 1 + deformation depth = " +
                          std::to_string(c + 1 + depth));
  const FieldContext* ctx = nullptr;
  try {
    ctx = &field_for(*this);
  } catch (const Error& e) {
    throw InvalidArgument(std::string("field: ") + e.what());
  }
  if (lambda == "theorem" && (k - 1) * ctx->e() % 2 != 0)
    throw InvalidArgument("field.extension: p^((k-1)/2) does not lie in " + ctx->description() +
                          "; use extension = auto");
}

void ScenarioConfig::load_string(const std::string& text, const std::string& origin) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw InvalidArgument(origin + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw InvalidArgument(origin + ":" + std::to_string(line_of(text, section + "." + section)) + ": key '" +
                            section + "' outside a section");
    for (const auto& [key, leaf] : body) {
      const std::string dotted = section + "." + key;
      try {
        set(dotted, leaf.data());
      } catch (const InvalidArgument& e) {
        throw InvalidArgument(origin + ":" + std::to_string(line_of(text, dotted)) + ": " + e.what());
      }
    }
  }
}

void ScenarioConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  load_string(ss.str(), path);
}

std::vector<std::string> ScenarioConfig::presets() { return {"theorem", "theorem-minus", "pi-action"}; }

void ScenarioConfig::apply_preset(const std::string& name) {
  if (name == "theorem" || name == "theorem-minus") {
    p = 3;
    k = 3;
    c = 1;
    extension = "auto";
    precision = 30;
    theta1 = theta2 = "trivial";
    lambda = "theorem";
    sign = name == "theorem" ? 1 : -1;
    radius = 2;
    if (label.empty()) label = name;
    return;
  }
  if (name == "pi-action") {
    p = 3;
    k = 2;
    c = 1;
    extension = "trivial";
    theta1 = theta2 = "trivial";
    lambda = "explicit";
    lambda1 = "2";
    lambda2 = "5";
    if (label.empty()) label = name;
    return;
  }
  throw InvalidArgument("unknown preset '" + name + "' (theorem, theorem-minus, pi-action)");
}

ordered_json ScenarioConfig::to_json() const {
  ordered_json j = ordered_json::object();
  for (const auto& [name, info] : key_table()) {
    const auto dot = name.find('.');
    j[name.substr(0, dot)][name.substr(dot + 1)] = info.get(*this);
  }
  return j;
}

std::string ScenarioConfig::describe() const {
  if (!label.empty()) return label;
  std::string lam = lambda == "theorem" ? (sign < 0 ? "theorem-" : "theorem+") : lambda;
  return "p" + std::to_string(p) + ".c" + std::to_string(c) + ".k" + std::to_string(k) + "." + theta1 + "." + theta2 +
         "." + lam + ".R" + std::to_string(radius) + (mutation == "none" ? "" : "." + mutation);
}

// ----------------------------------------------------------------- RunReport

const char* status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Skipped: return "skipped";
  }
  return "fail";
}

CheckStatus status_from_name(const std::string& s) {
  if (s == "pass") return CheckStatus::Pass;
  if (s == "fail") return CheckStatus::Fail;
  if (s == "skipped") return CheckStatus::Skipped;
  throw InvalidArgument("unknown check status '" + s + "'");
}

bool RunReport::passed() const { return count(CheckStatus::Fail) == 0; }

size_t RunReport::count(CheckStatus s) const {
  size_t n = 0;
  for (const auto& c : checks) n += c.status == s ? 1 : 0;
  return n;
}

ordered_json RunReport::to_json(bool timing) const {
  ordered_json j;
  j["schema_version"] = schema_version;
  j["kind"] = kind;
  j["label"] = label;
  j["seed"] = seed;
  j["summary"] = {{"status", passed() ? "pass" : "fail"},
                  {"total", checks.size()},
                  {"passed", count(CheckStatus::Pass)},
                  {"failed", count(CheckStatus::Fail)},
                  {"skipped", count(CheckStatus::Skipped)}};
  if (timing) j["total_ms"] = total_ms;
  j["scenarios"] = scenarios;
  ordered_json arr = ordered_json::array();
  for (const auto& c : checks) {
    ordered_json r;
    r["name"] = c.name;
    r["suite"] = c.suite;
    r["scenario"] = c.scenario;
    r["parameters"] = c.parameters;
    r["status"] = status_name(c.status);
    r["detail"] = c.detail;
    r["witnesses"] = c.witnesses;
    if (timing) r["time_ms"] = c.time_ms;
    arr.push_back(std::move(r));
  }
  j["checks"] = std::move(arr);
  return j;
}

RunReport RunReport::from_json(const ordered_json& j) {
  try {
    RunReport r;
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != kReportSchemaVersion)
      throw InvalidArgument("unsupported report schema version " + std::to_string(r.schema_version));
    r.kind = j.at("kind").get<std::string>();
    r.label = j.at("label").get<std::string>();
    r.seed = j.at("seed").get<uint64_t>();
    r.total_ms = j.value("total_ms", 0.0);
    r.scenarios = j.at("scenarios");
    for (const auto& c : j.at("checks")) {
      CheckRecord rec;
      rec.name = c.at("name").get<std::string>();
      rec.suite = c.at("suite").get<std::string>();
      rec.scenario = c.at("scenario").get<std::string>();
      rec.parameters = c.at("parameters");
      rec.status = status_from_name(c.at("status").get<std::string>());
      rec.detail = c.at("detail").get<std::string>();
      rec.witnesses = c.at("witnesses");
      rec.time_ms = c.value("time_ms", 0.0);
      r.checks.push_back(std::move(rec));
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed report: ") + e.what());
  }
}

RunReport RunReport::parse(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("report is not valid JSON: ") + e.what());
  }
  return from_json(j);
}

std::string RunReport::to_text(bool timing) const {
  std::ostringstream out;
  out << "# padicdiag " << kind << " report (schema " << schema_version << ")";
  if (!label.empty()) out << " " << label;
  out << " seed=" << seed << "\n";
  for (const auto& c : checks) {
    std::string st = status_name(c.status);
    for (auto& ch : st) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    out << std::left << std::setw(5) << st << " " << c.name;
    if (!c.scenario.empty() && c.name.rfind(c.scenario + "/", 0) != 0) out << " (" << c.scenario << ")";
    for (const auto& [k, v] : c.parameters.items()) out << " " << k << "=" << (v.is_string() ? v.get<std::string>() : v.dump());
    for (const auto& [k, v] : c.witnesses.items()) out << " " << k << "=" << (v.is_string() ? v.get<std::string>() : v.dump());
    if (!c.detail.empty()) out << " : " << c.detail;
    if (timing) out << " [" << std::fixed << std::setprecision(1) << c.time_ms << " ms]";
    out << "\n";
  }
  out << "# " << checks.size() << " checks, " << count(CheckStatus::Pass) << " passed, " << count(CheckStatus::Fail)
      << " failed, " << count(CheckStatus::Skipped) << " skipped: " << (passed() ? "PASS" : "FAIL");
  if (timing) out << " in " << std::fixed << std::setprecision(2) << total_ms / 1000.0 << " s";
  out << "\n";
  return out.str();
}

void RunReport::write(const std::string& path, bool json, bool timing) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << (json ? to_json(timing).dump(2) + "\n" : to_text(timing));
  out.close();
  if (!out) throw IoError("failed writing '" + path + "'");
}

void RunReport::append(const RunReport& other) {
  for (const auto& s : other.scenarios) scenarios.push_back(s);
  for (auto c : other.checks) {
    c.name = c.scenario + "/" + c.name;
    checks.push_back(std::move(c));
  }
}

// ---------------------------------------------------------------- run_scenario

RunReport run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  const auto start = Clock::now();
  RunReport rep;
  rep.label = cfg.describe();
  rep.seed = cfg.seed;
  rep.scenarios.push_back(cfg.to_json());
  Recorder rec(rep, rep.label);
  const auto on = [&](const char* s) { return cfg.suites.at(s); };

  const FieldContext& ctx = field_for(cfg);
  const FieldElement one = FieldElement::one(ctx);
  const uint64_t p = cfg.p;
  const BoundaryOptions bopt{cfg.mutation == "boundary-sign"};

  std::optional<Diagram> d;
  Lambdas lam;
  rec.guarded("diagram", [&] {
    lam = make_lambdas(cfg, ctx);
    DiagramSpec spec{lam.l1, lam.l2, make_theta("representation.theta1", cfg.theta1, ctx),
                     make_theta("representation.theta2", cfg.theta2, ctx), cfg.c, cfg.k};
    Diagram built = Diagram::build_principal(spec);
    if (cfg.mutation == "pi-identity") built = built.with_pi(identity_matrix(ctx, built.dim1()));
    d = std::move(built);
    auto& r = rec.check("diagram", "build", true, "", {{"lambda1", lam.l1_text}, {"lambda2", lam.l2_text}});
    r.witnesses = {{"field", ctx.description()},
                   {"dim_d0", d->dim0()},
                   {"dim_d1", d->dim1()},
                   {"dim_v1", d->dim_v1()},
                   {"central_valuation", valuation_json(d->central().valuation())}};
  });

  if (d && on("axioms")) {
    rec.guarded("axioms", [&] {
      const AxiomReport ar = check_diagram_axioms(*d, std::max(cfg.samples / 4, 8), cfg.seed);
      for (const auto& c : ar.checks) {
        auto& r = rec.check("axioms", c.name, c.passed, c.detail);
        r.witnesses["samples"] = std::max(cfg.samples / 4, 8);
      }
    });
  }

  // integral structure
  std::optional<IntegralDiagram> id;
  const bool want_integral = on("integral") || on("deformation") || on("reduction") || on("tree");
  std::string no_integral;
  if (!d) {
    no_integral = "no diagram";
  } else if (!on("integral")) {
    no_integral = "integral suite not selected";
  } else if (!d->central().is_unit()) {
    no_integral = "central scalar has valuation " + d->central().valuation().to_string() +
                  "; no Pi-stable lattice exists";
    rec.skip("integral", "structure", no_integral);
  } else if (want_integral) {
    rec.guarded("integral", [&] {
      IntegralDiagram built = integral_structure(*d);
      const AxiomReport ar = check_integral(built);
      std::string failed;
      for (const auto& c : ar.checks)
        if (!c.passed) failed += (failed.empty() ? "" : ", ") + c.name;
      auto& r = rec.check("integral", "structure", ar.all_passed(), failed.empty() ? "" : "unstable: " + failed);
      r.witnesses = {{"iterations", built.iterations}, {"deformation_bound", built.a}};
      id = std::move(built);
    });
    if (!id) no_integral = "integral structure unavailable";
  }

  if (d && on("deformation")) {
    rec.guarded("deformation", [&] {
      std::vector<std::pair<std::string, FieldElement>> xs;
      if (cfg.x == "auto") {
        const int a = id ? id->a : 1;
        for (int j = 0; j < cfg.steps; ++j) {
          mpz_class pw;
          mpz_ui_pow_ui(pw.get_mpz_t(), p, static_cast<unsigned long>(a + j));
          const mpq_class q = mpq_class(pw) + 1;
          xs.push_back({q_string(q), FieldElement::from_rational(ctx, q)});
        }
      } else {
        for (const auto& item : split_list(cfg.x)) {
          const mpq_class q = parse_rational("deformation.x", item);
          xs.push_back({q_string(q), FieldElement::from_rational(ctx, q)});
        }
      }
      for (const auto& [text, x] : xs) {
        rec.restart();
        const AxiomReport ar = verify_deformation_isomorphism(*d, x);
        std::string failed;
        for (const auto& c : ar.checks)
          if (!c.passed) failed += (failed.empty() ? "" : ", ") + c.name;
        rec.check("deformation", bracket("isomorphism", "x=" + text), ar.all_passed(),
                  failed.empty() ? "" : "fails: " + failed, {{"x", text}});
        if (!id) {
          auto& r = rec.skip("deformation", bracket("compare_mod", "x=" + text), no_integral);
          r.parameters = {{"x", text}};
          continue;
        }
        rec.restart();
        const int64_t v = (x - one).ord();
        const IntegralDiagram dx = deform_integral(*id, x);
        int64_t bad = -1;
        for (int64_t b = 0; b <= v && bad < 0; ++b)
          if (!compare_mod(dx, *id, static_cast<int>(b))) bad = b;
        auto& r = rec.check("deformation", bracket("compare_mod", "x=" + text), bad < 0,
                            bad < 0 ? "" : "congruence fails at b = " + std::to_string(bad),
                            {{"x", text}, {"b_max", v}});
        r.witnesses["holds_at_b_max_plus_1"] = compare_mod(dx, *id, static_cast<int>(v + 1));
      }
    });
  }

  if (d && on("tree")) {
    std::optional<TreeBall> ball;
    rec.guarded("tree", [&] {
      ball = enumerate_ball(p, cfg.radius);
      const bool degenerate = ball->n_edges() == 0;
      auto& r = rec.check("tree", "ball", true, degenerate ? "degenerate: no edges at radius 0" : "",
                          {{"radius", cfg.radius}});
      r.witnesses = {{"vertices", ball->n_vertices()}, {"edges", ball->n_edges()}};
    });
    if (ball && ball->n_edges() == 0) {
      rec.skip("tree", "boundary_welldefined", "degenerate ball");
      rec.skip("tree", "boundary_equivariant", "degenerate ball");
      rec.skip("tree", "h1_rational", "degenerate ball: no edges, H_1 = 0 trivially");
    } else if (ball) {
      rec.guarded("tree", [&] {
        const AxiomReport ar = check_boundary_welldefined(*d, *ball, cfg.samples, cfg.seed, bopt);
        for (const auto& c : ar.checks) {
          auto& r = rec.check("tree", c.name, c.passed, c.detail, {{"radius", cfg.radius}});
          r.witnesses["requested_samples"] = cfg.samples;
        }
      });
      rec.guarded("tree", [&] {
        const HomologyReport h = homology_report(*d, *ball, bopt);
        auto& r = rec.check("tree", "h1_rational", h.ker_dim == 0,
                            h.ker_dim == 0 ? "" : "kernel of the boundary has dimension " + std::to_string(h.ker_dim),
                            {{"radius", cfg.radius}});
        r.witnesses = {{"rows", h.rows}, {"cols", h.cols}, {"rank", h.rank}, {"ker_dim", h.ker_dim}};
      });
      if (id) {
        rec.guarded("tree", [&] {
          const HomologyReport h = homology_report(*id, *ball, bopt);
          auto& r = rec.check("tree", "h1_integral", h.ker_dim == 0,
                              h.ker_dim == 0 ? "" : "integral kernel of rank " + std::to_string(h.ker_dim),
                              {{"radius", cfg.radius}});
          int64_t top = 0;
          for (auto v : h.coker_invariants) top = std::max(top, v);
          r.witnesses = {{"rank", h.rank},
                         {"torsion_invariants", h.coker_invariants.size()},
                         {"max_torsion_exponent", top},
                         {"coker_free_rank", h.coker_free_rank}};
        });
      } else {
        rec.skip("tree", "h1_integral", no_integral);
      }
      if (on("reduction")) {
        if (!id) {
          rec.skip("reduction", "compat", no_integral);
        } else if (cfg.radius > cfg.reduction_radius) {
          rec.skip("reduction", "compat", "radius above tree.reduction_radius");
        } else {
          rec.guarded("reduction", [&] {
            std::vector<int> ns;
            for (int n = 1; n <= cfg.reduction_n; ++n) ns.push_back(n);
            const std::vector<bool> ok = reduction_compat(*id, *ball, ns);
            for (size_t i = 0; i < ns.size(); ++i)
              rec.check("reduction", bracket("compat", "n=" + std::to_string(ns[i])), ok[i],
                        ok[i] ? "" : "Smith invariants differ after reduction", {{"n", ns[i]}, {"radius", cfg.radius}});
          });
        }
      }
    }
  }

  const Valuation half = Valuation::of(cfg.k - 1, 2);
  if (d && on("phimod")) {
    rec.guarded("phimod", [&] {
      const FieldElement pe = FieldElement::from_int(ctx, static_cast<int64_t>(p));
      const FieldElement a_p = lam.l1.inverse() + pe * lam.l2.inverse();
      const bool in_ideal = a_p.is_zero() ? a_p.abs_precision() >= 1 : a_p.ord() >= 1;
      if (!in_ideal) {
        rec.skip("phimod", "module", "a_p = lambda1^-1 + p lambda2^-1 has valuation " +
                                         a_p.valuation().to_string() + ", not in the maximal ideal");
        return;
      }
      const PhiModule m = make_phimod(cfg.k, a_p);
      const FieldElement det = m.phi(0, 0) * m.phi(1, 1) - m.phi(0, 1) * m.phi(1, 0);
      const FieldElement tr = m.phi(0, 0) + m.phi(1, 1);
      const Valuation va = a_p.is_zero() ? Valuation::infinity() : a_p.valuation();
      {
        auto& r = rec.check("phimod", "det_trace", det == pe.pow(cfg.k - 1) && tr == a_p);
        r.witnesses = {{"val_a_p", valuation_json(va)}, {"val_det", valuation_json(det.valuation())}};
      }
      const Polygons pg = polygons(m);
      {
        const Valuation expect = va < half ? va : half;
        auto& r = rec.check("phimod", "newton_min_slope", pg.newton.front() == expect,
                            pg.newton.front() == expect ? "" : "min slope " + pg.newton.front().to_string());
        r.witnesses = {{"slopes", {valuation_json(pg.newton[0]), valuation_json(pg.newton[1])}}};
      }
      rec.check("phimod", "weakly_admissible", weak_admissibility(m));
      {
        const FieldElement disc = a_p * a_p - pe.pow(cfg.k - 1) * FieldElement::from_int(ctx, 4);
        const bool ss = frobenius_semisimple(m);
        // phi is never scalar, so a repeated eigenvalue means a nontrivial Jordan block
        const bool expect = !disc.is_zero();
        auto& r = rec.check("phimod", "semisimplicity", ss == expect);
        r.witnesses = {{"semisimple", ss}, {"a_p_squared_is_4p^(k-1)", disc.is_zero()}};
      }
      const int mth = blz_threshold(p, cfg.k);
      if (Valuation::of(mth, 1) < va) {
        const ReductionType t = blz_reduction_type(p, cfg.k, va);
        auto& r = rec.check("phimod", "reduction_type", true);
        r.witnesses = {{"m", mth}, {"type", t.to_string()}};
      } else {
        rec.skip("phimod", "reduction_type", "val(a_p) <= m = " + std::to_string(mth));
      }
    });
  }

  if (d && on("approximation")) {
    if (cfg.lambda != "theorem") {
      rec.skip("approximation", "sequence", "needs lambda = +-p^((k-1)/2)");
    } else {
      rec.guarded("approximation", [&] {
        const FieldElement pi = FieldElement::uniformizer(ctx);
        std::vector<FieldElement> xs;
        for (int j = 0; j <= cfg.approx_j; ++j) xs.push_back(one + pi.pow(static_cast<int64_t>(ctx.e()) * (cfg.approx_a + j)));
        const auto steps = approximation_sequence(ctx, cfg.k, cfg.sign, cfg.approx_a, xs);
        for (const auto& s : steps) {
          std::string why;
          if (!s.congruence_ok) why = "congruence too weak";
          if (!s.valuation_ok) why += std::string(why.empty() ? "" : ", ") + "val a_p(j) != (k-1)/2";
          if (!s.x_nontrivial) why += std::string(why.empty() ? "" : ", ") + "x_j^2 = 1";
          auto& r = rec.check("approximation", bracket("step", "j=" + std::to_string(s.j)), s.ok(), why,
                              {{"a", cfg.approx_a}, {"j", s.j}});
          r.witnesses = {{"measured", s.measured}, {"bound", s.bound}};
        }
      });
    }
  }

  rep.total_ms = ms_since(start);
  return rep;
}

// -------------------------------------------------------------------- verify

std::vector<ScenarioConfig> verify_grid(VerifyLevel level, uint64_t seed, const std::string& mutation) {
  std::vector<ScenarioConfig> out;
  auto base = [&](int c, int k, const std::string& theta, const std::string& lam, int sign, int radius) {
    ScenarioConfig s;
    s.p = 3;
    s.c = c;
    s.k = k;
    s.theta1 = theta;
    s.lambda = lam;
    s.sign = sign;
    s.radius = radius;
    s.seed = seed;
    s.mutation = mutation;
    return s;
  };
  const std::vector<std::tuple<std::string, int>> lambdas = {
      {"theorem", 1}, {"theorem", -1}, {"random-normalized", 1}, {"random", 1}};
  if (level == VerifyLevel::Quick) {
    for (int k = 2; k <= 5; ++k)
      for (const char* theta : {"trivial", "quadratic"})
        for (const auto& [lam, sign] : lambdas) out.push_back(base(1, k, theta, lam, sign, 1));
    ScenarioConfig flat = base(1, 3, "trivial", "theorem", 1, 0);
    out.push_back(flat);
    return out;
  }
  for (int c = 1; c <= 2; ++c)
    for (int k = 2; k <= 7; ++k) {
      for (const char* theta : {"trivial", "quadratic"})
        for (const auto& [lam, sign] : lambdas) {
          ScenarioConfig s = base(c, k, theta, lam, sign, 2);
          if (c == 2 && k >= 5) s.precision = 37;
          // even 37 digits of Z_3 leave the lattice iteration undecidable at c = 2, k = 7
          if (c == 2 && k == 7) s.suites["integral"] = false;
          out.push_back(s);
        }
      // R = 3: rational homology everywhere, integral homology at c = 1 (the c = 2 Smith forms take minutes)
      ScenarioConfig wide = base(c, k, "trivial", "theorem", 1, 3);
      wide.suites = {{"axioms", false}, {"integral", c == 1}, {"deformation", false}, {"tree", true},
                     {"reduction", false}, {"phimod", false}, {"approximation", false}};
      out.push_back(wide);
    }
  return out;
}

RunReport verify_suite(VerifyLevel level, uint64_t seed, const std::string& mutation) {
  const auto start = Clock::now();
  RunReport rep;
  rep.kind = "verify";
  rep.label = level == VerifyLevel::Quick ? "quick" : "full";
  rep.seed = seed;
  for (const auto& cfg : verify_grid(level, seed, mutation)) rep.append(run_scenario(cfg));
  rep.total_ms = ms_since(start);
  return rep;
}

}  // namespace padicdiag
