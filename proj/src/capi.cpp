#include "padicdiag/padicdiag.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "padicdiag/errors.hpp"
#include "padicdiag/scenario.hpp"

struct pd_scenario {
  padicdiag::ScenarioConfig config;
};

struct pd_report {
  padicdiag::RunReport report;
};

namespace {

thread_local std::string g_last_error;

pd_status fail(pd_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

template <typename F>
pd_status guard(F&& body) {
  try {
    g_last_error.clear();
    body();
    return PD_OK;
  } catch (const padicdiag::Error& e) {
    return fail(static_cast<pd_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(PD_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(PD_ERR_INTERNAL, e.what());
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

#define PD_REQUIRE(ptr) \
  if ((ptr) == nullptr) return fail(PD_ERR_NULL_ARGUMENT, #ptr " is null")

std::string joined(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += x + "\n";
  return s;
}

}  // namespace

extern "C" {

const char* pd_version(void) { return "0.1.0"; }

const char* pd_last_error(void) { return g_last_error.c_str(); }

const char* pd_status_name(pd_status s) {
  switch (s) {
    case PD_OK: return "ok";
    case PD_ERR_INVALID_ARGUMENT: return "invalid argument";
    case PD_ERR_PRECISION: return "precision";
    case PD_ERR_DIVISION_BY_ZERO: return "division by zero";
    case PD_ERR_DOMAIN: return "domain";
    case PD_ERR_IO: return "io";
    case PD_ERR_INTERNAL: return "internal";
    case PD_ERR_NULL_ARGUMENT: return "null argument";
  }
  return "unknown";
}

void pd_string_free(char* s) { std::free(s); }

pd_status pd_scenario_new(pd_scenario** out) {
  PD_REQUIRE(out);
  *out = nullptr;
  return guard([&] { *out = new pd_scenario(); });
}

void pd_scenario_free(pd_scenario* s) { delete s; }

pd_status pd_scenario_load_file(pd_scenario* s, const char* path) {
  PD_REQUIRE(s);
  PD_REQUIRE(path);
  return guard([&] { s->config.load_file(path); });
}

pd_status pd_scenario_load_string(pd_scenario* s, const char* text) {
  PD_REQUIRE(s);
  PD_REQUIRE(text);
  return guard([&] { s->config.load_string(text); });
}

pd_status pd_scenario_set(pd_scenario* s, const char* key, const char* value) {
  PD_REQUIRE(s);
  PD_REQUIRE(key);
  PD_REQUIRE(value);
  return guard([&] { s->config.set(key, value); });
}

pd_status pd_scenario_get(const pd_scenario* s, const char* key, char** out) {
  PD_REQUIRE(s);
  PD_REQUIRE(key);
  PD_REQUIRE(out);
  return guard([&] { *out = dup(s->config.get(key)); });
}

pd_status pd_scenario_apply_preset(pd_scenario* s, const char* name) {
  PD_REQUIRE(s);
  PD_REQUIRE(name);
  return guard([&] { s->config.apply_preset(name); });
}

pd_status pd_scenario_validate(const pd_scenario* s) {
  PD_REQUIRE(s);
  return guard([&] { s->config.validate(); });
}

pd_status pd_scenario_keys(char** out) {
  PD_REQUIRE(out);
  return guard([&] { *out = dup(joined(padicdiag::ScenarioConfig::keys())); });
}

pd_status pd_scenario_presets(char** out) {
  PD_REQUIRE(out);
  return guard([&] { *out = dup(joined(padicdiag::ScenarioConfig::presets())); });
}

pd_status pd_run_scenario(const pd_scenario* s, pd_report** out) {
  PD_REQUIRE(s);
  PD_REQUIRE(out);
  *out = nullptr;
  return guard([&] { *out = new pd_report{padicdiag::run_scenario(s->config)}; });
}

pd_status pd_verify(pd_verify_level level, uint64_t seed, const char* mutation, pd_report** out) {
  PD_REQUIRE(out);
  *out = nullptr;
  if (level != PD_VERIFY_QUICK && level != PD_VERIFY_FULL) return fail(PD_ERR_INVALID_ARGUMENT, "unknown verify level");
  return guard([&] {
    const auto lv = level == PD_VERIFY_QUICK ? padicdiag::VerifyLevel::Quick : padicdiag::VerifyLevel::Full;
    *out = new pd_report{padicdiag::verify_suite(lv, seed, mutation == nullptr ? "none" : mutation)};
  });
}

void pd_report_free(pd_report* r) { delete r; }

int pd_report_passed(const pd_report* r) { return r != nullptr && r->report.passed() ? 1 : 0; }

size_t pd_report_check_count(const pd_report* r) { return r == nullptr ? 0 : r->report.checks.size(); }

pd_status pd_report_count(const pd_report* r, pd_check_status status, size_t* out) {
  PD_REQUIRE(r);
  PD_REQUIRE(out);
  switch (status) {
    case PD_CHECK_PASS: *out = r->report.count(padicdiag::CheckStatus::Pass); break;
    case PD_CHECK_FAIL: *out = r->report.count(padicdiag::CheckStatus::Fail); break;
    case PD_CHECK_SKIPPED: *out = r->report.count(padicdiag::CheckStatus::Skipped); break;
    default: return fail(PD_ERR_INVALID_ARGUMENT, "unknown check status");
  }
  return PD_OK;
}

pd_status pd_report_check_name(const pd_report* r, size_t index, char** out) {
  PD_REQUIRE(r);
  PD_REQUIRE(out);
  if (index >= r->report.checks.size()) return fail(PD_ERR_INVALID_ARGUMENT, "check index out of range");
  return guard([&] { *out = dup(r->report.checks[index].name); });
}

pd_status pd_report_check_status(const pd_report* r, size_t index, pd_check_status* out) {
  PD_REQUIRE(r);
  PD_REQUIRE(out);
  if (index >= r->report.checks.size()) return fail(PD_ERR_INVALID_ARGUMENT, "check index out of range");
  switch (r->report.checks[index].status) {
    case padicdiag::CheckStatus::Pass: *out = PD_CHECK_PASS; break;
    case padicdiag::CheckStatus::Fail: *out = PD_CHECK_FAIL; break;
    case padicdiag::CheckStatus::Skipped: *out = PD_CHECK_SKIPPED; break;
  }
  return PD_OK;
}

pd_status pd_report_total_ms(const pd_report* r, double* out) {
  PD_REQUIRE(r);
  PD_REQUIRE(out);
  *out = r->report.total_ms;
  return PD_OK;
}

pd_status pd_report_to_string(const pd_report* r, pd_format format, int include_timing, char** out) {
  PD_REQUIRE(r);
  PD_REQUIRE(out);
  return guard([&] {
    *out = dup(format == PD_FORMAT_JSON ? r->report.to_json(include_timing != 0).dump(2) + "\n"
                                        : r->report.to_text(include_timing != 0));
  });
}

pd_status pd_report_write(const pd_report* r, pd_format format, int include_timing, const char* path) {
  PD_REQUIRE(r);
  PD_REQUIRE(path);
  return guard([&] { r->report.write(path, format == PD_FORMAT_JSON, include_timing != 0); });
}

pd_status pd_report_from_json(const char* text, pd_report** out) {
  PD_REQUIRE(text);
  PD_REQUIRE(out);
  *out = nullptr;
  return guard([&] { *out = new pd_report{padicdiag::RunReport::parse(text)}; });
}

int pd_report_equal(const pd_report* a, const pd_report* b) {
  if (a == nullptr || b == nullptr) return a == b ? 1 : 0;
  return a->report == b->report ? 1 : 0;
}

}  // extern "C"
