#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "padicdiag/padicdiag.h"

namespace {

std::string take(char* s) {
  std::string out = s == nullptr ? "" : s;
  pd_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("status codes and null handling") {
  CHECK(std::string(pd_version()).size() > 0);
  CHECK(pd_scenario_new(nullptr) == PD_ERR_NULL_ARGUMENT);
  CHECK(std::string(pd_last_error()).find("null") != std::string::npos);
  CHECK(pd_report_passed(nullptr) == 0);
  CHECK(pd_report_check_count(nullptr) == 0);
  CHECK(pd_run_scenario(nullptr, nullptr) == PD_ERR_NULL_ARGUMENT);
  CHECK(std::string(pd_status_name(PD_ERR_PRECISION)) == "precision");
  pd_scenario_free(nullptr);
  pd_report_free(nullptr);
}

TEST_CASE("scenario configuration through the C API") {
  pd_scenario* s = nullptr;
  REQUIRE(pd_scenario_new(&s) == PD_OK);
  CHECK(pd_scenario_apply_preset(s, "theorem") == PD_OK);
  char* v = nullptr;
  REQUIRE(pd_scenario_get(s, "representation.k", &v) == PD_OK);
  CHECK(take(v) == "3");
  CHECK(pd_scenario_set(s, "field.nope", "1") == PD_ERR_INVALID_ARGUMENT);
  CHECK(std::string(pd_last_error()).find("field.nope") != std::string::npos);
  CHECK(pd_scenario_set(s, "field.p", "2") == PD_OK);
  CHECK(pd_scenario_validate(s) == PD_ERR_INVALID_ARGUMENT);
  CHECK(std::string(pd_last_error()).find("p > 2") != std::string::npos);
  pd_report* r = nullptr;
  CHECK(pd_run_scenario(s, &r) == PD_ERR_INVALID_ARGUMENT);
  CHECK(r == nullptr);
  CHECK(pd_scenario_load_string(s, "[field]\np = 3\n[tree]\nradius = 1\n") == PD_OK);
  CHECK(pd_scenario_validate(s) == PD_OK);
  CHECK(pd_scenario_load_string(s, "[tree]\nradius = x\n") == PD_ERR_INVALID_ARGUMENT);
  CHECK(std::string(pd_last_error()).find(":2:") != std::string::npos);
  CHECK(pd_scenario_load_file(s, "/nonexistent/file.ini") == PD_ERR_IO);
  char* keys = nullptr;
  REQUIRE(pd_scenario_keys(&keys) == PD_OK);
  CHECK(take(keys).find("tree.radius\n") != std::string::npos);
  char* presets = nullptr;
  REQUIRE(pd_scenario_presets(&presets) == PD_OK);
  CHECK(take(presets).find("theorem\n") == 0);
  pd_scenario_free(s);
}

TEST_CASE("run, serialize and reload a report") {
  pd_scenario* s = nullptr;
  REQUIRE(pd_scenario_new(&s) == PD_OK);
  REQUIRE(pd_scenario_apply_preset(s, "theorem") == PD_OK);
  pd_report* r = nullptr;
  REQUIRE(pd_run_scenario(s, &r) == PD_OK);
  CHECK(pd_report_passed(r) == 1);
  const size_t n = pd_report_check_count(r);
  CHECK(n > 20);
  size_t passed = 0, failed = 1;
  CHECK(pd_report_count(r, PD_CHECK_PASS, &passed) == PD_OK);
  CHECK(pd_report_count(r, PD_CHECK_FAIL, &failed) == PD_OK);
  CHECK(passed == n);
  CHECK(failed == 0);
  char* name = nullptr;
  REQUIRE(pd_report_check_name(r, 0, &name) == PD_OK);
  CHECK(take(name) == "diagram.build");
  pd_check_status st = PD_CHECK_FAIL;
  CHECK(pd_report_check_status(r, 0, &st) == PD_OK);
  CHECK(st == PD_CHECK_PASS);
  CHECK(pd_report_check_name(r, n, &name) == PD_ERR_INVALID_ARGUMENT);

  char* json = nullptr;
  REQUIRE(pd_report_to_string(r, PD_FORMAT_JSON, 1, &json) == PD_OK);
  const std::string text = take(json);
  pd_report* back = nullptr;
  REQUIRE(pd_report_from_json(text.c_str(), &back) == PD_OK);
  CHECK(pd_report_equal(r, back) == 1);
  CHECK(pd_report_from_json("[1, 2", &back) == PD_ERR_INVALID_ARGUMENT);
  pd_report_free(back);

  char* plain = nullptr;
  REQUIRE(pd_report_to_string(r, PD_FORMAT_TEXT, 0, &plain) == PD_OK);
  const std::string t = take(plain);
  size_t lines = 0;
  for (char ch : t) lines += ch == '\n' ? 1 : 0;
  CHECK(lines == n + 2);

  const std::string path = "capi_report.json";
  REQUIRE(pd_report_write(r, PD_FORMAT_JSON, 0, path.c_str()) == PD_OK);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str().find("\"time_ms\"") == std::string::npos);
  std::remove(path.c_str());
  CHECK(pd_report_write(r, PD_FORMAT_JSON, 0, "/nonexistent/dir/r.json") == PD_ERR_IO);
  CHECK(std::string(pd_last_error()).find("/nonexistent/dir/r.json") != std::string::npos);

  pd_report_free(r);
  pd_scenario_free(s);
}

TEST_CASE("mutated scenarios fail their checks, not the call") {
  pd_scenario* s = nullptr;
  REQUIRE(pd_scenario_new(&s) == PD_OK);
  REQUIRE(pd_scenario_apply_preset(s, "theorem") == PD_OK);
  REQUIRE(pd_scenario_set(s, "run.mutation", "boundary-sign") == PD_OK);
  pd_report* r = nullptr;
  REQUIRE(pd_run_scenario(s, &r) == PD_OK);
  CHECK(pd_report_passed(r) == 0);
  pd_report_free(r);
  pd_scenario_free(s);
}
