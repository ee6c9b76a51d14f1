// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <string>

#include "duoplanck/duoplanck.h"

namespace fs = std::filesystem;

namespace {

const char* kKernel = R"({"mode": "check-kernel", "model": {"G": 1, "hbar": 1, "k": [1, 2]}})";

} // namespace

TEST_CASE("c api: version and null handling") {
  CHECK(std::strlen(dp_version()) > 0);
  dp_config_free(nullptr);
  dp_result_free(nullptr);
  dp_string_free(nullptr);
  CHECK(dp_config_parse(nullptr, nullptr) == DP_ERR_USAGE);
  CHECK(std::strlen(dp_last_error()) > 0);
}

TEST_CASE("c api: config errors") {
  dp_config* cfg = nullptr;
  CHECK(dp_config_parse("{\"mode\": \"hybrid\"}", &cfg) == DP_ERR_CONFIG);
  CHECK(cfg == nullptr);
  CHECK(std::string(dp_last_error()).find("missing required field") != std::string::npos);
  CHECK(dp_config_load("/nonexistent/config.json", &cfg) == DP_ERR_CONFIG);
}

TEST_CASE("c api: parse, serialize, run") {
  dp_config* cfg = nullptr;
  REQUIRE(dp_config_parse(kKernel, &cfg) == DP_OK);
  CHECK(std::string(dp_config_mode(cfg)) == "check-kernel");
  CHECK(dp_config_set_seed(cfg, 3) == DP_OK);
  char* text = nullptr;
  REQUIRE(dp_config_serialize(cfg, &text) == DP_OK);
  CHECK(std::string(text).find("\"seed\": 3") != std::string::npos);
  dp_string_free(text);

  const fs::path dir = fs::temp_directory_path() / "duoplanck_capi";
  fs::remove_all(dir);
  dp_result* res = nullptr;
  REQUIRE(dp_run(cfg, dir.string().c_str(), &res) == DP_OK);
  CHECK(std::string(dp_result_mode(res)) == "check-kernel");
  CHECK(dp_result_wall_time(res) >= 0.0);
  CHECK(std::string(dp_result_summary(res)).find("max_rel_error") != std::string::npos);
  CHECK(fs::exists(dir / "summary.json"));
  dp_result_free(res);
  dp_config_free(cfg);
  fs::remove_all(dir);
}

TEST_CASE("c api: fixture run") {
  dp_config* cfg = nullptr;
  const std::string path = std::string(DUOPLANCK_FIXTURES) + "/gravity.json";
  REQUIRE(dp_config_load(path.c_str(), &cfg) == DP_OK);
  const fs::path dir = fs::temp_directory_path() / "duoplanck_capi_gravity";
  fs::remove_all(dir);
  dp_result* res = nullptr;
  REQUIRE(dp_run(cfg, dir.string().c_str(), &res) == DP_OK);
  CHECK(dp_result_steps(res) == 12000);
  CHECK(dp_result_final_trace(res) == doctest::Approx(1.0));
  CHECK(dp_result_final_min_eig(res) >= 0.0);
  dp_result_free(res);
  dp_config_free(cfg);
  fs::remove_all(dir);
}

TEST_CASE("c api: check kernel") {
  const double k[] = {0.1, 1.0, 10.0};
  double err = 1.0;
  CHECK(dp_check_kernel(1.0, 1.0, k, 3, &err) == DP_OK);
  CHECK(err <= 1e-12);
  CHECK(dp_check_kernel(-1.0, 1.0, k, 3, &err) != DP_OK);
  CHECK(dp_check_kernel(1.0, 1.0, nullptr, 3, &err) == DP_ERR_USAGE);
}
