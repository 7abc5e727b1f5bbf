#include <gtest/gtest.h>

#include <cstring>
#include <string>

#include <json.hpp>

#include "uwave/uwave.h"

using nlohmann::json;

namespace {

const std::string kData = UWAVE_TEST_DATA;

std::string take(char* s) {
  std::string out(s);
  uwave_string_free(s);
  return out;
}

}  // namespace

TEST(CApi, StatusNames) {
  EXPECT_STREQ(uwave_status_name(UWAVE_OK), "ok");
  EXPECT_STREQ(uwave_status_name(UWAVE_E_UNSOLVABLE), "unsolvable");
  EXPECT_STREQ(uwave_status_name(UWAVE_E_ILL_CONDITIONED), "ill-conditioned");
  EXPECT_STREQ(uwave_status_name(static_cast<uwave_status>(999)), "unknown");
}

TEST(CApi, NullArgumentsAreParameterErrors) {
  EXPECT_EQ(uwave_space_load(nullptr, nullptr), UWAVE_E_PARAMETER);
  uwave_space* s = nullptr;
  EXPECT_EQ(uwave_space_load("padic(2,2)", nullptr), UWAVE_E_PARAMETER);
  EXPECT_EQ(uwave_space_counts(nullptr, nullptr, nullptr), UWAVE_E_PARAMETER);
  EXPECT_EQ(uwave_space_load("padic(2,2)", &s), UWAVE_OK);
  uwave_space_free(s);
  uwave_space_free(nullptr);
}

TEST(CApi, SpaceQueries) {
  uwave_space* s = nullptr;
  ASSERT_EQ(uwave_space_load("padic(2,3)", &s), UWAVE_OK);
  size_t vertices = 0;
  size_t leaves = 0;
  ASSERT_EQ(uwave_space_counts(s, &vertices, &leaves), UWAVE_OK);
  EXPECT_EQ(vertices, 15u);
  EXPECT_EQ(leaves, 8u);
  uint32_t up = 0;
  ASSERT_EQ(uwave_space_sup(s, 7, 8, &up), UWAVE_OK);
  EXPECT_EQ(up, 3u);
  EXPECT_EQ(uwave_space_sup(s, 7, 99, &up), UWAVE_E_IDENTITY);
  EXPECT_NE(std::string(uwave_last_error()).find("99"), std::string::npos);
  double m = 0.0;
  ASSERT_EQ(uwave_space_measure(s, 1, &m), UWAVE_OK);
  EXPECT_EQ(m, 0.5);
  char* out = nullptr;
  ASSERT_EQ(uwave_space_wavelets(s, &out), UWAVE_OK);
  EXPECT_EQ(json::parse(take(out)).size(), 7u);
  const uint32_t bad[] = {0, 1};
  ASSERT_EQ(uwave_space_report(s, bad, 2, &out), UWAVE_OK);
  const auto rep = json::parse(take(out));
  EXPECT_FALSE(rep.dump().empty());
  uwave_space_free(s);
}

TEST(CApi, BadFileReportsLocation) {
  uwave_space* s = nullptr;
  EXPECT_EQ(uwave_space_load((kData + "/bad_measure.json").c_str(), &s), UWAVE_E_PARAMETER);
  EXPECT_EQ(s, nullptr);
  EXPECT_NE(std::string(uwave_last_error()).find("ball 0"), std::string::npos);
  EXPECT_EQ(uwave_space_from_json("{\"kind\": ", nullptr, &s), UWAVE_E_PARSE);
}

TEST(CApi, Spectrum) {
  uwave_space* s = nullptr;
  uwave_symbol* h = nullptr;
  ASSERT_EQ(uwave_space_load("padic(2,3)", &s), UWAVE_OK);
  ASSERT_EQ(uwave_symbol_load("homog(beta=0.5)", &h), UWAVE_OK);
  char* out = nullptr;
  ASSERT_EQ(uwave_spectrum(s, h, &out), UWAVE_OK);
  const auto rows = json::parse(take(out));
  ASSERT_EQ(rows.size(), 7u);
  double re = 0.0;
  double im = 0.0;
  ASSERT_EQ(uwave_eigenvalue(s, h, 0, &re, &im), UWAVE_OK);
  EXPECT_EQ(rows[0]["re"].get<double>(), re);
  EXPECT_NEAR(re, 1.0, 1e-15);
  EXPECT_EQ(uwave_eigenvalue(s, h, 14, &re, &im), UWAVE_E_DOMAIN);
  uwave_symbol_free(h);
  uwave_space_free(s);
}

TEST(CApi, WaveProblemRoundTrip) {
  uwave_problem* p = nullptr;
  ASSERT_EQ(uwave_problem_load((kData + "/wave_problem.json").c_str(), nullptr, &p), UWAVE_OK);
  char* out = nullptr;
  ASSERT_EQ(uwave_problem_check(p, &out), UWAVE_OK);
  EXPECT_TRUE(json::parse(take(out))["ok"].get<bool>());
  uwave_solution* sol = nullptr;
  ASSERT_EQ(uwave_solve(p, &sol), UWAVE_OK);
  ASSERT_EQ(uwave_solution_to_json(sol, &out), UWAVE_OK);
  const std::string text = take(out);
  EXPECT_EQ(json::parse(text)["free_params"].size(), 5u);

  uwave_solution* back = nullptr;
  ASSERT_EQ(uwave_solution_from_json(text.c_str(), nullptr, &back), UWAVE_OK);
  char* a = nullptr;
  char* b = nullptr;
  ASSERT_EQ(uwave_solution_eval_all(sol, &a), UWAVE_OK);
  ASSERT_EQ(uwave_solution_eval_all(back, &b), UWAVE_OK);
  const std::string sa = take(a);
  EXPECT_EQ(sa, take(b));
  const auto rows = json::parse(sa);
  EXPECT_EQ(rows.size(), 49u);
  for (std::size_t k = 1; k < rows.size(); ++k) EXPECT_LT(rows[k - 1]["vertex"], rows[k]["vertex"]);
  const uint32_t v[] = {1, 2};
  double re = 0.0;
  double im = 0.0;
  ASSERT_EQ(uwave_solution_eval(back, v, 2, &re, &im), UWAVE_OK);
  EXPECT_EQ(uwave_solution_eval(back, v, 1, &re, &im), UWAVE_E_PARAMETER);
  uwave_solution_free(back);
  uwave_solution_free(sol);
  uwave_problem_free(p);
}

TEST(CApi, UnsolvableProblem) {
  uwave_problem* p = nullptr;
  ASSERT_EQ(uwave_problem_load((kData + "/wave_unsolvable.json").c_str(), nullptr, &p), UWAVE_OK);
  uwave_solution* sol = nullptr;
  EXPECT_EQ(uwave_solve(p, &sol), UWAVE_E_UNSOLVABLE);
  EXPECT_EQ(sol, nullptr);
  char* out = nullptr;
  ASSERT_EQ(uwave_problem_check(p, &out), UWAVE_OK);
  const auto rep = json::parse(take(out));
  ASSERT_EQ(rep["violations"].size(), 2u);
  EXPECT_EQ(rep["violations"][0]["vertex"], json({1, 1}));
  EXPECT_EQ(rep["violations"][1]["vertex"], json({1, 2}));
  uwave_problem_free(p);
}

TEST(CApi, OperatorCharacteristics) {
  uwave_operator* op = nullptr;
  ASSERT_EQ(uwave_operator_load((kData + "/wave_operator.json").c_str(), nullptr, &op), UWAVE_OK);
  size_t arity = 0;
  ASSERT_EQ(uwave_operator_arity(op, &arity), UWAVE_OK);
  EXPECT_EQ(arity, 2u);
  char* out = nullptr;
  ASSERT_EQ(uwave_operator_characteristics(op, 1e-9, &out), UWAVE_OK);
  EXPECT_EQ(json::parse(take(out)).size(), 5u);
  const uint32_t leafy[] = {3, 0};
  double re = 0.0;
  double im = 0.0;
  EXPECT_EQ(uwave_operator_eigenvalue(op, leafy, 2, &re, &im), UWAVE_E_DOMAIN);
  uwave_operator_free(op);
}
