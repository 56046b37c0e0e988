#include <gtest/gtest.h>

#include "support/corpus.hpp"

using namespace vsw;
using namespace vsw::testing;

class CorpusProperties : public ::testing::TestWithParam<std::string> {};

TEST_P(CorpusProperties, IdentitiesAndOracles) {
  WalkerSpec base = load_spec(spec_path(GetParam()));
  std::vector<WalkerSpec> specs{base};
  for (auto& [name, over] : base.branches)
    if (name != "__base__") specs.push_back(apply_branches(base, {name}));
  for (auto& s : specs) {
    for (unsigned seed : {7u, 11u}) {
      PropertyReport r = check_properties(s, seed);
      EXPECT_GT(r.checks, 40);
      for (auto& f : r.failures) ADD_FAILURE() << f;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Bundled, CorpusProperties, ::testing::ValuesIn(spec_files()),
                         [](const ::testing::TestParamInfo<std::string>& i) {
                           std::string n = i.param.substr(0, i.param.find('.'));
                           for (auto& c : n)
                             if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
                           return n;
                         });

TEST(FiniteDifference, DetectsAWrongDerivative) {
  // The oracle itself: a deliberately wrong symbolic derivative is caught.
  Context ctx;
  Expr e = parse("u^3*U + 1/(2 + u^2)", ctx);
  NumericEnv env;
  env.point = {0.7, 0, 1.1, 0};
  double num = central_difference(e, env, u);
  EXPECT_NEAR(eval_numeric(diff(e, u), env), num, 1e-6);
  EXPECT_GT(std::abs(eval_numeric(diff(e, U), env) - num), 1e-3);
}
