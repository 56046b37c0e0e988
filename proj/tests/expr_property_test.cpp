#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "vsw/expr.hpp"

using namespace vsw;

namespace {

double trig_func(const std::string& name, std::array<std::uint8_t, 4> d, const std::array<double, 4>& x) {
  auto dsin = [](double t, int k) {
    switch (k % 4) {
      case 0: return std::sin(t);
      case 1: return std::cos(t);
      case 2: return -std::sin(t);
      default: return -std::cos(t);
    }
  };
  auto dcos = [&](double t, int k) { return dsin(t, k + 1); };
  bool plain = d[0] == 0 && d[2] == 0;
  if (name == "F") return (plain ? 2.0 : 0.0) + dsin(x[0], d[0]) * dcos(x[2], d[2]);
  return (plain ? 1.5 : 0.0) + 0.5 * dcos(x[0], d[0]) * std::exp(x[2] / 3) / std::pow(3.0, d[2]);
}

struct Gen {
  std::mt19937_64 rng;
  NumericEnv env;

  explicit Gen(std::uint64_t seed) : rng(seed) {
    env.constants = {{"a", 0.7}, {"b", 1.3}};
    env.func = trig_func;
  }

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

  Expr leaf() {
    switch (pick(5)) {
      case 0: return Expr::coordinate(pick(4));
      case 1: return Expr::constant(pick(2) ? "a" : "b");
      case 2: return Expr::function(pick(2) ? "F" : "G", {u, U});
      case 3: return Expr::rational(pick(7) - 3, pick(3) + 1);
      default: return Expr::coordinate(pick(4)) + Expr(pick(3) + 1);
    }
  }

  bool safe(const Expr& e) {
    try {
      double x = eval_numeric(e, env);
      return std::isfinite(x) && std::fabs(x) > 0.2 && std::fabs(x) < 1e4;
    } catch (const std::exception&) {
      return false;
    }
  }

  Expr build(int depth) {
    if (depth <= 0) return leaf();
    Expr a = build(depth - 1);
    switch (pick(9)) {
      case 0:
      case 1: return a + build(depth - 1);
      case 2: return a - build(depth - 1);
      case 3: return a * build(depth / 2);
      case 4: {
        Expr d = build(depth / 2);
        return safe(d) ? a / d : a + d;
      }
      case 5: return tanh(a);
      case 6: return exp(a / Expr(4));
      case 7: return sqrt(a * a + Expr(1));
      default: return log(a * a + Expr(2));
    }
  }

  void move_point() {
    for (auto& x : env.point) x = std::uniform_real_distribution<double>(0.6, 1.6)(rng);
  }
};

bool close(double a, double b, double rel) { return std::fabs(a - b) <= rel * std::max({1.0, std::fabs(a), std::fabs(b)}); }

}  // namespace

TEST(ExprProperty, SumAndProductMatchNumerics) {
  Gen g(12345);
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    g.move_point();
    Expr a = g.build(1 + g.pick(6));
    Expr b = g.build(1 + g.pick(6));
    double x = eval_numeric(a, g.env), y = eval_numeric(b, g.env);
    EXPECT_TRUE(close(eval_numeric(canonicalize(a + b), g.env), x + y, 1e-9)) << render(a) << " | " << render(b);
    EXPECT_TRUE(close(eval_numeric(canonicalize(a * b), g.env), x * y, 1e-9)) << render(a) << " | " << render(b);
    ++checked;
  }
  EXPECT_EQ(checked, 1000);
}

TEST(ExprProperty, DerivativeMatchesFiniteDifference) {
  Gen g(777);
  const double h = 1e-6;
  for (int i = 0; i < 200; ++i) {
    g.move_point();
    Expr e = g.build(1 + g.pick(4));
    int c = g.pick(4);
    Expr de = diff(e, c);
    NumericEnv lo = g.env, hi = g.env;
    lo.point[c] -= h;
    hi.point[c] += h;
    double fd = (eval_numeric(e, hi) - eval_numeric(e, lo)) / (2 * h);
    EXPECT_TRUE(close(eval_numeric(de, g.env), fd, 1e-5)) << render(e) << " d/" << coord_name(c) << " " << eval_numeric(de, g.env) << " vs " << fd;
  }
}

TEST(ExprProperty, CanonicalizeIdempotentAndRoundTrips) {
  Gen g(99);
  Context ctx;
  ctx.declare_function("F", {u, U});
  ctx.declare_function("G", {u, U});
  ctx.declare_constant("a");
  ctx.declare_constant("b");
  for (int i = 0; i < 200; ++i) {
    Expr e = g.build(1 + g.pick(5));
    Expr c = canonicalize(e);
    EXPECT_EQ(canonicalize(c).compare(c), 0);
    EXPECT_EQ(parse(render(c), ctx), c) << render(c);
  }
}

TEST(ExprProperty, MixedPartialsCommute) {
  Gen g(2024);
  for (int i = 0; i < 150; ++i) {
    Expr e = g.build(1 + g.pick(4));
    int x = g.pick(4), y = g.pick(4);
    EXPECT_TRUE(is_zero(diff(diff(e, x), y) - diff(diff(e, y), x))) << render(e);
  }
}
