#include "serpent/environment.hpp"

#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "serpent/errors.hpp"
#include "test_util.hpp"

namespace serpent {
namespace {

Environment one_peg(double x, double y) {
  Environment env;
  env.bounds = {-20, 20, -20, 20};
  env.pegs.push_back({x, y, 4.0});
  return env;
}

// Direct summation with the Gaussian written out by hand.
double field_oracle(const Environment& env, double x, double y) {
  double k = env.field.k_height;
  for (const Peg& p : env.pegs) {
    const double ex = (x - p.cx) * (x - p.cx) / (2 * env.field.sigma_x * env.field.sigma_x);
    const double ey = (y - p.cy) * (y - p.cy) / (2 * env.field.sigma_y * env.field.sigma_y);
    k += env.field.amplitude * std::exp(-(ex + ey));
  }
  return k;
}

TEST(Field, DefaultSigmaHasHalfMaximumAtPegRadius) {
  const FieldParams f;
  EXPECT_NEAR(std::exp(-(2.0 * 2.0) / (2 * f.sigma_x * f.sigma_x)), 0.5, 1e-12);
  EXPECT_NEAR(f.sigma_x, 1.6986436005760381, 1e-12);
}

TEST(Field, Examples) {
  Environment empty;
  empty.bounds = {-1, 1, -1, 1};
  EXPECT_EQ(lateral_drag_at(empty, 0.3, -0.7), 4.0);
  EXPECT_EQ(lateral_drag_at(one_peg(0, 0), 0, 0), 16.0);
  Environment two = one_peg(0, 0);
  two.pegs.push_back({0, 0, 4.0});
  EXPECT_EQ(lateral_drag_at(two, 0, 0), 28.0);
}

TEST(DragMatrix, Examples) {
  Environment empty;
  empty.bounds = {-1, 1, -1, 1};
  Mat3 expect = Mat3::Identity();
  expect(1, 1) = 4.0;
  EXPECT_EQ(drag_matrix(empty, {0.1, 0.2}), expect);
  expect(1, 1) = 16.0;
  EXPECT_EQ(drag_matrix(one_peg(0, 0), {0, 0}), expect);
  const Environment env = one_peg(0, 0);
  const Mat3 k = drag_matrix(env, {env.field.sigma_x, 0});
  EXPECT_NEAR(k(1, 1), 4.0 + 12.0 * std::exp(-0.5), 1e-12);
  EXPECT_EQ(k(0, 0), 1.0);
  EXPECT_EQ(k(2, 2), 1.0);
  EXPECT_EQ(k(0, 1), 0.0);
}

TEST(Field, LowerBoundEverywhere) {
  std::mt19937_64 rng(20);
  const Environment env = testing::random_environment(rng, 30);
  for (int k = 0; k < 10000; ++k) {
    const double x = testing::uniform(rng, -40, 40), y = testing::uniform(rng, -40, 40);
    EXPECT_GE(lateral_drag_at(env, x, y), env.field.k_height);
  }
}

TEST(Field, MatchesDirectSummation) {
  std::mt19937_64 rng(21);
  Environment env = testing::random_environment(rng, 25);
  env.field.sigma_y = 2.5;
  for (int k = 0; k < 1000; ++k) {
    const double x = testing::uniform(rng, -30, 30), y = testing::uniform(rng, -30, 30);
    EXPECT_NEAR(lateral_drag_at(env, x, y), field_oracle(env, x, y), 1e-12);
  }
}

TEST(Field, RadiallyDecreasingForOnePeg) {
  const Environment env = one_peg(1, -2);
  std::mt19937_64 rng(22);
  for (int ray = 0; ray < 100; ++ray) {
    const double a = testing::uniform(rng, -3.14, 3.14);
    double prev = lateral_drag_at(env, 1, -2);
    for (double r = 0.05; r < 8.0; r += 0.05) {
      const double cur = lateral_drag_at(env, 1 + r * std::cos(a), -2 + r * std::sin(a));
      EXPECT_LT(cur, prev);
      prev = cur;
    }
  }
}

TEST(Field, SuperpositionOfPegSets) {
  std::mt19937_64 rng(23);
  const Environment a = testing::random_environment(rng, 7);
  const Environment b = testing::random_environment(rng, 9);
  Environment both = a;
  both.pegs.insert(both.pegs.end(), b.pegs.begin(), b.pegs.end());
  for (int k = 0; k < 1000; ++k) {
    const double x = testing::uniform(rng, -30, 30), y = testing::uniform(rng, -30, 30);
    const double sum = lateral_drag_at(a, x, y) + lateral_drag_at(b, x, y) - a.field.k_height;
    EXPECT_NEAR(lateral_drag_at(both, x, y), sum, 1e-12);
  }
}

TEST(Validation, RejectsBrokenInvariants) {
  Environment env = one_peg(0, 0);
  EXPECT_NO_THROW(env.validate());
  env.field.k_height = 0.5;
  EXPECT_THROW(env.validate(), ValidationError);
  env = one_peg(0, 0);
  env.field.amplitude = -1;
  EXPECT_THROW(env.validate(), ValidationError);
  env = one_peg(0, 0);
  env.field.sigma_y = 0;
  EXPECT_THROW(env.validate(), ValidationError);
  env = one_peg(0, 0);
  env.pegs[0].diameter = 0;
  EXPECT_THROW(env.validate(), ValidationError);
  env = one_peg(25, 0);
  EXPECT_THROW(env.validate(), ValidationError);
}

TEST(Document, MinimalWithoutPegs) {
  const Environment env = load_environment(R"({"bounds": {"xmin": 0, "xmax": 10, "ymin": 0, "ymax": 5}})");
  EXPECT_TRUE(env.pegs.empty());
  EXPECT_EQ(env.units, "in");
  EXPECT_EQ(env.field, FieldParams{});
}

TEST(Document, OnePegTakesDefaults) {
  const Environment env =
      load_environment(R"({"bounds": {"xmin": 0, "xmax": 10, "ymin": 0, "ymax": 5}, "pegs": [{"cx": 1, "cy": 2}]})");
  ASSERT_EQ(env.pegs.size(), 1u);
  EXPECT_EQ(env.pegs[0], (Peg{1, 2, 4.0}));
  EXPECT_EQ(env.field.k_height, 4.0);
  EXPECT_EQ(env.field.amplitude, 12.0);
}

TEST(Document, UnknownFieldNamed) {
  try {
    load_environment(R"({"bounds": {"xmin": 0, "xmax": 1, "ymin": 0, "ymax": 1}, "pegs": [{"cx": 0, "cy": 0, "radius": 2}]})");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.field(), "pegs[0].radius");
  }
  EXPECT_THROW(load_environment(R"({"bounds": {"xmin": 0, "xmax": 1, "ymin": 0, "ymax": 1}, "extra": 1})"), ParseError);
}

TEST(Document, SyntaxErrorCarriesLocation) {
  try {
    load_environment("{\n  \"bounds\": {\"xmin\": 0,,}\n}");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(Document, OutOfBoundsPegIsValidationError) {
  EXPECT_THROW(load_environment(R"({"bounds": {"xmin": 0, "xmax": 1, "ymin": 0, "ymax": 1}, "pegs": [{"cx": 5, "cy": 0}]})"),
               ValidationError);
}

TEST(Document, RoundTripIsBitExact) {
  std::mt19937_64 rng(24);
  for (int k = 0; k < 20; ++k) {
    Environment env = testing::random_environment(rng, 15);
    env.field.k_height = testing::uniform(rng, 1, 9);
    env.field.amplitude = testing::uniform(rng, 0, 30);
    env.field.sigma_x = testing::uniform(rng, 0.1, 3);
    env.field.sigma_y = std::nextafter(env.field.sigma_x, 10.0);
    env.pegs[0].diameter = 1.0 / 3.0;
    const Environment back = load_environment(save_environment(env));
    EXPECT_EQ(back, env);
    EXPECT_EQ(save_environment(back), save_environment(env));
  }
}

TEST(Grid, TwoByTwo) {
  GridSpec g;
  g.rows = 2;
  g.cols = 2;
  g.spacing = 10;
  const Environment env = generate_grid(g);
  ASSERT_EQ(env.pegs.size(), 4u);
  EXPECT_EQ(env.pegs[0].center(), Point(0, 0));
  EXPECT_EQ(env.pegs[1].center(), Point(10, 0));
  EXPECT_EQ(env.pegs[2].center(), Point(0, 10));
  EXPECT_EQ(env.pegs[3].center(), Point(10, 10));
}

TEST(Grid, SameSeedSameEnvironment) {
  GridSpec g;
  g.rows = 4;
  g.cols = 5;
  g.jitter = 0.2;
  g.seed = 99;
  EXPECT_EQ(save_environment(generate_grid(g)), save_environment(generate_grid(g)));
  GridSpec h = g;
  h.seed = 100;
  EXPECT_NE(generate_grid(g), generate_grid(h));
}

TEST(Grid, JitterKeepsPegsApart) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    GridSpec g;
    g.rows = 3;
    g.cols = 3;
    g.spacing = 7.5;
    g.jitter = 0.25;
    g.seed = seed;
    const Environment env = generate_grid(g);
    for (std::size_t a = 0; a < env.pegs.size(); ++a) {
      for (std::size_t b = a + 1; b < env.pegs.size(); ++b) {
        EXPECT_GE((env.pegs[a].center() - env.pegs[b].center()).norm(), g.spacing / 2);
      }
    }
  }
}

TEST(Grid, RejectsBadSpecs) {
  GridSpec g;
  g.spacing = 0;
  EXPECT_THROW(generate_grid(g), ValidationError);
  g = {};
  g.jitter = 0.3;
  EXPECT_THROW(generate_grid(g), ValidationError);
  g = {};
  g.rows = 0;
  EXPECT_THROW(generate_grid(g), ValidationError);
}

}  // namespace
}  // namespace serpent
