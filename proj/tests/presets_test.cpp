#include "serpent/presets.hpp"

#include <gtest/gtest.h>

#include "serpent/errors.hpp"
#include "serpent/roadmap.hpp"

namespace serpent {
namespace {

TEST(Presets, NamesResolve) {
  for (const std::string& name : preset_names()) {
    const Scenario sc = preset(name);
    EXPECT_EQ(sc.name, name);
    EXPECT_NO_THROW(sc.env.validate());
    EXPECT_TRUE(sc.env.bounds.contains(sc.start));
    EXPECT_TRUE(sc.env.bounds.contains(sc.goal));
    const Roadmap r = build_roadmap(sc.env);
    EXPECT_EQ(verify_roadmap(r, sc.env), "") << name;
  }
  EXPECT_THROW(preset("nope"), ValidationError);
}

TEST(Presets, Fig16MovesOnlyMarkedPegs) {
  const Scenario a = fig16_scenario(10), b = fig16_scenario(8);
  ASSERT_EQ(a.env.pegs.size(), 36u);
  ASSERT_EQ(b.env.pegs.size(), 36u);
  for (std::size_t k = 0; k < a.env.pegs.size(); ++k) {
    const bool marked = static_cast<int>(k) == kFig16MarkedPegs[0] || static_cast<int>(k) == kFig16MarkedPegs[1];
    if (!marked) EXPECT_EQ(a.env.pegs[k], b.env.pegs[k]);
  }
  EXPECT_EQ(b.env.pegs[kFig16MarkedPegs[0]].cy, 11.0);
  EXPECT_EQ(b.env.pegs[kFig16MarkedPegs[1]].cy, 19.0);
  EXPECT_EQ(b.env.pegs[kFig16MarkedPegs[1]].cy - b.env.pegs[kFig16MarkedPegs[0]].cy, 8.0);
  EXPECT_EQ(a.env.pegs[kFig16MarkedPegs[0]].cx, 30.0);
}

TEST(Presets, Fig16GapRange) {
  EXPECT_THROW(fig16_scenario(4), ValidationError);
  EXPECT_THROW(fig16_scenario(20.5), ValidationError);
  EXPECT_NO_THROW(fig16_scenario(20));
  EXPECT_NO_THROW(preset("fig16", 5));
}

TEST(Presets, YHasTwoRoutesSharingEntryAndExit) {
  const Scenario sc = y_scenario();
  ASSERT_TRUE(sc.speed_threshold.has_value());
  // Pegs above the axis wall the arch; the straight corridor is free of pegs.
  int arch = 0;
  for (const Peg& p : sc.env.pegs) {
    if (p.cy > 10) ++arch;
    if (p.cx > 45 && p.cx < 90) EXPECT_FALSE(std::abs(p.cy) < 8) << p.cx << "," << p.cy;
  }
  EXPECT_GT(arch, 10);
  EXPECT_EQ(sc.start.y(), 0.0);
  EXPECT_EQ(sc.goal.y(), 0.0);
}

}  // namespace
}  // namespace serpent
