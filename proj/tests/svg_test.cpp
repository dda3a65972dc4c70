#include "serpent/svg.hpp"


#include <gtest/gtest.h>

#include "serpent/errors.hpp"
#include "test_util.hpp"

namespace serpent {
namespace {

int count(const std::string& s, const std::string& needle) {
  int n = 0;
  for (std::size_t pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++n;
  return n;
}

TEST(Layer, ParseNames) {
  for (Layer l : {Layer::pegs, Layer::field, Layer::roadmap, Layer::trajectory, Layer::plan}) {
    EXPECT_EQ(parse_layer(to_string(l)), l);
  }
  EXPECT_THROW(parse_layer("grid"), ValidationError);
}

TEST(RenderSvg, OneCirclePerPeg) {
  std::mt19937_64 rng(70);
  const Environment env = testing::random_environment(rng, 17);
  PlotInputs in;
  in.env = &env;
  const std::string svg = render_svg(in, PlotSpec{});
  EXPECT_EQ(count(svg, "<circle"), 17);
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST(RenderSvg, DeterministicWithAllLayers) {
  std::mt19937_64 rng(71);
  const Environment env = testing::random_environment(rng, 12);
  const Roadmap roadmap = build_roadmap(env);
  Trajectory traj(3);
  for (int k = 0; k < 3; ++k) {
    traj[k].head_world = {1.0 * k, 0.5 * k, 0};
    traj[k].com = {1.0 * k - 1, 0.5 * k};
  }
  PlotInputs in{&env, &roadmap, &traj, {{0, 0}, {5, 5}}};
  PlotSpec spec;
  spec.layers = {Layer::field, Layer::pegs, Layer::roadmap, Layer::trajectory, Layer::plan};
  spec.heatmap_resolution = 40;
  const std::string a = render_svg(in, spec);
  EXPECT_EQ(a, render_svg(in, spec));
  EXPECT_EQ(count(a, "<polyline"), static_cast<int>(roadmap.edges().size()) + 2);
  for (const char* id : {"field", "pegs", "roadmap", "trajectory", "plan"}) {
    EXPECT_NE(a.find(std::string("<g id=\"") + id + "\""), std::string::npos) << id;
  }
}

TEST(RenderSvg, MissingInputThrows) {
  Environment env;
  env.bounds = {0, 10, 0, 10};
  PlotInputs in;
  PlotSpec spec;
  EXPECT_THROW(render_svg(in, spec), ValidationError);
  in.env = &env;
  spec.layers = {Layer::roadmap};
  EXPECT_THROW(render_svg(in, spec), ValidationError);
  spec.layers = {Layer::trajectory};
  EXPECT_THROW(render_svg(in, spec), ValidationError);
  spec.layers = {Layer::plan};
  EXPECT_THROW(render_svg(in, spec), ValidationError);
  spec.layers.clear();
  EXPECT_THROW(spec.validate(), ValidationError);
}

TEST(RenderSvg, WidthAndScale) {
  Environment env;
  env.bounds = {0, 40, 0, 20};
  PlotInputs in;
  in.env = &env;
  PlotSpec spec;
  spec.width = 400;
  EXPECT_NE(render_svg(in, spec).find("height=\"200.000\""), std::string::npos);
  spec.scale = 5;
  EXPECT_NE(render_svg(in, spec).find("width=\"200.000\""), std::string::npos);
}

TEST(SampleField, ArgmaxAtDensestCluster) {
  Environment env;
  env.bounds = {0, 100, 0, 100};
  env.pegs = {{70, 30, 4}, {71, 31, 4}, {69, 29, 4}, {20, 80, 4}};
  const FieldSamples f = sample_field(env, 100);
  Eigen::Index r = 0, c = 0;
  f.values.maxCoeff(&r, &c);
  const Point p = f.cell_center(static_cast<int>(r), static_cast<int>(c));
  EXPECT_LE((p - Point(70, 30)).norm(), 1.5);
  EXPECT_GE(f.values.minCoeff(), env.field.k_height);
}

}  // namespace
}  // namespace serpent
