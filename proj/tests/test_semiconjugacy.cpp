#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "cubikit/semiconjugacy.hpp"
#include "json.hpp"

using namespace cubikit;

namespace {

// max over words of length <= B of |w(x) - w(y)|, by enumerating words directly.
int brute_dbar(const ZActionSpec& spec, int x, int y, int B) {
  int best = std::abs(x - y);
  std::function<void(int, int, int)> go = [&](int a, int b, int depth) {
    best = std::max(best, std::abs(a - b));
    if (depth == B) return;
    for (const auto& [name, t] : spec.generators) {
      (void)t;
      for (bool inv : {false, true}) {
        auto ga = spec.apply(name, inv, a), gb = spec.apply(name, inv, b);
        if (ga && gb) go(*ga, *gb, depth + 1);
      }
    }
  };
  go(x, y, 0);
  return best;
}

TrackSearch search_for(int R, int w_max) {
  TrackSearch s;
  s.zone = 2 * R + 1;
  s.margin = R;
  s.w_max = w_max;
  return s;
}

}  // namespace

TEST(ZAction, CannedActionsValidate) {
  for (const auto& spec : {flip2_action(20), translation_z_action(20), reflection_z_action(20), identity_z_action(20)})
    EXPECT_TRUE(validate_action(spec, 4).ok());
  auto broken = identity_z_action(5);
  broken.generators["e"][1] = 0;  // two points onto 0
  EXPECT_FALSE(validate_action(broken, 1).bijective);
  auto bad_rel = flip2_action(20);
  bad_rel.relations.push_back({"b", "a"});
  EXPECT_FALSE(validate_action(bad_rel, 4).relations_hold);
}

TEST(ZAction, ApplyAndJsonRoundTrip) {
  auto f = flip2_action(10);
  EXPECT_EQ(f.apply("a", false, 4), 5);
  EXPECT_EQ(f.apply("b", true, 4), 2);
  EXPECT_EQ(f.apply_word({"b", "a"}, 0), 3);
  EXPECT_FALSE(f.apply("b", false, 10).has_value());
  EXPECT_EQ(f.max_displacement(), 2);
  auto back = ZActionSpec::from_json(f.to_json());
  EXPECT_EQ(back.generators, f.generators);
  EXPECT_EQ(back.relations, f.relations);
  EXPECT_EQ(back.window, f.window);
  EXPECT_THROW(ZActionSpec::from_json("{\"window\": 3}"), ActionSpecError);
}

TEST(Dbar, Examples) {
  auto f = dbar(flip2_action(30), 4, 6);
  EXPECT_EQ(f.at(0, 1), 1);
  EXPECT_EQ(f.at(1, 2), 3);
  EXPECT_EQ(f.at(2, 1), 3);
  auto t = dbar(translation_z_action(30), 4, 6);
  EXPECT_EQ(t.at(0, 3), 3);
  EXPECT_EQ(t.at(5, 5), 0);
  auto r = dbar(reflection_z_action(30), 4, 6);
  EXPECT_EQ(r.at(-2, 2), 4);
  EXPECT_THROW(f.at(0, 50), std::out_of_range);
}

TEST(Dbar, AgreesWithWordEnumeration) {
  for (const auto& spec : {flip2_action(24), translation_z_action(24), reflection_z_action(24)}) {
    const int B = 3;
    auto d = dbar(spec, B, 5);
    for (int x = d.lo; x <= d.hi; ++x)
      for (int y = x; y <= std::min(d.hi, x + 5); ++y) EXPECT_EQ(d.at(x, y), brute_dbar(spec, x, y, B)) << x << "," << y;
  }
}

TEST(Dbar, IsAPseudoMetricDominatingTheLine) {
  auto d = dbar(flip2_action(40), 6, 8);
  for (int x = d.lo; x <= d.hi; ++x)
    for (int y = x; y <= std::min(d.hi, x + 4); ++y) {
      EXPECT_GE(d.at(x, y), std::abs(x - y));
      for (int z = y; z <= std::min(d.hi, x + 4); ++z) EXPECT_LE(d.at(x, z), d.at(x, y) + d.at(y, z));
    }
}

TEST(Rips, TranslationScaleOne) {
  auto d = dbar(translation_z_action(20), 2, 4);
  auto K = rips2(d, 1);
  EXPECT_TRUE(K.connected);
  EXPECT_EQ(static_cast<int>(K.edges.size()), K.size() - 1);
  EXPECT_TRUE(K.triangles.empty());
  auto K2 = rips2(d, 2);
  EXPECT_EQ(static_cast<int>(K2.triangles.size()), K2.size() - 2);
}

TEST(Tracks, TranslationWeights) {
  auto d = dbar(translation_z_action(30), 2, 8);
  auto t1 = min_essential_track(rips2(d, 1), search_for(1, 8));
  ASSERT_TRUE(t1.has_value());
  EXPECT_EQ(t1->weight, 1);
  // At scale 2 a cut between consecutive integers crosses the edges (x, x+1), (x-1, x+1), (x, x+2).
  auto K = rips2(d, 2);
  auto t2 = min_essential_track(K, search_for(2, 8));
  ASSERT_TRUE(t2.has_value());
  EXPECT_EQ(t2->weight, 3);
  auto c = check_track(K, *t2);
  EXPECT_TRUE(c.normal && c.connected && c.essential);
  EXPECT_EQ(c.weight, 3);
  for (const auto& arcs : normal_arcs(K, *t2))
    for (int a : arcs) EXPECT_GE(a, 0);
}

TEST(Tracks, InessentialAndHeavyCuts) {
  auto d = dbar(translation_z_action(30), 2, 8);
  // Left set {.., -1, 1}: at scale 1 point 1 is cut off from the rest of the left side.
  Track t;
  t.from = -1;
  t.to = 1;
  t.left = {-1, 1};
  auto c1 = check_track(rips2(d, 1), t);
  EXPECT_FALSE(c1.essential);
  // At scale 2 both sides stay connected, but the cut crosses five edges instead of three.
  auto c2 = check_track(rips2(d, 2), t);
  EXPECT_TRUE(c2.normal && c2.essential);
  EXPECT_EQ(c2.weight, 5);
}

TEST(Semiconjugate, Flip2IsFloorHalf) {
  SemiconjugacyParams p;
  p.B = 8;
  p.R = 6;
  auto r = semiconjugate(flip2_action(64), p);
  ASSERT_FALSE(r.block_map.empty());
  int c = r.block_map.at(0);
  bool up = true, down = true;
  for (auto [x, b] : r.block_map) {
    int fl = static_cast<int>(std::floor(x / 2.0));
    up = up && b == fl + c;
    down = down && b == -fl + c;
  }
  EXPECT_TRUE(up || down);
  EXPECT_TRUE(r.equivariant);
  EXPECT_TRUE(r.isometric);
  EXPECT_EQ(r.min_fiber, 2);
  EXPECT_EQ(r.max_fiber, 2);
  EXPECT_EQ(r.isometries.at("a").translation, 0);
  EXPECT_FALSE(r.isometries.at("a").reflection);
  EXPECT_EQ(std::abs(r.isometries.at("b").translation), 1);
  auto j = nlohmann::json::parse(r.to_json());
  EXPECT_EQ(j["block-map"].size(), r.block_map.size());
}

TEST(Semiconjugate, TranslationAndReflection) {
  SemiconjugacyParams p;
  p.B = 4;
  p.R = 2;
  auto t = semiconjugate(translation_z_action(48), p);
  EXPECT_TRUE(t.equivariant);
  EXPECT_TRUE(t.isometric);
  EXPECT_NE(t.isometries.at("t").translation, 0);
  EXPECT_FALSE(t.isometries.at("t").reflection);

  auto r = semiconjugate(reflection_z_action(48), p);
  EXPECT_TRUE(r.equivariant);
  EXPECT_TRUE(r.isometries.at("r").reflection);

  auto e = semiconjugate(identity_z_action(48), p);
  EXPECT_TRUE(e.equivariant);
  EXPECT_EQ(e.isometries.at("e").translation, 0);
  EXPECT_FALSE(e.isometries.at("e").reflection);
}

TEST(Semiconjugate, BlocksAreIntervalsInOrder) {
  SemiconjugacyParams p;
  p.B = 8;
  p.R = 6;
  auto r = semiconjugate(flip2_action(64), p);
  int prev = r.block_map.begin()->second;
  for (auto [x, b] : r.block_map) {
    EXPECT_LE(std::abs(b - prev), 1) << x;
    prev = b;
  }
}
