#include <gtest/gtest.h>

#include <cmath>

#include "cubikit/blowup.hpp"
#include "cubikit/isomorphism.hpp"

using namespace cubikit;

namespace {

BlowUpWindow small_window(int base_length, int fiber, int radius = -1) {
  BlowUpWindow w;
  w.davis.base_length = base_length;
  w.fiber_bound = fiber;
  w.radius = radius;
  return w;
}

std::vector<ParallelClass> base_classes(const Raag& G) {
  std::vector<ParallelClass> out;
  for (int v = 0; v < G.rank(); ++v) out.push_back(class_of_line(G, {}, v));
  return out;
}

}  // namespace

TEST(TypeMap, RankOneFactors) {
  Raag K2(graphs::complete(2));
  auto t = type_map(K2, residue_of(K2, K2.parse("u v^2"), K2.graph().all_vertices()));
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[0], class_of_line(K2, {}, 0));
  EXPECT_EQ(t[1], class_of_line(K2, {}, 1));
  EXPECT_TRUE(type_map(K2, residue_of(K2, Word{}, 0)).empty());
}

TEST(BlowUpData, Rules) {
  Raag K2(graphs::complete(2));
  auto c = class_of_line(K2, {}, 0);
  EXPECT_EQ(identity_data(K2).value(c, -3), -3);
  EXPECT_EQ(floor_half_data(K2).value(c, -3), -2);
  EXPECT_EQ(floor_half_data(K2).value(c, 5), 2);
  EXPECT_EQ(double_data(K2).value(c, 4), 8);
  EXPECT_EQ(constant_data(K2, 7).value(c, 100), 7);
  auto r1 = random_blowup_data(K2, 42, 3), r2 = random_blowup_data(K2, 42, 3);
  for (int n = -20; n <= 20; ++n) {
    EXPECT_EQ(r1.value(c, n), r2.value(c, n));
    EXPECT_LE(std::abs(r1.value(c, n)), 3);
  }
}

TEST(BlowUpData, JsonRoundTrip) {
  Raag C5(graphs::cycle(5));
  auto data = random_blowup_data(C5, 3, 2);
  auto classes = base_classes(C5);
  auto back = BlowUpData::from_json(C5, data.to_json(classes, 4));
  for (const auto& c : classes)
    for (int n = -4; n <= 4; ++n) EXPECT_EQ(back.value(c, n), data.value(c, n));
}

TEST(FiberFunctor, IdentityAndRandomDataAreFunctorial) {
  for (auto g : {graphs::complete(2), graphs::cycle(5)}) {
    Raag G(g);
    auto davis = davis_ball(G, 2);
    for (auto data : {identity_data(G), random_blowup_data(G, 5, 3)}) {
      auto F = build_fiber_functor(data, davis);
      EXPECT_TRUE(F.functorial);
      EXPECT_TRUE(F.one_determined);
      EXPECT_FALSE(F.morphisms.empty());
    }
  }
}

TEST(BlowUp, IdentityDataGivesExplodedBall) {
  for (auto g : {graphs::single_vertex(), graphs::complete(2)}) {
    Raag G(g);
    auto Y = blowup_complex(identity_data(G), small_window(4, 6, 2));
    auto X = ball_Xe(G, 2, 1);
    EXPECT_EQ(Y.complex.vertex_count(), X.complex.vertex_count());
    EXPECT_TRUE(find_isomorphism(Y.complex, X.complex).has_value());
    EXPECT_TRUE(check_flag_links(Y.complex).pass);
  }
}

TEST(BlowUp, ProjectionIsRankPreserving) {
  Raag K2(graphs::complete(2));
  auto Y = blowup_complex(floor_half_data(K2), small_window(3, 4));
  ASSERT_EQ(Y.q.size(), static_cast<size_t>(Y.complex.vertex_count()));
  for (int v = 0; v < Y.complex.vertex_count(); ++v) {
    ASSERT_GE(Y.q[v], 0);
    EXPECT_EQ(Y.davis.residues[Y.q[v]], Y.points[v].residue);
  }
  // Every edge maps to an edge or a point of the Davis ball.
  for (int e = 0; e < Y.complex.edge_count(); ++e) {
    int a = Y.q[Y.complex.edge(e).u], b = Y.q[Y.complex.edge(e).v];
    EXPECT_TRUE(a == b || Y.davis.complex.find_edge(a, b) >= 0);
  }
}

TEST(OneData, RecoversTables) {
  for (auto g : {graphs::single_vertex(), graphs::complete(2), graphs::path(3)}) {
    Raag G(g);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      auto data = random_blowup_data(G, seed, 3);
      auto Y = blowup_complex(data, small_window(2, 5));
      auto od = one_data(Y);
      ASSERT_FALSE(od.tables().empty());
      for (const auto& [c, t] : od.tables())
        for (auto [n, v] : t) EXPECT_EQ(v, data.value(c, n)) << class_id(G, c) << " " << n;
    }
  }
}

TEST(LocalFiniteness, Reports) {
  Raag K2(graphs::complete(2));
  auto classes = base_classes(K2);
  auto id = local_finiteness_report(identity_data(K2), classes, 16);
  EXPECT_EQ(id.max_preimage, 1);
  EXPECT_EQ(id.density, 0);
  auto fh = local_finiteness_report(floor_half_data(K2), classes, 16);
  EXPECT_EQ(fh.max_preimage, 2);
  EXPECT_EQ(fh.density, 0);
  auto db = local_finiteness_report(double_data(K2), classes, 16);
  EXPECT_EQ(db.max_preimage, 1);
  EXPECT_EQ(db.density, 1);
}

TEST(DownwardCheck, BoxWindow) {
  Raag K2(graphs::complete(2));
  BlowUpWindow w;
  w.davis.base_length = 4;
  w.davis.max_exponent = 2;
  w.fiber_bound = 3;
  for (auto data : {identity_data(K2), floor_half_data(K2)}) {
    auto Y = blowup_complex(data, w);
    EXPECT_TRUE(downward_complex_check(Y, data, residue_of(K2, Word{}, K2.graph().all_vertices())));
    EXPECT_TRUE(downward_complex_check(Y, data, residue_of(K2, Word{}, bit(0))));
  }
}

TEST(Eta, IdentityIsIsomorphism) {
  Raag K2(graphs::complete(2));
  auto Y = blowup_complex(floor_half_data(K2), small_window(3, 4));
  auto r = eta_quasi_morphism(Y, Y, [](const ParallelClass&, int n) { return n; }, 50);
  EXPECT_TRUE(r.cubical);
  EXPECT_TRUE(r.isomorphism);
  EXPECT_DOUBLE_EQ(r.lipschitz, 1.0);
  EXPECT_EQ(r.additive, 0);
}

TEST(Eta, FloorHalfCollapsesFibres) {
  Raag S(graphs::single_vertex());
  auto YA = blowup_complex(identity_data(S), small_window(3, 6));
  auto YB = blowup_complex(floor_half_data(S), small_window(3, 6));
  auto r = eta_quasi_morphism(YA, YB, [](const ParallelClass&, int n) { return static_cast<int>(std::floor(n / 2.0)); },
                              50);
  EXPECT_TRUE(r.cubical);
  EXPECT_FALSE(r.isomorphism);
  EXPECT_LE(r.lipschitz, 1.0);
  EXPECT_GE(r.additive, 1);
}

TEST(SectionDistortion, IdentityIsIsometricUpToScale) {
  Raag K2(graphs::complete(2));
  auto Y = blowup_complex(identity_data(K2), small_window(4, 4));
  std::vector<Word> chambers;
  for (int a = -1; a <= 1; ++a)
    for (int b = -1; b <= 1; ++b) chambers.push_back(K2.multiply(K2.letter(0, a), K2.letter(1, b)));
  auto r = chamber_section_distortion(Y, chambers, 4);
  EXPECT_GT(r.pairs, 0);
  EXPECT_LE(r.lipschitz, 4.0);
  EXPECT_LE(r.co_lipschitz, 1.0);
}

TEST(Equivariant, TranslationAction) {
  Raag K2(graphs::complete(2));
  auto A = translation_action(K2);
  auto orbits = class_orbits(A, base_classes(K2), 2);
  ASSERT_EQ(orbits.size(), 2u);

  std::vector<OrbitResolution> id;
  for (const auto& o : orbits) id.push_back({o, [](int n) { return n; }});
  auto good = equivariant_blowup(A, id, small_window(3, 4));
  EXPECT_TRUE(good.well_defined);
  EXPECT_TRUE(good.edges_preserved);
  EXPECT_TRUE(good.commutes_with_q);
  EXPECT_EQ(good.generator_maps.size(), 2u);

  // Halving is not compatible with unit translations along its own line.
  std::vector<OrbitResolution> half;
  for (const auto& o : orbits) half.push_back({o, [](int n) { return static_cast<int>(std::floor(n / 2.0)); }});
  EXPECT_FALSE(equivariant_blowup(A, half, small_window(3, 4)).well_defined);
}
