#include <gtest/gtest.h>

#include <random>

#include "cubikit/action.hpp"

using namespace cubikit;

namespace {

Word random_element(const Raag& G, std::mt19937_64& rng, int len) {
  Word w;
  for (int i = 0; i < len; ++i) w.push_back(make_letter(static_cast<int>(rng() % G.rank()), rng() % 2 ? 1 : -1));
  return G.normal_form(w);
}

Word even_element(const Raag& G, int u, std::mt19937_64& rng, int len) {
  Word w = random_element(G, rng, len);
  if (G.exponent_sum(w, u) % 2 != 0) w = G.multiply(w, G.letter(u, 1));
  return w;
}

}  // namespace

TEST(Translation, ApplyOrderAndWords) {
  Raag F2(graphs::discrete(2));
  auto A = translation_action(F2);
  ASSERT_EQ(A.size(), 2);
  EXPECT_EQ(A.find("v"), 1);
  EXPECT_EQ(A.find("w"), -1);
  // Rightmost letter acts first: u·(v·e).
  EXPECT_EQ(F2.format(A.apply(ActionWord{0, 2}, Word{})), "u v");
  EXPECT_EQ(F2.format(A.apply_letter(1, F2.parse("u v"))), "v");
  ActionWord w{0, 3, 2};
  EXPECT_TRUE(A.apply(concat(w, inverse_word(w)), F2.parse("u^2 v")) == F2.parse("u^2 v"));
}

TEST(Translation, ImageClassesAndTransport) {
  Raag K2(graphs::complete(2));
  auto A = translation_action(K2);
  auto cu = class_of_line(K2, {}, 0);
  EXPECT_EQ(image_class(A, 2, cu), cu);  // v commutes with u
  auto [c1, n1] = transport(A, ActionWord{0}, cu, 3);
  EXPECT_EQ(c1, cu);
  EXPECT_EQ(n1, 4);
  auto [c2, n2] = transport(A, ActionWord{2}, cu, 3);
  EXPECT_EQ(c2, cu);
  EXPECT_EQ(n2, 3);

  Raag F2(graphs::discrete(2));
  auto B = translation_action(F2);
  auto fu = class_of_line(F2, {}, 0);
  EXPECT_EQ(image_class(B, 2, fu), class_of_line(F2, F2.parse("v"), 0));
}

TEST(Translation, OrbitsAndStabilisers) {
  Raag F2(graphs::discrete(2));
  auto A = translation_action(F2);
  std::vector<ParallelClass> classes;
  for (const auto& w : ball_X(F2, 1).elements)
    for (int v = 0; v < 2; ++v) classes.push_back(class_of_line(F2, w, v));
  auto orbits = class_orbits(A, classes, 2);
  ASSERT_EQ(orbits.size(), 2u);
  for (const auto& o : orbits) {
    ASSERT_EQ(o.members.size(), o.words.size());
    EXPECT_EQ(o.members.front(), o.representative);
    for (size_t i = 0; i < o.members.size(); ++i) EXPECT_EQ(transport(A, o.words[i], o.representative, 0).first, o.members[i]);
    for (const auto& s : stabilizer_words(A, o)) EXPECT_EQ(transport(A, s, o.representative, 0).first, o.representative);
  }
}

TEST(FactorAction, TranslationOnALine) {
  Raag K2(graphs::complete(2));
  auto A = translation_action(K2);
  auto cu = class_of_line(K2, {}, 0);
  auto spec = extract_factor_action(A, cu, {{"u", {0}}, {"v", {2}}}, 5);
  for (int n = -5; n <= 5; ++n) {
    EXPECT_EQ(spec.tables.at("u").at(n), n + 1);
    EXPECT_EQ(spec.tables.at("v").at(n), n);
  }
  Raag F2(graphs::discrete(2));
  auto B = translation_action(F2);
  EXPECT_THROW(extract_factor_action(B, class_of_line(F2, {}, 0), {{"v", {2}}}, 2), std::invalid_argument);
}

TEST(DoubledInvolution, ThetaIsAnInvolutiveAutomorphism) {
  std::mt19937_64 rng(21);
  for (auto g : {graphs::path(3), graphs::cycle(5), graphs::discrete(2)}) {
    Raag G(g);
    for (int t = 0; t < 100; ++t) {
      Word a = even_element(G, 0, rng, 6), b = even_element(G, 0, rng, 6);
      Word ta = doubled_theta(G, 0, a), tb = doubled_theta(G, 0, b);
      EXPECT_EQ(doubled_theta(G, 0, G.multiply(a, b)), G.multiply(ta, tb));
      EXPECT_EQ(doubled_theta(G, 0, ta), a);
    }
    EXPECT_THROW(doubled_theta(G, 0, G.letter(0, 1)), std::invalid_argument);
  }
}

TEST(DoubledInvolution, AlphaSquaresToIdentity) {
  std::mt19937_64 rng(22);
  for (auto g : {graphs::path(3), graphs::cycle(5)}) {
    Raag G(g);
    auto A = doubled_involution_action(G, 0);
    int alpha = A.find("alpha");
    ASSERT_GE(alpha, 0);
    for (int t = 0; t < 100; ++t) {
      Word x = random_element(G, rng, 7);
      EXPECT_EQ(A.apply(ActionWord{2 * alpha, 2 * alpha}, x), x);
      // Parity of the u-exponent flips.
      EXPECT_NE(G.exponent_sum(A.apply_letter(2 * alpha, x), 0) % 2 == 0, G.exponent_sum(x, 0) % 2 == 0);
    }
  }
}

TEST(DoubledInvolution, PreservesStandardGeodesics) {
  Raag P3(graphs::path(3));
  auto A = doubled_involution_action(P3, 0);
  for (const auto& w : ball_X(P3, 2).elements)
    for (int v = 0; v < 3; ++v)
      for (int l = 0; l < 2 * A.size(); ++l) EXPECT_NO_THROW(image_class(A, l, class_of_line(P3, w, v)));
  for (int l = 0; l < 2 * A.size(); ++l)
    EXPECT_EQ(image_residue(A, l, residue_of(P3, Word{}, P3.graph().parse_set({"a", "b"}))).rank(), 2);
}
