#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "cubikit/building.hpp"
#include "cubikit/raag.hpp"

namespace cubikit {

using ChamberMap = std::function<Word(const Word&)>;

struct ActionGenerator {
  std::string name;
  ChamberMap forward;
  ChamberMap backward;
};

// Action letters: 2*i applies generator i, 2*i+1 its inverse. An action word
// w = [l1, ..., lk] acts as l1 ∘ ... ∘ lk, so lk is applied first.
using ActionWord = std::vector<int>;

class GroupAction {
 public:
  explicit GroupAction(const Raag& G) : G_(&G) {}

  const Raag& group() const { return *G_; }
  int add_generator(std::string name, ChamberMap forward, ChamberMap backward);
  int size() const { return static_cast<int>(gens_.size()); }
  const ActionGenerator& generator(int i) const { return gens_.at(i); }
  int find(const std::string& name) const;

  Word apply_letter(int letter, const Word& x) const;
  Word apply(const ActionWord& w, const Word& x) const;
  std::string format(const ActionWord& w) const;

 private:
  const Raag* G_;
  std::vector<ActionGenerator> gens_;
};

ActionWord inverse_word(const ActionWord& w);
ActionWord concat(const ActionWord& a, const ActionWord& b);  // a ∘ b

// Left translations by the generators of G.
GroupAction translation_action(const Raag& G);

// The involution model on G(Γ): parity of the u-exponent maps onto Z/2 with kernel
// K = G(Γ'), where Γ' doubles Γ along the star of u. The graph swap θ of Γ' gives
// α(k) = θ(k)·u and α(k·u) = θ(k) for k in K. Generators: left translations by
// generators of K, followed by α (named "alpha").
Word doubled_theta(const Raag& G, int u, const Word& k);
Word doubled_alpha(const Raag& G, int u, const Word& x);
GroupAction doubled_involution_action(const Raag& G, int u);

// Image of a parallel class under one action letter; throws if the line is not mapped
// onto a standard geodesic.
ParallelClass image_class(const GroupAction& A, int letter, const ParallelClass& c);
// Coordinate transport along an action word: (class, n) -> (image class, image coordinate).
std::pair<ParallelClass, int> transport(const GroupAction& A, const ActionWord& w, const ParallelClass& c, int n);
// Image of a spherical residue, computed from the images of its factor lines.
Residue image_residue(const GroupAction& A, int letter, const Residue& R);

struct ClassOrbit {
  ParallelClass representative;
  std::vector<ParallelClass> members;  // members[0] is the representative
  std::vector<ActionWord> words;       // words[i] maps the representative to members[i]
};

// Orbits of the given classes, explored through classes whose coset is at most
// `search_length` long. Representatives are the least classes of their orbit.
std::vector<ClassOrbit> class_orbits(const GroupAction& A, std::vector<ParallelClass> classes, int search_length);

// Words g_{sλ}^{-1}·s·g_λ fixing the representative, one per (member, generator) pair whose
// image stays inside the orbit window.
std::vector<ActionWord> stabilizer_words(const GroupAction& A, const ClassOrbit& orbit);

struct FactorActionSpec {
  ParallelClass cls;
  int window = 0;
  std::map<std::string, std::map<int, int>> tables;  // generator name -> n ↦ image on [-window, window]
};

// Factor action of the given stabilising words on the class's rank-1 factor.
FactorActionSpec extract_factor_action(const GroupAction& A, const ParallelClass& cls,
                                       const std::vector<std::pair<std::string, ActionWord>>& stabilizers,
                                       int window);

}  // namespace cubikit
