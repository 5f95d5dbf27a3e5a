#pragma once

#include <compare>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qdci/digraph.hpp"
#include "qdci/errors.hpp"
#include "qdci/group.hpp"

namespace qdci {

/// A bijection on points 0..degree-1.  Composition is left-to-right:
/// a.then(b) applies a first, so products match the right-action
/// convention x^(gh) = (x^g)^h used throughout.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(int degree);              // identity
  explicit Permutation(std::vector<int> images);  // validated

  int degree() const { return static_cast<int>(img_.size()); }
  int apply(int x) const { return img_[x]; }
  const std::vector<int>& images() const { return img_; }

  Permutation then(const Permutation& next) const;
  Permutation inverse() const;
  /// this^g = g^-1 * this * g.
  Permutation conjugated_by(const Permutation& g) const;
  bool is_identity() const;

  bool operator==(const Permutation&) const = default;
  auto operator<=>(const Permutation&) const = default;

  /// Debug rendering "p 0->i0 1->i1 ...".
  std::string to_string() const;

 private:
  std::vector<int> img_;
};

inline constexpr unsigned long long kDefaultElementCap = 1'000'000ULL;

/// Permutation group with a deterministic Schreier-Sims stabilizer chain.
///
/// The base is the full ascending point sequence 0, 1, 2, ...; level i
/// stabilizes 0..i-1 pointwise, and levels whose basic orbit is trivial
/// carry no transversal data.  The chain is built eagerly at construction,
/// after which every query is a const read.
class PermutationGroup {
 public:
  PermutationGroup(int degree, std::vector<Permutation> generators);
  static PermutationGroup trivial(int degree);

  int degree() const { return degree_; }
  const std::vector<Permutation>& generators() const { return gens_; }

  unsigned long long order() const { return order_; }
  bool contains(const Permutation& p) const;

  OrbitPartition orbits() const;
  std::vector<int> orbit_of(int u) const;
  bool is_transitive() const;
  bool is_regular() const;  // transitive with order == degree

  /// Stabilizer of u, generated by the Schreier generators of the action
  /// of the whole group on the orbit of u.
  PermutationGroup point_stabilizer(int u) const;

  /// All elements, by depth-first transversal products; deterministic
  /// order.  Throws ResourceError when order() > cap.
  std::vector<Permutation> elements(unsigned long long cap = kDefaultElementCap) const;

  /// Visit every element; stop early when the visitor returns true.
  /// Returns the accepting element, if any.
  std::optional<Permutation> find_element(
      const std::function<bool(const Permutation&)>& accept,
      unsigned long long cap = kDefaultElementCap) const;

  bool is_subgroup_of(const PermutationGroup& big) const;

 private:
  struct Level {
    int base = -1;
    std::vector<int> orbit;              // discovery order, starts with base
    std::vector<int> slot;               // point -> index into orbit, or -1
    std::vector<Permutation> transversal;      // t maps base -> point
    std::vector<Permutation> transversal_inv;  // point -> base
  };

  PermutationGroup() = default;
  void build_chain();
  // Returns the level index where sifting stalled (levels_.size() if the
  // residue is the identity); residue is written in place.
  size_t sift(Permutation& residue, size_t from_level) const;

  int degree_ = 0;
  std::vector<Permutation> gens_;
  std::vector<Level> levels_;  // only levels with a nontrivial basic orbit
  unsigned long long order_ = 1;
};

/// R(G): x -> x*g for each named generator g; regular of order |G|.
PermutationGroup right_regular_representation(const FiniteGroup& g);

/// Restriction of each generator to an invariant point set, re-indexed by
/// sorted position.  Throws ValidationError if the set is not invariant.
PermutationGroup restrict_to(const PermutationGroup& a, std::span<const int> points);

/// No nontrivial proper block system on omega (Atkinson's minimal-block
/// closure from each point pair).  Requires a transitive action on omega;
/// actions on one or two points are primitive.
bool is_primitive_action(const PermutationGroup& a, std::span<const int> omega);

/// Every vertex stabilizer of a acts primitively on its out-neighborhood;
/// by vertex-transitivity one vertex suffices.  Requires a <= Aut(d) and a
/// vertex-transitive.
bool is_locally_primitive(const Digraph& d, const PermutationGroup& a);

/// Whether a is vertex- and arc-transitive on d (stabilizer transitive on
/// the out-neighborhood).  Requires a <= Aut(d).
bool is_arc_transitive(const Digraph& d, const PermutationGroup& a);

/// Some alpha in a with x^alpha = y, or nullopt.  Exhausts the elements of
/// a (ResourceError above cap), pruning by generator conjugation and
/// membership.
std::optional<Permutation> subgroup_transporter(
    const PermutationGroup& a, const PermutationGroup& x, const PermutationGroup& y,
    unsigned long long cap = kDefaultElementCap);

/// Normalizer of x in a by element enumeration; cap-guarded.
PermutationGroup normalizer_in(const PermutationGroup& a, const PermutationGroup& x,
                               unsigned long long cap = kDefaultElementCap);

/// All regular subgroups of a isomorphic to Q_4n, found as pairs (x, y)
/// satisfying |x| = 2n, y^2 = x^n, x^y = x^-1 with <x, y> regular on the
/// 4n-point domain; deduplicated as element sets.
std::vector<PermutationGroup> regular_dicyclic_subgroups(
    const PermutationGroup& a, int n, unsigned long long cap = kDefaultElementCap);

/// All regular cyclic subgroups of a of order = degree, deduplicated.
std::vector<PermutationGroup> regular_cyclic_subgroups(
    const PermutationGroup& a, unsigned long long cap = kDefaultElementCap);

}  // namespace qdci
