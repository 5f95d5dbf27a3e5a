#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qdci/errors.hpp"

namespace qdci {

enum class GroupKind { Quaternion, Cyclic, Table };

/// A finite group on element indices 0..order-1, with index 0 the identity.
///
/// Two structured backends give O(1) multiplication:
///   - Quaternion(n): the generalized quaternion (dicyclic) group
///         Q_4n = <a, b | a^{2n} = 1, b^2 = a^n, b^{-1} a b = a^{-1}>,
///     n >= 3.  Index i < 2n is a^i; index 2n + i is a^i * b.
///   - Cyclic(k): Z_k, index i is a^i.
/// A multiplication-table backend covers arbitrary small groups (used for
/// subgroups re-indexed as groups in their own right).
class FiniteGroup {
 public:
  static FiniteGroup quaternion(int n);
  static FiniteGroup cyclic(int k);
  /// table[x][y] = x*y on indices; validated (identity at 0, associativity,
  /// inverses) up to order 200.
  static FiniteGroup from_table(std::vector<std::vector<int>> table);

  GroupKind kind() const { return kind_; }
  int order() const { return order_; }
  /// n for Q_4n, k for Z_k, order for table groups.
  int parameter() const { return param_; }

  int mul(int x, int y) const;
  int inverse(int x) const;
  int power(int x, long long e) const;
  int element_order(int g) const;
  int conjugate(int x, int y) const;  // y^-1 * x * y

  /// Named generators: {a, b} for quaternion, {a} for cyclic, a computed
  /// small generating set for table groups.
  const std::vector<int>& generators() const { return gens_; }

  /// "Q4n:<n>", "Z:<k>", or "T:<order>".
  std::string descriptor() const;
  /// "1", "a", "a^i", "b", "a^i*b".  Table groups render "g<i>".
  std::string element_name(int g) const;

  /// Closure of gens (plus identity) under multiplication, sorted.
  std::vector<int> generated_subgroup(std::span<const int> gens) const;
  /// True iff elems is a sorted subgroup (contains 0, closed, inverse-closed).
  bool is_subgroup(std::span<const int> elems) const;

  bool operator==(const FiniteGroup& o) const;

 private:
  FiniteGroup() = default;

  GroupKind kind_ = GroupKind::Cyclic;
  int order_ = 1;
  int param_ = 1;
  std::vector<int> gens_;
  std::vector<std::vector<int>> table_;  // Table backend only
  std::vector<int> inv_;                 // Table backend only
};

/// A subset S of G \ {1}: sorted, distinct, identity excluded.
class ConnectionSet {
 public:
  ConnectionSet() = default;
  /// Validates range and 1 ∉ S; sorts and deduplicates.
  ConnectionSet(const FiniteGroup& g, std::vector<int> members);

  const std::vector<int>& members() const { return members_; }
  int size() const { return static_cast<int>(members_.size()); }
  bool contains(int g) const;
  bool operator==(const ConnectionSet&) const = default;
  auto operator<=>(const ConnectionSet&) const = default;

 private:
  std::vector<int> members_;
};

/// A group automorphism stored as the image vector on element indices.
class Automorphism {
 public:
  /// Validates images(0)=0, bijectivity, and images(x*y)=images(x)*images(y).
  Automorphism(const FiniteGroup& g, std::vector<int> images);

  int apply(int x) const { return images_[x]; }
  const std::vector<int>& images() const { return images_; }
  /// Sorted image of a set of elements.
  std::vector<int> apply_set(std::span<const int> xs) const;
  Automorphism inverted(const FiniteGroup& g) const;

  bool operator==(const Automorphism&) const = default;

 private:
  std::vector<int> images_;
};

inline constexpr int kDefaultAutEnumerationCap = 200;

/// The complete automorphism group of G, in deterministic order, found by
/// generator-image search: candidate images matching generator orders are
/// extended to all of G along a BFS word tree and verified multiplicative
/// and bijective.  Throws ResourceError if |G| exceeds the cap.
std::vector<Automorphism> automorphisms(
    const FiniteGroup& g, int enumeration_cap = kDefaultAutEnumerationCap);

/// One representative per Aut(G)-orbit of m-subsets of G \ {1}; each
/// representative is the lexicographically least member of its orbit, and
/// representatives are listed in ascending lexicographic order.
std::vector<ConnectionSet> aut_orbit_reps(const FiniteGroup& g, int m);

struct OrbitRepsDetail {
  std::vector<ConnectionSet> reps;              // lex ascending
  std::vector<unsigned long long> orbit_sizes;  // |Aut| / |stabilizer|
  unsigned long long total_subsets = 0;         // C(|G|-1, m)
};

/// Representative scan with orbit sizes; workers split the combination
/// sequence by rank so output order is independent of worker count.
/// Throws ResourceError when C(|G|-1, m) exceeds scan_budget.
OrbitRepsDetail aut_orbit_reps_detail(
    const FiniteGroup& g, int m, int workers = 1,
    unsigned long long scan_budget = 200'000'000ULL);

/// Exact number of Aut(G)-orbits of m-subsets of G \ {1}, by Burnside's
/// lemma over cycle types.  Throws ResourceError on counts over 2^63.
unsigned long long subset_orbit_count(const FiniteGroup& g, int m);

/// C(n, k) in unsigned 64-bit; throws ResourceError on overflow.
unsigned long long binomial_checked(int n, int k);

/// Some automorphism of G restricting to the given isomorphism H1 -> H2
/// (pairs (h, image)), or nullopt.  H1, H2 must be subgroups and the map a
/// validated isomorphism between them.
std::optional<Automorphism> extend_to_automorphism(
    const FiniteGroup& g, std::span<const int> h1, std::span<const int> h2,
    const std::vector<std::pair<int, int>>& iso,
    int enumeration_cap = kDefaultAutEnumerationCap);

}  // namespace qdci
