#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "qdci/digraph.hpp"
#include "qdci/group.hpp"
#include "qdci/perm.hpp"

namespace qdci {

/// Vertex coloring with contiguous ids from 0; the public normal form
/// orders ids by least vertex per class.
struct Coloring {
  std::vector<int> color_of;
  int num_colors = 0;
};

Coloring uniform_coloring(int n);

/// Coarsest refinement-stable coloring finer than `initial`: two vertices
/// share a color only if they agree on the multiset of (color, direction)
/// counts over out- and in-neighborhoods.  Returned ids are normalized by
/// least vertex; the partition itself is labeling-invariant.
Coloring refine(const Digraph& d, const Coloring& initial);

struct CanonOptions {
  int vertex_cap = 256;
  long long node_budget = 2'000'000;  // search-tree nodes per call
};

/// Relabeling-invariant certificate: isomorphic digraphs produce identical
/// bytes, and applying `labeling` to the input reproduces exactly the
/// adjacency encoded in `bytes`.
struct CanonicalForm {
  std::vector<uint8_t> bytes;  // versioned: tag 0x01, u16 n, packed rows
  Permutation labeling;        // vertex -> canonical position
  std::string hex() const;
};

/// Content-addressed memo for canonical forms.  Keys are the exact packed
/// adjacency (vertex count + rows), so a hit always compares full content;
/// concurrent insert/lookup allowed, last write wins with equal values.
class CanonicalCache {
 public:
  std::optional<CanonicalForm> lookup(const std::vector<uint8_t>& key) const;
  void insert(const std::vector<uint8_t>& key, const CanonicalForm& value);
  static std::vector<uint8_t> key_of(const Digraph& d);

 private:
  mutable std::mutex mu_;
  std::map<std::vector<uint8_t>, CanonicalForm> entries_;
};

/// Canonical form by individualization-refinement with lowest-index-first
/// branching in an invariantly chosen target cell, pruned by discovered
/// automorphisms.  Throws ResourceError over the vertex cap or node budget.
CanonicalForm canonical_form(const Digraph& d, const CanonOptions& opt = {},
                             CanonicalCache* cache = nullptr);

/// An arc-preserving vertex bijection, or nullopt; agrees with equality of
/// canonical forms.
std::optional<Permutation> find_isomorphism(const Digraph& a, const Digraph& b,
                                            const CanonOptions& opt = {},
                                            CanonicalCache* cache = nullptr);

/// The full automorphism group, built by iterated point stabilizers: per
/// level, one colored-isomorphism search per candidate vertex not yet in
/// the discovered orbit of the base vertex.
PermutationGroup automorphism_group(const Digraph& d, const CanonOptions& opt = {},
                                    CanonicalCache* cache = nullptr);

enum class BabaiVerdict { CI, NotCI, Inconclusive };

struct BabaiResult {
  BabaiVerdict verdict = BabaiVerdict::Inconclusive;
  std::string note;  // cap explanation when inconclusive
};

/// Babai's criterion: Cay(G,S) is a CI-digraph iff every regular subgroup
/// of its automorphism group isomorphic to G is conjugate to R(G).  G must
/// be generalized quaternion or cyclic.  Cap overruns yield Inconclusive.
BabaiResult babai_ci_test(const FiniteGroup& g, const ConnectionSet& s,
                          unsigned long long element_cap = kDefaultElementCap,
                          const CanonOptions& opt = {});

}  // namespace qdci
