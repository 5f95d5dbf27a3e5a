#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qdci/errors.hpp"
#include "qdci/group.hpp"

namespace qdci {

class PermutationGroup;

/// Loop-free digraph with dense bit-row adjacency.  All instances in scope
/// have at most a few hundred vertices, so one or two machine words per row
/// keep the refinement and isomorphism inner loops word-parallel.
class Digraph {
 public:
  explicit Digraph(int vertex_count);

  int vertex_count() const { return n_; }
  long long arc_count() const { return arcs_; }

  bool arc(int u, int v) const {
    return (rows_[static_cast<size_t>(u) * wpr_ + (v >> 6)] >> (v & 63)) & 1;
  }
  /// Adds (u, v); rejects loops and out-of-range endpoints.
  void add_arc(int u, int v);

  int out_degree(int u) const;
  int in_degree(int v) const;
  std::vector<int> out_neighbors(int u) const;
  std::vector<int> in_neighbors(int v) const;

  int words_per_row() const { return wpr_; }
  const uint64_t* row(int u) const { return rows_.data() + static_cast<size_t>(u) * wpr_; }

  /// Row-major adjacency packed 8 bits per byte (LSB first); content key
  /// for hashing and caching.
  std::vector<uint8_t> packed_rows() const;

  bool operator==(const Digraph&) const = default;

 private:
  int n_ = 0;
  int wpr_ = 0;
  long long arcs_ = 0;
  std::vector<uint64_t> rows_;
};

/// Cay(G, S): vertex i is the group element i, with an arc (g, s*g) for
/// every g in G and s in S.
Digraph cayley_digraph(const FiniteGroup& g, const ConnectionSet& s);

Digraph directed_cycle(int k);  // k >= 2 (the 2-cycle is the digon)
Digraph empty_digraph(int k);   // k >= 1
Digraph complete_digraph(int k);
Digraph complete_bipartite_digraph(int m, int n);  // arcs X -> Y only

/// Lexicoproduct X[Y]: vertices (x, y) ordered x-major; arc between
/// (x1,y1), (x2,y2) iff (x1,x2) is an arc of X, or x1 = x2 and (y1,y2) is
/// an arc of Y.
Digraph lexicoproduct(const Digraph& x, const Digraph& y);

/// Subdigraph induced on the given vertices, re-indexed in sorted order.
Digraph induced_subdigraph(const Digraph& d, std::span<const int> vertices);

/// Directed path between every ordered vertex pair; one vertex counts as
/// strongly connected.
bool is_strongly_connected(const Digraph& d);

/// Vertex partition into group orbits; block ids ordered by least member.
struct OrbitPartition {
  std::vector<int> block_of;
  std::vector<std::vector<int>> blocks;
};

/// Quotient digraph induced by the orbits of N: an arc between distinct
/// orbits iff some arc of d joins them.  Within-orbit arcs yield no loops.
std::pair<Digraph, OrbitPartition> orbit_quotient(const Digraph& d,
                                                  const PermutationGroup& n);

/// True iff every vertex has the same out-valency in d as its orbit has in
/// the quotient d_N.
bool is_cover(const Digraph& d, const PermutationGroup& n);

/// Text format: "DIGRAPH <vertex_count> <arc_count>" then one "u v" line
/// per arc, 0-based, sorted; writer and reader round-trip bit-exactly.
void write_digraph(std::ostream& os, const Digraph& d);
Digraph read_digraph(std::istream& is);
std::string digraph_to_text(const Digraph& d);
Digraph digraph_from_text(const std::string& text);

}  // namespace qdci
