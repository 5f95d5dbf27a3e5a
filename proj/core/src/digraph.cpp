#include "qdci/digraph.hpp"

#include <bit>
#include <istream>
#include <ostream>
#include <sstream>

#include "qdci/perm.hpp"

namespace qdci {

Digraph::Digraph(int vertex_count) : n_(vertex_count) {
  if (vertex_count <= 0) throw ValidationError("Digraph: vertex count must be positive");
  wpr_ = (n_ + 63) / 64;
  rows_.assign(static_cast<size_t>(n_) * wpr_, 0);
}

void Digraph::add_arc(int u, int v) {
  if (u < 0 || u >= n_ || v < 0 || v >= n_) {
    throw ValidationError("add_arc: vertex out of range");
  }
  if (u == v) throw ValidationError("add_arc: loops are not allowed");
  uint64_t& w = rows_[static_cast<size_t>(u) * wpr_ + (v >> 6)];
  const uint64_t bit = 1ULL << (v & 63);
  if (!(w & bit)) {
    w |= bit;
    ++arcs_;
  }
}

int Digraph::out_degree(int u) const {
  int d = 0;
  const uint64_t* r = row(u);
  for (int w = 0; w < wpr_; ++w) d += std::popcount(r[w]);
  return d;
}

int Digraph::in_degree(int v) const {
  int d = 0;
  for (int u = 0; u < n_; ++u) d += arc(u, v);
  return d;
}

std::vector<int> Digraph::out_neighbors(int u) const {
  std::vector<int> out;
  const uint64_t* r = row(u);
  for (int w = 0; w < wpr_; ++w) {
    uint64_t bits = r[w];
    while (bits) {
      out.push_back(w * 64 + std::countr_zero(bits));
      bits &= bits - 1;
    }
  }
  return out;
}

std::vector<int> Digraph::in_neighbors(int v) const {
  std::vector<int> in;
  for (int u = 0; u < n_; ++u) {
    if (arc(u, v)) in.push_back(u);
  }
  return in;
}

std::vector<uint8_t> Digraph::packed_rows() const {
  const int bpr = (n_ + 7) / 8;
  std::vector<uint8_t> out(static_cast<size_t>(n_) * bpr, 0);
  for (int u = 0; u < n_; ++u) {
    for (int v : out_neighbors(u)) {
      out[static_cast<size_t>(u) * bpr + (v >> 3)] |= uint8_t(1u << (v & 7));
    }
  }
  return out;
}

Digraph cayley_digraph(const FiniteGroup& g, const ConnectionSet& s) {
  if (s.contains(0)) {
    throw ValidationError("cayley_digraph: identity in connection set");
  }
  Digraph d(g.order());
  for (int x = 0; x < g.order(); ++x) {
    for (int gen : s.members()) {
      if (gen >= g.order()) {
        throw ValidationError("cayley_digraph: connection set element out of range");
      }
      d.add_arc(x, g.mul(gen, x));
    }
  }
  return d;
}

Digraph directed_cycle(int k) {
  if (k < 2) throw ValidationError("directed_cycle: length must be >= 2");
  Digraph d(k);
  for (int i = 0; i < k; ++i) d.add_arc(i, (i + 1) % k);
  return d;
}

Digraph empty_digraph(int k) {
  if (k < 1) throw ValidationError("empty_digraph: size must be >= 1");
  return Digraph(k);
}

Digraph complete_digraph(int k) {
  if (k < 1) throw ValidationError("complete_digraph: size must be >= 1");
  Digraph d(k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      if (i != j) d.add_arc(i, j);
    }
  }
  return d;
}

Digraph complete_bipartite_digraph(int m, int n) {
  if (m < 1 || n < 1) throw ValidationError("complete_bipartite_digraph: sides must be >= 1");
  Digraph d(m + n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) d.add_arc(i, m + j);
  }
  return d;
}

Digraph lexicoproduct(const Digraph& x, const Digraph& y) {
  const int nx = x.vertex_count(), ny = y.vertex_count();
  Digraph d(nx * ny);
  for (int x1 = 0; x1 < nx; ++x1) {
    for (int x2 = 0; x2 < nx; ++x2) {
      if (x.arc(x1, x2)) {
        for (int y1 = 0; y1 < ny; ++y1) {
          for (int y2 = 0; y2 < ny; ++y2) {
            d.add_arc(x1 * ny + y1, x2 * ny + y2);
          }
        }
      }
    }
  }
  for (int x1 = 0; x1 < nx; ++x1) {
    for (int y1 = 0; y1 < ny; ++y1) {
      for (int y2 : y.out_neighbors(y1)) {
        d.add_arc(x1 * ny + y1, x1 * ny + y2);
      }
    }
  }
  return d;
}

Digraph induced_subdigraph(const Digraph& d, std::span<const int> vertices) {
  std::vector<int> xs(vertices.begin(), vertices.end());
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  for (int v : xs) {
    if (v < 0 || v >= d.vertex_count()) {
      throw ValidationError("induced_subdigraph: vertex out of range");
    }
  }
  if (xs.empty()) throw ValidationError("induced_subdigraph: empty vertex set");
  Digraph sub(static_cast<int>(xs.size()));
  for (size_t i = 0; i < xs.size(); ++i) {
    for (size_t j = 0; j < xs.size(); ++j) {
      if (i != j && d.arc(xs[i], xs[j])) {
        sub.add_arc(static_cast<int>(i), static_cast<int>(j));
      }
    }
  }
  return sub;
}

namespace {

std::vector<char> reachable(const Digraph& d, int from, bool reverse) {
  std::vector<char> seen(d.vertex_count(), 0);
  std::vector<int> stack{from};
  seen[from] = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v = 0; v < d.vertex_count(); ++v) {
      const bool adj = reverse ? d.arc(v, u) : d.arc(u, v);
      if (adj && !seen[v]) {
        seen[v] = 1;
        stack.push_back(v);
      }
    }
  }
  return seen;
}

}  // namespace

bool is_strongly_connected(const Digraph& d) {
  if (d.vertex_count() == 1) return true;
  const auto fwd = reachable(d, 0, false);
  const auto bwd = reachable(d, 0, true);
  for (int v = 0; v < d.vertex_count(); ++v) {
    if (!fwd[v] || !bwd[v]) return false;
  }
  return true;
}

std::pair<Digraph, OrbitPartition> orbit_quotient(const Digraph& d,
                                                  const PermutationGroup& n) {
  if (n.degree() != d.vertex_count()) {
    throw ValidationError("orbit_quotient: group degree does not match vertex count");
  }
  OrbitPartition part = n.orbits();
  const int nb = static_cast<int>(part.blocks.size());
  Digraph q(nb);
  for (int u = 0; u < d.vertex_count(); ++u) {
    for (int v : d.out_neighbors(u)) {
      const int bu = part.block_of[u], bv = part.block_of[v];
      if (bu != bv && !q.arc(bu, bv)) q.add_arc(bu, bv);
    }
  }
  return {std::move(q), std::move(part)};
}

bool is_cover(const Digraph& d, const PermutationGroup& n) {
  auto [q, part] = orbit_quotient(d, n);
  for (int u = 0; u < d.vertex_count(); ++u) {
    if (d.out_degree(u) != q.out_degree(part.block_of[u])) return false;
  }
  return true;
}

void write_digraph(std::ostream& os, const Digraph& d) {
  os << "DIGRAPH " << d.vertex_count() << ' ' << d.arc_count() << '\n';
  for (int u = 0; u < d.vertex_count(); ++u) {
    for (int v : d.out_neighbors(u)) os << u << ' ' << v << '\n';
  }
}

Digraph read_digraph(std::istream& is) {
  std::string tag;
  int n = 0;
  long long arcs = 0;
  if (!(is >> tag >> n >> arcs) || tag != "DIGRAPH") {
    throw ValidationError("read_digraph: missing DIGRAPH header");
  }
  if (n <= 0 || arcs < 0) throw ValidationError("read_digraph: bad header counts");
  Digraph d(n);
  for (long long i = 0; i < arcs; ++i) {
    int u = 0, v = 0;
    if (!(is >> u >> v)) throw ValidationError("read_digraph: truncated arc list");
    d.add_arc(u, v);
  }
  if (d.arc_count() != arcs) throw ValidationError("read_digraph: duplicate arcs in file");
  return d;
}

std::string digraph_to_text(const Digraph& d) {
  std::ostringstream os;
  write_digraph(os, d);
  return os.str();
}

Digraph digraph_from_text(const std::string& text) {
  std::istringstream is(text);
  return read_digraph(is);
}

}  // namespace qdci
