#include "qdci/iso.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <numeric>

namespace qdci {

Coloring uniform_coloring(int n) {
  Coloring c;
  c.color_of.assign(n, 0);
  c.num_colors = 1;
  return c;
}

namespace {

// One refinement fixed point over invariant color ids: vertices are
// re-sorted by (color, out-count row, in-count row) and renumbered in that
// order.  Counts are indexed by color id, so the result depends only on
// the initial ids and the digraph structure, never on vertex labels.
std::pair<std::vector<int>, int> refine_invariant(const Digraph& d,
                                                  std::vector<int> col) {
  const int n = d.vertex_count();
  while (true) {
    // Normalize ids to 0..k-1 preserving order.
    {
      std::vector<int> vals(col);
      std::sort(vals.begin(), vals.end());
      vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
      for (int& c : col) {
        c = static_cast<int>(std::lower_bound(vals.begin(), vals.end(), c) -
                             vals.begin());
      }
    }
    int ncol = 0;
    for (int c : col) ncol = std::max(ncol, c + 1);

    std::vector<std::vector<int>> sig(n);
    for (int v = 0; v < n; ++v) {
      sig[v].assign(2 * ncol, 0);
      for (int w : d.out_neighbors(v)) ++sig[v][col[w]];
      for (int w : d.in_neighbors(v)) ++sig[v][ncol + col[w]];
    }
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (col[a] != col[b]) return col[a] < col[b];
      return sig[a] < sig[b];
    });
    std::vector<int> next(n);
    int nnext = 0;
    for (int i = 0; i < n; ++i) {
      if (i > 0 && (col[order[i]] != col[order[i - 1]] ||
                    sig[order[i]] != sig[order[i - 1]])) {
        ++nnext;
      }
      next[order[i]] = nnext;
    }
    ++nnext;
    if (nnext == ncol) return {std::move(col), ncol};
    col = std::move(next);
  }
}

std::vector<int> individualized(const std::vector<int>& col, int v) {
  std::vector<int> out(col.size());
  for (size_t i = 0; i < col.size(); ++i) out[i] = col[i] * 2 + 1;
  out[v] = col[v] * 2;
  return out;
}

// Target cell: smallest non-singleton color class, ties to lowest color
// id; members ascending.
std::vector<int> target_cell(const std::vector<int>& col, int ncol) {
  std::vector<int> size(ncol, 0);
  for (int c : col) ++size[c];
  int best = -1;
  for (int c = 0; c < ncol; ++c) {
    if (size[c] < 2) continue;
    if (best < 0 || size[c] < size[best]) best = c;
  }
  std::vector<int> cell;
  if (best < 0) return cell;
  for (size_t v = 0; v < col.size(); ++v) {
    if (col[v] == best) cell.push_back(static_cast<int>(v));
  }
  return cell;
}

// Certificate bytes for a discrete coloring: version tag, vertex count,
// optional per-position initial colors (colored variant), packed rows.
std::vector<uint8_t> leaf_bytes(const Digraph& d, const std::vector<int>& pos_of,
                                const std::vector<int>* initial_colors) {
  const int n = d.vertex_count();
  std::vector<int> vertex_at(n);
  for (int v = 0; v < n; ++v) vertex_at[pos_of[v]] = v;
  const int bpr = (n + 7) / 8;
  std::vector<uint8_t> bytes;
  bytes.reserve(3 + (initial_colors ? 2 * n : 0) + static_cast<size_t>(n) * bpr);
  bytes.push_back(initial_colors ? 0x02 : 0x01);
  bytes.push_back(static_cast<uint8_t>(n & 0xff));
  bytes.push_back(static_cast<uint8_t>((n >> 8) & 0xff));
  if (initial_colors) {
    for (int i = 0; i < n; ++i) {
      const int c = (*initial_colors)[vertex_at[i]];
      bytes.push_back(static_cast<uint8_t>(c & 0xff));
      bytes.push_back(static_cast<uint8_t>((c >> 8) & 0xff));
    }
  }
  const size_t base = bytes.size();
  bytes.resize(base + static_cast<size_t>(n) * bpr, 0);
  for (int i = 0; i < n; ++i) {
    const int u = vertex_at[i];
    for (int w : d.out_neighbors(u)) {
      const int j = pos_of[w];
      bytes[base + static_cast<size_t>(i) * bpr + (j >> 3)] |=
          static_cast<uint8_t>(1u << (j & 7));
    }
  }
  return bytes;
}

struct CanonSearch {
  const Digraph& d;
  const CanonOptions& opt;
  const std::vector<int>* initial_colors = nullptr;  // colored variant
  std::vector<uint8_t> best;
  std::vector<int> best_pos;
  std::vector<int> best_vertex_at;
  std::vector<std::vector<int>> autgens;
  long long nodes = 0;

  void run(const std::vector<int>& start) {
    std::vector<int> prefix;
    search(start, prefix);
  }

  void search(const std::vector<int>& col_in, std::vector<int>& prefix) {
    if (++nodes > opt.node_budget) {
      throw ResourceError("canonical_form: node budget exceeded");
    }
    auto [col, ncol] = refine_invariant(d, col_in);
    const int n = d.vertex_count();
    if (ncol == n) {
      auto bytes = leaf_bytes(d, col, initial_colors);
      if (best.empty() || bytes < best) {
        best = std::move(bytes);
        best_pos = col;
        best_vertex_at.assign(n, 0);
        for (int v = 0; v < n; ++v) best_vertex_at[best_pos[v]] = v;
      } else if (bytes == best) {
        // Same certificate from a second labeling: the composition is an
        // automorphism.
        std::vector<int> g(n);
        for (int v = 0; v < n; ++v) g[v] = best_vertex_at[col[v]];
        bool ident = true;
        for (int v = 0; v < n; ++v) ident = ident && g[v] == v;
        if (!ident) autgens.push_back(std::move(g));
      }
      return;
    }

    const std::vector<int> cell = target_cell(col, ncol);
    // Union-find over automorphisms fixing the individualized prefix
    // pointwise: branches inside one orbit explore identical subtrees.
    std::vector<int> uf(n);
    std::iota(uf.begin(), uf.end(), 0);
    auto find = [&](int x) {
      while (uf[x] != x) x = uf[x] = uf[uf[x]];
      return x;
    };
    auto rebuild_uf = [&] {
      std::iota(uf.begin(), uf.end(), 0);
      for (const auto& g : autgens) {
        bool fixes = true;
        for (int p : prefix) {
          if (g[p] != p) {
            fixes = false;
            break;
          }
        }
        if (!fixes) continue;
        for (int v = 0; v < n; ++v) {
          int a = find(v), b = find(g[v]);
          if (a != b) uf[std::max(a, b)] = std::min(a, b);
        }
      }
    };

    std::vector<int> tried;
    for (int v : cell) {
      rebuild_uf();
      bool skip = false;
      for (int t : tried) {
        if (find(t) == find(v)) {
          skip = true;
          break;
        }
      }
      if (skip) continue;
      tried.push_back(v);
      prefix.push_back(v);
      search(individualized(col, v), prefix);
      prefix.pop_back();
    }
  }
};

CanonicalForm run_canon(const Digraph& d, const CanonOptions& opt,
                        const std::vector<int>* initial_colors) {
  if (d.vertex_count() > opt.vertex_cap) {
    throw ResourceError("canonical_form: vertex count " +
                        std::to_string(d.vertex_count()) + " exceeds cap " +
                        std::to_string(opt.vertex_cap));
  }
  CanonSearch s{d, opt};
  s.initial_colors = initial_colors;
  std::vector<int> start =
      initial_colors ? *initial_colors : std::vector<int>(d.vertex_count(), 0);
  s.run(start);
  CanonicalForm cf;
  cf.bytes = std::move(s.best);
  cf.labeling = Permutation(std::move(s.best_pos));
  return cf;
}

}  // namespace

Coloring refine(const Digraph& d, const Coloring& initial) {
  const int n = d.vertex_count();
  if (static_cast<int>(initial.color_of.size()) != n) {
    throw ValidationError("refine: coloring size does not match digraph");
  }
  for (int c : initial.color_of) {
    if (c < 0 || c >= std::max(1, initial.num_colors)) {
      throw ValidationError("refine: color id out of range");
    }
  }
  auto [col, ncol] = refine_invariant(d, initial.color_of);
  // Public normal form: renumber classes by least vertex.
  std::vector<int> first(ncol, -1);
  std::vector<int> order;
  for (int v = 0; v < n; ++v) {
    if (first[col[v]] < 0) {
      first[col[v]] = v;
      order.push_back(col[v]);
    }
  }
  std::vector<int> rank(ncol, -1);
  for (size_t i = 0; i < order.size(); ++i) rank[order[i]] = static_cast<int>(i);
  Coloring out;
  out.color_of.resize(n);
  for (int v = 0; v < n; ++v) out.color_of[v] = rank[col[v]];
  out.num_colors = ncol;
  return out;
}

std::string CanonicalForm::hex() const {
  static const char* digits = "0123456789abcdef";
  std::string s;
  s.reserve(bytes.size() * 2);
  for (uint8_t b : bytes) {
    s.push_back(digits[b >> 4]);
    s.push_back(digits[b & 0xf]);
  }
  return s;
}

std::vector<uint8_t> CanonicalCache::key_of(const Digraph& d) {
  std::vector<uint8_t> key;
  const int n = d.vertex_count();
  key.push_back(static_cast<uint8_t>(n & 0xff));
  key.push_back(static_cast<uint8_t>((n >> 8) & 0xff));
  auto rows = d.packed_rows();
  key.insert(key.end(), rows.begin(), rows.end());
  return key;
}

std::optional<CanonicalForm> CanonicalCache::lookup(
    const std::vector<uint8_t>& key) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void CanonicalCache::insert(const std::vector<uint8_t>& key,
                            const CanonicalForm& value) {
  std::lock_guard<std::mutex> lock(mu_);
  entries_[key] = value;
}

CanonicalForm canonical_form(const Digraph& d, const CanonOptions& opt,
                             CanonicalCache* cache) {
  std::vector<uint8_t> key;
  if (cache) {
    key = CanonicalCache::key_of(d);
    if (auto hit = cache->lookup(key)) return *hit;
  }
  CanonicalForm cf = run_canon(d, opt, nullptr);
  if (cache) cache->insert(key, cf);
  return cf;
}

std::optional<Permutation> find_isomorphism(const Digraph& a, const Digraph& b,
                                            const CanonOptions& opt,
                                            CanonicalCache* cache) {
  if (a.vertex_count() != b.vertex_count() || a.arc_count() != b.arc_count()) {
    return std::nullopt;
  }
  const CanonicalForm ca = canonical_form(a, opt, cache);
  const CanonicalForm cb = canonical_form(b, opt, cache);
  if (ca.bytes != cb.bytes) return std::nullopt;
  const Permutation m = ca.labeling.then(cb.labeling.inverse());
  for (int u = 0; u < a.vertex_count(); ++u) {
    for (int v : a.out_neighbors(u)) {
      if (!b.arc(m.apply(u), m.apply(v))) {
        throw std::logic_error("find_isomorphism: certificate mismatch");
      }
    }
  }
  return m;
}

PermutationGroup automorphism_group(const Digraph& d, const CanonOptions& opt,
                                    CanonicalCache* cache) {
  const int n = d.vertex_count();
  if (n > opt.vertex_cap) {
    throw ResourceError("automorphism_group: vertex count exceeds cap");
  }
  (void)cache;
  std::vector<Permutation> gens;

  // Orbit of v0 under the generators found so far.
  auto orbit_set = [&](int v0) {
    std::vector<char> in(n, 0);
    std::vector<int> queue{v0};
    in[v0] = 1;
    for (size_t h = 0; h < queue.size(); ++h) {
      for (const auto& g : gens) {
        const int w = g.apply(queue[h]);
        if (!in[w]) {
          in[w] = 1;
          queue.push_back(w);
        }
      }
    }
    return in;
  };

  std::vector<int> base(n, 0);
  while (true) {
    auto [col, ncol] = refine_invariant(d, base);
    if (ncol == n) break;
    const std::vector<int> cell = target_cell(col, ncol);
    const int v0 = cell[0];
    const CanonicalForm cf0 = [&] {
      auto ind = individualized(col, v0);
      return run_canon(d, opt, &ind);
    }();
    std::vector<int> vert0(n);
    for (int v = 0; v < n; ++v) vert0[cf0.labeling.apply(v)] = v;

    for (size_t i = 1; i < cell.size(); ++i) {
      const int v = cell[i];
      if (orbit_set(v0)[v]) continue;
      auto ind = individualized(col, v);
      const CanonicalForm cf = run_canon(d, opt, &ind);
      if (cf.bytes != cf0.bytes) continue;
      std::vector<int> img(n);
      for (int u = 0; u < n; ++u) img[u] = vert0[cf.labeling.apply(u)];
      Permutation sigma{std::move(img)};
      for (int u = 0; u < n; ++u) {
        for (int w : d.out_neighbors(u)) {
          if (!d.arc(sigma.apply(u), sigma.apply(w))) {
            throw std::logic_error("automorphism_group: bad transversal map");
          }
        }
      }
      gens.push_back(std::move(sigma));
    }
    base = individualized(col, v0);
  }
  return PermutationGroup(n, std::move(gens));
}

BabaiResult babai_ci_test(const FiniteGroup& g, const ConnectionSet& s,
                          unsigned long long element_cap, const CanonOptions& opt) {
  if (g.kind() == GroupKind::Table) {
    throw ValidationError("babai_ci_test: group must be quaternion or cyclic");
  }
  BabaiResult r;
  try {
    const Digraph gamma = cayley_digraph(g, s);
    const PermutationGroup a = automorphism_group(gamma, opt);
    if (a.order() > element_cap) {
      r.verdict = BabaiVerdict::Inconclusive;
      r.note = "|Aut| = " + std::to_string(a.order()) + " exceeds element cap " +
               std::to_string(element_cap);
      return r;
    }
    const PermutationGroup rg = right_regular_representation(g);
    const auto subs =
        g.kind() == GroupKind::Quaternion
            ? regular_dicyclic_subgroups(a, g.parameter(), element_cap)
            : regular_cyclic_subgroups(a, element_cap);
    for (const auto& x : subs) {
      if (!subgroup_transporter(a, x, rg, element_cap)) {
        r.verdict = BabaiVerdict::NotCI;
        return r;
      }
    }
    r.verdict = BabaiVerdict::CI;
  } catch (const ResourceError& e) {
    r.verdict = BabaiVerdict::Inconclusive;
    r.note = e.what();
  }
  return r;
}

}  // namespace qdci
