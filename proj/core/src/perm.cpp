#include "qdci/perm.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace qdci {

Permutation::Permutation(int degree) : img_(degree) {
  std::iota(img_.begin(), img_.end(), 0);
}

Permutation::Permutation(std::vector<int> images) : img_(std::move(images)) {
  std::vector<char> seen(img_.size(), 0);
  for (int v : img_) {
    if (v < 0 || v >= static_cast<int>(img_.size()) || seen[v]) {
      throw ValidationError("Permutation: images are not a bijection");
    }
    seen[v] = 1;
  }
}

Permutation Permutation::then(const Permutation& next) const {
  std::vector<int> r(img_.size());
  for (size_t i = 0; i < img_.size(); ++i) r[i] = next.img_[img_[i]];
  Permutation p;
  p.img_ = std::move(r);
  return p;
}

Permutation Permutation::inverse() const {
  std::vector<int> r(img_.size());
  for (size_t i = 0; i < img_.size(); ++i) r[img_[i]] = static_cast<int>(i);
  Permutation p;
  p.img_ = std::move(r);
  return p;
}

Permutation Permutation::conjugated_by(const Permutation& g) const {
  return g.inverse().then(*this).then(g);
}

bool Permutation::is_identity() const {
  for (size_t i = 0; i < img_.size(); ++i) {
    if (img_[i] != static_cast<int>(i)) return false;
  }
  return true;
}

std::string Permutation::to_string() const {
  std::ostringstream os;
  os << 'p';
  for (size_t i = 0; i < img_.size(); ++i) os << ' ' << i << "->" << img_[i];
  return os.str();
}

namespace {

unsigned long long saturating_mul(unsigned long long a, unsigned long long b) {
  if (a != 0 && b > std::numeric_limits<unsigned long long>::max() / a) {
    return std::numeric_limits<unsigned long long>::max();
  }
  return a * b;
}

long long perm_order(const Permutation& p) {
  const int n = p.degree();
  std::vector<char> seen(n, 0);
  long long l = 1;
  for (int i = 0; i < n; ++i) {
    if (seen[i]) continue;
    int len = 0, j = i;
    while (!seen[j]) {
      seen[j] = 1;
      ++len;
      j = p.apply(j);
    }
    l = std::lcm(l, static_cast<long long>(len));
  }
  return l;
}

}  // namespace

PermutationGroup PermutationGroup::trivial(int degree) {
  return PermutationGroup(degree, {});
}

PermutationGroup::PermutationGroup(int degree, std::vector<Permutation> generators)
    : degree_(degree) {
  if (degree <= 0) throw ValidationError("PermutationGroup: degree must be positive");
  for (auto& g : generators) {
    if (g.degree() != degree) {
      throw ValidationError("PermutationGroup: generator degree mismatch");
    }
    if (!g.is_identity() && std::find(gens_.begin(), gens_.end(), g) == gens_.end()) {
      gens_.push_back(std::move(g));
    }
  }
  build_chain();
}

// Deterministic Schreier-Sims over the fixed ascending base 0..n-1.
//
// Level k holds the generators of the pointwise stabilizer of {0..k-1}
// known so far (级 genidx indexes into a shared strong pool), the basic
// orbit of k in discovery order with transversal elements mapping k to
// each point, and a per-orbit-point cursor of how many generators have
// been Schreier-processed against it.  The work loop keeps a dirty-level
// set and always services the deepest dirty level; every staged residue
// strictly extends some basic orbit, so the loop terminates with every
// Schreier generator sifting to the identity.
void PermutationGroup::build_chain() {
  levels_.resize(degree_);
  for (int k = 0; k < degree_; ++k) {
    Level& l = levels_[k];
    l.base = k;
    l.slot.assign(degree_, -1);
    l.slot[k] = 0;
    l.orbit = {k};
    l.transversal = {Permutation(degree_)};
    l.transversal_inv = {Permutation(degree_)};
  }

  std::vector<Permutation> pool;
  std::vector<std::vector<int>> genidx(degree_);
  std::vector<std::vector<int>> processed(degree_);
  for (int k = 0; k < degree_; ++k) processed[k] = {0};
  std::vector<char> dirty(degree_, 0);

  auto stage = [&](Permutation h) {
    size_t stall = degree_;
    for (int k = 0; k < degree_; ++k) {
      const int q = h.apply(k);
      if (q == k) continue;
      const Level& l = levels_[k];
      if (l.slot[q] < 0) {
        stall = static_cast<size_t>(k);
        break;
      }
      h = h.then(l.transversal_inv[l.slot[q]]);
    }
    if (stall == static_cast<size_t>(degree_)) return;  // identity residue: member
    const int id = static_cast<int>(pool.size());
    pool.push_back(std::move(h));
    for (size_t k = 0; k <= stall; ++k) {
      genidx[k].push_back(id);
      dirty[k] = 1;
    }
  };

  for (const auto& g : gens_) stage(g);

  while (true) {
    int k = -1;
    for (int i = degree_ - 1; i >= 0; --i) {
      if (dirty[i]) {
        k = i;
        break;
      }
    }
    if (k < 0) break;
    dirty[k] = 0;
    Level& l = levels_[k];
    bool done = false;
    while (!done) {
      done = true;
      for (size_t i = 0; i < l.orbit.size(); ++i) {
        while (processed[k][i] < static_cast<int>(genidx[k].size())) {
          const int gi = processed[k][i]++;
          const Permutation& g = pool[genidx[k][gi]];
          const int p = l.orbit[i];
          const int q = g.apply(p);
          if (l.slot[q] < 0) {
            l.slot[q] = static_cast<int>(l.orbit.size());
            l.orbit.push_back(q);
            l.transversal.push_back(l.transversal[i].then(g));
            l.transversal_inv.push_back(l.transversal.back().inverse());
            processed[k].push_back(0);
            done = false;
          } else {
            Permutation schreier =
                l.transversal[i].then(g).then(l.transversal_inv[l.slot[q]]);
            if (!schreier.is_identity()) stage(std::move(schreier));
          }
        }
      }
      // A stage on this level appends to genidx[k]; earlier orbit
      // positions then have unprocessed pairs, so sweep again.  Stages at
      // deeper levels stay dirty for the outer loop.
      if (dirty[k]) {
        dirty[k] = 0;
        done = false;
      }
    }
  }

  order_ = 1;
  for (const auto& l : levels_) {
    order_ = saturating_mul(order_, l.orbit.size());
  }
}

size_t PermutationGroup::sift(Permutation& residue, size_t from_level) const {
  for (size_t k = from_level; k < levels_.size(); ++k) {
    const Level& l = levels_[k];
    const int q = residue.apply(l.base);
    if (q == l.base) continue;
    if (l.slot[q] < 0) return k;
    residue = residue.then(l.transversal_inv[l.slot[q]]);
  }
  return levels_.size();
}

bool PermutationGroup::contains(const Permutation& p) const {
  if (p.degree() != degree_) return false;
  Permutation r = p;
  return sift(r, 0) == levels_.size() && r.is_identity();
}

OrbitPartition PermutationGroup::orbits() const {
  std::vector<int> parent(degree_);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& g : gens_) {
    for (int i = 0; i < degree_; ++i) {
      const int a = find(i), b = find(g.apply(i));
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  OrbitPartition part;
  part.block_of.assign(degree_, -1);
  for (int i = 0; i < degree_; ++i) {
    const int r = find(i);
    if (part.block_of[r] < 0) {
      part.block_of[r] = static_cast<int>(part.blocks.size());
      part.blocks.emplace_back();
    }
    part.block_of[i] = part.block_of[r];
    part.blocks[part.block_of[i]].push_back(i);
  }
  return part;
}

std::vector<int> PermutationGroup::orbit_of(int u) const {
  if (u < 0 || u >= degree_) throw ValidationError("orbit_of: point out of range");
  std::vector<char> seen(degree_, 0);
  std::vector<int> queue{u};
  seen[u] = 1;
  for (size_t h = 0; h < queue.size(); ++h) {
    for (const auto& g : gens_) {
      const int v = g.apply(queue[h]);
      if (!seen[v]) {
        seen[v] = 1;
        queue.push_back(v);
      }
    }
  }
  std::sort(queue.begin(), queue.end());
  return queue;
}

bool PermutationGroup::is_transitive() const {
  return static_cast<int>(orbit_of(0).size()) == degree_;
}

bool PermutationGroup::is_regular() const {
  return is_transitive() && order() == static_cast<unsigned long long>(degree_);
}

PermutationGroup PermutationGroup::point_stabilizer(int u) const {
  if (u < 0 || u >= degree_) throw ValidationError("point_stabilizer: point out of range");
  // Schreier generators over the orbit of u.
  std::vector<int> slot(degree_, -1);
  std::vector<int> orbit{u};
  std::vector<Permutation> trans{Permutation(degree_)};
  slot[u] = 0;
  for (size_t i = 0; i < orbit.size(); ++i) {
    for (const auto& g : gens_) {
      const int q = g.apply(orbit[i]);
      if (slot[q] < 0) {
        slot[q] = static_cast<int>(orbit.size());
        orbit.push_back(q);
        trans.push_back(trans[i].then(g));
      }
    }
  }
  std::vector<Permutation> sgens;
  for (size_t i = 0; i < orbit.size(); ++i) {
    for (const auto& g : gens_) {
      const int q = g.apply(orbit[i]);
      Permutation s = trans[i].then(g).then(trans[slot[q]].inverse());
      if (!s.is_identity() && std::find(sgens.begin(), sgens.end(), s) == sgens.end()) {
        sgens.push_back(std::move(s));
      }
    }
  }
  return PermutationGroup(degree_, std::move(sgens));
}

std::vector<Permutation> PermutationGroup::elements(unsigned long long cap) const {
  std::vector<Permutation> out;
  out.reserve(static_cast<size_t>(std::min(order(), cap)));
  find_element(
      [&](const Permutation& p) {
        out.push_back(p);
        return false;
      },
      cap);
  return out;
}

std::optional<Permutation> PermutationGroup::find_element(
    const std::function<bool(const Permutation&)>& accept,
    unsigned long long cap) const {
  if (order() > cap) {
    throw ResourceError("PermutationGroup: order " + std::to_string(order()) +
                        " exceeds element enumeration cap " + std::to_string(cap));
  }
  std::vector<const Level*> active;
  for (const auto& l : levels_) {
    if (l.orbit.size() > 1) active.push_back(&l);
  }
  // Element = t_deepest then ... then t_shallowest; recurse deepest first.
  std::optional<Permutation> found;
  std::function<bool(int, const Permutation&)> rec = [&](int idx,
                                                         const Permutation& acc) {
    if (idx < 0) {
      if (accept(acc)) {
        found = acc;
        return true;
      }
      return false;
    }
    for (const auto& t : active[static_cast<size_t>(idx)]->transversal) {
      if (rec(idx - 1, acc.then(t))) return true;
    }
    return false;
  };
  rec(static_cast<int>(active.size()) - 1, Permutation(degree_));
  return found;
}

bool PermutationGroup::is_subgroup_of(const PermutationGroup& big) const {
  for (const auto& g : gens_) {
    if (!big.contains(g)) return false;
  }
  return true;
}

PermutationGroup right_regular_representation(const FiniteGroup& g) {
  std::vector<Permutation> gens;
  for (int gen : g.generators()) {
    std::vector<int> img(g.order());
    for (int x = 0; x < g.order(); ++x) img[x] = g.mul(x, gen);
    gens.emplace_back(std::move(img));
  }
  return PermutationGroup(g.order(), std::move(gens));
}

PermutationGroup restrict_to(const PermutationGroup& a, std::span<const int> points) {
  std::vector<int> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.empty()) throw ValidationError("restrict_to: empty point set");
  std::vector<int> pos(a.degree(), -1);
  for (size_t i = 0; i < pts.size(); ++i) {
    if (pts[i] < 0 || pts[i] >= a.degree()) {
      throw ValidationError("restrict_to: point out of range");
    }
    pos[pts[i]] = static_cast<int>(i);
  }
  std::vector<Permutation> gens;
  for (const auto& g : a.generators()) {
    std::vector<int> img(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) {
      const int q = g.apply(pts[i]);
      if (pos[q] < 0) {
        throw ValidationError("restrict_to: point set is not invariant");
      }
      img[i] = pos[q];
    }
    gens.emplace_back(std::move(img));
  }
  return PermutationGroup(static_cast<int>(pts.size()), std::move(gens));
}

namespace {

// Atkinson's minimal block system containing {a, b}: union-find closure of
// the pair under the generators; returns the size of the block of a.
int minimal_block_size(const std::vector<Permutation>& gens, int n, int a, int b) {
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<std::pair<int, int>> queue;
  parent[std::max(a, b)] = std::min(a, b);
  queue.emplace_back(a, b);
  for (size_t h = 0; h < queue.size(); ++h) {
    const auto [x, y] = queue[h];
    for (const auto& g : gens) {
      const int u = find(g.apply(x)), v = find(g.apply(y));
      if (u != v) {
        parent[std::max(u, v)] = std::min(u, v);
        queue.emplace_back(u, v);
      }
    }
  }
  const int root = find(a);
  int size = 0;
  for (int i = 0; i < n; ++i) {
    if (find(i) == root) ++size;
  }
  return size;
}

}  // namespace

bool is_primitive_action(const PermutationGroup& a, std::span<const int> omega) {
  PermutationGroup act = restrict_to(a, omega);
  const int n = act.degree();
  if (n <= 2) {
    if (n == 2 && !act.is_transitive()) {
      throw ValidationError("is_primitive_action: action is not transitive on omega");
    }
    return true;
  }
  if (!act.is_transitive()) {
    throw ValidationError("is_primitive_action: action is not transitive on omega");
  }
  for (int b = 1; b < n; ++b) {
    const int size = minimal_block_size(act.generators(), n, 0, b);
    if (size > 1 && size < n) return false;
  }
  return true;
}

namespace {

bool preserves_arcs(const Digraph& d, const Permutation& g) {
  for (int u = 0; u < d.vertex_count(); ++u) {
    for (int v : d.out_neighbors(u)) {
      if (!d.arc(g.apply(u), g.apply(v))) return false;
    }
  }
  return true;
}

}  // namespace

bool is_arc_transitive(const Digraph& d, const PermutationGroup& a) {
  for (const auto& g : a.generators()) {
    if (!preserves_arcs(d, g)) {
      throw ValidationError("is_arc_transitive: group does not preserve arcs");
    }
  }
  if (!a.is_transitive()) return false;
  const auto nbrs = d.out_neighbors(0);
  if (nbrs.empty()) return true;
  const PermutationGroup stab = a.point_stabilizer(0);
  const auto orbit = stab.orbit_of(nbrs[0]);
  return std::includes(orbit.begin(), orbit.end(), nbrs.begin(), nbrs.end());
}

bool is_locally_primitive(const Digraph& d, const PermutationGroup& a) {
  for (const auto& g : a.generators()) {
    if (!preserves_arcs(d, g)) {
      throw ValidationError("is_locally_primitive: group does not preserve arcs");
    }
  }
  if (!a.is_transitive()) {
    throw ValidationError("is_locally_primitive: group is not vertex-transitive");
  }
  const auto nbrs = d.out_neighbors(0);
  if (nbrs.size() <= 1) return true;
  const PermutationGroup stab = a.point_stabilizer(0);
  // The stabilizer preserves the out-neighborhood; primitivity requires
  // transitivity on it first.
  PermutationGroup act = restrict_to(stab, nbrs);
  if (!act.is_transitive()) return false;
  std::vector<int> all(act.degree());
  std::iota(all.begin(), all.end(), 0);
  return is_primitive_action(act, all);
}

std::optional<Permutation> subgroup_transporter(const PermutationGroup& a,
                                                const PermutationGroup& x,
                                                const PermutationGroup& y,
                                                unsigned long long cap) {
  if (x.degree() != a.degree() || y.degree() != a.degree()) {
    throw ValidationError("subgroup_transporter: domain sizes do not match");
  }
  if (x.order() != y.order()) return std::nullopt;
  bool equal = true;
  for (const auto& g : x.generators()) {
    if (!y.contains(g)) {
      equal = false;
      break;
    }
  }
  if (equal) return Permutation(a.degree());
  return a.find_element(
      [&](const Permutation& alpha) {
        for (const auto& g : x.generators()) {
          if (!y.contains(g.conjugated_by(alpha))) return false;
        }
        return true;
      },
      cap);
}

PermutationGroup normalizer_in(const PermutationGroup& a, const PermutationGroup& x,
                               unsigned long long cap) {
  if (x.degree() != a.degree()) {
    throw ValidationError("normalizer_in: domain sizes do not match");
  }
  // Thin as we go: a normalizing element already in the span adds nothing.
  std::vector<Permutation> gens;
  PermutationGroup span = PermutationGroup::trivial(a.degree());
  a.find_element(
      [&](const Permutation& alpha) {
        for (const auto& g : x.generators()) {
          if (!x.contains(g.conjugated_by(alpha))) return false;
        }
        if (!span.contains(alpha)) {
          gens.push_back(alpha);
          span = PermutationGroup(a.degree(), gens);
        }
        return false;
      },
      cap);
  return span;
}

namespace {

std::vector<int> subgroup_signature(const std::vector<Permutation>& elements) {
  std::vector<std::vector<int>> imgs;
  imgs.reserve(elements.size());
  for (const auto& p : elements) imgs.push_back(p.images());
  std::sort(imgs.begin(), imgs.end());
  std::vector<int> flat;
  for (const auto& v : imgs) flat.insert(flat.end(), v.begin(), v.end());
  return flat;
}

}  // namespace

std::vector<PermutationGroup> regular_dicyclic_subgroups(const PermutationGroup& a,
                                                         int n,
                                                         unsigned long long cap) {
  if (n < 3) throw ValidationError("regular_dicyclic_subgroups: n must be >= 3");
  if (a.degree() != 4 * n) {
    throw ValidationError("regular_dicyclic_subgroups: domain size must be 4n");
  }
  std::vector<PermutationGroup> out;
  if (a.order() < static_cast<unsigned long long>(4 * n)) return out;

  std::vector<Permutation> xs, ys;
  a.find_element(
      [&](const Permutation& p) {
        const int o = perm_order(p);
        if (o == 2 * n) xs.push_back(p);
        if (o == 4) ys.push_back(p);
        return false;
      },
      cap);

  // Bucket y by y^2 so only pairs with y^2 = x^n are tried.
  std::map<std::vector<int>, std::vector<size_t>> by_square;
  for (size_t i = 0; i < ys.size(); ++i) {
    by_square[ys[i].then(ys[i]).images()].push_back(i);
  }

  std::set<std::vector<int>> seen;
  unsigned long long pair_checks = 0;
  for (const auto& x : xs) {
    const Permutation xn = [&] {
      Permutation p(a.degree());
      for (int i = 0; i < n; ++i) p = p.then(x);
      return p;
    }();
    const auto it = by_square.find(xn.images());
    if (it == by_square.end()) continue;
    const Permutation xinv = x.inverse();
    for (size_t yi : it->second) {
      if (++pair_checks > 50'000'000ULL) {
        throw ResourceError("regular_dicyclic_subgroups: pair search too large");
      }
      const Permutation& y = ys[yi];
      if (x.conjugated_by(y) != xinv) continue;
      // <x> has index 2 once y lies outside it; membership in <x> is a
      // cheap power scan.
      bool in_powers = false;
      Permutation p(a.degree());
      std::vector<Permutation> elems;
      for (int i = 0; i < 2 * n; ++i) {
        if (p == y) in_powers = true;
        elems.push_back(p);
        p = p.then(x);
      }
      if (in_powers) continue;
      for (int i = 0; i < 2 * n; ++i) elems.push_back(elems[i].then(y));
      // Regularity: 4n elements acting transitively on 4n points.
      std::vector<char> hit(a.degree(), 0);
      int count = 0;
      for (const auto& e : elems) {
        if (!hit[e.apply(0)]) {
          hit[e.apply(0)] = 1;
          ++count;
        }
      }
      if (count != 4 * n) continue;
      auto sig = subgroup_signature(elems);
      if (seen.insert(std::move(sig)).second) {
        out.emplace_back(a.degree(), std::vector<Permutation>{x, y});
      }
    }
  }
  return out;
}

std::vector<PermutationGroup> regular_cyclic_subgroups(const PermutationGroup& a,
                                                       unsigned long long cap) {
  const int n = a.degree();
  std::vector<PermutationGroup> out;
  if (a.order() < static_cast<unsigned long long>(n)) return out;
  std::set<std::vector<int>> seen;
  a.find_element(
      [&](const Permutation& p) {
        if (perm_order(p) != n) return false;
        // A single n-cycle is exactly an order-n element whose orbit of 0
        // covers the domain.
        std::vector<char> hit(n, 0);
        int q = 0, cnt = 0;
        while (!hit[q]) {
          hit[q] = 1;
          ++cnt;
          q = p.apply(q);
        }
        if (cnt != n) return false;
        std::vector<Permutation> elems;
        Permutation e(n);
        for (int i = 0; i < n; ++i) {
          elems.push_back(e);
          e = e.then(p);
        }
        auto sig = subgroup_signature(elems);
        if (seen.insert(std::move(sig)).second) {
          out.emplace_back(n, std::vector<Permutation>{p});
        }
        return false;
      },
      cap);
  return out;
}

}  // namespace qdci
