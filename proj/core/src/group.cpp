#include "qdci/group.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <thread>

namespace qdci {

namespace {

int mod(long long v, int m) {
  long long r = v % m;
  return static_cast<int>(r < 0 ? r + m : r);
}

}  // namespace

FiniteGroup FiniteGroup::quaternion(int n) {
  if (n < 3) {
    throw ValidationError(
        "quaternion(n) requires n >= 3: Q_4 (cyclic) and Q_8 are excluded "
        "small cases");
  }
  FiniteGroup g;
  g.kind_ = GroupKind::Quaternion;
  g.order_ = 4 * n;
  g.param_ = n;
  g.gens_ = {1, 2 * n};  // a, b
  return g;
}

FiniteGroup FiniteGroup::cyclic(int k) {
  if (k <= 0) throw ValidationError("cyclic(k) requires k >= 1");
  FiniteGroup g;
  g.kind_ = GroupKind::Cyclic;
  g.order_ = k;
  g.param_ = k;
  if (k > 1) g.gens_ = {1};
  return g;
}

FiniteGroup FiniteGroup::from_table(std::vector<std::vector<int>> table) {
  const int n = static_cast<int>(table.size());
  if (n == 0 || n > kDefaultAutEnumerationCap) {
    throw ValidationError("from_table: order must be in [1, 200]");
  }
  for (const auto& row : table) {
    if (static_cast<int>(row.size()) != n) {
      throw ValidationError("from_table: table is not square");
    }
    for (int v : row) {
      if (v < 0 || v >= n) throw ValidationError("from_table: entry out of range");
    }
  }
  for (int x = 0; x < n; ++x) {
    if (table[0][x] != x || table[x][0] != x) {
      throw ValidationError("from_table: index 0 is not a two-sided identity");
    }
  }
  std::vector<int> inv(n, -1);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (table[x][y] == 0) {
        if (table[y][x] != 0) {
          throw ValidationError("from_table: one-sided inverse found");
        }
        inv[x] = y;
      }
    }
    if (inv[x] < 0) throw ValidationError("from_table: element without inverse");
  }
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      for (int z = 0; z < n; ++z) {
        if (table[table[x][y]][z] != table[x][table[y][z]]) {
          throw ValidationError("from_table: multiplication not associative");
        }
      }
    }
  }

  FiniteGroup g;
  g.kind_ = GroupKind::Table;
  g.order_ = n;
  g.param_ = n;
  g.inv_ = std::move(inv);
  g.table_ = std::move(table);

  // Greedy small generating set: repeatedly adjoin the least element
  // outside the closure so far.
  std::vector<int> closure{0};
  while (static_cast<int>(closure.size()) < n) {
    int next = -1;
    for (int x = 1; x < n; ++x) {
      if (!std::binary_search(closure.begin(), closure.end(), x)) {
        next = x;
        break;
      }
    }
    g.gens_.push_back(next);
    closure = g.generated_subgroup(g.gens_);
  }
  return g;
}

int FiniteGroup::mul(int x, int y) const {
  switch (kind_) {
    case GroupKind::Cyclic:
      return mod(static_cast<long long>(x) + y, order_);
    case GroupKind::Quaternion: {
      const int tn = 2 * param_;
      const bool xb = x >= tn, yb = y >= tn;
      const int xi = xb ? x - tn : x, yi = yb ? y - tn : y;
      if (!xb && !yb) return mod(xi + yi, tn);
      if (xb && !yb) return mod(xi - yi, tn) + tn;
      if (!xb && yb) return mod(xi + yi, tn) + tn;
      return mod(xi - yi + param_, tn);
    }
    case GroupKind::Table:
      return table_[x][y];
  }
  return 0;
}

int FiniteGroup::inverse(int x) const {
  switch (kind_) {
    case GroupKind::Cyclic:
      return mod(-x, order_);
    case GroupKind::Quaternion: {
      const int tn = 2 * param_;
      if (x < tn) return mod(-x, tn);
      return mod((x - tn) + param_, tn) + tn;  // (a^i b)^-1 = a^{i+n} b
    }
    case GroupKind::Table:
      return inv_[x];
  }
  return 0;
}

int FiniteGroup::power(int x, long long e) const {
  int base = x;
  if (e < 0) {
    base = inverse(x);
    e = -e;
  }
  int acc = 0;
  while (e > 0) {
    if (e & 1) acc = mul(acc, base);
    base = mul(base, base);
    e >>= 1;
  }
  return acc;
}

int FiniteGroup::element_order(int g) const {
  if (g < 0 || g >= order_) throw ValidationError("element_order: index out of range");
  int t = 1;
  int y = g;
  while (y != 0) {
    y = mul(y, g);
    ++t;
  }
  return t;
}

int FiniteGroup::conjugate(int x, int y) const {
  return mul(mul(inverse(y), x), y);
}

std::string FiniteGroup::descriptor() const {
  switch (kind_) {
    case GroupKind::Quaternion:
      return "Q4n:" + std::to_string(param_);
    case GroupKind::Cyclic:
      return "Z:" + std::to_string(param_);
    case GroupKind::Table:
      return "T:" + std::to_string(order_);
  }
  return {};
}

std::string FiniteGroup::element_name(int g) const {
  if (g < 0 || g >= order_) throw ValidationError("element_name: index out of range");
  if (kind_ == GroupKind::Table) {
    return g == 0 ? "1" : "g" + std::to_string(g);
  }
  if (g == 0) return "1";
  if (kind_ == GroupKind::Cyclic) {
    return g == 1 ? "a" : "a^" + std::to_string(g);
  }
  const int tn = 2 * param_;
  if (g < tn) return g == 1 ? "a" : "a^" + std::to_string(g);
  const int i = g - tn;
  if (i == 0) return "b";
  if (i == 1) return "a*b";
  return "a^" + std::to_string(i) + "*b";
}

std::vector<int> FiniteGroup::generated_subgroup(std::span<const int> gens) const {
  std::vector<char> in(order_, 0);
  in[0] = 1;
  std::vector<int> queue{0};
  std::vector<int> gen_list;
  for (int g : gens) {
    if (g < 0 || g >= order_) {
      throw ValidationError("generated_subgroup: element out of range");
    }
    gen_list.push_back(g);
    if (!in[g]) {
      in[g] = 1;
      queue.push_back(g);
    }
  }
  for (size_t head = 0; head < queue.size(); ++head) {
    const int x = queue[head];
    for (int g : gen_list) {
      const int y = mul(x, g);
      if (!in[y]) {
        in[y] = 1;
        queue.push_back(y);
      }
    }
  }
  std::vector<int> out;
  for (int x = 0; x < order_; ++x) {
    if (in[x]) out.push_back(x);
  }
  return out;
}

bool FiniteGroup::is_subgroup(std::span<const int> elems) const {
  if (elems.empty() || elems[0] != 0) return false;
  if (!std::is_sorted(elems.begin(), elems.end())) return false;
  for (int x : elems) {
    if (x < 0 || x >= order_) return false;
    for (int y : elems) {
      if (!std::binary_search(elems.begin(), elems.end(), mul(x, y))) return false;
    }
  }
  return true;
}

bool FiniteGroup::operator==(const FiniteGroup& o) const {
  if (kind_ != o.kind_ || order_ != o.order_ || param_ != o.param_) return false;
  return kind_ != GroupKind::Table || table_ == o.table_;
}

ConnectionSet::ConnectionSet(const FiniteGroup& g, std::vector<int> members)
    : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  for (int x : members_) {
    if (x < 0 || x >= g.order()) {
      throw ValidationError("ConnectionSet: element out of range");
    }
  }
  if (!members_.empty() && members_[0] == 0) {
    throw ValidationError("ConnectionSet: identity is not allowed in a connection set");
  }
}

bool ConnectionSet::contains(int g) const {
  return std::binary_search(members_.begin(), members_.end(), g);
}

Automorphism::Automorphism(const FiniteGroup& g, std::vector<int> images)
    : images_(std::move(images)) {
  const int n = g.order();
  if (static_cast<int>(images_.size()) != n) {
    throw ValidationError("Automorphism: image vector has wrong length");
  }
  if (images_[0] != 0) throw ValidationError("Automorphism: identity not fixed");
  std::vector<char> seen(n, 0);
  for (int v : images_) {
    if (v < 0 || v >= n || seen[v]) {
      throw ValidationError("Automorphism: images are not a bijection");
    }
    seen[v] = 1;
  }
  for (int x = 0; x < n; ++x) {
    for (int y : g.generators()) {
      if (images_[g.mul(x, y)] != g.mul(images_[x], images_[y])) {
        throw ValidationError("Automorphism: map is not multiplicative");
      }
    }
  }
}

std::vector<int> Automorphism::apply_set(std::span<const int> xs) const {
  std::vector<int> out;
  out.reserve(xs.size());
  for (int x : xs) out.push_back(images_[x]);
  std::sort(out.begin(), out.end());
  return out;
}

Automorphism Automorphism::inverted(const FiniteGroup& g) const {
  std::vector<int> inv(images_.size());
  for (size_t i = 0; i < images_.size(); ++i) inv[images_[i]] = static_cast<int>(i);
  return Automorphism(g, std::move(inv));
}

namespace {

// BFS word tree over the generators: expr[x] = (parent, generator index),
// so any generator-image assignment extends to a unique candidate map.
struct WordTree {
  std::vector<int> bfs_order;
  std::vector<int> parent;
  std::vector<int> via_gen;
};

WordTree build_word_tree(const FiniteGroup& g) {
  const int n = g.order();
  WordTree t;
  t.parent.assign(n, -1);
  t.via_gen.assign(n, -1);
  std::vector<char> seen(n, 0);
  seen[0] = 1;
  t.bfs_order.push_back(0);
  const auto& gens = g.generators();
  for (size_t head = 0; head < t.bfs_order.size(); ++head) {
    const int x = t.bfs_order[head];
    for (size_t gi = 0; gi < gens.size(); ++gi) {
      const int y = g.mul(x, gens[gi]);
      if (!seen[y]) {
        seen[y] = 1;
        t.parent[y] = x;
        t.via_gen[y] = static_cast<int>(gi);
        t.bfs_order.push_back(y);
      }
    }
  }
  return t;
}

}  // namespace

std::vector<Automorphism> automorphisms(const FiniteGroup& g, int enumeration_cap) {
  const int n = g.order();
  if (n > enumeration_cap) {
    throw ResourceError("automorphisms: |G| = " + std::to_string(n) +
                        " exceeds enumeration cap " + std::to_string(enumeration_cap));
  }
  const auto& gens = g.generators();
  if (gens.empty()) {
    return {Automorphism(g, {0})};  // trivial group
  }
  const WordTree tree = build_word_tree(g);

  // Candidate images per generator: matching element order is necessary.
  std::vector<std::vector<int>> cands(gens.size());
  double tuple_estimate = 1.0;
  for (size_t gi = 0; gi < gens.size(); ++gi) {
    const int target = g.element_order(gens[gi]);
    for (int x = 1; x < n; ++x) {
      if (g.element_order(x) == target) cands[gi].push_back(x);
    }
    tuple_estimate *= static_cast<double>(cands[gi].size());
  }
  if (tuple_estimate * n > 5e9) {
    throw ResourceError("automorphisms: candidate image space too large");
  }

  std::vector<Automorphism> out;
  std::vector<int> choice(gens.size(), 0);
  std::vector<int> img(n);
  std::vector<char> hit(n);
  const size_t r = gens.size();

  // Odometer over candidate tuples, lexicographic, hence deterministic order.
  std::vector<size_t> idx(r, 0);
  while (true) {
    for (size_t gi = 0; gi < r; ++gi) choice[gi] = cands[gi][idx[gi]];

    // Extend along the word tree, then verify bijectivity and
    // multiplicativity against every (x, generator) pair.
    img[0] = 0;
    for (size_t k = 1; k < tree.bfs_order.size(); ++k) {
      const int x = tree.bfs_order[k];
      img[x] = g.mul(img[tree.parent[x]], choice[tree.via_gen[x]]);
    }
    std::fill(hit.begin(), hit.end(), 0);
    bool ok = true;
    for (int x = 0; x < n && ok; ++x) {
      if (hit[img[x]]) ok = false;
      hit[img[x]] = 1;
    }
    for (int x = 0; x < n && ok; ++x) {
      for (size_t gi = 0; gi < r && ok; ++gi) {
        if (img[g.mul(x, gens[gi])] != g.mul(img[x], choice[gi])) ok = false;
      }
    }
    if (ok) out.emplace_back(g, img);

    size_t pos = r;
    while (pos > 0) {
      --pos;
      if (++idx[pos] < cands[pos].size()) break;
      idx[pos] = 0;
      if (pos == 0) return out;
    }
  }
}

unsigned long long binomial_checked(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned long long r = 1;
  for (int i = 1; i <= k; ++i) {
    const unsigned long long num = static_cast<unsigned long long>(n - k + i);
    if (r > std::numeric_limits<unsigned long long>::max() / num) {
      throw ResourceError("binomial overflows 64 bits");
    }
    r = r * num / i;
  }
  return r;
}

unsigned long long subset_orbit_count(const FiniteGroup& g, int m) {
  const auto auts = automorphisms(g);
  const int n = g.order();
  if (m < 0 || m > n - 1) return 0;
  // Burnside: average over Aut(G) of the number of fixed m-subsets of
  // G \ {1}; a subset is fixed iff it is a union of cycles of sigma.
  unsigned long long total = 0;
  for (const auto& sigma : auts) {
    std::vector<int> cycle_lengths;
    std::vector<char> seen(n, 0);
    seen[0] = 1;
    for (int x = 1; x < n; ++x) {
      if (seen[x]) continue;
      int len = 0, y = x;
      while (!seen[y]) {
        seen[y] = 1;
        ++len;
        y = sigma.apply(y);
      }
      cycle_lengths.push_back(len);
    }
    std::vector<unsigned long long> dp(m + 1, 0);
    dp[0] = 1;
    for (int len : cycle_lengths) {
      for (int s = m; s >= len; --s) {
        const unsigned long long add = dp[s - len];
        if (dp[s] > std::numeric_limits<unsigned long long>::max() - add) {
          throw ResourceError("subset_orbit_count overflows 64 bits");
        }
        dp[s] += add;
      }
    }
    if (total > std::numeric_limits<unsigned long long>::max() - dp[m]) {
      throw ResourceError("subset_orbit_count overflows 64 bits");
    }
    total += dp[m];
  }
  return total / auts.size();
}

namespace {

// Advance an ascending m-combination over {1, .., n-1}; false at the end.
bool next_combination(std::vector<int>& c, int n) {
  const int m = static_cast<int>(c.size());
  int i = m - 1;
  while (i >= 0 && c[i] == n - m + i) --i;
  if (i < 0) return false;
  ++c[i];
  for (int j = i + 1; j < m; ++j) c[j] = c[j - 1] + 1;
  return true;
}

// Combination of the given rank in lexicographic order over m-subsets of
// {1, .., n-1} (combinatorial number system).
std::vector<int> unrank_combination(unsigned long long rank, int n, int m) {
  std::vector<int> c(m);
  int lo = 1;
  for (int i = 0; i < m; ++i) {
    for (int v = lo;; ++v) {
      const unsigned long long cnt = binomial_checked(n - 1 - v, m - 1 - i);
      if (rank < cnt) {
        c[i] = v;
        lo = v + 1;
        break;
      }
      rank -= cnt;
    }
  }
  return c;
}

}  // namespace

OrbitRepsDetail aut_orbit_reps_detail(const FiniteGroup& g, int m, int workers,
                                      unsigned long long scan_budget) {
  const int n = g.order();
  if (m < 1 || m > n - 1) {
    throw ValidationError("aut_orbit_reps: m must be in [1, |G|-1]");
  }
  const unsigned long long total = binomial_checked(n - 1, m);
  if (total > scan_budget) {
    throw ResourceError("aut_orbit_reps: C(" + std::to_string(n - 1) + "," +
                        std::to_string(m) + ") = " + std::to_string(total) +
                        " exceeds the scan budget (orbit count " +
                        std::to_string(subset_orbit_count(g, m)) + ")");
  }

  const auto auts = automorphisms(g);
  const unsigned long long aut_order = auts.size();
  std::vector<const std::vector<int>*> images;
  images.reserve(auts.size());
  for (const auto& a : auts) images.push_back(&a.images());

  struct Chunk {
    std::vector<std::vector<int>> reps;
    std::vector<unsigned long long> sizes;
  };
  workers = std::max(1, workers);
  const int nw = static_cast<int>(
      std::min<unsigned long long>(workers, std::max<unsigned long long>(1, total)));
  std::vector<Chunk> chunks(nw);

  auto scan = [&](int w) {
    const unsigned long long lo = total * w / nw;
    const unsigned long long hi = total * (w + 1) / nw;
    if (lo >= hi) return;
    std::vector<int> subset = unrank_combination(lo, n, m);
    std::vector<int> image(m);
    Chunk& out = chunks[w];
    for (unsigned long long r = lo; r < hi; ++r) {
      unsigned long long stab = 0;
      bool least = true;
      for (const auto* sigma : images) {
        for (int i = 0; i < m; ++i) image[i] = (*sigma)[subset[i]];
        std::sort(image.begin(), image.end());
        const auto cmp = std::lexicographical_compare_three_way(
            image.begin(), image.end(), subset.begin(), subset.end());
        if (cmp < 0) {
          least = false;
          break;
        }
        if (cmp == 0) ++stab;
      }
      if (least) {
        out.reps.push_back(subset);
        out.sizes.push_back(aut_order / stab);
      }
      if (r + 1 < hi) next_combination(subset, n);
    }
  };

  if (nw == 1) {
    scan(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(nw);
    for (int w = 0; w < nw; ++w) threads.emplace_back(scan, w);
    for (auto& t : threads) t.join();
  }

  OrbitRepsDetail out;
  out.total_subsets = total;
  for (auto& ch : chunks) {
    for (size_t i = 0; i < ch.reps.size(); ++i) {
      out.reps.emplace_back(g, std::move(ch.reps[i]));
      out.orbit_sizes.push_back(ch.sizes[i]);
    }
  }
  return out;
}

std::vector<ConnectionSet> aut_orbit_reps(const FiniteGroup& g, int m) {
  return aut_orbit_reps_detail(g, m).reps;
}

std::optional<Automorphism> extend_to_automorphism(
    const FiniteGroup& g, std::span<const int> h1, std::span<const int> h2,
    const std::vector<std::pair<int, int>>& iso, int enumeration_cap) {
  if (!g.is_subgroup(h1)) throw ValidationError("extend_to_automorphism: H1 is not a subgroup");
  if (!g.is_subgroup(h2)) throw ValidationError("extend_to_automorphism: H2 is not a subgroup");
  if (iso.size() != h1.size()) {
    throw ValidationError("extend_to_automorphism: map does not cover H1");
  }
  std::vector<int> map(g.order(), -1);
  std::vector<char> hit(g.order(), 0);
  for (auto [x, y] : iso) {
    if (!std::binary_search(h1.begin(), h1.end(), x) ||
        !std::binary_search(h2.begin(), h2.end(), y)) {
      throw ValidationError("extend_to_automorphism: pair outside H1 x H2");
    }
    if (map[x] != -1 || hit[y]) {
      throw ValidationError("extend_to_automorphism: map is not a bijection");
    }
    map[x] = y;
    hit[y] = 1;
  }
  if (h1.size() != h2.size()) {
    throw ValidationError("extend_to_automorphism: |H1| != |H2|");
  }
  for (int x : h1) {
    for (int y : h1) {
      if (map[g.mul(x, y)] != g.mul(map[x], map[y])) {
        throw ValidationError("extend_to_automorphism: map is not a homomorphism");
      }
    }
  }
  for (const auto& sigma : automorphisms(g, enumeration_cap)) {
    bool match = true;
    for (int x : h1) {
      if (sigma.apply(x) != map[x]) {
        match = false;
        break;
      }
    }
    if (match) return sigma;
  }
  return std::nullopt;
}

}  // namespace qdci
