#include "qdci/ci.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <thread>

namespace qdci {

std::optional<Automorphism> cayley_isomorphic(const FiniteGroup& g,
                                              const ConnectionSet& s,
                                              const ConnectionSet& t) {
  if (s.size() != t.size()) return std::nullopt;
  for (const auto& sigma : automorphisms(g)) {
    if (sigma.apply_set(s.members()) == t.members()) return sigma;
  }
  return std::nullopt;
}

namespace {

// Lexicographically least member of the Aut(G)-orbit of s.
std::vector<int> orbit_rep_of(const FiniteGroup& g, const ConnectionSet& s) {
  std::vector<int> best = s.members();
  for (const auto& sigma : automorphisms(g)) {
    auto img = sigma.apply_set(s.members());
    if (img < best) best = std::move(img);
  }
  return best;
}

// forms[i] = canonical form of Cay(g, reps[i]); worker count only affects
// scheduling, results are stored by index.
std::vector<CanonicalForm> canonicalize_all(const FiniteGroup& g,
                                            const std::vector<ConnectionSet>& reps,
                                            const SurveyOptions& opt) {
  std::vector<CanonicalForm> forms(reps.size());
  const int workers = std::max(1, opt.workers);
  if (workers == 1 || reps.size() < 2) {
    for (size_t i = 0; i < reps.size(); ++i) {
      forms[i] = canonical_form(cayley_digraph(g, reps[i]), opt.canon, opt.cache);
    }
    return forms;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  auto work = [&] {
    try {
      while (true) {
        const size_t i = next.fetch_add(1);
        if (i >= reps.size()) return;
        forms[i] = canonical_form(cayley_digraph(g, reps[i]), opt.canon, opt.cache);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(err_mu);
      if (!err) err = std::current_exception();
    }
  };
  std::vector<std::thread> threads;
  for (int w = 0; w < workers; ++w) threads.emplace_back(work);
  for (auto& t : threads) t.join();
  if (err) std::rethrow_exception(err);
  return forms;
}

Permutation certified_isomorphism(const FiniteGroup& g, const ConnectionSet& s,
                                  const ConnectionSet& t, const CanonicalForm& cs,
                                  const CanonicalForm& ct) {
  const Permutation iso = cs.labeling.then(ct.labeling.inverse());
  const Digraph ds = cayley_digraph(g, s), dt = cayley_digraph(g, t);
  for (int u = 0; u < ds.vertex_count(); ++u) {
    for (int v : ds.out_neighbors(u)) {
      if (!dt.arc(iso.apply(u), iso.apply(v))) {
        throw std::logic_error("survey: certificate isomorphism failed verification");
      }
    }
  }
  return iso;
}

void check_budget(const FiniteGroup& g, int m, const SurveyOptions& opt) {
  const unsigned long long orbit_count = subset_orbit_count(g, m);
  if (orbit_count > opt.orbit_budget) {
    throw ResourceError("survey: orbit representative count " +
                        std::to_string(orbit_count) + " exceeds budget " +
                        std::to_string(opt.orbit_budget) +
                        "; use the Babai test or a smaller m");
  }
}

}  // namespace

SurveyReport mdci_survey(const FiniteGroup& g, int m, const SurveyOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  check_budget(g, m, opt);

  SurveyReport rep;
  rep.group = g.descriptor();
  rep.m = m;

  OrbitRepsDetail detail = aut_orbit_reps_detail(g, m, std::max(1, opt.workers));
  rep.total_subsets = detail.total_subsets;
  rep.orbit_rep_count = detail.reps.size();
  rep.reps = std::move(detail.reps);
  rep.orbit_sizes = std::move(detail.orbit_sizes);

  const auto forms = canonicalize_all(g, rep.reps, opt);

  std::map<std::vector<uint8_t>, std::vector<int>> buckets;
  for (size_t i = 0; i < forms.size(); ++i) {
    buckets[forms[i].bytes].push_back(static_cast<int>(i));
  }
  for (const auto& [bytes, ids] : buckets) {
    SurveyBucket b;
    b.canon_hex = CanonicalForm{bytes, Permutation(1)}.hex();
    b.orbit_ids = ids;
    rep.buckets.push_back(std::move(b));
    if (ids.size() > 1) {
      rep.mdci_holds = false;
      for (size_t j = 1; j < ids.size(); ++j) {
        CiVerdict v;
        v.subset = rep.reps[ids[0]];
        v.is_ci = false;
        v.violating_t = rep.reps[ids[j]];
        v.digraph_isomorphism = certified_isomorphism(
            g, rep.reps[ids[0]], rep.reps[ids[j]], forms[ids[0]], forms[ids[j]]);
        v.method = CiMethod::CanonicalSurvey;
        rep.violations.push_back(std::move(v));
      }
    }
  }

  if (opt.measure_time) {
    rep.wall_time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - t0)
                           .count();
  }
  return rep;
}

CiVerdict ci_subset_test(const FiniteGroup& g, const ConnectionSet& s,
                         const SurveyOptions& opt) {
  if (s.size() == 0) {
    throw ValidationError("ci_subset_test: the empty set is not surveyed");
  }
  check_budget(g, s.size(), opt);

  CiVerdict verdict;
  verdict.subset = s;
  verdict.method = CiMethod::CanonicalSurvey;

  const CanonicalForm canon_s =
      canonical_form(cayley_digraph(g, s), opt.canon, opt.cache);
  const std::vector<int> rep_s = orbit_rep_of(g, s);

  OrbitRepsDetail detail =
      aut_orbit_reps_detail(g, s.size(), std::max(1, opt.workers));
  for (const auto& rep : detail.reps) {
    if (rep.members() == rep_s) continue;
    const CanonicalForm canon_t =
        canonical_form(cayley_digraph(g, rep), opt.canon, opt.cache);
    if (canon_t.bytes != canon_s.bytes) continue;
    verdict.is_ci = false;
    verdict.violating_t = rep;
    verdict.digraph_isomorphism =
        certified_isomorphism(g, s, rep, canon_s, canon_t);
    return verdict;
  }
  verdict.is_ci = true;
  return verdict;
}

bool verify_ci_certificate(const FiniteGroup& g, const CiVerdict& verdict) {
  if (verdict.is_ci) return false;  // nothing to certify
  if (!verdict.violating_t || !verdict.digraph_isomorphism) return false;
  const ConnectionSet& s = verdict.subset;
  const ConnectionSet& t = *verdict.violating_t;
  if (s.size() != t.size()) return false;

  const Digraph ds = cayley_digraph(g, s), dt = cayley_digraph(g, t);
  const Permutation& iso = *verdict.digraph_isomorphism;
  if (iso.degree() != ds.vertex_count()) return false;
  if (ds.arc_count() != dt.arc_count()) return false;
  for (int u = 0; u < ds.vertex_count(); ++u) {
    for (int v : ds.out_neighbors(u)) {
      if (!dt.arc(iso.apply(u), iso.apply(v))) return false;
    }
  }
  // Equal arc counts and a bijection mapping arcs into arcs: onto as well.
  return !cayley_isomorphic(g, s, t).has_value();
}

}  // namespace qdci
