#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qdci/digraph.hpp"
#include "qdci/group.hpp"
#include "qdci/iso.hpp"
#include "qdci/perm.hpp"

namespace qdci {

/// Some sigma in Aut(G) with S^sigma = T, or nullopt; exhaustive over the
/// automorphism list.
std::optional<Automorphism> cayley_isomorphic(const FiniteGroup& g,
                                              const ConnectionSet& s,
                                              const ConnectionSet& t);

enum class CiMethod { CanonicalSurvey, Babai };

/// Verdict of a CI-subset test.  A negative verdict carries a certificate:
/// a set T in a different Aut(G)-orbit together with a digraph isomorphism
/// Cay(G,S) -> Cay(G,T), both independently re-checkable.
struct CiVerdict {
  ConnectionSet subset;
  bool is_ci = true;
  std::optional<ConnectionSet> violating_t;
  std::optional<Permutation> digraph_isomorphism;
  CiMethod method = CiMethod::CanonicalSurvey;
};

struct SurveyOptions {
  unsigned long long orbit_budget = 10'000'000ULL;  // refuse larger rep scans
  int workers = 1;
  CanonOptions canon;
  CanonicalCache* cache = nullptr;
  bool measure_time = false;  // wall_time_ms stays -1 when off
};

struct SurveyBucket {
  std::string canon_hex;
  std::vector<int> orbit_ids;  // indices into the lex-ordered rep list
};

/// Result of bucketing all size-m orbit representatives by canonical form.
/// mdci_holds iff every bucket holds exactly one Aut(G)-orbit; orbit sizes
/// over all reps sum to C(|G|-1, m).
struct SurveyReport {
  std::string group;
  int m = 0;
  unsigned long long total_subsets = 0;
  unsigned long long orbit_rep_count = 0;
  std::vector<ConnectionSet> reps;
  std::vector<unsigned long long> orbit_sizes;
  std::vector<SurveyBucket> buckets;  // sorted by canonical bytes
  bool mdci_holds = true;
  std::vector<CiVerdict> violations;
  long long wall_time_ms = -1;
};

SurveyReport mdci_survey(const FiniteGroup& g, int m, const SurveyOptions& opt = {});

/// Canonical-survey CI test for one subset: S is CI iff no representative
/// outside the Aut(G)-orbit of S has the same canonical form as Cay(G,S).
CiVerdict ci_subset_test(const FiniteGroup& g, const ConnectionSet& s,
                         const SurveyOptions& opt = {});

/// Re-validation of a negative certificate, independent of the canonical
/// machinery: checks sizes, that the recorded permutation maps the arcs of
/// Cay(G,S) onto Cay(G,T), and that no group automorphism maps S to T.
bool verify_ci_certificate(const FiniteGroup& g, const CiVerdict& verdict);

// ---------------------------------------------------------------------------
// Explicit witness constructions for the failure of the m-DCI property.

/// The even-n permutation phi of Q_4n: fixes <a^2> and b<a^2> pointwise,
/// multiplies on the left by b elsewhere.  Order 4; interchanges a<a^2>
/// and ba<a^2> (asserted after construction).
Permutation phi_map(int n);

/// Checks that phi maps Arc(Cay(G, bH u K)) onto Arc(Cay(G, bH u bK)),
/// arc by arc, under the hypotheses H = H^-1 in <a^2>, K = K^-1 in a<a^2>,
/// a^n K = K; hypothesis violations raise ValidationError naming the
/// condition.
bool claim_iso_check(int n, const std::vector<int>& h, const std::vector<int>& k);

struct WitnessPair {
  int n = 0;
  int m = 0;
  std::optional<int> p;
  std::string construction;                  // "even-m2", "even-claim", ...
  std::map<std::string, std::string> params; // regeneration parameters
  ConnectionSet s;
  ConnectionSet t;
};

/// The Lemma-style (S, T) pair for even n >= 4 and 2 <= m <= 2n-1:
/// explicit pairs for m = 2, 3; the phi-map Claim families for 4 <= m <= 7
/// with K = {a, a^-1, a^{n+1}, a^{n-1}}; the H1/K1 (and H2/K2) unions for
/// m = 8k + j, all j cases including the j = 3 split on 4k+2 = n.
/// Postcondition (asserted): |S| = |T| = m, the Cayley digraphs are
/// isomorphic, and no group automorphism maps S to T.
WitnessPair even_witness(int n, int m);

/// The odd-prime-square witness for p^2 | n: z = a^{2n/p}, P = <z>,
/// Z = {z..z^j}, (j, Q) by residue of m mod p, S = aP u baP u ... u
/// ba^{k-1}P u Z u Q and T its gamma-image (gamma: z -> z^-1, b -> b).
/// Same postcondition as even_witness.
WitnessPair podd_witness(int n, int m, int p);

/// The generic coset-preserving isomorphism check: with L normal in G,
/// L <= M <= G, A^gamma = B for gamma in Aut(M) fixing every L-coset of M
/// setwise, and C a union of L-cosets outside L, decides by isomorphism
/// search whether Cay(G, A u C) = Cay(G, B u C); expected true whenever
/// the hypotheses hold.  gamma is given as image pairs on M.
bool general_lemma_check(const FiniteGroup& g, const std::vector<int>& l,
                         const std::vector<int>& m, const std::vector<int>& a,
                         const std::vector<int>& b,
                         const std::vector<std::pair<int, int>>& gamma,
                         const std::vector<int>& c,
                         const CanonOptions& opt = {});

/// Necessary condition on (n, m) for Q_4n to have the m-DCI property:
/// n odd and p^2 does not divide n for any prime p <= m-1.
bool theorem1_necessary(int n, int m);

/// For n = p^l a prime power: the m-DCI property holds iff p is odd and
/// either l = 1 or m <= p.  Rejects non-prime-powers.
bool theorem2_predicate(int n, int m);

}  // namespace qdci
