#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ggbraid/words.hpp"

namespace ggbraid {

// A homogeneous n-cochain as an evaluation handle: a function on (n+1)-tuples
// invariant under simultaneous right translation.  Groups are infinite, so
// cochains are never tabulated.
struct CochainHandle {
    GroupId group;
    int degree = 0;  // evaluates on (degree+1)-tuples
    std::function<double(const std::vector<BraidWord>&)> eval;
    std::optional<double> bounded_hint;  // recorded upper bound for |eval|, if any
    std::string note;

    double operator()(const std::vector<BraidWord>& tuple) const { return eval(tuple); }
};

struct QmHandle {
    GroupId group;
    std::function<double(const BraidWord&)> eval;
    double defect_estimate = 0.0;
    std::string note;

    double operator()(const BraidWord& w) const { return eval(w); }
};

// Alternating-sum coboundary; degree goes up by one, homogeneity is preserved.
CochainHandle coboundary(const CochainHandle& c);

// Counting quasimorphism of a cyclically reduced pattern on a free group or
// free product: (#overlapping occurrences of the pattern in the reduced word)
// minus (#occurrences of its inverse).  defect_estimate is the safe classical
// bound 3 * |pattern|.
QmHandle brooks_qm(const BraidWord& pattern);

// Finite-stage homogenization g -> q(g^{2^depth}) / 2^depth.  The returned
// handle is within defect/2^depth of the true homogenization pointwise, and
// its defect_estimate covers the homogenized defect bound 2*defect plus that
// truncation error.
QmHandle homogenize(const QmHandle& q, int depth);

// degree 1: c(g0,g1) = q(g1 g0^-1); degree 2: its coboundary, bounded with
// sup norm at most 3 * defect_estimate (recorded in bounded_hint).
CochainHandle qm_to_cochain(const QmHandle& q, int degree);

// Max of |eval| over n sampled tuples; a lower bound for the sup norm.
double sup_norm_estimate(const CochainHandle& c, const WordSampler& sampler, int n_samples,
                         Rng& rng);

// Finite linear combinations of quasimorphisms (shared group).
QmHandle qm_combine(const std::vector<std::pair<QmHandle, double>>& terms);

// Pullback of a rank-2 free-group quasimorphism to P3 along the projection
// that keeps the free part {a,b} and kills the central z.
QmHandle qm_pullback_p3(const QmHandle& q_on_f2);

// Loads a quasimorphism spec from a JSON document:
//   {"group": "free:2" | "p3" | "sphere_p4" | "torus_p2" | "torus_b2",
//    "terms": [{"pattern": "a b", "weight": 1.0}, ...],
//    "homogenize_depth": 12,            // optional, 0 = raw
//    "pullback": "p3"}                  // optional, free:2 -> P3
QmHandle load_qm_spec(const std::string& json_text);

GroupId parse_group_name(const std::string& name);

}  // namespace ggbraid
