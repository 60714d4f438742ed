#pragma once

#include <string>
#include <vector>

#include "ggbraid/errors.hpp"
#include "ggbraid/rng.hpp"

namespace ggbraid {

// The groups the library computes in.
//
//   Braid(m)    - Artin braid group B_m on generators s1..s_{m-1}.  Words are
//                 kept as letter strings; only cancellation of adjacent
//                 inverse pairs is performed (B_m has relations, so this is
//                 not a normal form).  Equality/conjugacy questions for m=3
//                 route through the exponent sum and the modular-group
//                 projection below.
//   P3          - the pure braid group on three strands presented on
//                 {a = s1^2, b = s2^2, z = (s1 s2 s1)^2}; z is central and
//                 P3 = F2 x Z, so words have a true normal form: reduced
//                 {a,b}-part followed by a z-power.
//   SphereP4    - P_4(S^2) / center, free of rank 2 on {d1 = delta1^2,
//                 d2 = delta2^2}.
//   SphereB4    - B_4(S^2) / center on {d1,d2,d3}; cancellation only.
//   TorusP2     - P_2(T^2) / center, free of rank 2 on {a1, b1}.
//   TorusB2     - B_2(T^2) / center = Z/2 * Z/2 * Z/2 on {a, b, c}.
//   Free        - free group of given rank.
//   FreeProduct - free product of cyclic groups (order 0 = infinite factor).
enum class GroupKind { Braid, P3, SphereP4, SphereB4, TorusP2, TorusB2, Free, FreeProduct };

class GroupId {
public:
    GroupKind kind = GroupKind::Free;
    int strands = 0;                      // Braid only
    std::vector<std::string> gens;        // generator names, index order
    std::vector<int> torsion;             // per generator: 0 = infinite, k = order k

    static GroupId braid(int m);
    static GroupId b3() { return braid(3); }
    static GroupId p3();
    static GroupId sphere_p4();
    static GroupId sphere_b4();
    static GroupId torus_p2();
    static GroupId torus_b2();
    static GroupId free_group(int rank);
    static GroupId free_product(std::vector<int> orders);
    static GroupId psl2z() { return free_product({2, 3}); }

    int num_gens() const { return static_cast<int>(gens.size()); }
    int generator_index(const std::string& name) const;  // -1 if absent
    std::string name() const;

    bool operator==(const GroupId& o) const {
        return kind == o.kind && strands == o.strands && gens == o.gens && torsion == o.torsion;
    }
    bool operator!=(const GroupId& o) const { return !(*this == o); }
};

struct Letter {
    int gen = 0;
    int sign = 1;  // +1 or -1
    bool operator==(const Letter& o) const { return gen == o.gen && sign == o.sign; }
};

struct BraidWord {
    GroupId group;
    std::vector<Letter> letters;

    BraidWord() = default;
    explicit BraidWord(GroupId g) : group(std::move(g)) {}
    BraidWord(GroupId g, std::vector<Letter> ls) : group(std::move(g)), letters(std::move(ls)) {}

    bool empty() const { return letters.empty(); }
    std::size_t size() const { return letters.size(); }
    bool operator==(const BraidWord& o) const { return group == o.group && letters == o.letters; }

    // Text form: generator names with an optional ^-1 suffix, whitespace
    // separated ("s1 s2^-1 s1").  Round-trips exactly; the empty word prints
    // as the empty string.
    std::string str() const;
    static BraidWord parse(const GroupId& g, const std::string& text);
};

void validate(const BraidWord& w);  // throws InvalidWord

BraidWord concat(const BraidWord& u, const BraidWord& v);
BraidWord inverse(const BraidWord& w);
BraidWord power(const BraidWord& w, long long k);
BraidWord conjugate(const BraidWord& b, const BraidWord& w);  // b w b^-1

// Normal form where the group has one (free groups, free products, P3);
// cancellation of adjacent inverse pairs otherwise.  Torsion generators are
// normalized into powers 1..order-1, rendered as positive letters.
BraidWord free_reduce(const BraidWord& w);

// Cyclic reduction (conjugacy representative); same group support as
// conjugate_in_group.
BraidWord cyclic_reduce(const BraidWord& w);

struct Permutation {
    std::vector<int> images;  // images[i] = strand occupying position i after the braid (0-based)
    static Permutation identity(int m);
    bool is_identity() const;
    int size() const { return static_cast<int>(images.size()); }
    bool operator==(const Permutation& o) const { return images == o.images; }
};

// compose(p, q) = permutation of the concatenated word uv when p = perm(u),
// q = perm(v):  result[i] = p[q[i]].
Permutation compose(const Permutation& p, const Permutation& q);

Permutation permutation_of(const BraidWord& w);  // UnsupportedGroup for Free/FreeProduct
bool is_pure(const BraidWord& w);

// P3 -> B3 on the generating set {s1^2, s2^2, (s1 s2 s1)^2}.
BraidWord embed_P3(const BraidWord& w);

struct SVector {
    long long s1 = 0;
    long long s2 = 0;
    bool operator==(const SVector& o) const { return s1 == o.s1 && s2 == o.s2; }
};

// Signed a/b letter counts of a P3 word; z is invisible to both.
SVector s_vector(const BraidWord& w);

// Sum of letter exponents.  A homomorphism to Z for torsion-free groups.
long long exponent_sum(const BraidWord& w);

// B3 -> B3/center = PSL(2,Z) = Z/2 * Z/3.  Convention: the half twist
// s1 s2 s1 maps to the order-2 generator x, s1 s2 maps to the order-3
// generator y; hence s1 -> y^2 x and s2 -> x y^2.  Output is in free-product
// normal form.
BraidWord project_B3_mod_center(const BraidWord& w);

// Conjugacy decision.  Free groups / free products: cyclic normal forms up to
// rotation.  B3: equal exponent sums and conjugate modular-group images
// (sound and complete since the center is generated by the full twist, whose
// exponent sum is 6).  P3: equal z-exponents and conjugate free parts.
bool conjugate_in_group(const BraidWord& w1, const BraidWord& w2, const GroupId& group);

// (s1...s_{m-1})^m in B_m; generates the center for m >= 3.
BraidWord full_twist(int m);

// Uniform-ish random reduced words for property tests and norm sampling.
struct WordSampler {
    GroupId group;
    int max_len = 16;
    BraidWord operator()(Rng& rng) const;
};

}  // namespace ggbraid
