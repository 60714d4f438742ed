#include "ggbraid/p3_rewrite.hpp"

#include <array>
#include <cstdint>
#include <mutex>

namespace ggbraid {

namespace {

// 2x2 integer matrices: the standard B3 -> SL(2,Z) representation
// s1 -> [[1,1],[0,1]], s2 -> [[1,0],[-1,1]].  Its kernel is generated by the
// fourth power of the half twist, which has exponent sum 12, so the pair
// (matrix, exponent sum) separates B3 elements exactly.
struct Mat2 {
    std::int64_t a = 1, b = 0, c = 0, d = 1;
    bool operator==(const Mat2& o) const { return a == o.a && b == o.b && c == o.c && d == o.d; }
};

Mat2 mul(const Mat2& x, const Mat2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
            x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

Mat2 b3_letter_matrix(const Letter& l) {
    if (l.gen == 0) return l.sign > 0 ? Mat2{1, 1, 0, 1} : Mat2{1, -1, 0, 1};
    return l.sign > 0 ? Mat2{1, 0, -1, 1} : Mat2{1, 0, 1, 1};
}

Mat2 b3_matrix(const BraidWord& w) {
    Mat2 m;
    for (const Letter& l : w.letters) m = mul(m, b3_letter_matrix(l));
    return m;
}

int perm_rank(const Permutation& p) {
    // ranks the 6 permutations of 3 symbols
    const int first = p.images[0];
    const int lo = (first == 0) ? 1 : 0;
    return first * 2 + (p.images[1] == lo ? 0 : 1);
}

struct Tables {
    std::array<BraidWord, 6> transversal;     // coset representatives, indexed by perm rank
    std::array<Permutation, 6> perms;
    // fragment[state][letter-code]: letter codes 0: s1, 1: s1^-1, 2: s2, 3: s2^-1
    std::array<std::array<BraidWord, 4>, 6> fragment;
};

int letter_code(const Letter& l) { return l.gen * 2 + (l.sign < 0 ? 1 : 0); }

// Finds the {a,b,z} expression of a short pure braid by breadth-first search,
// comparing (matrix, exponent sum).
BraidWord solve_p3_word(const BraidWord& pure_b3) {
    const Mat2 target = b3_matrix(pure_b3);
    const long long esum = exponent_sum(pure_b3);
    const GroupId p3 = GroupId::p3();
    std::vector<BraidWord> frontier{BraidWord(p3)};
    for (int depth = 0; depth <= 4; ++depth) {
        for (const BraidWord& cand : frontier) {
            if (exponent_sum(embed_P3(cand)) == esum && b3_matrix(embed_P3(cand)) == target)
                return cand;
        }
        std::vector<BraidWord> next;
        for (const BraidWord& cand : frontier)
            for (int g = 0; g < 3; ++g)
                for (int s : {1, -1}) {
                    BraidWord e = cand;
                    e.letters.push_back({g, s});
                    if (free_reduce(e).size() == e.size()) next.push_back(std::move(e));
                }
        frontier = std::move(next);
    }
    throw InvalidWord("coset table element has no short P3 expression (internal)");
}

const Tables& tables() {
    static Tables t;
    static std::once_flag once;
    std::call_once(once, [] {
        const GroupId b3 = GroupId::b3();
        const std::array<std::string, 6> reps_text = {"", "s1", "s2", "s1 s2", "s2 s1", "s1 s2 s1"};
        for (const std::string& text : reps_text) {
            BraidWord rep = BraidWord::parse(b3, text);
            const int r = perm_rank(permutation_of(rep));
            t.transversal[r] = rep;
            t.perms[r] = permutation_of(rep);
        }
        for (int state = 0; state < 6; ++state) {
            for (int code = 0; code < 4; ++code) {
                Letter l{code / 2, code % 2 ? -1 : 1};
                BraidWord tl = t.transversal[state];
                tl.letters.push_back(l);
                const int next = perm_rank(permutation_of(tl));
                BraidWord g = free_reduce(concat(tl, inverse(t.transversal[next])));
                t.fragment[state][code] = solve_p3_word(g);
            }
        }
    });
    return t;
}

}  // namespace

BraidWord rewrite_pure_b3_to_p3(const BraidWord& w) {
    if (w.group.kind != GroupKind::Braid || w.group.strands != 3)
        throw InvalidWord("rewrite expects a B3 word");
    if (!is_pure(w)) throw InvalidWord("rewrite expects a pure braid");
    const Tables& t = tables();
    BraidWord out(GroupId::p3());
    Permutation p = Permutation::identity(3);
    for (const Letter& l : w.letters) {
        const BraidWord& frag = t.fragment[perm_rank(p)][letter_code(l)];
        out.letters.insert(out.letters.end(), frag.letters.begin(), frag.letters.end());
        Permutation step = Permutation::identity(3);
        std::swap(step.images[l.gen], step.images[l.gen + 1]);
        p = compose(p, step);
    }
    return free_reduce(out);
}

}  // namespace ggbraid
