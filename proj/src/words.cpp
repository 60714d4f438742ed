#include "ggbraid/words.hpp"

#include <algorithm>
#include <sstream>

namespace ggbraid {

namespace {

long long imod(long long a, long long m) {
    long long r = a % m;
    return r < 0 ? r + m : r;
}

struct Syllable {
    int gen;
    long long exp;
};

std::vector<Syllable> to_syllables(const std::vector<Letter>& letters) {
    std::vector<Syllable> out;
    for (const Letter& l : letters) {
        if (!out.empty() && out.back().gen == l.gen) {
            out.back().exp += l.sign;
            if (out.back().exp == 0) out.pop_back();
        } else {
            out.push_back({l.gen, l.sign});
        }
    }
    return out;
}

}  // namespace

GroupId GroupId::braid(int m) {
    if (m < 2) throw InvalidArity("braid group needs at least 2 strands");
    GroupId g;
    g.kind = GroupKind::Braid;
    g.strands = m;
    for (int i = 1; i < m; ++i) {
        g.gens.push_back("s" + std::to_string(i));
        g.torsion.push_back(0);
    }
    return g;
}

GroupId GroupId::p3() {
    GroupId g;
    g.kind = GroupKind::P3;
    g.gens = {"a", "b", "z"};
    g.torsion = {0, 0, 0};
    return g;
}

GroupId GroupId::sphere_p4() {
    GroupId g;
    g.kind = GroupKind::SphereP4;
    g.gens = {"d1", "d2"};
    g.torsion = {0, 0};
    return g;
}

GroupId GroupId::sphere_b4() {
    GroupId g;
    g.kind = GroupKind::SphereB4;
    g.gens = {"d1", "d2", "d3"};
    g.torsion = {0, 0, 0};
    return g;
}

GroupId GroupId::torus_p2() {
    GroupId g;
    g.kind = GroupKind::TorusP2;
    g.gens = {"a1", "b1"};
    g.torsion = {0, 0};
    return g;
}

GroupId GroupId::torus_b2() {
    GroupId g;
    g.kind = GroupKind::TorusB2;
    g.gens = {"a", "b", "c"};
    g.torsion = {2, 2, 2};
    return g;
}

GroupId GroupId::free_group(int rank) {
    if (rank < 1 || rank > 26) throw InvalidArity("free group rank out of range");
    GroupId g;
    g.kind = GroupKind::Free;
    for (int i = 0; i < rank; ++i) {
        g.gens.push_back(std::string(1, static_cast<char>('a' + i)));
        g.torsion.push_back(0);
    }
    return g;
}

GroupId GroupId::free_product(std::vector<int> orders) {
    static const char* names[] = {"x", "y", "z", "w", "u", "v"};
    if (orders.empty() || orders.size() > 6) throw InvalidArity("free product supports 1..6 factors");
    GroupId g;
    g.kind = GroupKind::FreeProduct;
    for (std::size_t i = 0; i < orders.size(); ++i) {
        if (orders[i] < 0 || orders[i] == 1) throw InvalidArity("cyclic order must be 0 or >= 2");
        g.gens.push_back(names[i]);
        g.torsion.push_back(orders[i]);
    }
    return g;
}

int GroupId::generator_index(const std::string& name) const {
    for (std::size_t i = 0; i < gens.size(); ++i)
        if (gens[i] == name) return static_cast<int>(i);
    return -1;
}

std::string GroupId::name() const {
    switch (kind) {
        case GroupKind::Braid: return "B" + std::to_string(strands);
        case GroupKind::P3: return "P3";
        case GroupKind::SphereP4: return "P4(S2)/Z";
        case GroupKind::SphereB4: return "B4(S2)/Z";
        case GroupKind::TorusP2: return "P2(T2)/Z";
        case GroupKind::TorusB2: return "B2(T2)/Z";
        case GroupKind::Free: return "F" + std::to_string(gens.size());
        case GroupKind::FreeProduct: {
            std::string s = "FreeProduct(";
            for (std::size_t i = 0; i < torsion.size(); ++i) {
                if (i) s += ",";
                s += std::to_string(torsion[i]);
            }
            return s + ")";
        }
    }
    return "?";
}

std::string BraidWord::str() const {
    std::string out;
    for (std::size_t i = 0; i < letters.size(); ++i) {
        if (i) out += ' ';
        out += group.gens[letters[i].gen];
        if (letters[i].sign < 0) out += "^-1";
    }
    return out;
}

BraidWord BraidWord::parse(const GroupId& g, const std::string& text) {
    BraidWord w(g);
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) {
        int sign = 1;
        if (tok.size() > 3 && tok.substr(tok.size() - 3) == "^-1") {
            sign = -1;
            tok = tok.substr(0, tok.size() - 3);
        }
        int gi = g.generator_index(tok);
        if (gi < 0) throw InvalidWord("unknown generator '" + tok + "' for " + g.name());
        w.letters.push_back({gi, sign});
    }
    return w;
}

void validate(const BraidWord& w) {
    for (const Letter& l : w.letters) {
        if (l.gen < 0 || l.gen >= w.group.num_gens())
            throw InvalidWord("letter index out of range for " + w.group.name());
        if (l.sign != 1 && l.sign != -1) throw InvalidWord("letter sign must be +1 or -1");
    }
}

BraidWord concat(const BraidWord& u, const BraidWord& v) {
    if (u.group != v.group) throw InvalidWord("concat across distinct groups");
    BraidWord w(u.group, u.letters);
    w.letters.insert(w.letters.end(), v.letters.begin(), v.letters.end());
    return w;
}

BraidWord inverse(const BraidWord& w) {
    BraidWord r(w.group);
    r.letters.reserve(w.letters.size());
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
        r.letters.push_back({it->gen, -it->sign});
    return r;
}

BraidWord power(const BraidWord& w, long long k) {
    BraidWord base = k < 0 ? inverse(w) : w;
    long long n = k < 0 ? -k : k;
    BraidWord acc(w.group);
    // repeated squaring keeps intermediate words reduced
    while (n > 0) {
        if (n & 1) acc = free_reduce(concat(acc, base));
        n >>= 1;
        if (n) base = free_reduce(concat(base, base));
    }
    return acc;
}

BraidWord conjugate(const BraidWord& b, const BraidWord& w) {
    return free_reduce(concat(concat(b, w), inverse(b)));
}

namespace {

// plain stack cancellation of adjacent inverse pairs
std::vector<Letter> cancel(const std::vector<Letter>& in) {
    std::vector<Letter> st;
    st.reserve(in.size());
    for (const Letter& l : in) {
        if (!st.empty() && st.back().gen == l.gen && st.back().sign == -l.sign)
            st.pop_back();
        else
            st.push_back(l);
    }
    return st;
}

// syllable normal form with torsion exponents folded into 1..order-1
std::vector<Letter> reduce_with_torsion(const BraidWord& w) {
    std::vector<Syllable> st;
    for (const Letter& l : w.letters) {
        Syllable s{l.gen, l.sign};
        for (;;) {
            const int ord = w.group.torsion[s.gen];
            if (ord > 0) s.exp = imod(s.exp, ord);
            if (s.exp == 0) break;
            if (!st.empty() && st.back().gen == s.gen) {
                s.exp += st.back().exp;
                st.pop_back();
                continue;
            }
            st.push_back(s);
            break;
        }
    }
    std::vector<Letter> out;
    for (const Syllable& s : st) {
        long long n = s.exp < 0 ? -s.exp : s.exp;
        int sign = s.exp < 0 ? -1 : 1;
        for (long long i = 0; i < n; ++i) out.push_back({s.gen, sign});
    }
    return out;
}

std::vector<Letter> p3_normal(const BraidWord& w) {
    long long zexp = 0;
    std::vector<Letter> free_part;
    for (const Letter& l : w.letters) {
        if (l.gen == 2)
            zexp += l.sign;
        else
            free_part.push_back(l);
    }
    std::vector<Letter> out = cancel(free_part);
    for (long long i = 0; i < (zexp < 0 ? -zexp : zexp); ++i)
        out.push_back({2, zexp < 0 ? -1 : 1});
    return out;
}

}  // namespace

BraidWord free_reduce(const BraidWord& w) {
    validate(w);
    BraidWord r(w.group);
    switch (w.group.kind) {
        case GroupKind::Braid:
        case GroupKind::SphereB4:
            r.letters = cancel(w.letters);
            break;
        case GroupKind::Free:
        case GroupKind::SphereP4:
        case GroupKind::TorusP2:
            r.letters = cancel(w.letters);
            break;
        case GroupKind::P3:
            r.letters = p3_normal(w);
            break;
        case GroupKind::TorusB2:
        case GroupKind::FreeProduct:
            r.letters = reduce_with_torsion(w);
            break;
    }
    return r;
}

Permutation Permutation::identity(int m) {
    Permutation p;
    p.images.resize(m);
    for (int i = 0; i < m; ++i) p.images[i] = i;
    return p;
}

bool Permutation::is_identity() const {
    for (int i = 0; i < size(); ++i)
        if (images[i] != i) return false;
    return true;
}

Permutation compose(const Permutation& p, const Permutation& q) {
    Permutation r;
    r.images.resize(q.images.size());
    for (std::size_t i = 0; i < q.images.size(); ++i) r.images[i] = p.images[q.images[i]];
    return r;
}

Permutation permutation_of(const BraidWord& w) {
    validate(w);
    int m;
    switch (w.group.kind) {
        case GroupKind::Braid: m = w.group.strands; break;
        case GroupKind::SphereB4: m = 4; break;
        case GroupKind::TorusB2: m = 2; break;
        case GroupKind::P3: m = 3; break;
        case GroupKind::SphereP4: m = 4; break;
        case GroupKind::TorusP2: m = 2; break;
        default:
            throw UnsupportedGroup("no symmetric-group projection for " + w.group.name());
    }
    Permutation p = Permutation::identity(m);
    // pure presentations: every generator is already a pure braid
    if (w.group.kind == GroupKind::P3 || w.group.kind == GroupKind::SphereP4 ||
        w.group.kind == GroupKind::TorusP2)
        return p;
    for (const Letter& l : w.letters) {
        Permutation t = Permutation::identity(m);
        if (w.group.kind == GroupKind::TorusB2) {
            std::swap(t.images[0], t.images[1]);
        } else {
            std::swap(t.images[l.gen], t.images[l.gen + 1]);
        }
        p = compose(p, t);
    }
    return p;
}

bool is_pure(const BraidWord& w) { return permutation_of(w).is_identity(); }

BraidWord embed_P3(const BraidWord& w) {
    if (w.group.kind != GroupKind::P3) throw InvalidWord("embed_P3 expects a P3 word");
    validate(w);
    const GroupId b3 = GroupId::b3();
    auto letter_word = [&](int gen) -> std::vector<Letter> {
        switch (gen) {
            case 0: return {{0, 1}, {0, 1}};                          // a = s1^2
            case 1: return {{1, 1}, {1, 1}};                          // b = s2^2
            default: return {{0, 1}, {1, 1}, {0, 1}, {0, 1}, {1, 1}, {0, 1}};  // z = (s1 s2 s1)^2
        }
    };
    BraidWord out(b3);
    for (const Letter& l : w.letters) {
        std::vector<Letter> img = letter_word(l.gen);
        if (l.sign < 0) {
            std::reverse(img.begin(), img.end());
            for (Letter& x : img) x.sign = -x.sign;
        }
        out.letters.insert(out.letters.end(), img.begin(), img.end());
    }
    return free_reduce(out);
}

SVector s_vector(const BraidWord& w) {
    if (w.group.kind != GroupKind::P3) throw InvalidWord("s_vector expects a P3 word");
    validate(w);
    SVector s;
    for (const Letter& l : w.letters) {
        if (l.gen == 0) s.s1 += l.sign;
        if (l.gen == 1) s.s2 += l.sign;
    }
    return s;
}

long long exponent_sum(const BraidWord& w) {
    validate(w);
    long long e = 0;
    for (const Letter& l : w.letters) e += l.sign;
    return e;
}

BraidWord project_B3_mod_center(const BraidWord& w) {
    if (w.group.kind != GroupKind::Braid || w.group.strands != 3)
        throw UnsupportedGroup("modular-group projection is defined on B3");
    validate(w);
    const GroupId target = GroupId::psl2z();
    // s1 -> y y x, s2 -> x y y; inverses from x^2 = y^3 = 1.
    BraidWord out(target);
    for (const Letter& l : w.letters) {
        std::vector<Letter> img;
        if (l.gen == 0)
            img = l.sign > 0 ? std::vector<Letter>{{1, 1}, {1, 1}, {0, 1}}
                             : std::vector<Letter>{{0, 1}, {1, 1}};
        else
            img = l.sign > 0 ? std::vector<Letter>{{0, 1}, {1, 1}, {1, 1}}
                             : std::vector<Letter>{{1, 1}, {0, 1}};
        out.letters.insert(out.letters.end(), img.begin(), img.end());
    }
    return free_reduce(out);
}

namespace {

std::vector<Syllable> cyclic_syllables(const BraidWord& w) {
    BraidWord r = free_reduce(w);
    std::vector<Syllable> syl = to_syllables(r.letters);
    auto norm_exp = [&](Syllable& s) {
        const int ord = w.group.torsion[s.gen];
        if (ord > 0) s.exp = imod(s.exp, ord);
        return s.exp != 0;
    };
    while (syl.size() >= 2 && syl.front().gen == syl.back().gen) {
        Syllable merged{syl.front().gen, syl.front().exp + syl.back().exp};
        syl.pop_back();
        syl.erase(syl.begin());
        if (norm_exp(merged)) syl.insert(syl.begin(), merged);
    }
    // purely free groups: also cancel first-against-last inverse letters
    if (syl.size() == 1) {
        Syllable s = syl[0];
        if (!norm_exp(s)) return {};
        return {s};
    }
    return syl;
}

bool rotation_equal(const std::vector<Syllable>& a, const std::vector<Syllable>& b) {
    if (a.size() != b.size()) return false;
    if (a.empty()) return true;
    const std::size_t n = a.size();
    for (std::size_t shift = 0; shift < n; ++shift) {
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) {
            const Syllable& x = a[(i + shift) % n];
            ok = x.gen == b[i].gen && x.exp == b[i].exp;
        }
        if (ok) return true;
    }
    return false;
}

std::vector<Letter> from_syllables(const std::vector<Syllable>& syl) {
    std::vector<Letter> out;
    for (const Syllable& s : syl) {
        long long n = s.exp < 0 ? -s.exp : s.exp;
        for (long long i = 0; i < n; ++i) out.push_back({s.gen, s.exp < 0 ? -1 : 1});
    }
    return out;
}

bool conj_free_like(const BraidWord& w1, const BraidWord& w2) {
    return rotation_equal(cyclic_syllables(w1), cyclic_syllables(w2));
}

}  // namespace

BraidWord cyclic_reduce(const BraidWord& w) {
    switch (w.group.kind) {
        case GroupKind::Free:
        case GroupKind::SphereP4:
        case GroupKind::TorusP2:
        case GroupKind::TorusB2:
        case GroupKind::FreeProduct:
            return BraidWord(w.group, from_syllables(cyclic_syllables(w)));
        default:
            throw UnsupportedGroup("no cyclic normal form for " + w.group.name());
    }
}

bool conjugate_in_group(const BraidWord& w1, const BraidWord& w2, const GroupId& group) {
    if (w1.group != group || w2.group != group)
        throw InvalidWord("conjugate_in_group: words must belong to the given group");
    switch (group.kind) {
        case GroupKind::Free:
        case GroupKind::SphereP4:
        case GroupKind::TorusP2:
        case GroupKind::TorusB2:
        case GroupKind::FreeProduct:
            return conj_free_like(w1, w2);
        case GroupKind::P3: {
            BraidWord r1 = free_reduce(w1), r2 = free_reduce(w2);
            long long z1 = 0, z2 = 0;
            BraidWord f1(GroupId::free_group(2)), f2(GroupId::free_group(2));
            for (const Letter& l : r1.letters)
                (l.gen == 2) ? void(z1 += l.sign) : f1.letters.push_back(l);
            for (const Letter& l : r2.letters)
                (l.gen == 2) ? void(z2 += l.sign) : f2.letters.push_back(l);
            return z1 == z2 && conj_free_like(f1, f2);
        }
        case GroupKind::Braid: {
            if (group.strands != 3)
                throw UnsupportedGroup("braid conjugacy is decided for 3 strands only");
            if (exponent_sum(w1) != exponent_sum(w2)) return false;
            return conj_free_like(project_B3_mod_center(w1), project_B3_mod_center(w2));
        }
        default:
            throw UnsupportedGroup("no conjugacy decision for " + group.name());
    }
}

BraidWord full_twist(int m) {
    if (m < 2) throw InvalidArity("full twist needs at least 2 strands");
    const GroupId g = GroupId::braid(m);
    BraidWord w(g);
    for (int rep = 0; rep < m; ++rep)
        for (int i = 0; i < m - 1; ++i) w.letters.push_back({i, 1});
    return w;
}

BraidWord WordSampler::operator()(Rng& rng) const {
    const int len = rng.uniform_int(0, max_len);
    BraidWord w(group);
    for (int i = 0; i < len; ++i) {
        int g = rng.uniform_int(0, group.num_gens() - 1);
        int s = rng.bernoulli(0.5) ? 1 : -1;
        w.letters.push_back({g, s});
    }
    return free_reduce(w);
}

}  // namespace ggbraid
