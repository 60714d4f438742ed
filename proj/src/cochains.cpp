#include "ggbraid/cochains.hpp"

#include <cmath>

#include <json.hpp>

namespace ggbraid {

CochainHandle coboundary(const CochainHandle& c) {
    CochainHandle out;
    out.group = c.group;
    out.degree = c.degree + 1;
    out.note = "coboundary(" + c.note + ")";
    const int n = out.degree;
    auto inner = c;
    out.eval = [inner, n](const std::vector<BraidWord>& tuple) {
        if (static_cast<int>(tuple.size()) != n + 1)
            throw InvalidDegree("coboundary: tuple arity mismatch");
        double acc = 0.0;
        double sign = 1.0;
        for (int i = 0; i <= n; ++i) {
            std::vector<BraidWord> face;
            face.reserve(n);
            for (int j = 0; j <= n; ++j)
                if (j != i) face.push_back(tuple[j]);
            acc += sign * inner.eval(face);
            sign = -sign;
        }
        return acc;
    };
    return out;
}

namespace {

bool is_counting_group(const GroupId& g) {
    switch (g.kind) {
        case GroupKind::Free:
        case GroupKind::FreeProduct:
        case GroupKind::SphereP4:
        case GroupKind::TorusP2:
        case GroupKind::TorusB2:
            return true;
        default:
            return false;
    }
}

long long count_occurrences(const std::vector<Letter>& word, const std::vector<Letter>& pat) {
    if (pat.empty() || word.size() < pat.size()) return 0;
    long long count = 0;
    for (std::size_t i = 0; i + pat.size() <= word.size(); ++i) {
        bool hit = true;
        for (std::size_t j = 0; j < pat.size() && hit; ++j) hit = word[i + j] == pat[j];
        if (hit) ++count;
    }
    return count;
}

}  // namespace

QmHandle brooks_qm(const BraidWord& pattern) {
    if (!is_counting_group(pattern.group))
        throw UnsupportedGroup("counting quasimorphisms need a free group or free product");
    BraidWord pat = free_reduce(pattern);
    if (pat.empty()) throw InvalidPattern("empty pattern");
    if (!(cyclic_reduce(pat) == pat)) throw InvalidPattern("pattern must be cyclically reduced");
    const std::vector<Letter> fwd = pat.letters;
    const std::vector<Letter> bwd = inverse(pat).letters;
    QmHandle q;
    q.group = pat.group;
    q.defect_estimate = 3.0 * static_cast<double>(pat.size());
    q.note = "brooks(" + pat.str() + ")";
    q.eval = [fwd, bwd, g = pat.group](const BraidWord& w) {
        if (w.group != g) throw InvalidWord("quasimorphism applied to a word of another group");
        const std::vector<Letter> red = free_reduce(w).letters;
        return static_cast<double>(count_occurrences(red, fwd) - count_occurrences(red, bwd));
    };
    return q;
}

QmHandle homogenize(const QmHandle& q, int depth) {
    if (depth < 1) throw InvalidArity("homogenization depth must be >= 1");
    const long long reps = 1LL << depth;
    QmHandle out;
    out.group = q.group;
    out.defect_estimate = q.defect_estimate * (2.0 + std::ldexp(4.0, -depth));
    out.note = "homogenized(" + q.note + ")";
    out.eval = [q, reps](const BraidWord& w) {
        return q.eval(power(w, reps)) / static_cast<double>(reps);
    };
    return out;
}

CochainHandle qm_to_cochain(const QmHandle& q, int degree) {
    if (degree != 1 && degree != 2) throw InvalidDegree("qm_to_cochain supports degree 1 or 2");
    CochainHandle c1;
    c1.group = q.group;
    c1.degree = 1;
    c1.note = "cochain(" + q.note + ")";
    c1.eval = [q](const std::vector<BraidWord>& tuple) {
        if (tuple.size() != 2) throw InvalidDegree("degree-1 cochain takes pairs");
        return q.eval(free_reduce(concat(tuple[1], inverse(tuple[0]))));
    };
    if (degree == 1) return c1;
    CochainHandle c2 = coboundary(c1);
    c2.bounded_hint = 3.0 * q.defect_estimate;
    return c2;
}

double sup_norm_estimate(const CochainHandle& c, const WordSampler& sampler, int n_samples,
                         Rng& rng) {
    if (n_samples < 1) throw InsufficientSamples("sup_norm_estimate needs n_samples >= 1");
    double best = 0.0;
    std::vector<BraidWord> tuple(static_cast<std::size_t>(c.degree) + 1, BraidWord(c.group));
    for (int i = 0; i < n_samples; ++i) {
        for (auto& w : tuple) w = sampler(rng);
        best = std::max(best, std::fabs(c.eval(tuple)));
    }
    return best;
}

QmHandle qm_combine(const std::vector<std::pair<QmHandle, double>>& terms) {
    if (terms.empty()) throw InvalidArity("qm_combine needs at least one term");
    QmHandle out;
    out.group = terms[0].first.group;
    double defect = 0.0;
    std::string note = "combine(";
    for (const auto& [q, w] : terms) {
        if (q.group != out.group) throw GroupMismatch("qm_combine: mixed groups");
        defect += std::fabs(w) * q.defect_estimate;
        note += q.note + "*" + std::to_string(w) + ",";
    }
    out.defect_estimate = defect;
    out.note = note + ")";
    out.eval = [terms](const BraidWord& w) {
        double acc = 0.0;
        for (const auto& [q, c] : terms) acc += c * q.eval(w);
        return acc;
    };
    return out;
}

QmHandle qm_pullback_p3(const QmHandle& q_on_f2) {
    if (q_on_f2.group != GroupId::free_group(2))
        throw GroupMismatch("pullback expects a quasimorphism on the rank-2 free group");
    QmHandle out;
    out.group = GroupId::p3();
    out.defect_estimate = q_on_f2.defect_estimate;
    out.note = "p3_pullback(" + q_on_f2.note + ")";
    out.eval = [q = q_on_f2](const BraidWord& w) {
        if (w.group.kind != GroupKind::P3) throw InvalidWord("expected a P3 word");
        BraidWord f(GroupId::free_group(2));
        for (const Letter& l : free_reduce(w).letters)
            if (l.gen != 2) f.letters.push_back(l);
        return q.eval(free_reduce(f));
    };
    return out;
}

GroupId parse_group_name(const std::string& name) {
    if (name == "p3") return GroupId::p3();
    if (name == "b3") return GroupId::b3();
    if (name == "sphere_p4") return GroupId::sphere_p4();
    if (name == "sphere_b4") return GroupId::sphere_b4();
    if (name == "torus_p2") return GroupId::torus_p2();
    if (name == "torus_b2") return GroupId::torus_b2();
    if (name == "psl2z") return GroupId::psl2z();
    if (name.rfind("free:", 0) == 0) return GroupId::free_group(std::stoi(name.substr(5)));
    if (name.rfind("braid:", 0) == 0) return GroupId::braid(std::stoi(name.substr(6)));
    throw InvalidConfig("unknown group name '" + name + "'");
}

QmHandle load_qm_spec(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const std::exception& e) {
        throw InvalidConfig(std::string("bad quasimorphism spec: ") + e.what());
    }
    const GroupId g = parse_group_name(j.value("group", "free:2"));
    std::vector<std::pair<QmHandle, double>> terms;
    for (const auto& t : j.at("terms")) {
        BraidWord pat = BraidWord::parse(g, t.at("pattern").get<std::string>());
        terms.emplace_back(brooks_qm(pat), t.value("weight", 1.0));
    }
    QmHandle q = qm_combine(terms);
    const int depth = j.value("homogenize_depth", 0);
    if (depth > 0) q = homogenize(q, depth);
    if (j.value("pullback", "") == "p3") q = qm_pullback_p3(q);
    return q;
}

}  // namespace ggbraid
