#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ggbraid/cochains.hpp"
#include "oracles.hpp"

using namespace ggbraid;

namespace {

const GroupId F2 = GroupId::free_group(2);

BraidWord W(const std::string& text) { return BraidWord::parse(F2, text); }

CochainHandle word_stat_cochain(int degree, int salt) {
    // integer-valued homogeneous cochain built from reduced word lengths
    CochainHandle c;
    c.group = F2;
    c.degree = degree;
    c.note = "word-stat";
    c.eval = [salt](const std::vector<BraidWord>& tuple) {
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < tuple.size(); ++i) {
            const BraidWord d = free_reduce(concat(tuple[i + 1], inverse(tuple[i])));
            acc += static_cast<double>((d.size() + salt) % 7 + d.size());
        }
        return acc;
    };
    return c;
}

}  // namespace

TEST_CASE("coboundary basics") {
    CochainHandle konst;
    konst.group = F2;
    konst.degree = 0;
    konst.eval = [](const std::vector<BraidWord>&) { return 4.5; };
    CochainHandle d = coboundary(konst);
    CHECK(d.degree == 1);
    CHECK(d.eval({W("a"), W("b a")}) == 0.0);

    // coboundary of a homomorphism-difference cochain vanishes
    CochainHandle hom;
    hom.group = F2;
    hom.degree = 1;
    hom.eval = [](const std::vector<BraidWord>& t) {
        const BraidWord d = free_reduce(concat(t[1], inverse(t[0])));
        return static_cast<double>(exponent_sum(d));
    };
    CochainHandle dh = coboundary(hom);
    Rng rng(42, 0);
    WordSampler sample{F2, 16};
    for (int i = 0; i < 100; ++i)
        CHECK(dh.eval({sample(rng), sample(rng), sample(rng)}) == 0.0);
}

TEST_CASE("double coboundary vanishes exactly") {
    Rng rng(43, 1);
    WordSampler sample{F2, 18};
    for (int salt = 0; salt < 3; ++salt) {
        CochainHandle c = word_stat_cochain(1, salt);
        CochainHandle dd = coboundary(coboundary(c));
        for (int i = 0; i < 400; ++i) {
            std::vector<BraidWord> tuple;
            for (int k = 0; k < 4; ++k) tuple.push_back(sample(rng));
            CHECK(dd.eval(tuple) == 0.0);
        }
    }
}

TEST_CASE("coboundary preserves homogeneity") {
    Rng rng(44, 7);
    WordSampler sample{F2, 14};
    CochainHandle d = coboundary(word_stat_cochain(1, 1));
    for (int i = 0; i < 200; ++i) {
        std::vector<BraidWord> tuple{sample(rng), sample(rng), sample(rng)};
        const BraidWord h = sample(rng);
        std::vector<BraidWord> shifted;
        for (const auto& g : tuple) shifted.push_back(free_reduce(concat(g, h)));
        CHECK(d.eval(tuple) == d.eval(shifted));
    }
}

TEST_CASE("counting quasimorphism values") {
    QmHandle h = brooks_qm(W("a b"));
    CHECK(h.eval(W("a b a b")) == 2.0);
    CHECK(h.eval(W("b^-1 a^-1")) == -1.0);
    CHECK(h.eval(W("")) == 0.0);
    CHECK(h.defect_estimate == doctest::Approx(6.0));
    CHECK_THROWS_AS(brooks_qm(W("")), InvalidPattern);
    CHECK_THROWS_AS(brooks_qm(W("a b a^-1")), InvalidPattern);
    // spot check against the brute-force count
    Rng rng(45, 5);
    WordSampler sample{F2, 40};
    for (int i = 0; i < 300; ++i) {
        BraidWord g = sample(rng);
        const auto red = free_reduce(g).letters;
        const double want = static_cast<double>(
            oracles::count_subwords(red, W("a b").letters) -
            oracles::count_subwords(red, inverse(W("a b")).letters));
        CHECK(h.eval(g) == want);
    }
}

TEST_CASE("sampled defect never exceeds the recorded bound") {
    Rng rng(46, 2);
    for (const std::string& pat : {"a b", "a a b^-1", "a"}) {
        QmHandle h = brooks_qm(W(pat));
        WordSampler sample{F2, 32};
        for (int i = 0; i < 10000; ++i) {
            BraidWord g = sample(rng), k = sample(rng);
            const double defect =
                std::fabs(h.eval(free_reduce(concat(g, k))) - h.eval(g) - h.eval(k));
            CHECK(defect <= h.defect_estimate);
        }
    }
}

TEST_CASE("homogenization") {
    // a single-letter pattern counts a letter exponent, already a homomorphism
    QmHandle ha = brooks_qm(W("a"));
    QmHandle hom_a = homogenize(ha, 6);
    Rng rng(47, 3);
    WordSampler sample{F2, 12};
    for (int i = 0; i < 100; ++i) {
        BraidWord g = sample(rng);
        CHECK(hom_a.eval(g) == ha.eval(g));
    }
    // h_{ab} on ab homogenizes to exactly 1
    QmHandle hab = homogenize(brooks_qm(W("a b")), 12);
    CHECK(hab.eval(W("a b")) == 1.0);
    CHECK(hab.eval(W("")) == 0.0);
    // commutator values, cross-checked by literal powering
    const BraidWord comm = free_reduce(W("a b a^-1 b^-1"));
    CHECK(hab.eval(comm) == doctest::Approx(oracles::brooks_by_powers(W("a b"), comm, 4096)));
    CHECK(hab.eval(comm) == doctest::Approx(1.0));
    const BraidWord comm2 = power(comm, 2);
    CHECK(hab.eval(comm2) == doctest::Approx(2.0));
    // homogeneous on powers
    for (int k = 1; k <= 5; ++k)
        CHECK(hab.eval(power(comm, k)) == doctest::Approx(k * hab.eval(comm)));
    CHECK_THROWS_AS(homogenize(ha, 0), InvalidArity);
}

TEST_CASE("qm_to_cochain") {
    QmHandle zero;
    zero.group = F2;
    zero.defect_estimate = 0.0;
    zero.eval = [](const BraidWord&) { return 0.0; };
    CochainHandle c1 = qm_to_cochain(zero, 1);
    CHECK(c1.eval({W("a"), W("b")}) == 0.0);
    CHECK_THROWS_AS(qm_to_cochain(zero, 3), InvalidDegree);

    QmHandle h = brooks_qm(W("a b"));
    CochainHandle d1 = qm_to_cochain(h, 1);
    CochainHandle d2 = qm_to_cochain(h, 2);
    REQUIRE(d2.bounded_hint.has_value());
    CHECK(*d2.bounded_hint == doctest::Approx(3.0 * h.defect_estimate));

    Rng rng(48, 8);
    WordSampler sample{F2, 24};
    // exact homogeneity of the degree-1 cochain
    for (int i = 0; i < 300; ++i) {
        BraidWord g0 = sample(rng), g1 = sample(rng), t = sample(rng);
        CHECK(d1.eval({g0, g1}) ==
              d1.eval({free_reduce(concat(g0, t)), free_reduce(concat(g1, t))}));
    }
    // sampled sup of the degree-2 image stays inside the recorded bound
    double sup = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double v = std::fabs(d2.eval({sample(rng), sample(rng), sample(rng)}));
        sup = std::max(sup, v);
    }
    CHECK(sup <= *d2.bounded_hint);
    // same check for a homogenized class at a smaller sample size
    QmHandle hh = homogenize(h, 8);
    CochainHandle hd2 = qm_to_cochain(hh, 2);
    double sup_h = 0.0;
    WordSampler small{F2, 10};
    for (int i = 0; i < 100; ++i) {
        const double v = std::fabs(hd2.eval({small(rng), small(rng), small(rng)}));
        sup_h = std::max(sup_h, v);
    }
    CHECK(sup_h <= *hd2.bounded_hint);
}

TEST_CASE("sup norm estimation") {
    CochainHandle zero;
    zero.group = F2;
    zero.degree = 1;
    zero.eval = [](const std::vector<BraidWord>&) { return 0.0; };
    Rng rng(49, 4);
    CHECK(sup_norm_estimate(zero, {F2, 16}, 50, rng) == 0.0);

    CochainHandle konst = zero;
    konst.eval = [](const std::vector<BraidWord>&) { return -2.25; };
    CHECK(sup_norm_estimate(konst, {F2, 16}, 50, rng) == 2.25);

    // triangle-inequality defect of the word-length cochain is visible
    CochainHandle len;
    len.group = F2;
    len.degree = 1;
    len.eval = [](const std::vector<BraidWord>& t) {
        return static_cast<double>(free_reduce(concat(t[1], inverse(t[0]))).size());
    };
    CochainHandle dlen = coboundary(len);
    CHECK(sup_norm_estimate(dlen, {F2, 20}, 2000, rng) >= 1.0);
    CHECK_THROWS_AS(sup_norm_estimate(len, {F2, 8}, 0, rng), InsufficientSamples);
}

TEST_CASE("combinations and the P3 pullback") {
    QmHandle combo = qm_combine({{brooks_qm(W("a b")), 2.0}, {brooks_qm(W("a")), -1.0}});
    CHECK(combo.eval(W("a b a b")) == doctest::Approx(2.0 * 2.0 - 1.0 * 2.0));

    QmHandle pulled = qm_pullback_p3(brooks_qm(W("a b")));
    const GroupId P3 = GroupId::p3();
    CHECK(pulled.eval(BraidWord::parse(P3, "a z b z a b")) ==
          brooks_qm(W("a b")).eval(W("a b a b")));
    CHECK(pulled.eval(BraidWord::parse(P3, "z")) == 0.0);
}

TEST_CASE("quasimorphism spec loading") {
    const std::string spec = R"({
        "group": "free:2",
        "terms": [{"pattern": "a b", "weight": 1.0}],
        "homogenize_depth": 12,
        "pullback": "p3"
    })";
    QmHandle q = load_qm_spec(spec);
    CHECK(q.group == GroupId::p3());
    const BraidWord comm2 = power(BraidWord::parse(GroupId::p3(), "a b a^-1 b^-1"), 2);
    CHECK(q.eval(comm2) == doctest::Approx(2.0));
    CHECK_THROWS_AS(load_qm_spec("{"), InvalidConfig);
    CHECK_THROWS_AS(load_qm_spec(R"({"group":"nope","terms":[]})"), InvalidConfig);
}
