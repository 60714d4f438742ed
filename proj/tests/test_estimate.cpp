#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ggbraid/estimate.hpp"

using namespace ggbraid;

namespace {

const GroupId P3 = GroupId::p3();

BraidWord W(const std::string& text) { return BraidWord::parse(P3, text); }

CochainHandle test_class_degree1() {
    return qm_to_cochain(qm_pullback_p3(homogenize(
                             brooks_qm(BraidWord::parse(GroupId::free_group(2), "a b")), 12)),
                         1);
}

}  // namespace

TEST_CASE("zero cochain estimates to zero") {
    CochainHandle zero;
    zero.group = P3;
    zero.degree = 1;
    zero.note = "zero";
    zero.eval = [](const std::vector<BraidWord>&) { return 0.0; };
    const RegionSpec r = build_regions(Surface::Disc, 0.3);
    McOptions opt;
    opt.n_samples = 2000;
    opt.seed = 11;
    EstimateReport rep = mc_gamma_hat(zero, {W(""), W("a b")}, r, opt);
    CHECK(rep.mean == 0.0);
    CHECK(rep.standard_error == 0.0);
}

TEST_CASE("validation errors") {
    CochainHandle c = test_class_degree1();
    const RegionSpec r = build_regions(Surface::Disc, 0.3);
    McOptions opt;
    opt.n_samples = 50;
    CHECK_THROWS_AS(mc_gamma_hat(c, {W(""), W("a")}, r, opt), InsufficientSamples);
    opt.n_samples = 200;
    CHECK_THROWS_AS(mc_gamma_hat(c, {W("")}, r, opt), InvalidConfig);
    CochainHandle wrong = c;
    wrong.group = GroupId::free_group(2);
    CHECK_THROWS_AS(mc_gamma_hat(wrong, {W(""), W("a")}, r, opt), GroupMismatch);
}

TEST_CASE("bad-set fraction tracks the closed form on every surface") {
    for (Surface s : {Surface::Disc, Surface::Sphere, Surface::Torus}) {
        const GroupId q = quotient_group(s);
        CochainHandle zero;
        zero.group = q;
        zero.degree = 0;
        zero.note = "zero";
        zero.eval = [](const std::vector<BraidWord>&) { return 0.0; };
        for (double eps : {0.3, 0.1}) {
            const RegionSpec r = build_regions(s, eps);
            McOptions opt;
            opt.n_samples = 20000;
            opt.seed = 17;
            EstimateReport rep = mc_gamma_hat(zero, {BraidWord(q)}, r, opt);
            const double p = bad_volume_theory(s, eps);
            const double sigma = std::sqrt(p * (1.0 - p) / opt.n_samples);
            CHECK(std::fabs(rep.bad_fraction - p) < 3.0 * sigma);
            // fractions add up to one exactly
            double total = rep.bad_fraction;
            for (const auto& [t, ts] : rep.per_type) total += rep.type_volume_fraction(t);
            CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("degree-1 estimate concentrates on the diagonal type") {
    CochainHandle c = test_class_degree1();
    const BraidWord alpha = free_reduce(power(W("a b a^-1 b^-1"), 2));
    const double phi_alpha = c.eval({W(""), alpha});
    CHECK(phi_alpha == doctest::Approx(2.0));

    const RegionSpec r = build_regions(Surface::Disc, 0.2);
    McOptions opt;
    opt.n_samples = 4000;
    opt.seed = 23;
    EstimateReport rep = mc_gamma_hat(c, {W(""), alpha}, r, opt);

    TypeSignature diag{{1, 1, 1}, true};
    // off-diagonal good partials vanish identically (the commutator has
    // trivial letter counts)
    for (const auto& [t, ts] : rep.per_type) {
        if (t == diag) continue;
        CHECK(ts.sum == 0.0);
    }
    // the diagonal partial approximates lambda_eps * phi(alpha)
    const double want = lambda_epsilon(Surface::Disc, 0.2) * phi_alpha;
    const double got = rep.type_partial_mean(diag);
    CHECK(std::fabs(got - want) < 3.0 * rep.type_partial_stderr(diag) + 1e-9);
    CHECK(rep.audited > 0);
    CHECK(rep.bad_in_mean);
}

TEST_CASE("degree-2 commutator triple") {
    CochainHandle c2 = qm_to_cochain(qm_pullback_p3(homogenize(
                                         brooks_qm(BraidWord::parse(GroupId::free_group(2), "a b")),
                                         12)),
                                     2);
    const std::vector<BraidWord> triple = {W(""), W("a b a^-1 b^-1"), W("a a b a^-1 a^-1 b^-1")};
    const double reference = c2.eval(triple);
    CHECK(reference == doctest::Approx(1.0).epsilon(1e-3));

    const RegionSpec r = build_regions(Surface::Disc, 0.25);
    McOptions opt;
    opt.n_samples = 4000;
    opt.seed = 29;
    EstimateReport rep = mc_gamma_hat(c2, triple, r, opt);
    TypeSignature diag{{1, 1, 1}, true};
    for (const auto& [t, ts] : rep.per_type) {
        if (t == diag) continue;
        CHECK(ts.sum == 0.0);  // exact zero off the diagonal
    }
    const double want = lambda_epsilon(Surface::Disc, 0.25) * reference;
    CHECK(std::fabs(rep.type_partial_mean(diag) - want) <
          3.0 * rep.type_partial_stderr(diag) + 1e-9);
}

TEST_CASE("degenerate diagonal tuple") {
    CochainHandle c2 = qm_to_cochain(qm_pullback_p3(brooks_qm(
                                         BraidWord::parse(GroupId::free_group(2), "a b"))),
                                     2);
    const RegionSpec r = build_regions(Surface::Disc, 0.3);
    McOptions opt;
    opt.n_samples = 500;
    opt.seed = 31;
    EstimateReport rep = mc_gamma_hat(c2, {W("a"), W("a"), W("a")}, r, opt);
    CHECK(rep.mean == 0.0);
}

TEST_CASE("estimator homogeneity under shared sample streams") {
    CochainHandle c = test_class_degree1();
    const BraidWord alpha = free_reduce(power(W("a b a^-1 b^-1"), 2));
    const BraidWord h = W("b a b^-1 a^-1");
    const RegionSpec r = build_regions(Surface::Disc, 0.1);
    McOptions opt;
    opt.n_samples = 6000;
    opt.seed = 37;
    EstimateReport r1 = mc_gamma_hat(c, {W(""), alpha}, r, opt);
    EstimateReport r2 =
        mc_gamma_hat(c, {h, free_reduce(concat(alpha, h))}, r, opt);
    CHECK(std::fabs(r1.mean - r2.mean) <=
          3.0 * (r1.standard_error + r2.standard_error) + 1e-12);
}

TEST_CASE("determinism across runs and worker counts") {
    CochainHandle c = test_class_degree1();
    const RegionSpec r = build_regions(Surface::Disc, 0.3);
    McOptions opt;
    opt.n_samples = 1500;
    opt.seed = 41;
    opt.workers = 1;
    EstimateReport a = mc_gamma_hat(c, {W(""), W("a b")}, r, opt);
    EstimateReport b = mc_gamma_hat(c, {W(""), W("a b")}, r, opt);
    CHECK(a.to_json() == b.to_json());
    opt.workers = 2;
    EstimateReport d = mc_gamma_hat(c, {W(""), W("a b")}, r, opt);
    // the block-indexed sample streams make the result worker-count invariant
    opt.workers = 1;
    CHECK(d.mean == a.mean);
    CHECK(d.to_json().substr(0, d.to_json().find("workers")) ==
          a.to_json().substr(0, a.to_json().find("workers")));
}

TEST_CASE("sphere and torus estimates run symbolically") {
    for (Surface s : {Surface::Sphere, Surface::Torus}) {
        const GroupId q = quotient_group(s);
        CochainHandle c = qm_to_cochain(brooks_qm(BraidWord::parse(q, q.gens[0])), 1);
        const RegionSpec r = build_regions(s, 0.2);
        McOptions opt;
        opt.n_samples = 3000;
        opt.seed = 43;
        EstimateReport rep =
            mc_gamma_hat(c, {BraidWord(q), BraidWord::parse(q, q.gens[0])}, r, opt);
        CHECK_FALSE(rep.bad_in_mean);
        CHECK(rep.bad_count > 0);
        CHECK(rep.bad_abs_max >= 0.0);
        TypeSignature diag{std::vector<int>(static_cast<std::size_t>(r.m), 1), true};
        CHECK(rep.type_partial_mean(diag) != 0.0);
    }
}

TEST_CASE("epsilon sweep on a small budget") {
    CochainHandle c = test_class_degree1();
    const BraidWord alpha = free_reduce(power(W("a b a^-1 b^-1"), 2));
    McOptions opt;
    opt.n_samples = 3000;
    opt.seed = 47;
    SweepResult sw = epsilon_sweep(c, {W(""), alpha}, Surface::Disc, {0.4, 0.15}, opt);
    CHECK(sw.reference_value == doctest::Approx(2.0));
    CHECK(sw.reports.size() == 2);
    CHECK(sw.all_within_budget);
    // validation of the epsilon ordering
    CHECK_THROWS_AS(epsilon_sweep(c, {W(""), alpha}, Surface::Disc, {0.1, 0.2}, opt),
                    InvalidConfig);
    // csv has one row per (epsilon, type) plus bad rows
    const std::string csv = sw.to_csv();
    std::size_t rows = static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n'));
    CHECK(rows >= 2 * 2);
    CHECK(csv.find("epsilon,type,") == 0);
}
