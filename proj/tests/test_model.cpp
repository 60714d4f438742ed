#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ggbraid/estimate.hpp"
#include "ggbraid/flows.hpp"
#include "ggbraid/predict.hpp"
#include "ggbraid/regions.hpp"
#include "ggbraid/trajectory.hpp"
#include "oracles.hpp"

using namespace ggbraid;

namespace {

constexpr double kTau = 6.28318530717958647692;

// net turns of the difference vector between two flowed points
double relative_winding(const Isotopy& iso, const SurfacePoint& p, const SurfacePoint& q,
                        int steps = 4096) {
    double total = 0.0;
    double prev = 0.0;
    for (int k = 0; k <= steps; ++k) {
        const double t = static_cast<double>(k) / steps;
        const SurfacePoint a = iso.flow(t, p), b = iso.flow(t, q);
        const double ang = std::atan2(a.y - b.y, a.x - b.x);
        if (k > 0) {
            double d = ang - prev;
            while (d > 3.14159265358979324) d -= kTau;
            while (d < -3.14159265358979324) d += kTau;
            total += d;
        }
        prev = ang;
    }
    return total / kTau;
}

}  // namespace

TEST_CASE("region layout areas and feasibility") {
    const RegionSpec disc = build_regions(Surface::Disc, 0.1);
    for (double a : disc.areas) CHECK(a == doctest::Approx(0.3).epsilon(1e-12));
    std::string why;
    CHECK(verify_region_invariants(disc, &why));

    const RegionSpec torus = build_regions(Surface::Torus, 0.1);
    for (double a : torus.areas) CHECK(a == doctest::Approx(0.45).epsilon(1e-12));
    CHECK(verify_region_invariants(torus, &why));

    for (Surface s : {Surface::Disc, Surface::Sphere, Surface::Torus}) {
        for (double eps : {0.05, 0.15, 0.3, 0.5, 0.9, 0.999}) {
            const RegionSpec r = build_regions(s, eps);
            CHECK_MESSAGE(verify_region_invariants(r, &why), why);
        }
        CHECK_THROWS_AS(build_regions(s, 0.9999), InfeasibleEpsilon);
        CHECK_THROWS_AS(build_regions(s, 1.5), InvalidConfig);
        auto [lo, hi] = feasible_epsilon_range(s);
        CHECK(lo < 0.05);
        CHECK(hi > 0.999);
    }
}

TEST_CASE("membership, classification and conditional sampling") {
    Rng rng(81, 0);
    for (Surface s : {Surface::Disc, Surface::Sphere, Surface::Torus}) {
        const RegionSpec r = build_regions(s, 0.2);
        // base points classify to the diagonal type
        const TypeSignature tz = classify_type(r.zbase, r);
        CHECK(tz.good);
        for (int c : tz.counts) CHECK(c == 1);
        // conditional sampling lands where requested
        for (const TypeSignature& t : all_good_types(s)) {
            const Configuration x = sample_configuration_of_type(r, t, rng);
            CHECK(classify_type(x, r) == t);
        }
    }
    // the worked example: two points in the first region, one in the third
    const RegionSpec disc = build_regions(Surface::Disc, 0.2);
    TypeSignature t;
    t.counts = {2, 0, 1};
    t.good = true;
    const Configuration x = sample_configuration_of_type(disc, t, rng);
    CHECK(classify_type(x, disc).str() == "2,0,1");
    // any point off the union is bad
    Configuration y = disc.zbase;
    y.pts[0] = SurfacePoint::disc_polar(0.5 * (disc.disc().s1 + disc.disc().s2), 1.0);
    CHECK_FALSE(classify_type(y, disc).good);
}

TEST_CASE("sampled region fractions match closed-form areas") {
    Rng rng(82, 1);
    for (Surface s : {Surface::Disc, Surface::Sphere, Surface::Torus}) {
        const RegionSpec r = build_regions(s, 0.2);
        const int n = 200000;
        std::vector<long long> hits(static_cast<std::size_t>(r.m) + 1, 0);
        for (int i = 0; i < n; ++i) {
            const SurfacePoint p = sample_uniform_point(s, rng);
            const int reg = which_region(p, r);
            ++hits[reg < 0 ? r.m : reg];
        }
        for (int reg = 0; reg < r.m; ++reg) {
            const double want = r.areas[reg];
            const double got = static_cast<double>(hits[reg]) / n;
            const double sigma = std::sqrt(want * (1.0 - want) / n);
            CHECK(std::fabs(got - want) < 4.0 * sigma);
        }
    }
}

TEST_CASE("uniform samplers have the right symmetry") {
    Rng rng(83, 2);
    double sx = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) sx += sample_uniform_point(Surface::Disc, rng).x;
    CHECK(std::fabs(sx / n) < 0.01);
    // spherical cap fraction vs cap area
    long long cap = 0;
    for (int i = 0; i < n; ++i)
        if (sample_uniform_point(Surface::Sphere, rng).z > 0.4) ++cap;
    const double want = 0.3, got = static_cast<double>(cap) / n;
    CHECK(std::fabs(got - want) < 4.0 * std::sqrt(want * (1.0 - want) / n));
}

TEST_CASE("model flows: support, closure and winding") {
    Rng rng(84, 3);
    const double times[] = {0.17, 0.5, 0.83, 1.0};

    for (Surface s : {Surface::Disc, Surface::Sphere, Surface::Torus}) {
        const RegionSpec r = build_regions(s, 0.25);
        const GroupId q = quotient_group(s);
        for (int gen = 0; gen < 2; ++gen) {
            const ModelFlow mf = rho_flow(r, q.gens[gen]);
            // the time-0 map is the identity on sampled points
            for (int i = 0; i < 50; ++i) {
                const SurfacePoint p = sample_uniform_point(s, rng);
                CHECK(distance(mf.iso.flow(0.0, p), p) < 1e-9);
            }
            // points of every U region return at time 1 (full circuits)
            for (int reg = 0; reg < r.m; ++reg)
                for (int i = 0; i < 30; ++i) {
                    const SurfacePoint p = sample_in_region(r, reg, rng);
                    CHECK(distance(mf.iso.flow(1.0, p), p) < 1e-9);
                }
        }
    }

    // disc specifics: supports and pairwise winding
    const RegionSpec r = build_regions(Surface::Disc, 0.25);
    const Isotopy fa = rho_flow(r, "a").iso;
    const Isotopy fb = rho_flow(r, "b").iso;
    for (int i = 0; i < 40; ++i) {
        const SurfacePoint u3 = sample_in_region(r, 2, rng);
        for (double t : times) CHECK(distance(fa.flow(t, u3), u3) < 1e-15);  // U3 outside V12
        const SurfacePoint u1 = sample_in_region(r, 0, rng);
        for (double t : times) CHECK(distance(fb.flow(t, u1), u1) < 1e-15);  // U1 outside V23
    }
    // a-flow winds any two points of W12 around each other exactly once
    const SurfacePoint p1 = sample_in_region(r, 0, rng);
    const SurfacePoint p2 = sample_in_region(r, 1, rng);
    CHECK(relative_winding(fa, p1, p2) == doctest::Approx(1.0).epsilon(0.01));
    // and the b-flow does the same for W23 points
    const SurfacePoint q1 = sample_in_region(r, 1, rng);
    const SurfacePoint q2 = sample_in_region(r, 2, rng);
    CHECK(relative_winding(fb, q1, q2) == doctest::Approx(1.0).epsilon(0.01));
    // a point of U1 and a point of U3 never wind under either flow
    CHECK(relative_winding(fa, p1, sample_in_region(r, 2, rng)) ==
          doctest::Approx(0.0).epsilon(0.01));
    CHECK(relative_winding(fb, sample_in_region(r, 0, rng), q2) ==
          doctest::Approx(0.0).epsilon(0.01));
}

TEST_CASE("model flows preserve area (sampled)") {
    Rng rng(85, 4);
    const RegionSpec r = build_regions(Surface::Disc, 0.25);
    const DiscLayout& d = r.disc();
    for (const std::string& gen : {"a", "b"}) {
        const Isotopy f = rho_flow(r, gen).iso;
        // push a uniform sample through a mid-time map and test uniformity
        // against a few fixed test cells
        const int n = 200000;
        const double cells[3][2] = {{0.0, d.s1}, {d.v2, d.w2}, {d.w1, d.s4}};
        long long hits[3] = {0, 0, 0};
        for (int i = 0; i < n; ++i) {
            SurfacePoint p = sample_uniform_point(Surface::Disc, rng);
            p = f.flow(0.37, p);
            const double s = p.x * p.x + p.y * p.y;
            for (int c = 0; c < 3; ++c)
                if (s > cells[c][0] && s < cells[c][1]) ++hits[c];
        }
        for (int c = 0; c < 3; ++c) {
            const double want = cells[c][1] - cells[c][0];
            const double got = static_cast<double>(hits[c]) / n;
            const double sigma = std::sqrt(want * (1.0 - want) / n);
            CHECK(std::fabs(got - want) < 4.0 * sigma);
        }
    }
}

TEST_CASE("torus flows move the marked point around the right handle") {
    Rng rng(86, 5);
    const RegionSpec r = build_regions(Surface::Torus, 0.2);
    const Isotopy fa = rho_flow(r, "a1").iso;
    const Isotopy fb = rho_flow(r, "b1").iso;
    const SurfacePoint z1 = r.zbase.pts[0], z2 = r.zbase.pts[1];
    // z2 never moves
    for (double t : {0.25, 0.5, 0.75, 1.0}) {
        CHECK(distance(fa.flow(t, z2), z2) < 1e-15);
        CHECK(distance(fb.flow(t, z2), z2) < 1e-15);
    }
    // z1 winds the v-circle once under a1 and the u-circle once under b1
    double vwind = 0.0, uwind = 0.0;
    const int steps = 2048;
    SurfacePoint pa = z1, pb = z1;
    for (int k = 1; k <= steps; ++k) {
        const double t = static_cast<double>(k) / steps;
        const SurfacePoint na = fa.flow(t, z1), nb = fb.flow(t, z1);
        auto wrap = [](double dv) {
            if (dv > 0.5) return dv - 1.0;
            if (dv < -0.5) return dv + 1.0;
            return dv;
        };
        vwind += wrap(na.y - pa.y);
        uwind += wrap(nb.x - pb.x);
        pa = na;
        pb = nb;
    }
    CHECK(vwind == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(uwind == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("symbolic case table") {
    const GroupId p3 = GroupId::p3();
    auto T = [](std::initializer_list<int> c) {
        TypeSignature t;
        t.counts = c;
        t.good = true;
        return t;
    };
    const BraidWord a = BraidWord::parse(p3, "a");
    const BraidWord b = BraidWord::parse(p3, "b");
    const BraidWord z = BraidWord::parse(p3, "z");
    // the eight disc rows
    CHECK(predicted_gamma(a, T({1, 1, 1}), Surface::Disc).word == a);
    CHECK(predicted_gamma(b, T({1, 1, 1}), Surface::Disc).word == b);
    CHECK(predicted_gamma(z, T({1, 1, 1}), Surface::Disc).word.empty());
    CHECK(predicted_gamma(a, T({3, 0, 0}), Surface::Disc).word == z);
    CHECK(predicted_gamma(a, T({2, 1, 0}), Surface::Disc).word == z);
    CHECK(predicted_gamma(b, T({2, 1, 0}), Surface::Disc).word.empty());
    CHECK(predicted_gamma(b, T({0, 0, 3}), Surface::Disc).word == z);
    CHECK(predicted_gamma(b, T({0, 1, 2}), Surface::Disc).word == z);
    CHECK(predicted_gamma(a, T({0, 3, 0}), Surface::Disc).word == z);
    CHECK(predicted_gamma(b, T({0, 3, 0}), Surface::Disc).word == z);
    CHECK(predicted_gamma(a, T({2, 0, 1}), Surface::Disc).word == a);
    CHECK(predicted_gamma(b, T({1, 0, 2}), Surface::Disc).word == b);
    CHECK(predicted_gamma(BraidWord::parse(p3, "a b"), T({0, 2, 1}), Surface::Disc).word ==
          free_reduce(BraidWord::parse(p3, "a z")));
    CHECK(predicted_gamma(BraidWord::parse(p3, "a b"), T({1, 2, 0}), Surface::Disc).word ==
          free_reduce(BraidWord::parse(p3, "b z")));
    // commutators die off the diagonal type
    const BraidWord comm = BraidWord::parse(p3, "a b a^-1 b^-1");
    for (const TypeSignature& t : all_good_types(Surface::Disc)) {
        if (t.counts == std::vector<int>{1, 1, 1}) continue;
        CHECK(predicted_gamma(comm, t, Surface::Disc).word.empty());
    }
    CHECK_THROWS_AS(predicted_gamma(a, TypeSignature{{1, 1, 1}, false}, Surface::Disc),
                    BadPointNoPrediction);

    // sphere rows
    const GroupId sp = GroupId::sphere_p4();
    const BraidWord d1 = BraidWord::parse(sp, "d1");
    const BraidWord d2 = BraidWord::parse(sp, "d2");
    auto T4 = [](std::initializer_list<int> c) {
        TypeSignature t;
        t.counts = c;
        t.good = true;
        return t;
    };
    CHECK(predicted_gamma(d1, T4({1, 1, 1, 1}), Surface::Sphere).word == d1);
    CHECK(predicted_gamma(d2, T4({1, 1, 1, 1}), Surface::Sphere).word == d2);
    CHECK(predicted_gamma(d1, T4({0, 2, 0, 2}), Surface::Sphere).word == d1);
    CHECK(predicted_gamma(d2, T4({0, 2, 0, 2}), Surface::Sphere).word == d1);
    CHECK(predicted_gamma(d2, T4({2, 0, 2, 0}), Surface::Sphere).word == sphere_delta3_sq());
    const BraidWord w12 = BraidWord::parse(sp, "d1 d2 d1^-1");
    CHECK(predicted_gamma(w12, T4({0, 2, 0, 2}), Surface::Sphere).word == d1);

    // torus rows
    const GroupId tp = GroupId::torus_p2();
    const BraidWord a1 = BraidWord::parse(tp, "a1");
    const BraidWord b1 = BraidWord::parse(tp, "b1");
    auto T2 = [](std::initializer_list<int> c) {
        TypeSignature t;
        t.counts = c;
        t.good = true;
        return t;
    };
    CHECK(predicted_gamma(a1, T2({1, 1}), Surface::Torus).word == a1);
    CHECK(predicted_gamma(a1, T2({2, 0}), Surface::Torus).word.empty());
    CHECK(predicted_gamma(a1, T2({0, 2}), Surface::Torus).word.empty());
    CHECK(predicted_gamma(b1, T2({1, 1}), Surface::Torus).word == b1);
    CHECK(predicted_gamma(b1, T2({2, 0}), Surface::Torus).word.empty());
}

TEST_CASE("predictions are multiplicative over words") {
    Rng rng(87, 6);
    for (Surface s : {Surface::Disc, Surface::Sphere, Surface::Torus}) {
        const GroupId g = quotient_group(s);
        WordSampler sample{g, 10};
        for (const TypeSignature& t : all_good_types(s)) {
            for (int i = 0; i < 25; ++i) {
                const BraidWord u = sample(rng), v = sample(rng);
                const BraidWord lhs = predicted_gamma(free_reduce(concat(u, v)), t, s).word;
                const BraidWord rhs = free_reduce(
                    concat(predicted_gamma(u, t, s).word, predicted_gamma(v, t, s).word));
                CHECK(lhs == rhs);
            }
        }
    }
}

TEST_CASE("equal s-vectors give the same prediction off the diagonal type") {
    Rng rng(88, 7);
    const GroupId p3 = GroupId::p3();
    WordSampler sample{p3, 10};
    for (int i = 0; i < 200; ++i) {
        BraidWord u = sample(rng), v = sample(rng);
        if (!(s_vector(u) == s_vector(v))) continue;
        for (const TypeSignature& t : all_good_types(Surface::Disc)) {
            if (t.counts == std::vector<int>{1, 1, 1}) continue;
            CHECK(predicted_gamma(u, t, Surface::Disc).word ==
                  predicted_gamma(v, t, Surface::Disc).word);
        }
    }
}

TEST_CASE("case table soundness at desk scale") {
    // extracted braids match the symbolic table in conjugacy, across every
    // good type and a small word set (the acceptance suite runs the full set)
    const RegionSpec r = build_regions(Surface::Disc, 0.25);
    const GroupId p3 = GroupId::p3();
    Rng rng(89, 8);
    std::vector<BraidWord> alphas = {
        BraidWord::parse(p3, "a"), BraidWord::parse(p3, "b"), BraidWord::parse(p3, "z"),
        BraidWord::parse(p3, "a b"), BraidWord::parse(p3, "a b a^-1 b^-1")};
    WordSampler sample{p3, 6};
    alphas.push_back(sample(rng));
    alphas.push_back(sample(rng));
    int checks = 0;
    for (const TypeSignature& t : all_good_types(Surface::Disc)) {
        for (int rep = 0; rep < 3; ++rep) {
            const Configuration x = sample_configuration_of_type(r, t, rng, 1e-4);
            for (const BraidWord& alpha : alphas) {
                const Isotopy flow = rho_word_flow(r, alpha);
                GammaOptions go;
                go.seed = 7000 + checks;
                const BraidWord got = gamma(flow, x, r.zbase, go);
                const BraidWord want = embed_P3(predicted_gamma(alpha, t, Surface::Disc).word);
                CHECK_MESSAGE(conjugate_in_group(got, want, GroupId::b3()),
                              "type " << t.str() << " alpha '" << alpha.str() << "' got '"
                                      << got.str() << "'");
                ++checks;
            }
        }
    }
    CHECK(checks == 10 * 3 * 7);
}

TEST_CASE("lambda constants") {
    CHECK(lambda_constant(Surface::Disc).value == doctest::Approx(2.0 / 9.0).epsilon(1e-15));
    CHECK(lambda_constant(Surface::Sphere).value == doctest::Approx(3.0 / 32.0).epsilon(1e-15));
    CHECK(lambda_constant(Surface::Torus).value == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(lambda_epsilon(Surface::Disc, 0.1) ==
          doctest::Approx(6.0 * std::pow(0.3, 3)).epsilon(1e-15));
}

TEST_CASE("region spec serializes with its geometry") {
    const RegionSpec r = build_regions(Surface::Disc, 0.3);
    const std::string j = r.to_json();
    CHECK(j.find("\"epsilon\"") != std::string::npos);
    CHECK(j.find("\"s1\"") != std::string::npos);
    CHECK(j.find("\"zbase\"") != std::string::npos);
}
