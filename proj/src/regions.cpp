#include "ggbraid/regions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <json.hpp>

namespace ggbraid {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kFeatureFloor = 2e-4;  // smallest admissible layout feature

struct DiscParams {
    double T, G, s1, s2, s3, s4, s5, eta;
};

DiscParams disc_params(double eps) {
    DiscParams p;
    p.eta = kPi * eps / 8.0;
    p.T = (1.0 - eps) / (3.0 * (1.0 - eps / 8.0));
    p.G = (1.0 - (1.0 - eps) / 3.0 - 2.0 * p.T) / 3.0;
    p.s1 = (1.0 - eps) / 3.0;
    p.s2 = p.s1 + p.G;
    p.s3 = p.s2 + p.T;
    p.s4 = p.s3 + p.G;
    p.s5 = p.s4 + p.T;
    return p;
}

double disc_feature_min(double eps) {
    const DiscParams p = disc_params(eps);
    return std::min(std::min(p.G, p.T), std::min(p.s1, eps / 24.0));
}

struct SphereParams {
    double c1, c2, c3, c4, c5, c6, T, G, eta;
};

SphereParams sphere_params(double eps) {
    SphereParams p;
    p.eta = kPi * eps / 8.0;
    p.c1 = (1.0 + eps) / 2.0;
    p.T = (1.0 - eps) / (2.0 * (1.0 - eps / 8.0));
    p.G = (1.0 + eps - 2.0 * p.T) / 3.0;
    p.c2 = p.c1 - p.G;
    p.c3 = p.c2 - p.T;
    p.c4 = p.c3 - p.G;
    p.c5 = p.c4 - p.T;
    p.c6 = p.c5 - p.G;
    return p;
}

double sphere_feature_min(double eps) {
    const SphereParams p = sphere_params(eps);
    return std::min(std::min(p.G, p.T), std::min((1.0 - eps) / 2.0, eps / 24.0));
}

struct TorusParams {
    double g, vex, clr, hL, hR, mv;
};

TorusParams torus_params(double eps) {
    TorusParams p;
    p.g = eps / 16.0;
    p.vex = (1.0 - eps) / (1.0 - 4.0 * p.g);
    p.clr = (1.0 - p.vex) / 2.0;
    p.hL = 0.5 - 2.0 * p.clr / 3.0;
    p.hR = p.clr / 3.0;
    p.mv = p.clr / 4.0;
    return p;
}

double torus_feature_min(double eps) {
    const TorusParams p = torus_params(eps);
    return std::min(std::min(p.g, p.hR), std::min(p.mv, std::min(p.vex, 0.5 - 2.0 * p.g)));
}

double feature_min(Surface s, double eps) {
    switch (s) {
        case Surface::Disc: return disc_feature_min(eps);
        case Surface::Sphere: return sphere_feature_min(eps);
        case Surface::Torus: return torus_feature_min(eps);
    }
    return 0.0;
}

}  // namespace

std::pair<double, double> feasible_epsilon_range(Surface s) {
    auto feasible = [&](double e) { return feature_min(s, e) >= kFeatureFloor; };
    double lo = 1e-6, hi = 1.0 - 1e-9;
    // features shrink monotonically toward both ends; bisect from the middle
    double a = lo, b = 0.5;
    for (int i = 0; i < 60; ++i) {
        double mid = 0.5 * (a + b);
        (feasible(mid) ? b : a) = mid;
    }
    const double eps_min = b;
    a = 0.5, b = hi;
    for (int i = 0; i < 60; ++i) {
        double mid = 0.5 * (a + b);
        (feasible(mid) ? a : b) = mid;
    }
    return {eps_min, a};
}

RegionSpec build_regions(Surface s, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw InvalidConfig("epsilon must lie in (0,1)");
    if (feature_min(s, eps) < kFeatureFloor) {
        auto [lo, hi] = feasible_epsilon_range(s);
        throw InfeasibleEpsilon("epsilon " + std::to_string(eps) +
                                    " leaves a layout feature below the numeric floor; feasible "
                                    "range is [" +
                                    std::to_string(lo) + ", " + std::to_string(hi) + "]",
                                lo, hi);
    }

    RegionSpec r;
    r.surface = s;
    r.epsilon = eps;
    r.m = surface_strands(s);
    r.areas.assign(r.m, (1.0 - eps) / r.m);

    switch (s) {
        case Surface::Disc: {
            const DiscParams p = disc_params(eps);
            DiscLayout d;
            d.s1 = p.s1;
            d.s2 = p.s2;
            d.s3 = p.s3;
            d.s4 = p.s4;
            d.s5 = p.s5;
            d.gap = p.G;
            d.band = p.T;
            d.eta = p.eta;
            d.eta_w = 2.0 * p.eta / 3.0;
            d.eta_v = p.eta / 3.0;
            d.w1 = p.s3 + p.G / 3.0;
            d.v1 = p.s3 + 2.0 * p.G / 3.0;
            d.v2 = p.s1 + p.G / 3.0;
            d.w2 = p.s1 + 2.0 * p.G / 3.0;
            d.out_w = p.s5 + p.G / 3.0;
            d.out_v = p.s5 + 2.0 * p.G / 3.0;
            r.layout = d;
            r.zbase.pts = {SurfacePoint::disc(0.0, 0.0),
                           SurfacePoint::disc_polar(0.5 * (d.s2 + d.s3), kPi),
                           SurfacePoint::disc_polar(0.5 * (d.s4 + d.s5), kPi)};
            break;
        }
        case Surface::Sphere: {
            const SphereParams p = sphere_params(eps);
            SphereLayout l;
            l.c1 = p.c1;
            l.c2 = p.c2;
            l.c3 = p.c3;
            l.c4 = p.c4;
            l.c5 = p.c5;
            l.c6 = p.c6;
            l.eta = p.eta;
            l.eta_w = 2.0 * p.eta / 3.0;
            l.eta_v = p.eta / 3.0;
            l.w1 = p.c3 - p.G / 3.0;
            l.v1 = p.c3 - 2.0 * p.G / 3.0;
            l.w2top = p.c2 + p.G / 3.0;
            l.v2top = p.c2 + 2.0 * p.G / 3.0;
            l.w3bot = p.c5 - p.G / 3.0;
            l.v3bot = p.c5 - 2.0 * p.G / 3.0;
            r.layout = l;
            r.zbase.pts = {SurfacePoint::sphere(0.0, 0.0, 1.0),
                           SurfacePoint::sphere_zphi(0.5 * (l.c2 + l.c3), kPi),
                           SurfacePoint::sphere_zphi(0.5 * (l.c4 + l.c5), kPi),
                           SurfacePoint::sphere(0.0, 0.0, -1.0)};
            break;
        }
        case Surface::Torus: {
            const TorusParams p = torus_params(eps);
            TorusLayout l;
            l.g = p.g;
            l.u1lo = p.g;
            l.u1hi = 0.5 - p.g;
            l.u2lo = 0.5 + p.g;
            l.u2hi = 1.0 - p.g;
            l.vex = p.vex;
            l.clr = p.clr;
            l.wa_lo = 2.0 * p.g / 3.0;
            l.wa_hi = 0.5 - 2.0 * p.g / 3.0;
            l.va_lo = p.g / 3.0;
            l.va_hi = 0.5 - p.g / 3.0;
            l.hL = p.hL;
            l.hR = p.hR;
            l.mv = p.mv;
            l.bu = {p.g, 0.5 - p.g, 0.5 + p.g, 1.0 - p.g, 1.0 + p.g};
            l.bf = {0.5, 0.5, 0.0, 0.0, -0.5};
            l.bh = {p.hL, p.hL, p.hR, p.hR, p.hL};
            r.layout = l;
            r.zbase.pts = {SurfacePoint::torus(0.25, 0.5), SurfacePoint::torus(0.75, 0.5)};
            break;
        }
    }
    return r;
}

namespace {

double angle_of(const SurfacePoint& p) { return std::atan2(p.y, p.x); }

bool in_slit_annulus(double s, double theta, double lo, double hi, double eta) {
    return s > lo && s < hi && std::fabs(theta) > eta;
}

}  // namespace

int which_region(const SurfacePoint& p, const RegionSpec& r) {
    switch (r.surface) {
        case Surface::Disc: {
            const DiscLayout& d = r.disc();
            const double s = p.x * p.x + p.y * p.y;
            const double th = angle_of(p);
            if (s < d.s1) return 0;
            if (in_slit_annulus(s, th, d.s2, d.s3, d.eta)) return 1;
            if (in_slit_annulus(s, th, d.s4, d.s5, d.eta)) return 2;
            return -1;
        }
        case Surface::Sphere: {
            const SphereLayout& l = r.sphere();
            const double z = p.z;
            const double ph = angle_of(p);
            if (z > l.c1) return 0;
            if (z > l.c3 && z < l.c2 && std::fabs(ph) > l.eta) return 1;
            if (z > l.c5 && z < l.c4 && std::fabs(ph) > l.eta) return 2;
            if (z < l.c6) return 3;
            return -1;
        }
        case Surface::Torus: {
            const TorusLayout& l = r.torus();
            const bool v_ok = p.y > l.clr && p.y < 1.0 - l.clr;
            if (v_ok && p.x > l.u1lo && p.x < l.u1hi) return 0;
            if (v_ok && p.x > l.u2lo && p.x < l.u2hi) return 1;
            return -1;
        }
    }
    return -1;
}

TypeSignature classify_type(const Configuration& x, const RegionSpec& r) {
    TypeSignature t;
    t.counts.assign(r.m, 0);
    t.good = true;
    for (const auto& p : x.pts) {
        const int reg = which_region(p, r);
        if (reg < 0)
            t.good = false;
        else
            ++t.counts[reg];
    }
    return t;
}

std::string TypeSignature::str() const {
    if (!good) return "bad";
    std::string s;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(counts[i]);
    }
    return s;
}

std::vector<TypeSignature> all_good_types(Surface s) {
    const int m = surface_strands(s);
    std::vector<TypeSignature> out;
    std::vector<int> counts(m, 0);
    std::function<void(int, int)> rec = [&](int idx, int left) {
        if (idx == m - 1) {
            counts[idx] = left;
            out.push_back({counts, true});
            return;
        }
        for (int c = 0; c <= left; ++c) {
            counts[idx] = c;
            rec(idx + 1, left - c);
        }
    };
    rec(0, m);
    return out;
}

double region_area(const RegionSpec& r, int region) {
    return r.areas.at(region);
}

double bad_volume_theory(Surface s, double eps) {
    const int m = surface_strands(s);
    return 1.0 - std::pow(1.0 - eps, m);
}

SurfacePoint sample_in_region(const RegionSpec& r, int region, Rng& rng, double margin) {
    switch (r.surface) {
        case Surface::Disc: {
            const DiscLayout& d = r.disc();
            if (region == 0) return SurfacePoint::disc_polar(rng.uniform(0.0, d.s1 - margin),
                                                             rng.uniform(-kPi, kPi));
            const double lo = (region == 1 ? d.s2 : d.s4) + margin;
            const double hi = (region == 1 ? d.s3 : d.s5) - margin;
            const double th = rng.uniform(d.eta + margin, 2.0 * kPi - d.eta - margin);
            return SurfacePoint::disc_polar(rng.uniform(lo, hi), th > kPi ? th - 2.0 * kPi : th);
        }
        case Surface::Sphere: {
            const SphereLayout& l = r.sphere();
            if (region == 0)
                return SurfacePoint::sphere_zphi(rng.uniform(l.c1 + margin, 1.0),
                                                 rng.uniform(-kPi, kPi));
            if (region == 3)
                return SurfacePoint::sphere_zphi(rng.uniform(-1.0, l.c6 - margin),
                                                 rng.uniform(-kPi, kPi));
            const double lo = (region == 1 ? l.c3 : l.c5) + margin;
            const double hi = (region == 1 ? l.c2 : l.c4) - margin;
            const double ph = rng.uniform(l.eta + margin, 2.0 * kPi - l.eta - margin);
            return SurfacePoint::sphere_zphi(rng.uniform(lo, hi), ph > kPi ? ph - 2.0 * kPi : ph);
        }
        case Surface::Torus: {
            const TorusLayout& l = r.torus();
            const double ulo = (region == 0 ? l.u1lo : l.u2lo) + margin;
            const double uhi = (region == 0 ? l.u1hi : l.u2hi) - margin;
            return SurfacePoint::torus(rng.uniform(ulo, uhi),
                                       rng.uniform(l.clr + margin, 1.0 - l.clr - margin));
        }
    }
    throw Error("unreachable");
}

Configuration sample_configuration_of_type(const RegionSpec& r, const TypeSignature& t, Rng& rng,
                                           double margin, double delta_sep) {
    if (!t.good || static_cast<int>(t.counts.size()) != r.m)
        throw InvalidConfig("type signature does not match the surface");
    std::vector<int> assignment;
    for (int reg = 0; reg < r.m; ++reg)
        for (int c = 0; c < t.counts[reg]; ++c) assignment.push_back(reg);
    for (;;) {
        // uniformly random assignment of the points to the prescribed regions
        std::vector<int> a = assignment;
        for (int i = static_cast<int>(a.size()) - 1; i > 0; --i)
            std::swap(a[i], a[rng.uniform_int(0, i)]);
        Configuration c;
        for (int reg : a) c.pts.push_back(sample_in_region(r, reg, rng, margin));
        if (c.min_separation() > delta_sep) return c;
    }
}

bool verify_region_invariants(const RegionSpec& r, std::string* why) {
    auto fail = [&](const std::string& m) {
        if (why) *why = m;
        return false;
    };
    const double target = (1.0 - r.epsilon) / r.m;
    switch (r.surface) {
        case Surface::Disc: {
            const DiscLayout& d = r.disc();
            const double a1 = d.s1;
            const double a2 = (d.s3 - d.s2) * (1.0 - d.eta / kPi);
            const double a3 = (d.s5 - d.s4) * (1.0 - d.eta / kPi);
            if (std::fabs(a1 - target) > 1e-12) return fail("U1 area");
            if (std::fabs(a2 - target) > 1e-12) return fail("U2 area");
            if (std::fabs(a3 - target) > 1e-12) return fail("U3 area");
            if (!(d.s1 < d.s2 && d.s2 < d.s3 && d.s3 < d.w1 && d.w1 < d.v1 && d.v1 < d.s4 &&
                  d.s4 < d.s5 && d.s5 < d.out_w && d.out_w < d.out_v && d.out_v < 1.0))
                return fail("radial nesting");
            if (!(d.s1 < d.v2 && d.v2 < d.w2 && d.w2 < d.s2)) return fail("inner nesting");
            if (!(d.eta_v < d.eta_w && d.eta_w < d.eta)) return fail("slit nesting");
            break;
        }
        case Surface::Sphere: {
            const SphereLayout& l = r.sphere();
            const double a1 = (1.0 - l.c1) / 2.0;
            const double a2 = (l.c2 - l.c3) / 2.0 * (1.0 - l.eta / kPi);
            const double a3 = (l.c4 - l.c5) / 2.0 * (1.0 - l.eta / kPi);
            const double a4 = (l.c6 + 1.0) / 2.0;
            for (double a : {a1, a2, a3, a4})
                if (std::fabs(a - target) > 1e-12) return fail("U area");
            if (!(l.c6 < l.v3bot && l.v3bot < l.w3bot && l.w3bot < l.c5 && l.c5 < l.c4 &&
                  l.c4 < l.v1 && l.v1 < l.w1 && l.w1 < l.c3 && l.c3 < l.c2 && l.c2 < l.w2top &&
                  l.w2top < l.v2top && l.v2top < l.c1))
                return fail("height nesting");
            if (!(l.eta_v < l.eta_w && l.eta_w < l.eta)) return fail("slit nesting");
            break;
        }
        case Surface::Torus: {
            const TorusLayout& l = r.torus();
            const double a1 = (l.u1hi - l.u1lo) * (1.0 - 2.0 * l.clr);
            const double a2 = (l.u2hi - l.u2lo) * (1.0 - 2.0 * l.clr);
            if (std::fabs(a1 - target) > 1e-12) return fail("U1 area");
            if (std::fabs(a2 - target) > 1e-12) return fail("U2 area");
            if (!(l.va_lo < l.wa_lo && l.wa_lo < l.u1lo && l.u1hi < l.wa_hi && l.wa_hi < l.va_hi &&
                  l.va_hi < l.u2lo))
                return fail("band nesting");
            if (!(l.hR + l.mv < l.clr && l.hL + l.mv < 0.5)) return fail("corridor clearance");
            break;
        }
    }
    // base points sit in their regions
    for (int i = 0; i < r.m; ++i)
        if (which_region(r.zbase.pts[i], r) != i) return fail("base point region");
    return true;
}

std::string RegionSpec::to_json() const {
    nlohmann::ordered_json j;
    j["surface"] = surface_name(surface);
    j["epsilon"] = epsilon;
    j["m"] = m;
    j["areas"] = areas;
    nlohmann::ordered_json zb = nlohmann::ordered_json::array();
    for (const auto& p : zbase.pts) {
        if (surface == Surface::Sphere)
            zb.push_back({p.x, p.y, p.z});
        else
            zb.push_back({p.x, p.y});
    }
    j["zbase"] = zb;
    if (surface == Surface::Disc) {
        const DiscLayout& d = disc();
        j["layout"] = {{"s1", d.s1},   {"s2", d.s2},     {"s3", d.s3},     {"s4", d.s4},
                       {"s5", d.s5},   {"eta", d.eta},   {"eta_w", d.eta_w}, {"eta_v", d.eta_v},
                       {"w1", d.w1},   {"v1", d.v1},     {"w2", d.w2},     {"v2", d.v2},
                       {"out_w", d.out_w}, {"out_v", d.out_v}};
    } else if (surface == Surface::Sphere) {
        const SphereLayout& l = sphere();
        j["layout"] = {{"c1", l.c1},       {"c2", l.c2},       {"c3", l.c3},
                       {"c4", l.c4},       {"c5", l.c5},       {"c6", l.c6},
                       {"w1", l.w1},       {"v1", l.v1},       {"w2top", l.w2top},
                       {"w3bot", l.w3bot}, {"v2top", l.v2top}, {"v3bot", l.v3bot},
                       {"eta", l.eta},     {"eta_w", l.eta_w}, {"eta_v", l.eta_v}};
    } else {
        const TorusLayout& l = torus();
        j["layout"] = {{"g", l.g},         {"u1", {l.u1lo, l.u1hi}}, {"u2", {l.u2lo, l.u2hi}},
                       {"vex", l.vex},     {"clr", l.clr},           {"wa", {l.wa_lo, l.wa_hi}},
                       {"va", {l.va_lo, l.va_hi}}, {"hL", l.hL},     {"hR", l.hR},
                       {"mv", l.mv}};
    }
    return j.dump();
}

}  // namespace ggbraid
