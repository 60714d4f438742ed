#pragma once

#include <string>
#include <variant>
#include <vector>

#include "ggbraid/surface.hpp"

namespace ggbraid {

// Disc layout in the area-true radial coordinate s = r^2 (normalized area of
// {s <= c} is c) with an angular slit at theta = 0:
//   U1 = {s < s1}                          round disc around the origin
//   U2 = {s2 < s < s3, |theta| > eta}      slit annulus
//   U3 = {s4 < s < s5, |theta| > eta}      slit annulus
//   W12 = {s < w1},  V12 = {s < v1}        round discs, U1 u U2 inside, U3 outside
//   W23 = {w2 < s < out_w, |theta| > eta_w}
//   V23 = {v2 < s < out_v, |theta| > eta_v}
// A slit annulus is an embedded topological disc, so every named region is a
// disc while the union of the U's still carries area 1 - eps for any eps.
struct DiscLayout {
    double s1, s2, s3, s4, s5;
    double gap;            // radial gap width (also the outer ring 1 - s5)
    double band;           // s-thickness of U2 и U3
    double eta, eta_w, eta_v;
    double w1, v1;         // W12/V12 radii (s units), s3 < w1 < v1 < s4
    double w2, v2;         // inner edges of W23/V23, s1 < v2 < w2 < s2
    double out_w, out_v;   // outer edges of W23/V23, s5 < out_w < out_v < 1
};

// Sphere layout in (height z', longitude phi); normalized area of a band is
// half its height extent.  Caps at the poles, slit bands in between.
struct SphereLayout {
    double c1, c2, c3, c4, c5, c6;       // U1={z'>c1}; U2=(c3,c2); U3=(c5,c4); U4={z'<c6}
    double w1, v1;                       // W12={z'>w1}, V12={z'>v1}, v1 < w1
    double w2top, w3bot, v2top, v3bot;   // W23/V23 slit bands
    double eta, eta_w, eta_v;
};

// Torus layout on [0,1)^2.  U1/U2 are rectangles clear of a horizontal
// corridor at v = 0; W_a/V_a are straight vertical annuli around U1; W_b/V_b
// form a longitude band that is wide over U1 and narrows to a corridor
// through the right half, described by a piecewise-linear centerline f(u) and
// half-width h(u).
struct TorusLayout {
    double g;                              // margin unit (eps/16)
    double u1lo, u1hi, u2lo, u2hi;
    double vex;                            // v-extent of the U rectangles
    double clr;                            // corridor clearance (1-vex)/2
    double wa_lo, wa_hi, va_lo, va_hi;
    double hL, hR, mv;                     // band half-widths and V margin
    std::vector<double> bu, bf, bh;        // band shape breakpoints over one period
};

struct RegionSpec {
    Surface surface = Surface::Disc;
    double epsilon = 0.0;
    int m = 0;
    std::vector<double> areas;  // per-U normalized areas, each (1-eps)/m
    Configuration zbase;
    std::variant<DiscLayout, SphereLayout, TorusLayout> layout;

    const DiscLayout& disc() const { return std::get<DiscLayout>(layout); }
    const SphereLayout& sphere() const { return std::get<SphereLayout>(layout); }
    const TorusLayout& torus() const { return std::get<TorusLayout>(layout); }

    std::string to_json() const;
};

// Builds the fixed layout for the surface; throws InfeasibleEpsilon with the
// feasible range when a feature of the layout would drop below the numeric
// floor.
RegionSpec build_regions(Surface s, double epsilon);

// Feasible epsilon interval of the fixed layout.
std::pair<double, double> feasible_epsilon_range(Surface s);

struct TypeSignature {
    std::vector<int> counts;
    bool good = false;

    std::string str() const;  // "2,0,1" or "bad"
    bool operator==(const TypeSignature& o) const { return counts == o.counts && good == o.good; }
    bool operator<(const TypeSignature& o) const {
        return counts != o.counts ? counts < o.counts : good < o.good;
    }
};

// Index of the U region containing the point, -1 if none (boundaries count
// as outside).
int which_region(const SurfacePoint& p, const RegionSpec& r);

TypeSignature classify_type(const Configuration& x, const RegionSpec& r);

// All type signatures with the given per-region counts summing to m.
std::vector<TypeSignature> all_good_types(Surface s);

double region_area(const RegionSpec& r, int region);
double bad_volume_theory(Surface s, double epsilon);  // 1 - (1-eps)^m

// Uniform point in one U region, optionally shrunk inward by an absolute
// margin (used by type-conditional sampling to keep configurations clear of
// region boundaries).
SurfacePoint sample_in_region(const RegionSpec& r, int region, Rng& rng, double margin = 0.0);

// Uniform configuration conditioned on a type signature: a uniformly chosen
// assignment of points to regions with the prescribed counts, each point
// uniform in its region.
Configuration sample_configuration_of_type(const RegionSpec& r, const TypeSignature& t, Rng& rng,
                                           double margin = 0.0, double delta_sep = kDefaultSep);

// Closed-form area identities and the inclusion/disjointness constraints,
// checked to tolerance; returns false and a reason on failure.
bool verify_region_invariants(const RegionSpec& r, std::string* why = nullptr);

}  // namespace ggbraid
