#include "ggbraid/flows.hpp"

#include <algorithm>
#include <cmath>

namespace ggbraid {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTau = 6.28318530717958647692;

double smoothstep(double u) {
    u = std::clamp(u, 0.0, 1.0);
    return u * u * (3.0 - 2.0 * u);
}

// One circuit along the eroded-square track of the unit square, in canonical
// coordinates: the square ring at margin m has perimeter 4(1-2m) and each
// point advances by t * omega(m) * perimeter arclength.  This is the
// action-angle circulation, so the map preserves Lebesgue measure exactly.
void square_circulate(double& X, double& Y, double t, double m_full, int sign) {
    const double m = std::min(std::min(X, 1.0 - X), std::min(Y, 1.0 - Y));
    if (m <= 0.0) return;
    const double L = 1.0 - 2.0 * m;
    if (L <= 1e-15) return;  // medial point
    double l;
    if (m == Y)
        l = X - m;                       // bottom, moving +X
    else if (m == 1.0 - X)
        l = L + (Y - m);                 // right, moving +Y
    else if (m == 1.0 - Y)
        l = 2.0 * L + (1.0 - m - X);     // top, moving -X
    else
        l = 3.0 * L + (1.0 - m - Y);     // left, moving -Y
    const double omega = m >= m_full ? 1.0 : smoothstep(m / m_full);
    const double P = 4.0 * L;
    l = std::fmod(l + sign * t * omega * P, P);
    if (l < 0.0) l += P;
    if (l < L) {
        X = m + l;
        Y = m;
    } else if (l < 2.0 * L) {
        X = 1.0 - m;
        Y = m + (l - L);
    } else if (l < 3.0 * L) {
        X = 1.0 - m - (l - 2.0 * L);
        Y = 1.0 - m;
    } else {
        X = m;
        Y = 1.0 - m - (l - 3.0 * L);
    }
}

double theta_from_slit(const SurfacePoint& p) {
    const double th = std::atan2(p.y, p.x);
    return th < 0.0 ? th + kTau : th;  // slit sits at theta = 0
}

Isotopy disc_twist(const RegionSpec& r, int sign) {
    const DiscLayout d = r.disc();
    Isotopy iso;
    iso.surface = Surface::Disc;
    iso.note = sign > 0 ? "rho(a)" : "rho(a^-1)";
    iso.min_flow_steps = 256;
    iso.flow = [d, sign](double t, const SurfacePoint& p) {
        const double s = p.x * p.x + p.y * p.y;
        if (s >= d.v1) return p;
        const double prof = s <= d.w1 ? 1.0 : smoothstep((d.v1 - s) / (d.v1 - d.w1));
        const double ang = sign * kTau * t * prof;
        const double c = std::cos(ang), sn = std::sin(ang);
        return SurfacePoint::disc(c * p.x - sn * p.y, sn * p.x + c * p.y);
    };
    return iso;
}

Isotopy disc_ring_circulation(const RegionSpec& r, int sign) {
    const DiscLayout d = r.disc();
    const double den_s = d.out_v - d.v2;
    const double den_t = kTau - 2.0 * d.eta_v;
    const double m_full = std::min(std::min((d.w2 - d.v2) / den_s, (d.out_v - d.out_w) / den_s),
                                   (d.eta_w - d.eta_v) / den_t);
    Isotopy iso;
    iso.surface = Surface::Disc;
    iso.note = sign > 0 ? "rho(b)" : "rho(b^-1)";
    iso.min_flow_steps = 256;
    iso.flow = [d, den_s, den_t, m_full, sign](double t, const SurfacePoint& p) {
        const double s = p.x * p.x + p.y * p.y;
        double X = (s - d.v2) / den_s;
        double Y = (theta_from_slit(p) - d.eta_v) / den_t;
        if (X <= 0.0 || X >= 1.0 || Y <= 0.0 || Y >= 1.0) return p;
        square_circulate(X, Y, t, m_full, sign);
        return SurfacePoint::disc_polar(d.v2 + X * den_s, d.eta_v + Y * den_t);
    };
    return iso;
}

Isotopy sphere_twist(const RegionSpec& r, int sign) {
    const SphereLayout l = r.sphere();
    Isotopy iso;
    iso.surface = Surface::Sphere;
    iso.note = sign > 0 ? "rho(d1)" : "rho(d1^-1)";
    iso.min_flow_steps = 64;
    iso.flow = [l, sign](double t, const SurfacePoint& p) {
        if (p.z <= l.v1) return p;
        const double prof = p.z >= l.w1 ? 1.0 : smoothstep((p.z - l.v1) / (l.w1 - l.v1));
        const double ang = sign * kTau * t * prof;
        const double c = std::cos(ang), sn = std::sin(ang);
        return SurfacePoint{Surface::Sphere, c * p.x - sn * p.y, sn * p.x + c * p.y, p.z};
    };
    return iso;
}

Isotopy sphere_band_circulation(const RegionSpec& r, int sign) {
    const SphereLayout l = r.sphere();
    const double den_z = l.v2top - l.v3bot;
    const double den_t = kTau - 2.0 * l.eta_v;
    const double m_full =
        std::min(std::min((l.w3bot - l.v3bot) / den_z, (l.v2top - l.w2top) / den_z),
                 (l.eta_w - l.eta_v) / den_t);
    Isotopy iso;
    iso.surface = Surface::Sphere;
    iso.note = sign > 0 ? "rho(d2)" : "rho(d2^-1)";
    iso.min_flow_steps = 64;
    iso.flow = [l, den_z, den_t, m_full, sign](double t, const SurfacePoint& p) {
        double X = (p.z - l.v3bot) / den_z;
        double Y = (theta_from_slit(p) - l.eta_v) / den_t;
        if (X <= 0.0 || X >= 1.0 || Y <= 0.0 || Y >= 1.0) return p;
        square_circulate(X, Y, t, m_full, sign);
        return SurfacePoint::sphere_zphi(l.v3bot + X * den_z, l.eta_v + Y * den_t);
    };
    return iso;
}

Isotopy torus_meridian_shear(const RegionSpec& r, int sign) {
    const TorusLayout l = r.torus();
    Isotopy iso;
    iso.surface = Surface::Torus;
    iso.note = sign > 0 ? "rho(a1)" : "rho(a1^-1)";
    iso.min_flow_steps = 64;
    iso.flow = [l, sign](double t, const SurfacePoint& p) {
        double prof = 0.0;
        if (p.x > l.va_lo && p.x < l.va_hi) {
            if (p.x >= l.wa_lo && p.x <= l.wa_hi)
                prof = 1.0;
            else if (p.x < l.wa_lo)
                prof = smoothstep((p.x - l.va_lo) / (l.wa_lo - l.va_lo));
            else
                prof = smoothstep((l.va_hi - p.x) / (l.va_hi - l.wa_hi));
        }
        if (prof == 0.0) return p;
        return SurfacePoint::torus(p.x, p.y + sign * t * prof);
    };
    return iso;
}

struct BandTable {
    std::vector<double> bu, bf, bhv;  // breakpoints; centerline; V half-width
    std::vector<double> cum;          // cumulative integral of bhv from bu[0]
    double total = 0.0;
    double xi_star = 0.0;

    void eval(double u, double* f, double* hv) const {
        double uu = u - std::floor(u - bu[0]);  // into [bu0, bu0+1)
        std::size_t i = 0;
        while (i + 1 < bu.size() && uu > bu[i + 1]) ++i;
        const double w = (uu - bu[i]) / (bu[i + 1] - bu[i]);
        *f = bf[i] + w * (bf[i + 1] - bf[i]);
        *hv = bhv[i] + w * (bhv[i + 1] - bhv[i]);
    }

    double position(double u) const {  // F(u) in [0, total)
        double uu = u - std::floor(u - bu[0]);
        std::size_t i = 0;
        while (i + 1 < bu.size() && uu > bu[i + 1]) ++i;
        const double du = uu - bu[i];
        const double slope = (bhv[i + 1] - bhv[i]) / (bu[i + 1] - bu[i]);
        return cum[i] + bhv[i] * du + 0.5 * slope * du * du;
    }

    double invert(double pos) const {  // u with F(u) = pos
        pos = std::fmod(pos, total);
        if (pos < 0.0) pos += total;
        std::size_t i = 0;
        while (i + 1 < cum.size() && pos >= cum[i + 1]) ++i;
        const double seg = pos - cum[i];
        const double len = bu[i + 1] - bu[i];
        const double slope = (bhv[i + 1] - bhv[i]) / len;
        double du;
        if (std::fabs(slope) < 1e-14) {
            du = seg / bhv[i];
        } else {
            du = (-bhv[i] + std::sqrt(bhv[i] * bhv[i] + 2.0 * slope * seg)) / slope;
        }
        return bu[i] + std::min(du, len);
    }
};

BandTable make_band_table(const TorusLayout& l) {
    BandTable t;
    t.bu = l.bu;
    t.bf = l.bf;
    for (double h : l.bh) t.bhv.push_back(h + l.mv);
    t.cum.assign(t.bu.size(), 0.0);
    for (std::size_t i = 0; i + 1 < t.bu.size(); ++i) {
        const double len = t.bu[i + 1] - t.bu[i];
        t.cum[i + 1] = t.cum[i] + 0.5 * (t.bhv[i] + t.bhv[i + 1]) * len;
    }
    t.total = t.cum.back();
    t.xi_star = l.hL / (l.hL + l.mv);
    return t;
}

Isotopy torus_longitude_channel(const RegionSpec& r, int sign) {
    const BandTable table = make_band_table(r.torus());
    Isotopy iso;
    iso.surface = Surface::Torus;
    iso.note = sign > 0 ? "rho(b1)" : "rho(b1^-1)";
    iso.min_flow_steps = 64;
    iso.flow = [table, sign](double t, const SurfacePoint& p) {
        double f, hv;
        table.eval(p.x, &f, &hv);
        double dv = p.y - f;
        dv -= std::round(dv);  // circular difference into (-1/2, 1/2]
        const double xi = dv / hv;
        if (std::fabs(xi) >= 1.0) return p;
        const double axi = std::fabs(xi);
        const double omega =
            axi <= table.xi_star ? 1.0 : smoothstep((1.0 - axi) / (1.0 - table.xi_star));
        if (omega == 0.0) return p;
        double advance = t * omega * table.total;
        if (sign < 0) advance = -advance;
        const double u1 = table.invert(table.position(p.x) + advance);
        double f1, hv1;
        table.eval(u1, &f1, &hv1);
        return SurfacePoint::torus(u1, f1 + xi * hv1);
    };
    return iso;
}

}  // namespace

GroupId quotient_group(Surface s) {
    switch (s) {
        case Surface::Disc: return GroupId::p3();
        case Surface::Sphere: return GroupId::sphere_p4();
        case Surface::Torus: return GroupId::torus_p2();
    }
    throw Error("unreachable");
}

Isotopy rho_letter_flow(const RegionSpec& r, int gen_index, int sign) {
    switch (r.surface) {
        case Surface::Disc:
            if (gen_index == 0) return disc_twist(r, sign);
            if (gen_index == 1) return disc_ring_circulation(r, sign);
            if (gen_index == 2) return identity_isotopy(Surface::Disc);  // center acts trivially
            break;
        case Surface::Sphere:
            if (gen_index == 0) return sphere_twist(r, sign);
            if (gen_index == 1) return sphere_band_circulation(r, sign);
            break;
        case Surface::Torus:
            if (gen_index == 0) return torus_meridian_shear(r, sign);
            if (gen_index == 1) return torus_longitude_channel(r, sign);
            break;
    }
    throw InvalidGenerator("no model flow for generator index " + std::to_string(gen_index));
}

ModelFlow rho_flow(const RegionSpec& r, const std::string& generator) {
    const GroupId g = quotient_group(r.surface);
    const int idx = g.generator_index(generator);
    if (idx < 0) throw InvalidGenerator("unknown generator '" + generator + "' for " + g.name());
    ModelFlow mf;
    mf.generator = generator;
    mf.iso = rho_letter_flow(r, idx, 1);
    switch (r.surface) {
        case Surface::Disc: mf.support = idx == 0 ? "V12" : (idx == 1 ? "V23" : "none"); break;
        case Surface::Sphere: mf.support = idx == 0 ? "V12" : "V23"; break;
        case Surface::Torus: mf.support = idx == 0 ? "Va" : "Vb"; break;
    }
    return mf;
}

Isotopy rho_word_flow(const RegionSpec& r, const BraidWord& alpha) {
    if (alpha.group != quotient_group(r.surface))
        throw GroupMismatch("word group does not match the surface quotient");
    validate(alpha);
    Isotopy iso = identity_isotopy(r.surface);
    bool first = true;
    for (const Letter& l : alpha.letters) {
        Isotopy part = rho_letter_flow(r, l.gen, l.sign);
        iso = first ? part : concat(iso, part);
        first = false;
    }
    return iso;
}

}  // namespace ggbraid
