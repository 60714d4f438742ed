#include "ggbraid/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

namespace ggbraid {

Isotopy identity_isotopy(Surface s) {
    Isotopy iso;
    iso.surface = s;
    iso.flow = [](double, const SurfacePoint& p) { return p; };
    iso.note = "id";
    iso.min_flow_steps = 16;
    return iso;
}

namespace {

// flattened letter list of a (possibly concatenated) isotopy
std::vector<Isotopy> parts_of(const Isotopy& iso);

struct Chain {
    std::vector<Isotopy> parts;
};

}  // namespace

// Concatenation keeps the part list flat so trajectory sampling can walk the
// letters sequentially instead of re-composing the whole prefix per sample.
Isotopy concat(const Isotopy& g, const Isotopy& h) {
    if (g.surface != h.surface) throw Error("isotopy concat across surfaces");
    auto parts = parts_of(g);
    auto hp = parts_of(h);
    parts.insert(parts.end(), hp.begin(), hp.end());
    const int k = static_cast<int>(parts.size());
    Isotopy out;
    out.surface = g.surface;
    out.note = g.note + ";" + h.note;
    out.min_flow_steps = 0;
    for (const auto& p : parts) out.min_flow_steps += p.min_flow_steps;
    auto shared = std::make_shared<Chain>(Chain{std::move(parts)});
    out.flow = [shared, k](double t, const SurfacePoint& p0) {
        double u = std::clamp(t, 0.0, 1.0) * k;
        SurfacePoint p = p0;
        int i = 0;
        for (; i < k && u >= 1.0; ++i, u -= 1.0) p = shared->parts[i].flow(1.0, p);
        if (i < k && u > 0.0) p = shared->parts[i].flow(u, p);
        return p;
    };
    // stash the chain for the sampler
    out.chain_probe = shared;
    return out;
}

namespace {
std::vector<Isotopy> parts_of(const Isotopy& iso) {
    if (iso.chain_probe) {
        auto chain = std::static_pointer_cast<Chain>(iso.chain_probe);
        return chain->parts;
    }
    return {iso};
}

SurfacePoint tether_point(const SurfacePoint& from, const SurfacePoint& to, double u) {
    switch (from.surface) {
        case Surface::Disc:
            return SurfacePoint::disc(from.x + u * (to.x - from.x), from.y + u * (to.y - from.y));
        case Surface::Torus: {
            auto shortest = [](double a, double b) {
                double d = b - a;
                if (d > 0.5) d -= 1.0;
                if (d < -0.5) d += 1.0;
                return d;
            };
            return SurfacePoint::torus(from.x + u * shortest(from.x, to.x),
                                       from.y + u * shortest(from.y, to.y));
        }
        case Surface::Sphere: {
            // great-circle interpolation
            const double dot = std::clamp(
                from.x * to.x + from.y * to.y + from.z * to.z, -1.0, 1.0);
            const double ang = std::acos(dot);
            if (ang < 1e-12) return from;
            const double sa = std::sin(ang);
            const double c0 = std::sin((1.0 - u) * ang) / sa;
            const double c1 = std::sin(u * ang) / sa;
            return SurfacePoint::sphere(c0 * from.x + c1 * to.x, c0 * from.y + c1 * to.y,
                                        c0 * from.z + c1 * to.z);
        }
    }
    throw Error("unreachable");
}

}  // namespace

Isotopy reparametrize(const Isotopy& iso, std::function<double(double)> clock) {
    Isotopy out;
    out.surface = iso.surface;
    out.note = "reparam(" + iso.note + ")";
    out.min_flow_steps = iso.min_flow_steps;
    out.flow = [f = iso.flow, clock](double t, const SurfacePoint& p) {
        return f(std::clamp(clock(t), 0.0, 1.0), p);
    };
    return out;
}

Configuration apply_time1(const Isotopy& iso, const Configuration& c) {
    Configuration out = c;
    for (auto& p : out.pts) p = iso.flow(1.0, p);
    return out;
}

Trajectory tethered_loop(const Isotopy& iso, const Configuration& x, const Configuration& z,
                         const TetherOptions& opt) {
    if (x.size() != z.size()) throw DegenerateTether("configuration size mismatch");
    if (x.size() == 0) throw DegenerateTether("empty configuration");
    if (x.surface() != iso.surface || z.surface() != iso.surface)
        throw DegenerateTether("surface mismatch");
    const int m = x.size();

    const std::vector<Isotopy> parts = parts_of(iso);
    const int k = static_cast<int>(parts.size());

    Trajectory traj;
    traj.surface = iso.surface;

    // shared time grid: tether out, one slice per letter, tether home
    traj.times.push_back(0.0);
    for (int j = 1; j <= opt.tether_steps; ++j)
        traj.times.push_back(j / (3.0 * opt.tether_steps));
    for (int part = 0; part < k; ++part) {
        const int steps = std::max(8, parts[part].min_flow_steps);
        for (int j = 1; j <= steps; ++j)
            traj.times.push_back(1.0 / 3.0 + (part + static_cast<double>(j) / steps) / (3.0 * k));
    }
    for (int j = 1; j <= opt.tether_steps; ++j)
        traj.times.push_back(2.0 / 3.0 + j / (3.0 * opt.tether_steps));

    // endpoints after the full flow
    std::vector<SurfacePoint> flowed(m);
    for (int i = 0; i < m; ++i) {
        SurfacePoint p = x.pts[i];
        for (const auto& part : parts) p = part.flow(1.0, p);
        flowed[i] = p;
    }

    traj.strands.assign(m, {});
    for (int i = 0; i < m; ++i) {
        std::vector<SurfacePoint>& s = traj.strands[i];
        s.reserve(traj.times.size());
        s.push_back(z.pts[i]);
        for (int j = 1; j <= opt.tether_steps; ++j)
            s.push_back(tether_point(z.pts[i], x.pts[i],
                                     static_cast<double>(j) / opt.tether_steps));
        SurfacePoint anchor = x.pts[i];
        for (int part = 0; part < k; ++part) {
            const int steps = std::max(8, parts[part].min_flow_steps);
            for (int j = 1; j <= steps; ++j)
                s.push_back(parts[part].flow(static_cast<double>(j) / steps, anchor));
            anchor = s.back();
        }
        for (int j = 1; j <= opt.tether_steps; ++j)
            s.push_back(tether_point(flowed[i], z.pts[i],
                                     static_cast<double>(j) / opt.tether_steps));
    }

    for (std::size_t t = 0; t < traj.times.size(); ++t)
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j)
                if (distance(traj.strands[i][t], traj.strands[j][t]) < opt.collision_eps)
                    throw DegenerateTether("strands collide at sampled time");

    auto xs = x, zs = z;
    auto flw = flowed;
    auto flow_fn = iso.flow;
    traj.loop = [xs, zs, flw, flow_fn](double t) {
        Configuration c;
        c.pts.reserve(xs.pts.size());
        for (std::size_t i = 0; i < xs.pts.size(); ++i) {
            if (t <= 1.0 / 3.0)
                c.pts.push_back(tether_point(zs.pts[i], xs.pts[i], 3.0 * t));
            else if (t <= 2.0 / 3.0)
                c.pts.push_back(flow_fn(3.0 * t - 1.0, xs.pts[i]));
            else
                c.pts.push_back(tether_point(flw[i], zs.pts[i], 3.0 * t - 2.0));
        }
        return c;
    };
    return traj;
}

namespace {

std::vector<int> x_order(const Configuration& c, double tie_eps) {
    std::vector<int> ord(c.pts.size());
    std::iota(ord.begin(), ord.end(), 0);
    std::sort(ord.begin(), ord.end(),
              [&](int a, int b) { return c.pts[a].x < c.pts[b].x; });
    for (std::size_t i = 0; i + 1 < ord.size(); ++i)
        if (std::fabs(c.pts[ord[i]].x - c.pts[ord[i + 1]].x) < tie_eps)
            throw GenericPositionFailure("x-coordinate tie at sampled time");
    return ord;
}

// positions j where the orders differ by exactly the adjacent swap (j, j+1);
// -1 if equal, -2 if anything more complicated
int single_adjacent_swap(const std::vector<int>& a, const std::vector<int>& b) {
    int first = -1, last = -1;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) {
            if (first < 0) first = static_cast<int>(i);
            last = static_cast<int>(i);
        }
    }
    if (first < 0) return -1;
    if (last == first + 1 && a[first] == b[last] && a[last] == b[first]) return first;
    return -2;
}

struct Extractor {
    const Trajectory& traj;
    const ExtractOptions& opt;
    std::vector<Letter> letters;

    Configuration at(double t) const { return traj.loop(t); }

    void emit(double ta, double tb, const std::vector<int>& oa, int rank) {
        const int p = oa[rank], q = oa[rank + 1];
        Configuration cm = at(0.5 * (ta + tb));
        const double yp = cm.pts[p].y, yq = cm.pts[q].y;
        if (std::fabs(yp - yq) < opt.tie_eps)
            throw GenericPositionFailure("strands coincide at a crossing");
        // counterclockwise exchange (left strand passing below) is positive
        int sign = (yp < yq) ? 1 : -1;
        if (opt.flip_sign) sign = -sign;
        letters.push_back({rank, sign});
    }

    void process(double ta, double tb, const Configuration& ca, const Configuration& cb,
                 int depth) {
        const std::vector<int> oa = x_order(ca, opt.tie_eps);
        const std::vector<int> ob = x_order(cb, opt.tie_eps);
        const int swap = single_adjacent_swap(oa, ob);
        if (swap == -1) {
            // identical orders; peek at the midpoint when some pair is close
            // enough that a double swap could hide inside the interval
            if (depth == 0) {
                double gap = 1e9;
                for (std::size_t i = 0; i + 1 < oa.size(); ++i) {
                    gap = std::min(gap, ca.pts[oa[i + 1]].x - ca.pts[oa[i]].x);
                    gap = std::min(gap, cb.pts[ob[i + 1]].x - cb.pts[ob[i]].x);
                }
                if (gap < 0.05) {
                    Configuration cm = at(0.5 * (ta + tb));
                    if (x_order(cm, opt.tie_eps) != oa) {
                        process(ta, 0.5 * (ta + tb), ca, cm, 1);
                        process(0.5 * (ta + tb), tb, cm, cb, 1);
                    }
                }
            }
            return;
        }
        if (swap >= 0 && tb - ta <= opt.time_tol) {
            emit(ta, tb, oa, swap);
            return;
        }
        if (tb - ta < 1e-13)
            throw GenericPositionFailure("unresolvable multiple swap");
        const double tm = 0.5 * (ta + tb);
        Configuration cm = at(tm);
        process(ta, tm, ca, cm, depth + 1);
        process(tm, tb, cm, cb, depth + 1);
    }
};

}  // namespace

BraidWord extract_braid(const Trajectory& traj, const ExtractOptions& opt) {
    if (traj.surface != Surface::Disc)
        throw UnsupportedGroup("braid extraction is implemented on the disc");
    if (!traj.loop) throw GenericPositionFailure("trajectory has no exact evaluator");
    const int m = traj.num_strands();
    const std::size_t nt = traj.times.size();

    // one flat pass over the samples: x-order and the smallest adjacent gap
    // per grid time; the heavy interval machinery only runs where the order
    // moves or strands come close
    std::vector<int> orders(nt * m);
    std::vector<double> gaps(nt);
    std::vector<std::pair<double, int>> row(m);
    for (std::size_t k = 0; k < nt; ++k) {
        for (int i = 0; i < m; ++i) row[i] = {traj.strands[i][k].x, i};
        std::sort(row.begin(), row.end());
        double gap = 1e9;
        for (int i = 0; i < m; ++i) {
            orders[k * m + i] = row[i].second;
            if (i) gap = std::min(gap, row[i].first - row[i - 1].first);
        }
        if (gap < opt.tie_eps) throw GenericPositionFailure("x-coordinate tie at sampled time");
        gaps[k] = gap;
    }

    Extractor ex{traj, opt, {}};
    for (std::size_t k = 0; k + 1 < nt; ++k) {
        const bool same =
            std::equal(orders.begin() + k * m, orders.begin() + (k + 1) * m,
                       orders.begin() + (k + 1) * m);
        if (same && gaps[k] >= 0.05 && gaps[k + 1] >= 0.05) continue;
        Configuration ca, cb;
        for (int i = 0; i < m; ++i) {
            ca.pts.push_back(traj.strands[i][k]);
            cb.pts.push_back(traj.strands[i][k + 1]);
        }
        ex.process(traj.times[k], traj.times[k + 1], ca, cb, 0);
    }
    return free_reduce(BraidWord(GroupId::braid(m), std::move(ex.letters)));
}

BraidWord gamma(const Isotopy& iso, const Configuration& x, const Configuration& z,
                const GammaOptions& opt) {
    Configuration xp = x;
    for (int attempt = 0;; ++attempt) {
        try {
            Trajectory traj = tethered_loop(iso, xp, z, opt.tether);
            BraidWord w = extract_braid(traj, opt.extract);
            if (!is_pure(w)) throw ImpureBraid("extracted braid permutes the strands");
            return w;
        } catch (const Error& e) {
            if (attempt >= opt.max_retries) throw;
            if (!dynamic_cast<const DegenerateTether*>(&e) &&
                !dynamic_cast<const GenericPositionFailure*>(&e) &&
                !dynamic_cast<const ImpureBraid*>(&e))
                throw;
            // deterministic jitter, well below the configuration separation
            Rng rng(hash_combine(opt.seed, 0xA11Du), static_cast<std::uint64_t>(attempt));
            xp = x;
            for (auto& p : xp.pts) {
                const double r = kDefaultSep / 10.0 * rng.next_double();
                const double ang = rng.uniform(0.0, 6.283185307179586);
                switch (p.surface) {
                    case Surface::Disc: {
                        double nx = p.x + r * std::cos(ang), ny = p.y + r * std::sin(ang);
                        if (nx * nx + ny * ny < 1.0) p = SurfacePoint::disc(nx, ny);
                        break;
                    }
                    case Surface::Torus:
                        p = SurfacePoint::torus(p.x + r * std::cos(ang), p.y + r * std::sin(ang));
                        break;
                    case Surface::Sphere:
                        p = SurfacePoint::sphere(p.x + r * std::cos(ang), p.y + r * std::sin(ang),
                                                 p.z + r * 0.7071067811865476);
                        break;
                }
            }
        }
    }
}

void dump_csv(const Trajectory& traj, std::ostream& out) {
    const bool spatial = traj.surface == Surface::Sphere;
    out << (spatial ? "strand,t,x,y,z\n" : "strand,t,x,y\n");
    for (int i = 0; i < traj.num_strands(); ++i)
        for (std::size_t k = 0; k < traj.times.size(); ++k) {
            const SurfacePoint& p = traj.strands[i][k];
            out << i + 1 << ',' << traj.times[k] << ',' << p.x << ',' << p.y;
            if (spatial) out << ',' << p.z;
            out << '\n';
        }
}

}  // namespace ggbraid
