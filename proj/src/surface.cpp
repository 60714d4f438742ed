#include "ggbraid/surface.hpp"

#include <algorithm>

namespace ggbraid {

std::string surface_name(Surface s) {
    switch (s) {
        case Surface::Disc: return "disc";
        case Surface::Sphere: return "sphere";
        case Surface::Torus: return "torus";
    }
    return "?";
}

Surface parse_surface(const std::string& name) {
    if (name == "disc") return Surface::Disc;
    if (name == "sphere") return Surface::Sphere;
    if (name == "torus") return Surface::Torus;
    throw InvalidConfig("unknown surface '" + name + "'");
}

int surface_strands(Surface s) {
    switch (s) {
        case Surface::Disc: return 3;
        case Surface::Sphere: return 4;
        case Surface::Torus: return 2;
    }
    return 0;
}

namespace {
double wrap01(double v) {
    double r = v - std::floor(v);
    return r >= 1.0 ? 0.0 : r;
}
}  // namespace

SurfacePoint SurfacePoint::torus(double u, double v) {
    return {Surface::Torus, wrap01(u), wrap01(v), 0.0};
}

SurfacePoint SurfacePoint::sphere(double x, double y, double z) {
    const double n = std::sqrt(x * x + y * y + z * z);
    return {Surface::Sphere, x / n, y / n, z / n};
}

SurfacePoint SurfacePoint::sphere_zphi(double height, double phi) {
    const double rho = std::sqrt(std::max(0.0, 1.0 - height * height));
    return {Surface::Sphere, rho * std::cos(phi), rho * std::sin(phi), height};
}

double distance(const SurfacePoint& a, const SurfacePoint& b) {
    switch (a.surface) {
        case Surface::Disc:
        case Surface::Sphere: {
            const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
            return std::sqrt(dx * dx + dy * dy + dz * dz);
        }
        case Surface::Torus: {
            double du = std::fabs(a.x - b.x);
            double dv = std::fabs(a.y - b.y);
            du = std::min(du, 1.0 - du);
            dv = std::min(dv, 1.0 - dv);
            return std::sqrt(du * du + dv * dv);
        }
    }
    return 0.0;
}

double Configuration::min_separation() const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            best = std::min(best, distance(pts[i], pts[j]));
    return best;
}

SurfacePoint sample_uniform_point(Surface s, Rng& rng) {
    switch (s) {
        case Surface::Disc: {
            // rejection inside the unit disc
            for (;;) {
                const double x = rng.uniform(-1.0, 1.0);
                const double y = rng.uniform(-1.0, 1.0);
                if (x * x + y * y <= 1.0) return SurfacePoint::disc(x, y);
            }
        }
        case Surface::Torus:
            return SurfacePoint::torus(rng.next_double(), rng.next_double());
        case Surface::Sphere: {
            for (;;) {
                const double x = rng.gaussian(), y = rng.gaussian(), z = rng.gaussian();
                const double n = x * x + y * y + z * z;
                if (n > 1e-12) return SurfacePoint::sphere(x, y, z);
            }
        }
    }
    throw Error("unreachable");
}

Configuration sample_configuration(Surface s, int m, Rng& rng, double delta_sep) {
    for (;;) {
        Configuration c;
        c.pts.reserve(m);
        for (int i = 0; i < m; ++i) c.pts.push_back(sample_uniform_point(s, rng));
        if (c.min_separation() > delta_sep) return c;
    }
}

}  // namespace ggbraid
