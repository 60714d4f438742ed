#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "ggbraid/errors.hpp"
#include "ggbraid/rng.hpp"

namespace ggbraid {

enum class Surface { Disc, Sphere, Torus };

std::string surface_name(Surface s);
Surface parse_surface(const std::string& name);
int surface_strands(Surface s);  // 3 on the disc, 4 on the sphere, 2 on the torus

// Disc: (x,y) with x^2+y^2 <= 1, area normalized so the disc has area 1.
// Sphere: unit vector (x,y,z), normalized round area.
// Torus: (x,y) in [0,1)^2 with x = u, y = v.
struct SurfacePoint {
    Surface surface = Surface::Disc;
    double x = 0.0, y = 0.0, z = 0.0;

    static SurfacePoint disc(double x, double y) { return {Surface::Disc, x, y, 0.0}; }
    static SurfacePoint disc_polar(double s, double theta) {
        const double r = std::sqrt(s);
        return disc(r * std::cos(theta), r * std::sin(theta));
    }
    static SurfacePoint torus(double u, double v);
    static SurfacePoint sphere(double x, double y, double z);
    static SurfacePoint sphere_zphi(double height, double phi);
};

double distance(const SurfacePoint& a, const SurfacePoint& b);

struct Configuration {
    std::vector<SurfacePoint> pts;

    int size() const { return static_cast<int>(pts.size()); }
    Surface surface() const { return pts.at(0).surface; }
    double min_separation() const;
};

// default minimum pairwise separation for sampled configurations
inline constexpr double kDefaultSep = 1e-6;

// i.i.d. uniform points for the surface's normalized area form, resampled
// until the minimum pairwise distance exceeds delta_sep.
Configuration sample_configuration(Surface s, int m, Rng& rng, double delta_sep = kDefaultSep);

SurfacePoint sample_uniform_point(Surface s, Rng& rng);

}  // namespace ggbraid
