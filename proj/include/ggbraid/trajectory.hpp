#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>

#include "ggbraid/surface.hpp"
#include "ggbraid/words.hpp"

namespace ggbraid {

// A closed-form isotopy of the surface: flow(0, .) is the identity and
// flow(1, .) is the time-1 map.  min_flow_steps is a sampling-density hint
// for crossing detection (concatenation adds them up).
struct Isotopy {
    Surface surface = Surface::Disc;
    std::function<SurfacePoint(double, const SurfacePoint&)> flow;
    std::string note;
    int min_flow_steps = 512;
    // concatenations keep their letter list here so trajectory sampling can
    // walk segments sequentially; treat as opaque
    std::shared_ptr<void> chain_probe;
};

Isotopy identity_isotopy(Surface s);
Isotopy concat(const Isotopy& g, const Isotopy& h);  // g first, then h
Isotopy reparametrize(const Isotopy& iso, std::function<double(double)> clock);
Configuration apply_time1(const Isotopy& iso, const Configuration& c);

// The tethered loop through configuration space: strand i runs
// z_i -> x_i on [0,1/3] (straight tether; geodesic off the disc), follows the
// flow of x_i on [1/3,2/3], and returns from the flowed endpoint to z_i on
// [2/3,1].  Every strand starts and ends at z_i.
struct Trajectory {
    Surface surface = Surface::Disc;
    std::vector<double> times;
    std::vector<std::vector<SurfacePoint>> strands;  // [strand][time index]
    std::function<Configuration(double)> loop;       // exact evaluator, t in [0,1]

    int num_strands() const { return static_cast<int>(strands.size()); }
};

struct TetherOptions {
    int tether_steps = 64;
    double collision_eps = 1e-9;  // sampled strand coincidence -> DegenerateTether
};

Trajectory tethered_loop(const Isotopy& iso, const Configuration& x, const Configuration& z,
                         const TetherOptions& opt = {});

struct ExtractOptions {
    double time_tol = 1e-9;   // crossings are bracketed to this width
    double tie_eps = 1e-12;   // x or y coincidence treated as degenerate
    bool flip_sign = false;   // test hook: mirrors the crossing-sign convention
};

// Crossing detection on the disc: strands are ranked by x-coordinate, each
// transversal swap of adjacent ranks emits an Artin generator whose sign
// comes from the y-order at the swap (counterclockwise exchange = positive).
// The result is reduced by cancellation.
BraidWord extract_braid(const Trajectory& traj, const ExtractOptions& opt = {});

struct GammaOptions {
    TetherOptions tether;
    ExtractOptions extract;
    int max_retries = 8;
    std::uint64_t seed = 0;  // drives the deterministic perturbation sequence
};

// extract_braid(tethered_loop(...)) with perturb-and-retry on degenerate
// geometry; throws ImpureBraid if the resulting permutation is nontrivial.
BraidWord gamma(const Isotopy& iso, const Configuration& x, const Configuration& z,
                const GammaOptions& opt = {});

// Debug dump, one row per (strand, sample time).
void dump_csv(const Trajectory& traj, std::ostream& out);

}  // namespace ggbraid
