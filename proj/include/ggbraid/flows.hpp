#pragma once

#include "ggbraid/regions.hpp"
#include "ggbraid/trajectory.hpp"
#include "ggbraid/words.hpp"

namespace ggbraid {

// The model homomorphism: a generator of the surface's pure quotient is sent
// to an explicit area-preserving circulation supported in its V region that
// turns the matching W region through one full circuit in unit time.
struct ModelFlow {
    std::string generator;
    Isotopy iso;
    std::string support;  // name of the V region the flow lives in
};

// Pure quotient the flows represent: P3 (disc), P4(S2)/Z (sphere),
// P2(T2)/Z (torus).
GroupId quotient_group(Surface s);

// generator: "a"/"b" on the disc ("z" is sent to the identity), "d1"/"d2" on
// the sphere, "a1"/"b1" on the torus.
ModelFlow rho_flow(const RegionSpec& r, const std::string& generator);

// One isotopy letter; sign -1 runs the circulation backwards.
Isotopy rho_letter_flow(const RegionSpec& r, int gen_index, int sign);

// Concatenation of the letter flows of a word in the quotient group.
Isotopy rho_word_flow(const RegionSpec& r, const BraidWord& alpha);

}  // namespace ggbraid
