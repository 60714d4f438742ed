#pragma once

#include "ggbraid/regions.hpp"
#include "ggbraid/words.hpp"

namespace ggbraid {

struct Prediction {
    BraidWord word;
    bool conjugacy_only = true;  // false only when the prediction is exactly trivial
};

// Image of the third squared sphere generator in the rank-2 free quotient of
// P4(S2).  The sphere braid relation d1 d2 d3^2 d2 d1 = 1 gives
// d3^2 = d2^-1 d1^-2 d2^-1, whose class modulo the center equals d1 (checked
// against the modular-group projection in the tests).
BraidWord sphere_delta3_sq();

// The symbolic braid class traced by the model flow of alpha at a good
// configuration of the given type, up to one conjugator depending only on
// the configuration.
//
// Disc (alpha in P3, type (p,q,r) summing to 3), letterwise:
//   an a-letter contributes e / a / z according to p+q = 0..1 / 2 / 3,
//   a b-letter contributes  e / a / z according to q+r = 0..1 / 2 / 3,
//   z-letters contribute nothing (the model kills the center);
// this reproduces the eight-row table with every two-strand twist
// instantiated as a.
//
// Sphere (alpha over {d1,d2}, type (p,q,r,s) summing to 4), letterwise:
//   d1-letter: d1 if p+q = 2, else e (three or four points under the cap
//   give a central twist);
//   d2-letter: if q+r = 2 then (p = 1 ? d2 : d1), else e -- the p = 0 and
//   p = 2 cases pick up the pairs {1,2} and {3,4} in the moved frame, both
//   of which are d1 in the quotient.
//
// Torus (alpha over {a1,b1}, type (p,q) summing to 2), letterwise:
//   a1-letter survives iff p = 1, b1-letter survives iff q = 1.
Prediction predicted_gamma(const BraidWord& alpha, const TypeSignature& type, Surface surface);

}  // namespace ggbraid
