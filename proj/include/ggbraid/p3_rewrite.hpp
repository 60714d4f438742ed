#pragma once

#include "ggbraid/words.hpp"

namespace ggbraid {

// Rewrites a pure braid word in B3 letters as a P3 word over {a, b, z}.
// Uses Schreier rewriting along the S3 coset automaton; the 24-entry coset
// table is derived once at first use and verified by tests.  Throws
// InvalidWord if the input is not pure.
BraidWord rewrite_pure_b3_to_p3(const BraidWord& w);

}  // namespace ggbraid
