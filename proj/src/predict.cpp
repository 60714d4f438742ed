#include "ggbraid/predict.hpp"

#include "ggbraid/flows.hpp"

namespace ggbraid {

BraidWord sphere_delta3_sq() {
    return BraidWord::parse(GroupId::sphere_p4(), "d1");
}

namespace {

void append_letter(BraidWord& w, int gen, int sign) { w.letters.push_back({gen, sign}); }

}  // namespace

Prediction predicted_gamma(const BraidWord& alpha, const TypeSignature& type, Surface surface) {
    if (!type.good) throw BadPointNoPrediction("no symbolic prediction off the good set");
    const GroupId quotient = quotient_group(surface);
    if (alpha.group != quotient)
        throw GroupMismatch("alpha must live in the " + quotient.name() + " quotient");
    validate(alpha);
    if (static_cast<int>(type.counts.size()) != surface_strands(surface))
        throw InvalidConfig("type signature does not match the surface");

    BraidWord out(quotient);
    switch (surface) {
        case Surface::Disc: {
            const int p = type.counts[0], q = type.counts[1], r = type.counts[2];
            for (const Letter& l : alpha.letters) {
                if (l.gen == 2) continue;  // the center is sent to the identity flow
                const int inside = l.gen == 0 ? p + q : q + r;
                if (inside == 2) append_letter(out, l.gen, l.sign);    // two-strand twist
                else if (inside == 3) append_letter(out, 2, l.sign);   // full twist z
            }
            break;
        }
        case Surface::Sphere: {
            const int p = type.counts[0], q = type.counts[1], r = type.counts[2];
            const BraidWord d3 = sphere_delta3_sq();
            for (const Letter& l : alpha.letters) {
                if (l.gen == 0) {
                    if (p + q == 2) append_letter(out, 0, l.sign);
                } else {
                    if (q + r == 2) {
                        if (p == 1) {
                            append_letter(out, 1, l.sign);
                        } else {
                            const BraidWord img = l.sign > 0 ? d3 : inverse(d3);
                            out.letters.insert(out.letters.end(), img.letters.begin(),
                                               img.letters.end());
                        }
                    }
                }
            }
            break;
        }
        case Surface::Torus: {
            const int p = type.counts[0], q = type.counts[1];
            for (const Letter& l : alpha.letters) {
                if (l.gen == 0 && p == 1) append_letter(out, 0, l.sign);
                if (l.gen == 1 && q == 1) append_letter(out, 1, l.sign);
            }
            break;
        }
    }
    Prediction pred;
    pred.word = free_reduce(out);
    pred.conjugacy_only = !pred.word.empty();
    return pred;
}

}  // namespace ggbraid
