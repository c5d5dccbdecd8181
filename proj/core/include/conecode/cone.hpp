#pragma once

// Dyadic cones: the set of all extensions of a finite stem. The cone with
// stem y has uniform measure 2^-|y|.

#include "conecode/bitstring.hpp"
#include "conecode/dyadic.hpp"

namespace conecode {

struct Cone {
  BitString stem;

  auto operator<=>(const Cone&) const = default;
};

inline Dyadic cone_measure(const Cone& c) {
  return Dyadic::two_to_minus(c.stem.length());
}

// Two cones are disjoint iff neither stem is a prefix of the other.
inline bool cones_disjoint(const Cone& a, const Cone& b) {
  return !a.stem.is_prefix_of(b.stem) && !b.stem.is_prefix_of(a.stem);
}

// Cone(inner) is contained in Cone(outer) iff outer's stem prefixes inner's.
inline bool cone_contains(const Cone& outer, const Cone& inner) {
  return outer.stem.is_prefix_of(inner.stem);
}

}  // namespace conecode
