#pragma once

#include "bifrac/axis.hpp"
#include "bifrac/frame.hpp"

#include <string>
#include <vector>

namespace bifrac {

// An arrow of the transformation groupoid between bifractional families.
// Arrows are keyed by angle pairs alone: the maps act on entire
// (alpha,beta)-indexed families at fixed angles, so source/target identity is
// an exact angle-pair equality after reduction.
struct GroupoidArrow {
  AnglePair source;
  AnglePair target;

  bool is_identity() const { return source == target; }
};

inline GroupoidArrow identity_arrow(const AnglePair& at) {
  return GroupoidArrow{at, at};
}

// Defined only when t1.target == t2.source; throws not_composable_error
// otherwise. Associative whenever defined.
GroupoidArrow arrow_compose(const GroupoidArrow& t1, const GroupoidArrow& t2);

inline GroupoidArrow arrow_inverse(const GroupoidArrow& t) {
  return GroupoidArrow{t.target, t.source};
}
inline GroupoidArrow left_identity(const GroupoidArrow& t) {
  return GroupoidArrow{t.source, t.source};
}
inline GroupoidArrow right_identity(const GroupoidArrow& t) {
  return GroupoidArrow{t.target, t.target};
}

// Action on a sampled family grid: parallel kernels of the difference angles
// with the |cos|^(1/2) prefactor ratio.
ComplexGrid2D arrow_apply(const GroupoidArrow& t, const ComplexGrid2D& f);

struct IsotropyCheck {
  std::string name;
  Real error;
  bool pass;
};

struct IsotropyReport {
  std::vector<IsotropyCheck> checks;
  Real max_error = 0.0;
  bool pass = true;
};

// Verifies the group behaviour of the self-arrows at fixed angles on sampled
// grids (identity action, round trips through random intermediate angles,
// closure and associativity of the loops) plus a connectedness probe.
IsotropyReport isotropy_check(const AnglePair& angles, int samples,
                              Real tolerance = 1e-4, unsigned seed = 7u);

} // namespace bifrac
