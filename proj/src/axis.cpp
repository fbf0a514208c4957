#include "bifrac/axis.hpp"

namespace bifrac {

Real tail_fraction(const CVec& values, Real frac) {
  const Index n = values.size();
  const Index band = std::max<Index>(1, static_cast<Index>(std::ceil(frac * Real(n))));
  const Real peak = values.cwiseAbs().maxCoeff();
  if (peak == 0.0)
    return 0.0;
  const Real head = values.head(band).cwiseAbs().maxCoeff();
  const Real tail = values.tail(band).cwiseAbs().maxCoeff();
  return std::max(head, tail) / peak;
}

Real tail_fraction(const CMat& values, Real frac) {
  const Index r = values.rows(), c = values.cols();
  const Index br = std::max<Index>(1, static_cast<Index>(std::ceil(frac * Real(r))));
  const Index bc = std::max<Index>(1, static_cast<Index>(std::ceil(frac * Real(c))));
  const Real peak = values.cwiseAbs().maxCoeff();
  if (peak == 0.0)
    return 0.0;
  Real worst = 0.0;
  worst = std::max(worst, values.topRows(br).cwiseAbs().maxCoeff());
  worst = std::max(worst, values.bottomRows(br).cwiseAbs().maxCoeff());
  worst = std::max(worst, values.leftCols(bc).cwiseAbs().maxCoeff());
  worst = std::max(worst, values.rightCols(bc).cwiseAbs().maxCoeff());
  return worst / peak;
}

} // namespace bifrac
