#include "roadrisk/climate/return_period.hpp"

#include <cmath>
#include <stdexcept>

namespace roadrisk::climate {

double return_period_probability(double T, int r) {
  if (!(T >= 1.0) || !std::isfinite(T)) throw std::invalid_argument("return period T must be >= 1");
  if (r < 1) throw std::invalid_argument("exposure window r must be a positive integer");
  // log1p/expm1 keep precision for large T.
  return -std::expm1(static_cast<double>(r) * std::log1p(-1.0 / T));
}

}  // namespace roadrisk::climate
