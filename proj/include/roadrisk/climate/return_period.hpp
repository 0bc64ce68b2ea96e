#pragma once

namespace roadrisk::climate {

// Probability that an event with return period `T` years occurs at least
// once in `r` years: 1 - (1 - 1/T)^r. Requires T >= 1 and r >= 1; throws
// std::invalid_argument otherwise.
double return_period_probability(double T, int r);

}  // namespace roadrisk::climate
