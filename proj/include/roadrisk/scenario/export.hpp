#pragma once

#include <string>

#include "roadrisk/scenario/engine.hpp"

namespace roadrisk {

// RFC 4180 CSV: header row, CRLF line ends, probabilities with 6 decimals.
//   sweep:  <axis nodes...>,P(<target>=<state>),error
//   report: node,state,probability
//   gap:    <conditioning node>,<contrast>=<worse>,<contrast>=<better>,gap,error
//           followed by a "mean" row
std::string export_csv(const SweepTable& table);
std::string export_csv(const PosteriorReport& report);
std::string export_csv(const GapSummary& gap);

std::string format_probability(double p);  // fixed, 6 decimals

}  // namespace roadrisk
