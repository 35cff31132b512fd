#pragma once

#include <string>

#include <json.hpp>

#include "conatsim/analysis.hpp"
#include "conatsim/conat.hpp"
#include "conatsim/gaussian.hpp"
#include "conatsim/mc_oracle.hpp"
#include "conatsim/protocols.hpp"

namespace conatsim {

std::string to_string(ConatKind kind);
std::string to_string(Orientation orientation);

nlohmann::json to_json(const GaussianState& state);
nlohmann::json to_json(const ConatReport& report);
nlohmann::json to_json(const CorrelationReport& report);
nlohmann::json to_json(const BeamsplitterConatReport& report);
nlohmann::json to_json(const MomentVerdict& verdict);
nlohmann::json to_json(const ProtocolOutcome& outcome);
nlohmann::json to_json(const DegradationTrace& trace);

/// CSV schema v1: header comment, then
/// level,eps1,eps2,eps3,sum_mq,sum_pq,fidelity_bound,conforming
std::string degradation_csv(const DegradationTrace& trace);

/// Shortest round-trip decimal formatting used in all CSV output.
std::string format_double(double value);

}  // namespace conatsim
