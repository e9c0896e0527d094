#pragma once

#include <string>

#include "json.hpp"
#include "nsmorse/constant_analytic.hpp"
#include "nsmorse/degree.hpp"
#include "nsmorse/errors.hpp"
#include "nsmorse/morse_theorem.hpp"
#include "nsmorse/oracle.hpp"
#include "nsmorse/reaction_diffusion.hpp"

namespace nsmorse {

inline constexpr int kReportSchemaVersion = 1;

nlohmann::json to_json(const Rectangle& r);
nlohmann::json to_json(const ValidationReport& r);
nlohmann::json to_json(const DegreeResult& r, bool include_trace = false);
nlohmann::json to_json(const MorseResult& r);
nlohmann::json to_json(const CrossingLedger& r);
nlohmann::json to_json(const SfMorseReport& r);
nlohmann::json to_json(const ConjugateReport& r);
nlohmann::json to_json(const ConjugatePoint& p);
nlohmann::json to_json(const TuringReport& r);
nlohmann::json to_json(const EigenCountReport& r);
nlohmann::json to_json(const ConjugateSets& r);
nlohmann::json to_json(const IdentityReport& r);
nlohmann::json to_json(const NilpotentReport& r);
nlohmann::json to_json(const Error& e);

/// {"re": x, "im": y}
nlohmann::json complex_to_json(cplx z);

/// Wraps a payload with the schema version and the command name.
nlohmann::json envelope(const std::string& command, nlohmann::json payload);

/// Two-space indentation, keys in sorted order, trailing newline.
std::string dump(const nlohmann::json& doc);

}  // namespace nsmorse
