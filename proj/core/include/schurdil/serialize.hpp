#pragma once

// JSON forms of the domain types.  Complex scalars are [re, im] pairs
// (plain numbers are accepted on input), matrices are row-major nested
// arrays, witnesses are {"n", "d", "v": [matrix, ...], "residual"}.

#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "schurdil/dilation.hpp"
#include "schurdil/opalg.hpp"
#include "schurdil/schur.hpp"
#include "schurdil/witness.hpp"

namespace schurdil {

using Json = nlohmann::json;

inline constexpr const char* kCertificateSchema = "1";
inline constexpr const char* kToolVersion = SCHURDIL_VERSION;

struct CertificateDilation {
  std::size_t depth = 0;
  ShiftMode shift = ShiftMode::PerMultiplier;
  DilationReport report;
};

struct Certificate {
  std::string schema_version = kCertificateSchema;
  std::string tool_version = kToolVersion;
  std::uint64_t seed = 0;
  ComplexMatrix symbol;
  UnitaryWitness witness;
  SearchConfig search_config;
  double residual = 0.0;
  double witness_tolerance = 0.0;
  std::optional<CertificateDilation> dilation;
};

Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);

Json symbol_to_json(const SchurSymbol& s);
/// Accepts {"m": matrix} (with optional "n") or a bare matrix.
SchurSymbol symbol_from_json(const Json& j);

Json witness_to_json(const UnitaryWitness& w);
UnitaryWitness witness_from_json(const Json& j);

Json config_to_json(const SearchConfig& c);
SearchConfig config_from_json(const Json& j);

Json validity_to_json(const ValidityReport& r);
Json witness_report_to_json(const WitnessReport& r);

Json dilation_report_to_json(const DilationReport& r);
DilationReport dilation_report_from_json(const Json& j);

Json norming_to_json(const NormingPair& pair);

Json certificate_to_json(const Certificate& c);
Certificate certificate_from_json(const Json& j);

/// Pretty-printed with two-space indent and a trailing newline.
std::string dump(const Json& j);

/// Reads and parses a JSON file; every failure surfaces as ParseError.
Json load_json_file(const std::string& path);

}  // namespace schurdil
