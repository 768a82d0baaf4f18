// File formats: JSON parsing/emission for measures, strategies, and
// potentials, plus CSV tables.
//
// Emission uses an ordered writer with floats at 12 significant digits, so
// identical runs produce byte-identical documents and emit-parse-emit is
// stable. Parsing is schema-checked and reports the offending field.

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gridlab/entropy.hpp"
#include "gridlab/measures.hpp"
#include "gridlab/strategies.hpp"

namespace gridlab {

// ------------------------------------------------------------ JSON values

// Order-preserving JSON document tree for emission.
struct JsonValue;
using JsonArray = std::vector<JsonValue>;
using JsonObject = std::vector<std::pair<std::string, JsonValue>>;

struct JsonValue {
  std::variant<std::nullptr_t, bool, std::int64_t, double, std::string, JsonArray, JsonObject> v =
      nullptr;

  JsonValue() = default;
  JsonValue(std::nullptr_t) : v(nullptr) {}
  JsonValue(bool b) : v(b) {}
  JsonValue(int i) : v(static_cast<std::int64_t>(i)) {}
  JsonValue(std::int64_t i) : v(i) {}
  JsonValue(std::uint64_t u);  // contract error above int64 range
  JsonValue(double d) : v(d) {}
  JsonValue(const char* s) : v(std::string(s)) {}
  JsonValue(std::string s) : v(std::move(s)) {}
  JsonValue(JsonArray a) : v(std::move(a)) {}
  JsonValue(JsonObject o) : v(std::move(o)) {}
};

// 12 significant digits (%.12g); non-finite values emit as null.
std::string format_double(double x);

// Serialize with 2-space indentation and a trailing newline.
std::string dump_json(const JsonValue& value);

// ----------------------------------------------------------------- parsing

using MeasureVariant = std::variant<BinnedMeasure, AtomicMeasure, RationalPmf>;

// {"type":"binned","m":..,"weights":[..]} | {"type":"atoms","values":[..],"masses":[..]}
// | {"type":"pmf","K":..,"numerators":[..],"denominator":..}
MeasureVariant parse_measure_json(const std::string& text);

// {"type":"table","K":..,"D":..,"entries":[[num,den],..]}  (tuple-major,
// position-minor) | {"type":"scored","score":"identity"|"vee"|{"bins":[..]},"D":..}
// | {"type":"mixture","weights":[..],"components":[..]}
Strategy parse_strategy_json(const std::string& text);

// {"type":"tau","m":..,"beta":..,"values":[..]}
TauFunction parse_tau_json(const std::string& text);

// ---------------------------------------------------------------- emission

JsonValue measure_json(const BinnedMeasure& m);
JsonValue measure_json(const AtomicMeasure& m);
JsonValue measure_json(const RationalPmf& m);
JsonValue strategy_json(const Strategy& s);
JsonValue tau_json(const TauFunction& t);

// ------------------------------------------------------------------- files

std::string read_file(const std::string& path);                     // IoError names the path
void write_file(const std::string& path, const std::string& text);  // IoError names the path

// --------------------------------------------------------------------- CSV

// Header row plus preformatted cells; fields joined with ',', rows with '\n'.
std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows);

}  // namespace gridlab
