#include "gridlab/io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace gridlab {

namespace {

using nlohmann::json;

// --------------------------------------------------------- schema helpers

const json& need(const json& obj, const char* key) {
  if (!obj.is_object()) throw IoError("expected a JSON object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw IoError(std::string("missing field \"") + key + "\"");
  return *it;
}

std::int64_t need_int(const json& obj, const char* key) {
  const json& v = need(obj, key);
  if (!v.is_number_integer()) throw IoError(std::string("field \"") + key + "\" must be an integer");
  return v.get<std::int64_t>();
}

double need_number(const json& obj, const char* key) {
  const json& v = need(obj, key);
  if (!v.is_number()) throw IoError(std::string("field \"") + key + "\" must be a number");
  return v.get<double>();
}

std::string need_string(const json& obj, const char* key) {
  const json& v = need(obj, key);
  if (!v.is_string()) throw IoError(std::string("field \"") + key + "\" must be a string");
  return v.get<std::string>();
}

std::vector<double> number_array(const json& v, const char* key) {
  if (!v.is_array()) throw IoError(std::string("field \"") + key + "\" must be an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (const json& x : v) {
    if (!x.is_number()) throw IoError(std::string("field \"") + key + "\" must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::int64_t as_int(const json& v, const char* key) {
  if (!v.is_number_integer()) throw IoError(std::string("field \"") + key + "\" must hold integers");
  return v.get<std::int64_t>();
}

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw IoError(std::string("invalid JSON: ") + e.what());
  }
}

std::int64_t fit_int64(const BigInt& x, const char* what) {
  static const BigInt lo(std::numeric_limits<std::int64_t>::min());
  static const BigInt hi(std::numeric_limits<std::int64_t>::max());
  if (x < lo || x > hi) throw IoError(std::string(what) + " exceeds the 64-bit integer range");
  return x.convert_to<std::int64_t>();
}

Strategy parse_strategy(const json& obj);

Strategy parse_table(const json& obj) {
  const std::int64_t K = need_int(obj, "K");
  const std::int64_t D = need_int(obj, "D");
  const json& entries = need(obj, "entries");
  if (!entries.is_array()) throw IoError("field \"entries\" must be an array");
  std::vector<BigRational> e;
  e.reserve(entries.size());
  for (const json& pair : entries) {
    if (!pair.is_array() || pair.size() != 2)
      throw IoError("field \"entries\" must hold [numerator, denominator] pairs");
    const std::int64_t num = as_int(pair[0], "entries");
    const std::int64_t den = as_int(pair[1], "entries");
    if (den == 0) throw IoError("field \"entries\" holds a zero denominator");
    e.emplace_back(BigInt(num), BigInt(den));
  }
  return Strategy{StrategyTable(K, static_cast<int>(D), std::move(e))};
}

Strategy parse_scored(const json& obj) {
  ScoredStrategy s;
  s.D = static_cast<int>(need_int(obj, "D"));
  const json& score = need(obj, "score");
  if (score.is_string()) {
    const std::string name = score.get<std::string>();
    if (name == "identity") {
      s.score = ScoredStrategy::Score::identity;
    } else if (name == "vee") {
      s.score = ScoredStrategy::Score::vee;
    } else {
      throw IoError("field \"score\" must be \"identity\", \"vee\", or {\"bins\": [..]}");
    }
  } else if (score.is_object()) {
    s.score = ScoredStrategy::Score::table;
    s.bins = number_array(need(score, "bins"), "bins");
    if (s.bins.empty()) throw IoError("field \"bins\" must be non-empty");
  } else {
    throw IoError("field \"score\" must be \"identity\", \"vee\", or {\"bins\": [..]}");
  }
  return Strategy{s};
}

Strategy parse_mixture(const json& obj) {
  const std::vector<double> weights = number_array(need(obj, "weights"), "weights");
  const json& comps = need(obj, "components");
  if (!comps.is_array()) throw IoError("field \"components\" must be an array");
  std::vector<Strategy> components;
  components.reserve(comps.size());
  for (const json& c : comps) components.push_back(parse_strategy(c));
  return Strategy{mixture(std::move(components), weights)};
}

Strategy parse_strategy(const json& obj) {
  const std::string type = need_string(obj, "type");
  if (type == "table") return parse_table(obj);
  if (type == "scored") return parse_scored(obj);
  if (type == "mixture") return parse_mixture(obj);
  throw IoError("field \"type\" must be \"table\", \"scored\", or \"mixture\"");
}

JsonValue double_array(const std::vector<double>& xs) {
  JsonArray a;
  a.reserve(xs.size());
  for (double x : xs) a.emplace_back(x);
  return JsonValue(std::move(a));
}

void write_escaped(std::string& out, const std::string& s) {
  out.push_back('"');
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", static_cast<unsigned>(c));
          out += buf;
        } else {
          out.push_back(c);
        }
    }
  }
  out.push_back('"');
}

void write_value(std::string& out, const JsonValue& value, int depth) {
  const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(depth + 1) * 2, ' ');
  struct Writer {
    std::string& out;
    int depth;
    const std::string& pad;
    const std::string& inner;
    void operator()(std::nullptr_t) const { out += "null"; }
    void operator()(bool b) const { out += b ? "true" : "false"; }
    void operator()(std::int64_t i) const { out += std::to_string(i); }
    void operator()(double d) const { out += format_double(d); }
    void operator()(const std::string& s) const { write_escaped(out, s); }
    void operator()(const JsonArray& a) const {
      if (a.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < a.size(); ++i) {
        out += inner;
        write_value(out, a[i], depth + 1);
        out += i + 1 < a.size() ? ",\n" : "\n";
      }
      out += pad;
      out += ']';
    }
    void operator()(const JsonObject& o) const {
      if (o.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      for (std::size_t i = 0; i < o.size(); ++i) {
        out += inner;
        write_escaped(out, o[i].first);
        out += ": ";
        write_value(out, o[i].second, depth + 1);
        out += i + 1 < o.size() ? ",\n" : "\n";
      }
      out += pad;
      out += '}';
    }
  };
  std::visit(Writer{out, depth, pad, inner}, value.v);
}

}  // namespace

JsonValue::JsonValue(std::uint64_t u) {
  if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
    throw ContractError("integer too large for JSON emission");
  v = static_cast<std::int64_t>(u);
}

std::string format_double(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string dump_json(const JsonValue& value) {
  std::string out;
  write_value(out, value, 0);
  out.push_back('\n');
  return out;
}

// ----------------------------------------------------------------- parsing

MeasureVariant parse_measure_json(const std::string& text) {
  const json obj = parse_text(text);
  const std::string type = need_string(obj, "type");
  if (type == "binned") {
    const std::int64_t m = need_int(obj, "m");
    std::vector<double> w = number_array(need(obj, "weights"), "weights");
    return BinnedMeasure(static_cast<int>(m), std::move(w));
  }
  if (type == "atoms") {
    const std::vector<double> values = number_array(need(obj, "values"), "values");
    const std::vector<double> masses = number_array(need(obj, "masses"), "masses");
    if (values.size() != masses.size())
      throw IoError("fields \"values\" and \"masses\" must have equal length");
    std::vector<std::pair<double, double>> atoms;
    atoms.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) atoms.emplace_back(values[i], masses[i]);
    return AtomicMeasure::from_atoms(std::move(atoms));
  }
  if (type == "pmf") {
    const std::int64_t K = need_int(obj, "K");
    const json& nums = need(obj, "numerators");
    if (!nums.is_array()) throw IoError("field \"numerators\" must be an array");
    std::vector<BigInt> numerators;
    numerators.reserve(nums.size());
    for (const json& x : nums) numerators.emplace_back(as_int(x, "numerators"));
    return RationalPmf(K, std::move(numerators), BigInt(need_int(obj, "denominator")));
  }
  throw IoError("field \"type\" must be \"binned\", \"atoms\", or \"pmf\"");
}

Strategy parse_strategy_json(const std::string& text) { return parse_strategy(parse_text(text)); }

TauFunction parse_tau_json(const std::string& text) {
  const json obj = parse_text(text);
  if (need_string(obj, "type") != "tau") throw IoError("field \"type\" must be \"tau\"");
  const std::int64_t m = need_int(obj, "m");
  const double beta = obj.contains("beta") ? need_number(obj, "beta") : 1.0;
  std::vector<double> values = number_array(need(obj, "values"), "values");
  return TauFunction(static_cast<int>(m), beta, std::move(values));
}

// ---------------------------------------------------------------- emission

JsonValue measure_json(const BinnedMeasure& m) {
  return JsonValue(JsonObject{{"type", "binned"}, {"m", std::int64_t{m.m}},
                              {"weights", double_array(m.weights)}});
}

JsonValue measure_json(const AtomicMeasure& m) {
  return JsonValue(JsonObject{{"type", "atoms"}, {"values", double_array(m.values)},
                              {"masses", double_array(m.masses)}});
}

JsonValue measure_json(const RationalPmf& m) {
  JsonArray nums;
  nums.reserve(m.numerators.size());
  for (const BigInt& n : m.numerators) nums.emplace_back(fit_int64(n, "pmf numerator"));
  return JsonValue(JsonObject{{"type", "pmf"},
                              {"K", m.K},
                              {"numerators", JsonValue(std::move(nums))},
                              {"denominator", fit_int64(m.denominator, "pmf denominator")}});
}

JsonValue strategy_json(const Strategy& s) {
  struct Emit {
    JsonValue operator()(const StrategyTable& t) const {
      JsonArray entries;
      entries.reserve(t.entries.size());
      for (const BigRational& r : t.entries) {
        entries.emplace_back(JsonArray{
            JsonValue(fit_int64(numerator(r), "table numerator")),
            JsonValue(fit_int64(denominator(r), "table denominator"))});
      }
      return JsonValue(JsonObject{{"type", "table"},
                                  {"K", t.K},
                                  {"D", std::int64_t{t.D}},
                                  {"entries", JsonValue(std::move(entries))}});
    }
    JsonValue operator()(const ScoredStrategy& s) const {
      JsonValue score;
      switch (s.score) {
        case ScoredStrategy::Score::identity: score = JsonValue("identity"); break;
        case ScoredStrategy::Score::vee: score = JsonValue("vee"); break;
        case ScoredStrategy::Score::table:
          score = JsonValue(JsonObject{{"bins", double_array(s.bins)}});
          break;
      }
      return JsonValue(JsonObject{{"type", "scored"},
                                  {"score", std::move(score)},
                                  {"D", std::int64_t{s.D}}});
    }
    JsonValue operator()(const MixtureStrategy& m) const {
      JsonArray comps;
      comps.reserve(m.components.size());
      for (const Strategy& c : m.components) comps.push_back(strategy_json(c));
      return JsonValue(JsonObject{{"type", "mixture"},
                                  {"weights", double_array(m.weights)},
                                  {"components", JsonValue(std::move(comps))}});
    }
  };
  return std::visit(Emit{}, s.v);
}

JsonValue tau_json(const TauFunction& t) {
  return JsonValue(JsonObject{{"type", "tau"},
                              {"m", std::int64_t{t.m}},
                              {"beta", t.beta},
                              {"values", double_array(t.values)}});
}

// ------------------------------------------------------------------- files

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path);
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  out.flush();
  if (!out) throw IoError("cannot write " + path);
}

// --------------------------------------------------------------------- CSV

std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i > 0) out.push_back(',');
    out += header[i];
  }
  out.push_back('\n');
  for (const auto& row : rows) {
    if (row.size() != header.size()) throw ContractError("CSV row width differs from header");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out.push_back(',');
      out += row[i];
    }
    out.push_back('\n');
  }
  return out;
}

}  // namespace gridlab
