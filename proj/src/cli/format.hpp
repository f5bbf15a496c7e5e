#pragma once

// Output records shared by every subcommand: CSV and JSON rendering, the run
// manifest, and parsing of human-friendly integers such as "1e7".

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

namespace ptl::cli {

using Json = nlohmann::ordered_json;

// A missing value (e.g. an undefined z-score) renders as an empty CSV cell
// and JSON null.
struct Missing {};

using Value = std::variant<Missing, bool, std::int64_t, std::uint64_t, double, std::string,
                           std::vector<double>>;

struct Record {
  std::vector<std::pair<std::string, Value>> fields;

  Record& add(std::string key, Value value) {
    fields.emplace_back(std::move(key), std::move(value));
    return *this;
  }
};

struct RunManifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::optional<std::uint64_t> seed;
  std::string tool_version;
  std::string timestamp;
  std::string generator_tag;  // models runs only

  Json to_json() const;
  static RunManifest from_json(const Json& j);
};

// UTC ISO-8601 time, or the PTL_TIMESTAMP environment variable when set.
std::string current_timestamp();

std::string format_double(double v, int precision);

// Rounds to `precision` significant digits; integers beyond 2^53 become
// decimal strings.
Json value_to_json(const Value& v, int precision);
Json record_to_json(const Record& r, int precision);

// Header line from the first record's keys, one line per record. The
// manifest goes first as a "# manifest: {...}" comment line.
std::string render_csv(const RunManifest& manifest, const std::vector<Record>& rows, int precision);

// Parses a non-negative integer written as digits, optionally with a decimal
// exponent ("1e7", "2.5e6"). Rejects values that are not whole numbers.
std::optional<std::uint64_t> parse_integer(std::string_view text);

}  // namespace ptl::cli
