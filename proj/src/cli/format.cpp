#include "cli/format.hpp"

#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <sstream>

namespace ptl::cli {
namespace {

constexpr std::uint64_t kMaxExactJson = std::uint64_t{1} << 53;

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string value_to_csv(const Value& v, int precision) {
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Missing>) {
          return "";
        } else if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::int64_t> || std::is_same_v<T, std::uint64_t>) {
          return std::to_string(x);
        } else if constexpr (std::is_same_v<T, double>) {
          return format_double(x, precision);
        } else if constexpr (std::is_same_v<T, std::string>) {
          return csv_escape(x);
        } else {
          std::string joined;
          for (std::size_t i = 0; i < x.size(); ++i) {
            if (i) joined += ';';
            joined += format_double(x[i], precision);
          }
          return joined;
        }
      },
      v);
}

Json rounded(double v, int precision) {
  if (!std::isfinite(v)) return nullptr;
  return std::strtod(format_double(v, precision).c_str(), nullptr);
}

}  // namespace

std::string current_timestamp() {
  if (const char* fixed = std::getenv("PTL_TIMESTAMP"); fixed != nullptr && *fixed != '\0') {
    return fixed;
  }
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

std::string format_double(double v, int precision) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

Json value_to_json(const Value& v, int precision) {
  return std::visit(
      [&](const auto& x) -> Json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Missing>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, std::uint64_t>) {
          if (x > kMaxExactJson) return std::to_string(x);
          return x;
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          if (static_cast<std::uint64_t>(x < 0 ? -(x + 1) : x) >= kMaxExactJson) {
            return std::to_string(x);
          }
          return x;
        } else if constexpr (std::is_same_v<T, double>) {
          return rounded(x, precision);
        } else if constexpr (std::is_same_v<T, std::vector<double>>) {
          Json arr = Json::array();
          for (const double d : x) arr.push_back(rounded(d, precision));
          return arr;
        } else {
          return x;
        }
      },
      v);
}

Json record_to_json(const Record& r, int precision) {
  Json obj = Json::object();
  for (const auto& [key, value] : r.fields) obj[key] = value_to_json(value, precision);
  return obj;
}

Json RunManifest::to_json() const {
  Json j = Json::object();
  j["command"] = command;
  Json params = Json::object();
  for (const auto& [k, v] : parameters) params[k] = v;
  j["parameters"] = params;
  j["seed"] = seed ? Json(std::to_string(*seed)) : Json(nullptr);
  j["tool_version"] = tool_version;
  j["timestamp"] = timestamp;
  if (!generator_tag.empty()) j["generator_tag"] = generator_tag;
  return j;
}

RunManifest RunManifest::from_json(const Json& j) {
  RunManifest m;
  m.command = j.at("command").get<std::string>();
  for (const auto& [k, v] : j.at("parameters").items()) m.parameters.emplace_back(k, v.get<std::string>());
  if (j.contains("seed") && !j["seed"].is_null()) {
    m.seed = std::stoull(j["seed"].get<std::string>());
  }
  m.tool_version = j.value("tool_version", "");
  m.timestamp = j.value("timestamp", "");
  m.generator_tag = j.value("generator_tag", "");
  return m;
}

std::string render_csv(const RunManifest& manifest, const std::vector<Record>& rows, int precision) {
  std::ostringstream out;
  out << "# manifest: " << manifest.to_json().dump() << '\n';
  if (rows.empty()) return out.str();
  for (std::size_t i = 0; i < rows.front().fields.size(); ++i) {
    if (i) out << ',';
    out << rows.front().fields[i].first;
  }
  out << '\n';
  for (const Record& r : rows) {
    for (std::size_t i = 0; i < r.fields.size(); ++i) {
      if (i) out << ',';
      out << value_to_csv(r.fields[i].second, precision);
    }
    out << '\n';
  }
  return out.str();
}

std::optional<std::uint64_t> parse_integer(std::string_view text) {
  std::string digits;
  std::size_t i = 0;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) digits += text[i++];
  if (digits.empty()) return std::nullopt;
  std::string fraction;
  if (i < text.size() && text[i] == '.') {
    ++i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) fraction += text[i++];
  }
  long exponent = 0;
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    if (i < text.size() && text[i] == '+') ++i;
    const std::size_t start = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      exponent = exponent * 10 + (text[i++] - '0');
      if (exponent > 40) return std::nullopt;
    }
    if (i == start) return std::nullopt;
  }
  if (i != text.size()) return std::nullopt;
  while (!fraction.empty() && fraction.back() == '0') fraction.pop_back();
  if (static_cast<long>(fraction.size()) > exponent) return std::nullopt;
  digits += fraction;
  digits.append(static_cast<std::size_t>(exponent) - fraction.size(), '0');
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) return std::nullopt;
  return value;
}

}  // namespace ptl::cli
