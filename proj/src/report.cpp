// Copyright 2026 The qwft authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qwft/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "qwft/errors.hpp"

namespace qwft {

std::string format_double(double value) {
  if (!std::isfinite(value)) {
    throw InvalidInput("report: non-finite number cannot be serialized");
  }
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

std::string digest_hex(std::string_view bytes) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "fnv1a:%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return buffer;
}

namespace {

void escape_string(const std::string& s, std::string* out) {
  out->push_back('"');
  for (unsigned char c : s) {
    switch (c) {
      case '"': *out += "\\\""; break;
      case '\\': *out += "\\\\"; break;
      case '\b': *out += "\\b"; break;
      case '\f': *out += "\\f"; break;
      case '\n': *out += "\\n"; break;
      case '\r': *out += "\\r"; break;
      case '\t': *out += "\\t"; break;
      default:
        if (c < 0x20) {
          char buffer[8];
          std::snprintf(buffer, sizeof(buffer), "\\u%04x", c);
          *out += buffer;
        } else {
          out->push_back(static_cast<char>(c));
        }
    }
  }
  out->push_back('"');
}

void render(const nlohmann::json& value, std::string* out) {
  using nlohmann::json;
  switch (value.type()) {
    case json::value_t::null: *out += "null"; break;
    case json::value_t::boolean:
      *out += value.get<bool>() ? "true" : "false";
      break;
    case json::value_t::number_integer:
      *out += std::to_string(value.get<long long>());
      break;
    case json::value_t::number_unsigned:
      *out += std::to_string(value.get<unsigned long long>());
      break;
    case json::value_t::number_float:
      *out += format_double(value.get<double>());
      break;
    case json::value_t::string:
      escape_string(value.get<std::string>(), out);
      break;
    case json::value_t::array: {
      out->push_back('[');
      bool first = true;
      for (const auto& item : value) {
        if (!first) out->push_back(',');
        first = false;
        render(item, out);
      }
      out->push_back(']');
      break;
    }
    case json::value_t::object: {
      // nlohmann::json objects iterate in sorted key order.
      out->push_back('{');
      bool first = true;
      for (auto it = value.begin(); it != value.end(); ++it) {
        if (!first) out->push_back(',');
        first = false;
        escape_string(it.key(), out);
        out->push_back(':');
        render(it.value(), out);
      }
      out->push_back('}');
      break;
    }
    default:
      throw InvalidInput("report: unsupported JSON value type");
  }
}

}  // namespace

std::string canonical_json(const nlohmann::json& value) {
  std::string out;
  render(value, &out);
  return out;
}

std::string emit_report_json(const RunReport& report) {
  nlohmann::json root;
  root["command"] = report.command;
  root["scenario_id"] = report.scenario_id;
  root["tool_version"] = report.tool_version;
  root["input_digest"] = report.input_digest;
  root["seed"] = report.seed;
  root["payload"] = report.payload;
  if (report.inequality_violations > 0) {
    root["inequality_violations"] = report.inequality_violations;
  }
  return canonical_json(root) + "\n";
}

std::string emit_report_csv(const RunReport& report) {
  std::ostringstream os;
  for (std::size_t i = 0; i < report.csv_header.size(); ++i) {
    if (i) os << ',';
    os << report.csv_header[i];
  }
  os << '\n';
  for (const auto& row : report.csv_rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      os << row[i];
    }
    os << '\n';
  }
  return os.str();
}

const std::vector<std::string>& work_report_csv_header() {
  static const std::vector<std::string> header = {
      "scenario_id", "beta",      "W_avg",       "delta_F_tilde", "delta_F",
      "estimator",   "gap_jensen", "gap_quantum", "seed"};
  return header;
}

}  // namespace qwft
