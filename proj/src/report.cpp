// Copyright 2026 The glhs Authors.
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

#include "glhs/report.hpp"

#include <cmath>
#include <fstream>

#include "glhs/core.hpp"

namespace glhs {

namespace {

// JSON has no inf/nan; encode them as strings.
nlohmann::json encode_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double decode_number(const nlohmann::json& j, const char* field) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "nan") return std::nan("");
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
  }
  throw FormatError(std::string("record field '") + field + "' is not a number");
}

}  // namespace

Record make_record(std::string check, nlohmann::json params, double statistic, double bound, bool pass) {
  return Record{std::move(check), std::move(params), statistic, bound, pass ? "pass" : "fail"};
}

Record exploratory_record(std::string check, nlohmann::json params, double statistic, double bound) {
  return Record{std::move(check), std::move(params), statistic, bound, "exploratory"};
}

std::string record_to_line(const Record& r) {
  nlohmann::json j;
  j["check"] = r.check;
  j["params"] = r.params;
  j["statistic"] = encode_number(r.statistic);
  j["bound"] = encode_number(r.bound);
  j["status"] = r.status;
  return j.dump();
}

Record record_from_line(const std::string& line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("record is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw FormatError("record must be a JSON object");
  for (const char* f : {"check", "params", "statistic", "bound", "status"}) {
    if (!j.contains(f)) throw FormatError(std::string("record missing field '") + f + "'");
  }
  Record r;
  if (!j["check"].is_string()) throw FormatError("record field 'check' is not a string");
  r.check = j["check"].get<std::string>();
  r.params = j["params"];
  r.statistic = decode_number(j["statistic"], "statistic");
  r.bound = decode_number(j["bound"], "bound");
  if (!j["status"].is_string()) throw FormatError("record field 'status' is not a string");
  r.status = j["status"].get<std::string>();
  if (r.status != "pass" && r.status != "fail" && r.status != "exploratory") {
    throw FormatError("record status must be pass, fail or exploratory, got '" + r.status + "'");
  }
  return r;
}

void append_records(const std::string& path, const std::vector<Record>& records) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw Error("cannot open report file for writing: " + path);
  for (const auto& r : records) out << record_to_line(r) << '\n';
  if (!out) throw Error("write failed: " + path);
}

std::vector<Record> read_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open report file: " + path);
  std::vector<Record> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(record_from_line(line));
    } catch (const FormatError& e) {
      throw FormatError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

ReportSummary fold_records(const std::vector<Record>& records, ReportSummary s) {
  for (const auto& r : records) {
    ++s.total;
    CheckTally& t = s.by_check[r.check];
    if (r.status == "pass") {
      ++t.pass;
      ++s.overall.pass;
    } else if (r.status == "fail") {
      ++t.fail;
      ++s.overall.fail;
      s.failures.push_back(r.check);
    } else {
      ++t.exploratory;
      ++s.overall.exploratory;
    }
  }
  return s;
}

nlohmann::json summary_to_json(const ReportSummary& s) {
  nlohmann::json j;
  j["total"] = s.total;
  j["pass"] = s.overall.pass;
  j["fail"] = s.overall.fail;
  j["exploratory"] = s.overall.exploratory;
  j["failures"] = s.failures;
  nlohmann::json per = nlohmann::json::object();
  for (const auto& [check, t] : s.by_check) {
    per[check] = {{"pass", t.pass}, {"fail", t.fail}, {"exploratory", t.exploratory}};
  }
  j["by_check"] = per;
  return j;
}

}  // namespace glhs
