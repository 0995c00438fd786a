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

// Report records: one JSON object per line,
//   {"check": id, "params": {...}, "statistic": x, "bound": y, "status": s}
// with status one of "pass", "fail", "exploratory".

#ifndef GLHS_REPORT_HPP_
#define GLHS_REPORT_HPP_

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace glhs {

struct Record {
  std::string check;
  nlohmann::json params = nlohmann::json::object();
  double statistic = 0.0;
  double bound = 0.0;
  std::string status = "exploratory";

  bool failed() const { return status == "fail"; }
};

Record make_record(std::string check, nlohmann::json params, double statistic, double bound, bool pass);
Record exploratory_record(std::string check, nlohmann::json params, double statistic, double bound);

std::string record_to_line(const Record& r);
// Throws FormatError on malformed JSON or a missing field.
Record record_from_line(const std::string& line);

void append_records(const std::string& path, const std::vector<Record>& records);
std::vector<Record> read_records(const std::string& path);

struct CheckTally {
  std::size_t pass = 0;
  std::size_t fail = 0;
  std::size_t exploratory = 0;
};

struct ReportSummary {
  std::size_t total = 0;
  CheckTally overall;
  std::map<std::string, CheckTally> by_check;
  std::vector<std::string> failures;

  bool ok() const { return overall.fail == 0; }
};

ReportSummary fold_records(const std::vector<Record>& records, ReportSummary init = {});
nlohmann::json summary_to_json(const ReportSummary& s);

}  // namespace glhs

#endif  // GLHS_REPORT_HPP_
