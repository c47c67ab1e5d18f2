// Copyright 2026 The quditsum Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QUDITSUM_IO_HPP
#define QUDITSUM_IO_HPP

// JSON and CSV emission. Every number is printed with 12 significant digits
// in both formats; NaN is written as null (JSON) and nan (CSV).

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "quditsum/adder.hpp"
#include "quditsum/banding.hpp"
#include "quditsum/spin_chain.hpp"

namespace quditsum {

std::string fmt_num(double x);
// JSON value holding x rounded to 12 significant digits.
nlohmann::json json_num(double x);

nlohmann::json to_json(const AdderConfig& cfg);
nlohmann::json to_json(const MetricSample& s);
nlohmann::json to_json(const RunRecord& rec);
nlohmann::json to_json(const QBestMap& map, const SweepGrid& grid);

// Header: run_id,checkpoint,fidelity,c_l1,c_l1_norm
void write_run_csv_header(std::ostream& os);
void write_run_csv(std::ostream& os, const RunRecord& rec, const std::string& run_id);

// Header: d,n,p,channel,q_best,f_max
void write_qbest_csv(std::ostream& os, const std::vector<QBestCell>& cells);

// Header: tau,f_out,c_l1_norm,q_band
void write_spin_csv_header(std::ostream& os);
void write_spin_csv(std::ostream& os, const std::vector<SpinPoint>& pts, int q_band);

}  // namespace quditsum

#endif  // QUDITSUM_IO_HPP
