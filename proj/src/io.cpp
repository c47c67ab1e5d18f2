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

#include "quditsum/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace quditsum {

std::string fmt_num(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  std::string s(buf);
  if (s == "-0") s = "0";
  return s;
}

nlohmann::json json_num(double x) {
  if (std::isnan(x)) return nullptr;
  return std::strtod(fmt_num(x).c_str(), nullptr);
}

namespace {

std::string digits_text(const DigitString& d) {
  std::string s;
  for (auto it = d.rbegin(); it != d.rend(); ++it) {
    if (!s.empty()) s += ' ';
    s += std::to_string(*it);
  }
  return s;
}

}  // namespace

nlohmann::json to_json(const AdderConfig& cfg) {
  nlohmann::json j;
  j["d"] = cfg.d;
  j["n"] = cfg.n;
  j["a_digits"] = cfg.a;
  j["b_digits"] = cfg.b;
  try {
    j["a"] = decode_digits(cfg.a, cfg.d);
    j["b"] = decode_digits(cfg.b, cfg.d);
  } catch (const ResourceError&) {
  }
  j["q"] = cfg.band();
  j["modular"] = cfg.modular;
  j["backend"] = to_string(cfg.backend);
  j["noise"] = {{"kind", to_string(cfg.noise.kind)},
                {"p", json_num(cfg.noise.p)},
                {"after_qft_rotations", cfg.noise.placement.after_qft_rotations},
                {"after_sum_rotations", cfg.noise.placement.after_sum_rotations},
                {"on_control", cfg.noise.placement.on_control}};
  j["seed"] = cfg.seed;
  return j;
}

nlohmann::json to_json(const MetricSample& s) {
  return {{"label", s.label},
          {"stage", s.stage},
          {"index", s.index},
          {"fidelity", json_num(s.fidelity)},
          {"c_l1", json_num(s.c_l1)},
          {"c_l1_norm", json_num(s.c_l1_norm)}};
}

nlohmann::json to_json(const RunRecord& rec) {
  nlohmann::json j;
  j["config"] = to_json(rec.config);
  j["samples"] = nlohmann::json::array();
  for (const auto& s : rec.samples) j["samples"].push_back(to_json(s));
  if (rec.decoded)
    j["decoded"] = *rec.decoded;
  else
    j["decoded"] = nullptr;
  j["decoded_digits"] = digits_text(rec.decoded_digits);
  j["success_prob"] = json_num(rec.success_prob);
  j["gate_count"] = rec.gate_count;
  j["depth"] = rec.depth;
  j["pruned_mass"] = json_num(rec.pruned_mass);
  nlohmann::json meta = nlohmann::json::object();
  for (const auto& [k, v] : rec.metadata) meta[k] = v;
  j["metadata"] = meta;
  return j;
}

nlohmann::json to_json(const QBestMap& map, const SweepGrid& grid) {
  nlohmann::json j;
  j["grid"] = {{"d", grid.d},
               {"n", grid.n},
               {"p", nlohmann::json::array()},
               {"channel", to_string(grid.channel)},
               {"input", grid.input.describe()}};
  for (double p : grid.p) j["grid"]["p"].push_back(json_num(p));
  j["cells"] = nlohmann::json::array();
  for (const auto& c : map.cells)
    j["cells"].push_back({{"d", c.d},
                          {"n", c.n},
                          {"p", json_num(c.p)},
                          {"channel", to_string(c.channel)},
                          {"q_best", c.q_best},
                          {"f_max", json_num(c.f_max)}});
  j["saturation"] = nlohmann::json::array();
  for (const auto& s : map.saturation)
    j["saturation"].push_back({{"d", s.d}, {"p", json_num(s.p)}, {"n0", s.n0}, {"q_best", s.q_best}});
  return j;
}

void write_run_csv_header(std::ostream& os) { os << "run_id,checkpoint,fidelity,c_l1,c_l1_norm\n"; }

void write_run_csv(std::ostream& os, const RunRecord& rec, const std::string& run_id) {
  for (const auto& s : rec.samples)
    os << run_id << ',' << s.label << ',' << fmt_num(s.fidelity) << ',' << fmt_num(s.c_l1) << ','
       << fmt_num(s.c_l1_norm) << '\n';
}

void write_qbest_csv(std::ostream& os, const std::vector<QBestCell>& cells) {
  os << "d,n,p,channel,q_best,f_max\n";
  for (const auto& c : cells)
    os << c.d << ',' << c.n << ',' << fmt_num(c.p) << ',' << to_string(c.channel) << ',' << c.q_best << ','
       << fmt_num(c.f_max) << '\n';
}

void write_spin_csv_header(std::ostream& os) { os << "tau,f_out,c_l1_norm,q_band\n"; }

void write_spin_csv(std::ostream& os, const std::vector<SpinPoint>& pts, int q_band) {
  for (const auto& p : pts)
    os << fmt_num(p.tau) << ',' << fmt_num(p.f_out) << ',' << fmt_num(p.c_sum_max) << ',' << q_band << '\n';
}

}  // namespace quditsum
