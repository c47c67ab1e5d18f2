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

#include "quditsum/banding.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <cmath>
#include <numbers>
#include <thread>

#include "quditsum/adder.hpp"

namespace quditsum {

BandingBound min_banding_order(int d, int n, double epsilon) {
  if (d < 2) throw DomainError("local dimension must be >= 2");
  if (n < 1) throw DomainError("register length must be >= 1");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0,1)");
  BandingBound r;
  if (n == 1) return r;
  const double arg = (n - 1) * (static_cast<double>(d) * d - 1.0) * std::numbers::pi * std::numbers::pi /
                     (3.0 * epsilon);
  r.raw = 0.5 * std::log(arg) / std::log(static_cast<double>(d));
  r.q_min = std::max(1, static_cast<int>(std::ceil(r.raw)));
  r.q_effective = std::min(r.q_min, n);
  return r;
}

DigitString InputPolicy::resolve(int d, int n) const {
  switch (kind) {
    case Kind::Worst: return DigitString(static_cast<std::size_t>(n), d - 1);
    case Kind::Uniform:
      if (digit < 0 || digit >= d) throw DomainError("input digit out of range");
      return DigitString(static_cast<std::size_t>(n), digit);
    case Kind::Explicit:
      if (static_cast<int>(digits.size()) != n) throw DomainError("explicit input length differs from n");
      for (int x : digits)
        if (x < 0 || x >= d) throw DomainError("input digit out of range");
      return digits;
  }
  throw DomainError("unknown input policy");
}

std::string InputPolicy::describe() const {
  switch (kind) {
    case Kind::Worst: return "worst";
    case Kind::Uniform: return "uniform:" + std::to_string(digit);
    case Kind::Explicit: {
      std::string s = "digits:";
      for (int x : digits) s += std::to_string(x);
      return s;
    }
  }
  return "?";
}

QBestCell qbest_search(int d, int n, double p, ChannelKind channel, const InputPolicy& input) {
  NoiseSpec spec{channel, p, {}};
  spec.validate(d);
  const DigitString b = input.resolve(d, n);
  QBestCell cell{d, n, p, channel, 1, -1.0, {}};
  for (int q = 1; q <= n; ++q) {
    double f = 0.0;
    if (channel == ChannelKind::ADC && p > 0.0) {
      AdderConfig cfg;
      cfg.d = d;
      cfg.n = n;
      cfg.a = DigitString(static_cast<std::size_t>(n), 0);
      cfg.b = b;
      cfg.q = q;
      cfg.noise = spec;
      cfg.per_gate_samples = false;
      cfg.stop_after_sum = true;
      f = run_adder(cfg).at("post_sum").fidelity;
    } else {
      const double pe = channel == ChannelKind::None ? 0.0 : p;
      f = input.kind == InputPolicy::Kind::Worst ? closed_form_worst(d, n, q, pe)
                                                 : closed_form_banded_pdc_fidelity(b, d, n, q, pe);
    }
    cell.curve.push_back(f);
    if (f > cell.f_max) {
      cell.f_max = f;
      cell.q_best = q;
    }
  }
  return cell;
}

QBestMap qbest_map(const SweepGrid& grid, int jobs) {
  if (grid.d.empty() || grid.n.empty() || grid.p.empty()) throw DomainError("sweep grid has an empty axis");
  struct Point {
    int d, n;
    double p;
  };
  std::vector<Point> pts;
  for (int d : grid.d)
    for (double p : grid.p)
      for (int n : grid.n) pts.push_back({d, n, p});
  QBestMap out;
  out.cells.resize(pts.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= pts.size() || failed.load()) return;
      try {
        out.cells[i] = qbest_search(pts[i].d, pts[i].n, pts[i].p, grid.channel, grid.input);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
        return;
      }
    }
  };
  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(pts.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  const std::size_t per_row = grid.n.size();
  for (std::size_t r = 0; r < out.cells.size(); r += per_row) {
    // Scan from the largest n downwards while q_best stays the same.
    std::vector<std::size_t> idx(per_row);
    for (std::size_t k = 0; k < per_row; ++k) idx[k] = r + k;
    std::sort(idx.begin(), idx.end(), [&](auto x, auto y) { return out.cells[x].n < out.cells[y].n; });
    const int q_last = out.cells[idx.back()].q_best;
    int n0 = out.cells[idx.back()].n;
    for (auto it = idx.rbegin(); it != idx.rend() && out.cells[*it].q_best == q_last; ++it)
      n0 = out.cells[*it].n;
    out.saturation.push_back({out.cells[r].d, out.cells[r].p, n0, q_last});
  }
  return out;
}

std::vector<std::pair<int, double>> noiseless_banding_curve(int d, int n, const InputPolicy& input) {
  const DigitString b = input.resolve(d, n);
  std::vector<std::pair<int, double>> out;
  for (int q = 1; q <= n; ++q) out.emplace_back(q, closed_form_banded_fidelity(b, d, n, q));
  return out;
}

}  // namespace quditsum
