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

// Acceptance runner: one PASS/FAIL line per criterion. Tolerances and time
// limits are fixed below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "oracles.hpp"
#include "quditsum/adder.hpp"
#include "quditsum/banding.hpp"
#include "quditsum/channels.hpp"
#include "quditsum/closed_form.hpp"
#include "quditsum/gates.hpp"
#include "quditsum/metrics.hpp"
#include "quditsum/spin_chain.hpp"

using namespace quditsum;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double time_limit;  // seconds
  std::function<Outcome()> run;
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

class Tally {
 public:
  void check(bool ok, const std::string& what) {
    ++count_;
    if (!ok && failures_++ == 0) first_ = what;
  }
  void worst(double err) { max_err_ = std::max(max_err_, err); }
  Outcome done(const std::string& summary) const {
    std::string d = summary + "; " + std::to_string(count_) + " checks";
    if (max_err_ > 0) d += ", max deviation " + num(max_err_);
    if (failures_) d += "; " + std::to_string(failures_) + " failed, first: " + first_;
    return {failures_ == 0, d};
  }

 private:
  long count_ = 0, failures_ = 0;
  double max_err_ = 0;
  std::string first_;
};

AdderConfig config(std::uint64_t a, std::uint64_t b, int d, int n, int q, ChannelKind k, double p) {
  auto cfg = AdderConfig::from_integers(a, b, d, n);
  cfg.q = q;
  cfg.noise.kind = k;
  cfg.noise.p = p;
  return cfg;
}

std::uint64_t power(int d, int n) {
  std::uint64_t v = 1;
  while (n--) v *= static_cast<std::uint64_t>(d);
  return v;
}

// 1. Exact adder.
Outcome exact_adder() {
  Tally t;
  for (int d = 2; d <= 4; ++d)
    for (int n = 1; n <= 3; ++n) {
      const auto D = power(d, n);
      for (std::uint64_t a = 0; a < D; ++a)
        for (std::uint64_t b = 0; b < D; ++b) {
          auto cfg = config(a, b, d, n, 0, ChannelKind::None, 0);
          cfg.per_gate_samples = false;
          const auto r = run_adder(cfg);
          t.check(r.decoded && *r.decoded == (a + b) % D && r.success_prob >= 1 - 1e-9,
                  std::to_string(a) + "+" + std::to_string(b) + " d=" + std::to_string(d));
        }
    }
  return t.done("d in 2..4, n <= 3, all input pairs");
}

// 2. Closed forms against product-backend Kraus simulation.
Outcome closed_forms() {
  Tally t;
  constexpr double tol = 1e-10;
  std::mt19937 rng(2024);
  for (int d = 2; d <= 4; ++d)
    for (int n = 1; n <= 5; ++n)
      for (double p : {0.0, 0.05, 0.1, 0.3}) {
        const DigitString worst(n, d - 1);
        DigitString rnd(n);
        for (auto& x : rnd) x = std::uniform_int_distribution<int>(0, d - 1)(rng);
        const std::uint64_t a = power(d, n) / 3;
        for (int q = 1; q <= n; ++q)
          for (const auto& b : {worst, rnd}) {
            auto cfg = config(a, decode_digits(b, d), d, n, q, ChannelKind::PDC, p);
            cfg.per_gate_samples = false;
            cfg.stop_after_sum = true;
            const double sim = run_adder(cfg).at("post_sum").fidelity;
            const std::string at = "d=" + std::to_string(d) + " n=" + std::to_string(n) + " q=" + std::to_string(q) + " p=" + num(p);
            const double e26 = std::abs(closed_form_banded_pdc_fidelity(b, d, n, q, p) - sim);
            t.worst(e26);
            t.check(e26 < tol, "banded phase-damped " + at);
            if (p == 0.0) {
              const double e8 = std::abs(closed_form_banded_fidelity(b, d, n, q) - sim);
              t.worst(e8);
              t.check(e8 < tol, "banded noiseless " + at);
            }
            if (b == worst) {
              const double e30 = std::abs(closed_form_worst(d, n, q, p) - sim);
              t.worst(e30);
              t.check(e30 < tol, "worst input " + at);
            }
          }
        auto full = config(a, decode_digits(rnd, d), d, n, 0, ChannelKind::PDC, p);
        full.per_gate_samples = false;
        full.stop_after_sum = true;
        const auto r = run_adder(full);
        const double ein = std::abs(closed_form_pdc_fidelity(d, n, p, SumStage::In) - r.at("pre_sum").fidelity);
        const double eout = std::abs(closed_form_pdc_fidelity(d, n, p, SumStage::Out) - r.at("post_sum").fidelity);
        t.worst(std::max(ein, eout));
        t.check(ein < tol && eout < tol, "unbanded phase-damped d=" + std::to_string(d) + " n=" + std::to_string(n));
      }
  return t.done("d in 2..4, n <= 5, p in {0,0.05,0.1,0.3}, q in 1..n");
}

// Grid shared by criteria 3 and 12: every (d, n) with d^n <= 256.
template <typename F>
void backend_grid(F&& body) {
  for (int d = 2; d <= 16; ++d)
    for (int n = 1; power(d, n) <= 256; ++n)
      for (auto kind : {ChannelKind::PDC, ChannelKind::ADC, ChannelKind::CDPC})
        for (double p : {0.0, 0.1, 0.3}) {
          if (p == 0.0 && kind != ChannelKind::PDC) continue;
          const double pp = std::min(p, max_strength(kind, d));
          std::vector<int> qs = {1, (n + 1) / 2, n};
          qs.erase(std::unique(qs.begin(), qs.end()), qs.end());
          for (int q : qs) {
            const auto D = power(d, n);
            body(config(D / 3, D - 1, d, n, q, kind, pp));
          }
        }
}

// 3. Product against Joint.
Outcome backend_equivalence() {
  Tally t;
  backend_grid([&](AdderConfig cfg) {
    const auto rp = run_adder(cfg);
    cfg.backend = Backend::Joint;
    cfg.joint_mode = JointMode::DephaseUsedControls;
    const auto rj = run_adder(cfg);
    const std::string at = "d=" + std::to_string(cfg.d) + " n=" + std::to_string(cfg.n) + " " + to_string(cfg.noise.kind) +
                           " p=" + num(cfg.noise.p) + " q=" + std::to_string(cfg.q);
    t.check(rp.samples.size() == rj.samples.size(), "sample count " + at);
    double err = std::abs(rp.success_prob - rj.success_prob);
    for (std::size_t i = 0; i < std::min(rp.samples.size(), rj.samples.size()); ++i) {
      err = std::max(err, std::abs(rp.samples[i].fidelity - rj.samples[i].fidelity));
      err = std::max(err, std::abs(rp.samples[i].c_l1 - rj.samples[i].c_l1));
      err = std::max(err, std::abs(rp.samples[i].c_l1_norm - rj.samples[i].c_l1_norm));
    }
    t.worst(err);
    t.check(err < 1e-9, at);
  });
  return t.done("every d^n <= 256, three channels, every checkpoint");
}

// 4. Banding bound.
Outcome bound_soundness() {
  Tally t;
  for (int d = 2; d <= 5; ++d)
    for (int n = 2; n <= 30; ++n)
      for (double eps : {0.1, 0.01, 0.001}) {
        const auto b = min_banding_order(d, n, eps);
        t.check(closed_form_worst(d, n, b.q_effective, 0.0) >= 1 - eps,
                "d=" + std::to_string(d) + " n=" + std::to_string(n) + " eps=" + num(eps));
        if (d > 2) t.check(b.raw < min_banding_order(d - 1, n, eps).raw, "decrease with d at n=" + std::to_string(n));
      }
  t.check(min_banding_order(2, 9, 0.01).q_min == 7, "q_min(2,9,0.01) = 7");
  t.check(min_banding_order(3, 9, 0.01).q_min == 5, "q_min(3,9,0.01) = 5");
  return t.done("d in 2..5, n in 2..30, eps in {0.1,0.01,0.001}");
}

// 5. Coherence-fidelity laws.
Outcome coherence_laws() {
  Tally t;
  constexpr double tol = 1e-10;
  for (auto kind : {ChannelKind::PDC, ChannelKind::CDPC})
    for (int d = 2; d <= 4; ++d)
      for (int n = 1; n <= 5; ++n)
        for (double p : {0.05, 0.1, 0.3}) {
          auto cfg = config(power(d, n) / 2, power(d, n) - 1, d, n, 0, kind, p);
          cfg.per_gate_samples = false;
          cfg.stop_after_sum = true;
          const auto r = run_adder(cfg);
          const double D = double(power(d, n));
          const auto& in = r.at("pre_sum");
          const auto& out = r.at("post_sum");
          for (const auto* s : {&in, &out}) {
            const double e = std::abs(s->c_l1_norm - (D * s->fidelity - 1) / (D - 1));
            t.worst(e);
            t.check(e < tol, "linear law " + to_string(kind) + " d=" + std::to_string(d) + " n=" + std::to_string(n));
          }
          const auto dm = delta_metric(in, out);
          const double e22 = std::abs(dm.fidelity - dm.c_l1 / D);
          t.worst(e22);
          t.check(e22 < tol, "difference law d=" + std::to_string(d) + " n=" + std::to_string(n));
        }
  // Instance d=2, n=3, p=0.1 against the dense oracle.
  const auto ideal_in = oracle::dense_adder(2, 3, 5, 3, 3, oracle::Noise::None, 0, 1);
  const auto ideal_out = oracle::dense_adder(2, 3, 5, 3, 3, oracle::Noise::None, 0, 2);
  const auto noisy_in = oracle::dense_adder(2, 3, 5, 3, 3, oracle::Noise::PDC, 0.1, 1);
  const auto noisy_out = oracle::dense_adder(2, 3, 5, 3, 3, oracle::Noise::PDC, 0.1, 2);
  const double f_in = oracle::overlap(oracle::augend_of(ideal_in), oracle::augend_of(noisy_in));
  const double f_out = oracle::overlap(oracle::augend_of(ideal_out), oracle::augend_of(noisy_out));
  t.check(std::abs(f_in - 0.85975) < 1e-4, "f_in = " + num(f_in));
  t.check(std::abs(f_out - 0.65312) < 1e-4, "f_out = " + num(f_out));
  t.check(std::abs(f_in - f_out - 0.20663) < 1e-4, "delta f = " + num(f_in - f_out));
  const auto lib = run_adder(config(5, 3, 2, 3, 0, ChannelKind::PDC, 0.1));
  t.check(std::abs(lib.at("pre_sum").fidelity - f_in) < 1e-10 && std::abs(lib.at("post_sum").fidelity - f_out) < 1e-10,
          "library against dense oracle");
  return t.done("pdc/cdpc, d in 2..4, n <= 5; instance f_in=" + num(f_in) + " f_out=" + num(f_out));
}

// 6. Interior optimum and input ordering.
Outcome nonmonotonicity() {
  Tally t;
  std::string qs;
  for (double p : {0.01, 0.04, 0.1}) {
    const auto c = qbest_search(2, 19, p, ChannelKind::PDC, InputPolicy::worst());
    qs += (qs.empty() ? "" : ",") + std::to_string(c.q_best);
    t.check(c.q_best > 1 && c.q_best < 19, "interior q_best at p=" + num(p));
    t.check(c.f_max > c.curve.back() && c.f_max > c.curve.front(), "f(q_best) above both ends at p=" + num(p));
  }
  const auto w = qbest_search(3, 19, 0.04, ChannelKind::PDC, InputPolicy::worst());
  const auto u = qbest_search(3, 19, 0.04, ChannelKind::PDC, InputPolicy::uniform(1));
  t.check(u.q_best <= w.q_best, "d=3 uniform-1 input q_best " + std::to_string(u.q_best) + " vs worst " + std::to_string(w.q_best));
  return t.done("d=2 n=19 q_best {" + qs + "}; d=3 q_best worst " + std::to_string(w.q_best) + ", b_i=1 " +
                std::to_string(u.q_best));
}

// 7. Saturation.
Outcome saturation() {
  Tally t;
  SweepGrid g;
  g.d = {2};
  for (int n = 10; n <= 50; ++n) g.n.push_back(n);
  g.p = {0.1, 0.15, 0.2};
  const auto m = qbest_map(g);
  std::string qs;
  for (double p : g.p) {
    int q0 = -1;
    bool constant = true;
    for (const auto& c : m.cells)
      if (c.p == p) {
        if (q0 < 0) q0 = c.q_best;
        constant = constant && c.q_best == q0;
      }
    qs += (qs.empty() ? "" : ",") + std::to_string(q0);
    t.check(constant, "q_best constant over n at p=" + num(p));
    t.check(q0 >= 3 && q0 <= 6, "q_best in [3,6] at p=" + num(p));
  }
  return t.done("d=2, n in 10..50, q_best {" + qs + "} for p {0.1,0.15,0.2}");
}

// 8. Equal Hilbert-space size.
Outcome dimensional_gain() {
  Tally t;
  const auto c2 = qbest_search(2, 22, 0.04, ChannelKind::PDC, InputPolicy::worst());
  const auto c3 = qbest_search(3, 14, 0.04, ChannelKind::PDC, InputPolicy::worst());
  const auto c4 = qbest_search(4, 11, 0.04, ChannelKind::PDC, InputPolicy::worst());
  t.check(c4.f_max > c3.f_max && c3.f_max > c2.f_max, "f_max increases with d");
  t.check(c4.q_best <= c3.q_best && c3.q_best <= c2.q_best, "q_best decreases with d");
  return t.done("f_max " + num(c2.f_max) + " < " + num(c3.f_max) + " < " + num(c4.f_max) + "; q_best " +
                std::to_string(c2.q_best) + " >= " + std::to_string(c3.q_best) + " >= " + std::to_string(c4.q_best));
}

// 9. Fixed value across dimensions.
Outcome fixed_value() {
  Tally t;
  std::string fs, cs;
  double pf = -1, pc = -1;
  for (int d = 2; d <= 8; ++d) {
    const double f = dimension_fixed_value_fidelity(500, d, 0.1);
    const double c = coherence_from_fidelity(f, std::pow(double(d), digits_for_value(500, d)));
    fs += (fs.empty() ? "" : " ") + num(f);
    cs += (cs.empty() ? "" : " ") + num(c);
    if (d > 2) {
      t.check(f > pf, "fidelity d=" + std::to_string(d - 1) + " -> " + std::to_string(d));
      t.check(c > pc, "coherence d=" + std::to_string(d - 1) + " -> " + std::to_string(d));
    }
    pf = f;
    pc = c;
  }
  return t.done("v=500 p=0.1, f(d=2..8) = [" + fs + "], C_norm = [" + cs + "]");
}

// 10. Depolarizing and phase damping coincide on uniform-diagonal registers.
Outcome depolarizing_equivalence() {
  Tally t;
  for (int d = 2; d <= 4; ++d)
    for (int n = 1; n <= 4; ++n)
      for (double p : {0.1, 0.3, 1.0})
        for (int q : {1, n}) {
          const auto D = power(d, n);
          std::vector<RegisterState> pdc, dep;
          auto cfg = config(D / 2, D - 1, d, n, q, ChannelKind::PDC, p);
          run_adder(cfg, [&](const CheckpointView& v) { pdc.push_back(*v.reg); });
          cfg.noise.kind = ChannelKind::CDPC;
          run_adder(cfg, [&](const CheckpointView& v) { dep.push_back(*v.reg); });
          const std::string at = "d=" + std::to_string(d) + " n=" + std::to_string(n) + " p=" + num(p);
          t.check(pdc.size() == dep.size(), "checkpoint count " + at);
          double err = 0;
          for (std::size_t i = 0; i < std::min(pdc.size(), dep.size()); ++i) {
            const auto& x = pdc[i].branches();
            const auto& y = dep[i].branches();
            if (x.size() != y.size()) {
              err = 1;
              continue;
            }
            for (std::size_t k = 0; k < x.size(); ++k) {
              err = std::max(err, std::abs(x[k].prob - y[k].prob));
              for (std::size_t s = 0; s < x[k].qudits.size(); ++s)
                err = std::max(err, (x[k].qudits[s].rho() - y[k].qudits[s].rho()).cwiseAbs().maxCoeff());
            }
          }
          t.worst(err);
          t.check(err <= 1e-12, at);
        }
  return t.done("d in 2..4, n <= 4, every checkpoint, entrywise");
}

// 11. Spin-chain realization.
Outcome spin_chain() {
  Tally t;
  const CMatrix u = evolve(hadamard_hamiltonian().matrix, 1.0);
  const double ov = std::abs((u.adjoint() * hadamard_d(2)).trace()) / 2.0;
  t.check(std::abs(ov - 1) < 1e-10, "Hadamard overlap " + num(ov));
  for (int q = 1; q <= 4; ++q)
    for (int s = 0; s <= 3; ++s) {
      const double tau = std::pow(2.0, q) * s + 1;
      const double e = (evolve(controlled_rotation_hamiltonian(q).matrix, tau) - controlled_rotation(2, q)).cwiseAbs().maxCoeff();
      t.worst(e);
      t.check(e < 1e-10, "revival q=" + std::to_string(q) + " s=" + std::to_string(s));
    }
  const auto p = run_spin_adder(7, 7, 4, 1.0, 4);
  t.check(std::abs(p.f_out - 1) < 1e-9, "7+7 at tau=1: f_out " + num(p.f_out));
  std::vector<double> taus;
  for (int i = 0; i <= 96; ++i) taus.push_back(0.5 * i);
  std::vector<double> periods;
  for (int q : {2, 3, 4}) {
    std::vector<double> f;
    for (const auto& pt : spin_trace(7, 7, 4, q, taus)) f.push_back(pt.f_out);
    const auto per = detect_period(f, 0.5, 1e-9);
    t.check(per.has_value(), "period found for q=" + std::to_string(q));
    periods.push_back(per.value_or(-1));
  }
  t.check(periods[0] > 0 && periods[0] == periods[1] && periods[1] == periods[2], "equal periods");
  return t.done("periods " + num(periods[0]) + "/" + num(periods[1]) + "/" + num(periods[2]) + " for q=2/3/4 over tau in [0,48]");
}

// 12. Phase flattening keeps l1 coherence on the criterion-3 grid.
Outcome flatten_equality() {
  Tally t;
  long states = 0, not_circuit = 0, not_circuit_early = 0;
  backend_grid([&](AdderConfig cfg) {
    cfg.backend = Backend::Joint;
    run_adder(cfg, [&](const CheckpointView& v) {
      const CMatrix& rho = v.joint->rho();
      ++states;
      try {
        const auto fl = flatten_phases(rho);
        const double e = std::abs(l1_coherence(fl.flattened) - l1_coherence(rho));
        t.worst(e);
        t.check(e <= 1e-12 && std::abs(fl.robustness - l1_coherence(rho)) <= 1e-12,
                v.sample.label + " d=" + std::to_string(cfg.d) + " n=" + std::to_string(cfg.n));
      } catch (const ContractError&) {
        ++not_circuit;
        if (v.sample.stage != "iqft" && v.sample.label != "final") ++not_circuit_early;
      }
    });
  });
  t.check(not_circuit_early == 0, std::to_string(not_circuit_early) + " transform/sum states not of circuit form");
  return t.done(std::to_string(states) + " checkpoint states, " + std::to_string(not_circuit) +
                " inverse-transform states outside circuit form");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion (1-12)");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> all = {
      {1, "exact adder", 5, exact_adder},
      {2, "closed forms match simulation", 30, closed_forms},
      {3, "product and joint backends agree", 60, backend_equivalence},
      {4, "banding bound soundness", 5, bound_soundness},
      {5, "coherence-fidelity laws", 30, coherence_laws},
      {6, "interior banding optimum", 5, nonmonotonicity},
      {7, "q_best saturation", 10, saturation},
      {8, "dimensional gain at fixed Hilbert size", 5, dimensional_gain},
      {9, "fixed value across dimensions", 1, fixed_value},
      {10, "depolarizing equals phase damping", 10, depolarizing_equivalence},
      {11, "spin-chain realization", 30, spin_chain},
      {12, "phase flattening keeps l1 coherence", 120, flatten_equality},
  };
  bool ok = true;
  bool ran = false;
  for (const auto& c : all) {
    if (only && c.id != only) continue;
    ran = true;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = s < c.time_limit;
    const bool pass = o.pass && in_time;
    std::printf("criterion %2d %s: %s; %.2f s (limit %g s)%s\n", c.id, pass ? "PASS" : "FAIL", c.name, s, c.time_limit,
                in_time ? "" : " exceeded");
    std::printf("             %s\n", o.detail.c_str());
    ok = ok && pass;
  }
  if (!ran) {
    std::fprintf(stderr, "unknown criterion %d\n", only);
    return 2;
  }
  return ok ? 0 : 1;
}
