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

#include "quditsum/verify.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>
#include <utility>

#include "quditsum/adder.hpp"
#include "quditsum/banding.hpp"
#include "quditsum/io.hpp"
#include "quditsum/spin_chain.hpp"

namespace quditsum {

namespace {

struct Tracker {
  double worst = 0.0;
  std::string where;
  void see(double err, const std::string& ctx) {
    if (!(err <= worst)) {
      worst = std::isnan(err) ? INFINITY : err;
      where = ctx;
    }
  }
};

std::string ctx(int d, int n, int q, double p, ChannelKind ch = ChannelKind::PDC) {
  std::ostringstream os;
  os << "d=" << d << " n=" << n << " q=" << q << " p=" << fmt_num(p) << " ch=" << to_string(ch);
  return os.str();
}

CheckResult finish(const std::string& name, const Tracker& t, double tol) {
  CheckResult r;
  r.name = name;
  r.passed = t.worst <= tol;
  r.detail = "max error " + fmt_num(t.worst) + " (tol " + fmt_num(tol) + ")";
  if (!r.passed) r.detail += " at " + t.where;
  return r;
}

CheckResult exact_adder(const VerifyOptions& o) {
  Tracker t;
  const int dmax = o.quick ? 3 : 4;
  const int nmax = o.quick ? 2 : 3;
  for (int d = 2; d <= dmax; ++d)
    for (int n = 1; n <= nmax; ++n) {
      const std::uint64_t D = checked_power(d, n, 1u << 20);
      for (std::uint64_t a = 0; a < D; ++a)
        for (std::uint64_t b = 0; b < D; ++b) {
          AdderConfig c = AdderConfig::from_integers(a, b, d, n);
          c.per_gate_samples = false;
          c.rotation_phase_error = o.phase_error;
          const RunRecord r = run_adder(c);
          const bool ok = r.decoded && *r.decoded == (a + b) % D;
          t.see(ok ? 1.0 - r.success_prob : INFINITY,
                "d=" + std::to_string(d) + " a=" + std::to_string(a) + " b=" + std::to_string(b));
        }
    }
  return finish("exact_adder", t, 1e-9);
}

CheckResult closed_form_vs_simulation(const VerifyOptions& o) {
  Tracker t;
  const int dmax = o.quick ? 3 : 4;
  const int nmax = o.quick ? 3 : 4;
  for (int d = 2; d <= dmax; ++d)
    for (int n = 1; n <= nmax; ++n)
      for (double p : {0.0, 0.1, 0.3})
        for (int q = 1; q <= n; ++q) {
          const std::uint64_t D = checked_power(d, n, 1u << 20);
          for (std::uint64_t bv : {D - 1, D / 2 + 1 < D ? D / 2 + 1 : 0}) {
            AdderConfig c = AdderConfig::from_integers(D / 3, bv, d, n);
            c.q = q;
            c.noise = {ChannelKind::PDC, p, {}};
            c.per_gate_samples = false;
            c.stop_after_sum = true;
            c.rotation_phase_error = o.phase_error;
            const RunRecord r = run_adder(c);
            const std::string where = ctx(d, n, q, p) + " b=" + std::to_string(bv);
            t.see(std::abs(r.at("post_sum").fidelity - closed_form_banded_pdc_fidelity(c.b, d, n, q, p)), where);
            if (bv == D - 1) t.see(std::abs(r.at("post_sum").fidelity - closed_form_worst(d, n, q, p)), where);
            if (q == n) {
              t.see(std::abs(r.at("pre_sum").fidelity - closed_form_pdc_fidelity(d, n, p, SumStage::In)), where);
              t.see(std::abs(r.at("post_sum").fidelity - closed_form_pdc_fidelity(d, n, p, SumStage::Out)),
                    where);
            }
          }
        }
  return finish("closed_form_vs_simulation", t, 1e-10);
}

CheckResult backend_equivalence(const VerifyOptions& o) {
  Tracker t;
  const int dmax = o.quick ? 3 : 4;
  for (int d = 2; d <= dmax; ++d)
    for (int n = 1; checked_power(d, n, 1u << 20) <= (o.quick ? 27u : 64u); ++n)
      for (ChannelKind ch : {ChannelKind::PDC, ChannelKind::ADC, ChannelKind::CDPC})
        for (double p : {0.1, 0.3})
          for (int q : {1, n}) {
            const std::uint64_t D = checked_power(d, n, 1u << 20);
            AdderConfig c = AdderConfig::from_integers(D / 2, D - 1, d, n);
            c.q = q;
            c.noise = {ch, std::min(p, max_strength(ch, d)), {}};
            c.rotation_phase_error = o.phase_error;
            const RunRecord rp = run_adder(c);
            c.backend = Backend::Joint;
            c.joint_mode = JointMode::DephaseUsedControls;
            const RunRecord rj = run_adder(c);
            const std::string where = ctx(d, n, q, p, ch);
            for (std::size_t i = 0; i < rp.samples.size(); ++i) {
              t.see(std::abs(rp.samples[i].fidelity - rj.samples[i].fidelity), where);
              t.see(std::abs(rp.samples[i].c_l1 - rj.samples[i].c_l1), where);
            }
            for (std::size_t i = 0; i < rp.distribution.size(); ++i)
              t.see(std::abs(rp.distribution[i] - rj.distribution[i]), where);
          }
  return finish("backend_equivalence", t, 1e-9);
}

CheckResult prop2_soundness(const VerifyOptions&) {
  Tracker t;
  for (int d = 2; d <= 5; ++d)
    for (int n = 2; n <= 30; ++n)
      for (double eps : {1e-1, 1e-2, 1e-3}) {
        const BandingBound b = min_banding_order(d, n, eps);
        const double f = closed_form_worst(d, n, b.q_effective, 0.0);
        t.see(std::max(0.0, (1.0 - eps) - f), ctx(d, n, b.q_effective, 0.0) + " eps=" + fmt_num(eps));
      }
  return finish("prop2_soundness", t, 0.0);
}

CheckResult prop1_flatten(const VerifyOptions& o) {
  Tracker t;
  const int dmax = o.quick ? 3 : 4;
  for (int d = 2; d <= dmax; ++d)
    for (ChannelKind ch : {ChannelKind::PDC, ChannelKind::ADC, ChannelKind::CDPC}) {
      const int n = 3;
      AdderConfig c = AdderConfig::from_integers(1, checked_power(d, n, 1u << 20) - 1, d, n);
      c.q = 2;
      c.noise = {ch, std::min(0.2, max_strength(ch, d)), {}};
      c.stop_after_sum = true;
      c.rotation_phase_error = o.phase_error;
      run_adder(c, [&](const CheckpointView& v) {
        for (const auto& br : v.reg->branches())
          for (const auto& q : br.qudits) {
            try {
              const FlattenResult f = flatten_phases(q);
              t.see(std::abs(f.robustness - l1_coherence(q)), v.sample.label);
            } catch (const ContractError&) {
              t.see(INFINITY, v.sample.label + " not circuit form");
            }
          }
      });
    }
  return finish("prop1_flatten_equality", t, 1e-12);
}

CheckResult coherence_laws(const VerifyOptions& o, bool delta) {
  Tracker t;
  const int dmax = o.quick ? 3 : 4;
  const int nmax = o.quick ? 3 : 5;
  for (int d = 2; d <= dmax; ++d)
    for (int n = 1; n <= nmax; ++n)
      for (ChannelKind ch : {ChannelKind::PDC, ChannelKind::CDPC})
        for (double p : {0.05, 0.1, 0.3}) {
          const std::uint64_t D = checked_power(d, n, 1u << 20);
          AdderConfig c = AdderConfig::from_integers(D / 2, D - 1, d, n);
          c.noise = {ch, p, {}};
          c.per_gate_samples = false;
          c.stop_after_sum = true;
          c.rotation_phase_error = o.phase_error;
          const RunRecord r = run_adder(c);
          const auto& in = r.at("pre_sum");
          const auto& out = r.at("post_sum");
          const double Dd = static_cast<double>(D);
          const std::string where = ctx(d, n, n, p, ch);
          if (delta) {
            const MetricDelta m = delta_metric(in, out);
            t.see(std::abs(m.fidelity - m.c_l1 / Dd), where);
            if (D > 1) t.see(std::abs(m.fidelity - (1.0 - 1.0 / Dd) * m.c_l1_norm), where);
          } else if (D > 1) {
            for (const auto* s : {&in, &out})
              t.see(std::abs(s->c_l1_norm - coherence_from_fidelity(s->fidelity, Dd)), where);
          }
        }
  return finish(delta ? "delta_law" : "coherence_fidelity_law", t, 1e-10);
}

CheckResult spin_revival(const VerifyOptions& o) {
  Tracker t;
  for (int q = 1; q <= 4; ++q)
    for (int s = 0; s <= 3; ++s) {
      const double tau = std::ldexp(1.0, q) * s + 1;
      const CMatrix u = evolve(controlled_rotation_hamiltonian(q).matrix, tau);
      CMatrix want = CMatrix::Identity(4, 4);
      want(3, 3) = std::polar(1.0, 2.0 * M_PI / std::ldexp(1.0, q));
      t.see((u - want).cwiseAbs().maxCoeff(), "rotation q=" + std::to_string(q));
    }
  const int nmax = o.quick ? 3 : 4;
  for (int n = 1; n <= nmax; ++n) {
    const std::uint64_t D = std::uint64_t{1} << n;
    for (std::uint64_t a = 0; a < D; ++a)
      for (std::uint64_t b = 0; b < D; ++b)
        t.see(1.0 - run_spin_adder(a, b, n, 1.0, n).f_out, "spin n=" + std::to_string(n));
  }
  return finish("spin_revival", t, 1e-9);
}

}  // namespace

std::vector<CheckResult> run_verify(const VerifyOptions& opts) {
  const std::vector<std::pair<std::string, std::function<CheckResult()>>> checks = {
      {"exact_adder", [&] { return exact_adder(opts); }},
      {"closed_form_vs_simulation", [&] { return closed_form_vs_simulation(opts); }},
      {"backend_equivalence", [&] { return backend_equivalence(opts); }},
      {"prop2_soundness", [&] { return prop2_soundness(opts); }},
      {"prop1_flatten_equality", [&] { return prop1_flatten(opts); }},
      {"coherence_fidelity_law", [&] { return coherence_laws(opts, false); }},
      {"delta_law", [&] { return coherence_laws(opts, true); }},
      {"spin_revival", [&] { return spin_revival(opts); }},
  };
  std::vector<CheckResult> out;
  for (const auto& [name, fn] : checks) {
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult r;
    try {
      r = fn();
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.name = name;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace quditsum
