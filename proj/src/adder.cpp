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

#include "quditsum/adder.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <unordered_set>

namespace quditsum {

std::string to_string(Backend b) {
  switch (b) {
    case Backend::Product: return "product";
    case Backend::Branch: return "branch";
    case Backend::Joint: return "joint";
    case Backend::ClosedForm: return "closed-form";
  }
  return "?";
}

Backend parse_backend(const std::string& s) {
  std::string l = s;
  std::transform(l.begin(), l.end(), l.begin(), [](unsigned char c) { return std::tolower(c); });
  if (l == "product") return Backend::Product;
  if (l == "branch") return Backend::Branch;
  if (l == "joint") return Backend::Joint;
  if (l == "closed-form" || l == "closedform" || l == "closed_form") return Backend::ClosedForm;
  throw DomainError("unknown backend '" + s + "'");
}

DigitString encode_digits(std::uint64_t v, int d, int n) {
  if (d < 2) throw DomainError("local dimension must be >= 2");
  if (n < 1) throw DomainError("register length must be >= 1");
  DigitString out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    out[i] = static_cast<int>(v % static_cast<std::uint64_t>(d));
    v /= static_cast<std::uint64_t>(d);
  }
  if (v != 0) throw DomainError("value does not fit in n base-d digits");
  return out;
}

std::uint64_t decode_digits(const DigitString& digits, int d) {
  std::uint64_t v = 0;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
    if (*it < 0 || *it >= d) throw DomainError("digit out of range");
    if (v > (std::numeric_limits<std::uint64_t>::max() - *it) / static_cast<std::uint64_t>(d))
      throw ResourceError("value exceeds 64 bits");
    v = v * static_cast<std::uint64_t>(d) + static_cast<std::uint64_t>(*it);
  }
  return v;
}

AdderConfig AdderConfig::from_integers(std::uint64_t a, std::uint64_t b, int d, int n) {
  AdderConfig c;
  c.d = d;
  c.n = n;
  c.a = encode_digits(a, d, n);
  c.b = encode_digits(b, d, n);
  return c;
}

void AdderConfig::validate() const {
  if (d < 2) throw DomainError("local dimension must be >= 2");
  if (n < 1) throw DomainError("register length must be >= 1");
  if (static_cast<int>(a.size()) != n || static_cast<int>(b.size()) != n)
    throw DomainError("inputs must have exactly n digits");
  for (int x : a)
    if (x < 0 || x >= d) throw DomainError("augend digit out of range");
  for (int x : b)
    if (x < 0 || x >= d) throw DomainError("addend digit out of range");
  if (q < 0 || q > augend_size()) throw DomainError("banding order must lie in 1..n");
  noise.validate(d);
  const bool control_noise = noise.active() && noise.placement.on_control &&
                             (noise.kind == ChannelKind::ADC || noise.kind == ChannelKind::CDPC);
  if (backend == Backend::Product && control_noise)
    throw ContractError("noise on control qudits needs the branch or joint backend");
  if (backend == Backend::ClosedForm) {
    if (control_noise) throw ContractError("closed forms assume noise on targets only");
    if (!modular && noise.active())
      throw ContractError("closed forms cover the non-modular register only without noise");
    if (noise.kind == ChannelKind::ADC && noise.active()) {
      const bool qft_exposed = noise.placement.after_qft_rotations && augend_size() > 1;
      const bool sum_multi = noise.placement.after_sum_rotations && band() > 1;
      if (qft_exposed || sum_multi)
        throw ContractError(
            "amplitude-damping closed form holds only for at most one exposure per qudit");
    }
  }
}

const MetricSample& RunRecord::at(const std::string& label) const {
  for (const auto& s : samples)
    if (s.label == label) return s;
  throw ContractError("no checkpoint labelled '" + label + "'");
}

GateSchedule adder_schedule(const AdderConfig& cfg) {
  const int na = cfg.augend_size();
  GateSchedule s = concat(qft_schedule(na), sum_schedule(na, cfg.band(), cfg.n));
  if (!cfg.stop_after_sum) s = concat(s, iqft_schedule(na));
  return s;
}

DigitString expected_digits(const AdderConfig& cfg) {
  const int na = cfg.augend_size();
  DigitString out(static_cast<std::size_t>(na), 0);
  int carry = 0;
  for (int i = 0; i < na; ++i) {
    const int s = (i < cfg.n ? cfg.a[i] + cfg.b[i] : 0) + carry;
    out[i] = s % cfg.d;
    carry = s / cfg.d;
  }
  return out;
}

namespace {

constexpr double kTieTol = 1e-12;

std::string fmt_bool(bool b) { return b ? "true" : "false"; }

double phase_angle(const AdderConfig& cfg, const Gate& g, int m, int k) {
  double ang = rotation_angle(cfg.d, g.order, m, k) + cfg.rotation_phase_error * m * k;
  return g.is_inverse() ? -ang : ang;
}

bool noise_applies(const AdderConfig& cfg, const GateSchedule& s, std::size_t i) {
  if (!cfg.noise.active() || !s.noisy_after(i)) return false;
  const Stage st = s.gates[i].stage;
  if (st == Stage::Qft) return cfg.noise.placement.after_qft_rotations;
  if (st == Stage::Sum) return cfg.noise.placement.after_sum_rotations;
  return false;
}

// Index of gate i within its own stage.
std::vector<std::size_t> stage_offsets(const GateSchedule& s) {
  std::vector<std::size_t> out(s.size());
  std::size_t run = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i > 0 && s.gates[i].stage != s.gates[i - 1].stage) run = 0;
    out[i] = run++;
  }
  return out;
}

// Vector of a pure qudit state, phase fixed by its largest component.
CVector pure_vector(const CMatrix& rho) {
  Eigen::Index c = 0;
  rho.diagonal().real().maxCoeff(&c);
  return rho.col(c) / std::sqrt(rho(c, c).real());
}

using Product = std::vector<QuditState>;

struct SimBranch {
  double prob;
  Product aug;
  Product add;
};

class ProductEngine {
 public:
  ProductEngine(const AdderConfig& cfg, const GateSchedule& sched)
      : cfg_(cfg), sched_(sched) {
    SimBranch b{1.0, {}, {}};
    const int na = cfg.augend_size();
    for (int t = 0; t < na; ++t) b.aug.push_back(pure_digit_state(t < cfg.n ? cfg.a[t] : 0, cfg.d));
    for (int t = 0; t < cfg.n; ++t) b.add.push_back(pure_digit_state(cfg.b[t], cfg.d));
    branches_.push_back(std::move(b));
    if (cfg.noise.active()) kraus_ = make_kraus(cfg.noise.kind, cfg.d, cfg.noise.p);
    had_ = hadamard_d(cfg.d);
  }

  void apply(std::size_t i) {
    const Gate& g = sched_.gates[i];
    if (g.is_rotation())
      rotate(g);
    else
      for (auto& br : branches_)
        br.aug[g.target] = QuditState::trusted(g.is_inverse() ? CMatrix(had_.adjoint() * br.aug[g.target].rho() * had_)
                                                              : CMatrix(had_ * br.aug[g.target].rho() * had_.adjoint()));
    if (noise_applies(cfg_, sched_, i)) {
      for (auto& br : branches_) {
        br.aug[g.target] = apply_channel(br.aug[g.target], kraus_);
        if (cfg_.noise.placement.on_control) {
          auto& ctl = g.control_register == Register::Augend ? br.aug[*g.control] : br.add[*g.control];
          ctl = apply_channel(ctl, kraus_);
        }
      }
    }
  }

  const std::vector<SimBranch>& branches() const { return branches_; }
  double pruned() const { return pruned_; }
  bool semiclassical() const { return semiclassical_; }

  RegisterState augend() const {
    std::vector<Branch> out;
    out.reserve(branches_.size());
    for (const auto& b : branches_) out.push_back(Branch{b.prob, b.aug});
    return RegisterState(std::move(out), distinct_keys());
  }

  // True when some augend qudit is a basis state in every branch and the
  // tuple of those digits differs between branches.
  bool distinct_keys() const {
    if (branches_.size() == 1) return true;
    const int na = static_cast<int>(branches_.front().aug.size());
    std::vector<int> sites;
    for (int t = 0; t < na; ++t) {
      bool all = true;
      for (const auto& b : branches_)
        if (!b.aug[t].is_basis_state(nullptr)) {
          all = false;
          break;
        }
      if (all) sites.push_back(t);
    }
    if (sites.empty()) return false;
    std::unordered_set<std::string> seen;
    for (const auto& b : branches_) {
      std::string key;
      for (int t : sites) {
        int k = 0;
        b.aug[t].is_basis_state(&k);
        key.push_back(static_cast<char>(k));
      }
      if (!seen.insert(key).second) return false;
    }
    return true;
  }

  double fidelity(const Product& ref) const {
    double f = 0.0;
    for (const auto& b : branches_) {
      double prod = b.prob;
      for (std::size_t t = 0; t < ref.size() && prod != 0.0; ++t)
        prod *= (ref[t].rho().conjugate().cwiseProduct(b.aug[t].rho())).sum().real();
      f += prod;
    }
    return f;
  }

  // NaN when the branches are not orthogonal and the joint form exceeds the cap.
  double coherence() const {
    if (distinct_keys()) {
      double total = 0.0, mass = 0.0;
      for (const auto& b : branches_) {
        double prod = b.prob;
        for (const auto& q : b.aug) prod *= scaled_sum(q.rho());
        total += prod;
        mass += b.prob;
      }
      return std::max(0.0, total - mass);
    }
    try {
      return l1_coherence(join_full(augend(), cfg_.joint_cap));
    } catch (const ResourceError&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  }

 private:
  void rotate(const Gate& g) {
    std::vector<SimBranch> next;
    next.reserve(branches_.size());
    for (auto& br : branches_) {
      auto& ctl = g.control_register == Register::Augend ? br.aug[*g.control] : br.add[*g.control];
      int k = 0;
      if (ctl.is_basis_state(&k)) {
        phase(br.aug[g.target], g, k);
        next.push_back(std::move(br));
        continue;
      }
      if (!ctl.is_diagonal()) semiclassical_ = true;
      const CMatrix rho = ctl.rho();
      for (int m = 0; m < cfg_.d; ++m) {
        const double w = br.prob * rho(m, m).real();
        if (w <= cfg_.prune_threshold) {
          pruned_ += std::max(w, 0.0);
          continue;
        }
        SimBranch nb = br;
        nb.prob = w;
        auto& nctl = g.control_register == Register::Augend ? nb.aug[*g.control] : nb.add[*g.control];
        nctl = pure_digit_state(m, cfg_.d);
        phase(nb.aug[g.target], g, m);
        next.push_back(std::move(nb));
        if (next.size() > cfg_.branch_cap)
          throw ResourceError("branch count exceeds cap " + std::to_string(cfg_.branch_cap));
      }
    }
    branches_ = std::move(next);
  }

  void phase(QuditState& s, const Gate& g, int m) const {
    if (m == 0) return;
    CVector ph(cfg_.d);
    for (int k = 0; k < cfg_.d; ++k) ph(k) = std::polar(1.0, phase_angle(cfg_, g, m, k));
    CMatrix r = s.rho();
    for (int l = 0; l < cfg_.d; ++l)
      for (int k = 0; k < cfg_.d; ++k) r(k, l) *= ph(k) * std::conj(ph(l));
    s = QuditState::trusted(std::move(r));
  }

  const AdderConfig& cfg_;
  const GateSchedule& sched_;
  std::vector<SimBranch> branches_;
  KrausSet kraus_;
  CMatrix had_;
  double pruned_ = 0.0;
  bool semiclassical_ = false;
};

class JointEngine {
 public:
  JointEngine(const AdderConfig& cfg, const GateSchedule& sched)
      : cfg_(cfg), sched_(sched), na_(cfg.augend_size()) {
    addend_in_ = cfg.noise.active() && cfg.noise.placement.on_control &&
                 cfg.noise.placement.after_sum_rotations &&
                 (cfg.noise.kind == ChannelKind::ADC || cfg.noise.kind == ChannelKind::CDPC);
    sites_ = na_ + (addend_in_ ? cfg.n : 0);
    const std::size_t dim = checked_power(cfg.d, sites_, cfg.joint_cap);
    da_ = static_cast<Eigen::Index>(checked_power(cfg.d, na_, cfg.joint_cap));
    DigitString a = cfg.a;
    a.resize(static_cast<std::size_t>(na_), 0);
    Eigen::Index idx = 0, stride = 1;
    for (int t = 0; t < na_; ++t, stride *= cfg.d) idx += a[t] * stride;
    if (addend_in_)
      for (int t = 0; t < cfg.n; ++t, stride *= cfg.d) idx += cfg.b[t] * stride;
    rho_ = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    rho_(idx, idx) = 1.0;
    if (cfg.noise.active()) kraus_ = make_kraus(cfg.noise.kind, cfg.d, cfg.noise.p);
    had_ = hadamard_d(cfg.d);
    dephased_.assign(static_cast<std::size_t>(na_), 0);
  }

  void apply(std::size_t i) {
    const Gate& g = sched_.gates[i];
    const int d = cfg_.d;
    if (g.is_rotation()) {
      if (cfg_.joint_mode == JointMode::DephaseUsedControls && g.stage == Stage::Iqft &&
          g.control_register == Register::Augend && !dephased_[*g.control]) {
        joint::dephase_site(rho_, d, sites_, *g.control);
        dephased_[*g.control] = 1;
      }
      const Eigen::Index dim = rho_.rows();
      CVector ph(dim);
      const int csite = g.control_register == Register::Augend ? *g.control
                        : addend_in_                          ? na_ + *g.control
                                                              : -1;
      for (Eigen::Index x = 0; x < dim; ++x) {
        const int k = digit_at(static_cast<std::size_t>(x), d, g.target);
        const int m = csite >= 0 ? digit_at(static_cast<std::size_t>(x), d, csite) : cfg_.b[*g.control];
        ph(x) = (m == 0 || k == 0) ? Complex(1.0, 0.0) : std::polar(1.0, phase_angle(cfg_, g, m, k));
      }
      joint::apply_diagonal(rho_, ph);
    } else {
      joint::apply_local_unitary(rho_, d, sites_, g.target, g.is_inverse() ? CMatrix(had_.adjoint()) : had_);
    }
    if (noise_applies(cfg_, sched_, i)) {
      apply_channel_site(rho_, d, sites_, g.target, kraus_);
      if (cfg_.noise.placement.on_control) {
        if (g.control_register == Register::Augend)
          apply_channel_site(rho_, d, sites_, *g.control, kraus_);
        else if (addend_in_)
          apply_channel_site(rho_, d, sites_, na_ + *g.control, kraus_);
      }
    }
  }

  CMatrix augend() const {
    if (!addend_in_) return rho_;
    CMatrix r = CMatrix::Zero(da_, da_);
    const Eigen::Index copies = rho_.rows() / da_;
    for (Eigen::Index x = 0; x < copies; ++x) r += rho_.block(x * da_, x * da_, da_, da_);
    return r;
  }

 private:
  const AdderConfig& cfg_;
  const GateSchedule& sched_;
  int na_;
  int sites_ = 0;
  bool addend_in_ = false;
  Eigen::Index da_ = 0;
  CMatrix rho_;
  KrausSet kraus_;
  CMatrix had_;
  std::vector<char> dephased_;
};

// Noiseless references: the unbanded run for the transforms and the named
// checkpoints, the banded run for gates inside the sum stage.
struct References {
  Product initial;
  std::vector<Product> qft, sum_banded, iqft;
  Product pre_sum, post_sum, final;
};

std::vector<Product> trace_products(const AdderConfig& base, int q, bool stop_after_sum) {
  AdderConfig c = base;
  c.noise = NoiseSpec{};
  c.q = q;
  c.rotation_phase_error = 0.0;
  c.stop_after_sum = stop_after_sum;
  c.backend = Backend::Product;
  const GateSchedule s = adder_schedule(c);
  ProductEngine eng(c, s);
  std::vector<Product> out;
  out.push_back(eng.branches().front().aug);
  for (std::size_t i = 0; i < s.size(); ++i) {
    eng.apply(i);
    if (eng.branches().size() != 1) throw ContractError("noiseless reference left product form");
    out.push_back(eng.branches().front().aug);
  }
  return out;
}

References build_references(const AdderConfig& cfg) {
  const int na = cfg.augend_size();
  const std::size_t gq = qft_schedule(na).size();
  const std::size_t gs_full = sum_schedule(na, na, cfg.n).size();
  const std::size_t gs_band = sum_schedule(na, cfg.band(), cfg.n).size();
  References r;
  const auto full = trace_products(cfg, 0, cfg.stop_after_sum);
  r.initial = full[0];
  for (std::size_t i = 0; i < gq; ++i) r.qft.push_back(full[i + 1]);
  r.pre_sum = full[gq];
  r.post_sum = full[gq + gs_full];
  if (!cfg.stop_after_sum) {
    for (std::size_t i = gq + gs_full; i + 1 < full.size(); ++i) r.iqft.push_back(full[i + 1]);
    r.final = full.back();
  }
  if (cfg.band() == na) {
    for (std::size_t i = 0; i < gs_full; ++i) r.sum_banded.push_back(full[gq + i + 1]);
  } else {
    const auto banded = trace_products(cfg, cfg.band(), true);
    for (std::size_t i = 0; i < gs_band; ++i) r.sum_banded.push_back(banded[gq + i + 1]);
  }
  return r;
}

const Product& reference_for(const References& r, Stage st, std::size_t k) {
  switch (st) {
    case Stage::Qft: return r.qft[k];
    case Stage::Sum: return r.sum_banded[k];
    case Stage::Iqft: return r.iqft[k];
  }
  throw ContractError("unknown stage");
}

CVector joint_vector(const Product& p) {
  CVector acc = CVector::Ones(1);
  for (auto it = p.rbegin(); it != p.rend(); ++it) {
    const CVector v = pure_vector(it->rho());
    CVector next(acc.size() * v.size());
    for (Eigen::Index i = 0; i < acc.size(); ++i) next.segment(i * v.size(), v.size()) = acc(i) * v;
    acc = std::move(next);
  }
  return acc;
}

Eigen::Index argmax_first(const std::vector<double>& v) {
  double best = -1.0;
  for (double x : v) best = std::max(best, x);
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] >= best - kTieTol) return static_cast<Eigen::Index>(i);
  return 0;
}

DigitString index_digits(std::size_t idx, int d, int n) {
  DigitString out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    out[i] = static_cast<int>(idx % static_cast<std::size_t>(d));
    idx /= static_cast<std::size_t>(d);
  }
  return out;
}

void finish_readout(RunRecord& rec, const Measurement& m) {
  rec.decoded_digits = m.decoded;
  rec.success_prob = m.success_prob;
  rec.distribution = m.distribution;
  try {
    rec.decoded = decode_digits(m.decoded, rec.config.d);
  } catch (const ResourceError&) {
    rec.decoded.reset();
  }
}

MetricSample make_sample(std::string label, std::string stage, int index, double f, double c,
                         double total_dim) {
  MetricSample s;
  s.label = std::move(label);
  s.stage = std::move(stage);
  s.index = index;
  s.fidelity = f;
  s.c_l1 = c;
  s.c_l1_norm = std::isnan(c) ? c : normalized_coherence(c, total_dim);
  return s;
}

void run_closed_form(const AdderConfig& cfg, RunRecord& rec, const Observer& obs) {
  const int d = cfg.d;
  const int na = cfg.augend_size();
  const int q = cfg.band();
  const double total = std::pow(static_cast<double>(d), na);
  DigitString b = cfg.b;
  b.resize(static_cast<std::size_t>(na), 0);
  const bool noisy = cfg.noise.active();
  const double p = noisy ? cfg.noise.p : 0.0;
  std::vector<RMatrix> s_in, s_out;
  std::vector<double> zero(static_cast<std::size_t>(na), 0.0), delta;
  for (int t = 0; t < na; ++t) {
    const int m = band_width(q, t);
    const int e_qft = noisy && cfg.noise.placement.after_qft_rotations ? t : 0;
    const int e_sum = noisy && cfg.noise.placement.after_sum_rotations ? m : 0;
    if (cfg.noise.kind == ChannelKind::ADC && noisy) {
      s_in.push_back(e_qft ? element_scaling_adc(d, p) : RMatrix::Ones(d, d));
      s_out.push_back(e_qft + e_sum ? element_scaling_adc(d, p) : RMatrix::Ones(d, d));
    } else {
      s_in.push_back(element_scaling_pdc(e_qft, d, p));
      s_out.push_back(element_scaling_pdc(e_qft + e_sum, d, p));
    }
    delta.push_back(truncated_phase(b, d, t, m));
  }
  auto coherence = [&](const std::vector<RMatrix>& s) {
    double prod = 1.0;
    for (const auto& m : s) prod *= m.sum() / d;
    return prod - 1.0;
  };
  const double f_in = scaled_overlap(s_in, zero);
  const double f_out = scaled_overlap(s_out, delta);
  rec.samples.push_back(make_sample("initial", "initial", 0, 1.0, 0.0, total));
  rec.samples.push_back(make_sample("pre_sum", "pre_sum", -1, f_in, coherence(s_in), total));
  rec.samples.push_back(make_sample("post_sum", "post_sum", -1, f_out, coherence(s_out), total));
  if (!cfg.stop_after_sum) {
    const double c_final = (!noisy && q == na) ? 0.0 : std::numeric_limits<double>::quiet_NaN();
    rec.samples.push_back(make_sample("final", "final", -1, f_out, c_final, total));
  }
  if (obs)
    for (const auto& s : rec.samples) obs(CheckpointView{s, nullptr, nullptr});
  rec.success_prob = f_out;
  if (f_out > 0.5) {
    rec.decoded_digits = expected_digits(cfg);
    try {
      rec.decoded = decode_digits(rec.decoded_digits, d);
    } catch (const ResourceError&) {
    }
  } else {
    rec.metadata.emplace_back("decoded", "undetermined: success probability <= 1/2");
  }
}

}  // namespace

Measurement decode_measure(const RegisterState& reg, const DigitString& expected, std::size_t cap) {
  const int d = reg.dim();
  const int n = reg.size();
  if (static_cast<int>(expected.size()) != n) throw ContractError("expected digits length mismatch");
  Measurement m;
  for (const auto& b : reg.branches()) {
    double prod = b.prob;
    for (int t = 0; t < n; ++t) prod *= b.qudits[t].rho()(expected[t], expected[t]).real();
    m.success_prob += prod;
  }
  std::size_t dim = 0;
  try {
    dim = checked_power(d, n, cap);
  } catch (const ResourceError&) {
    if (!reg.is_product()) throw;
    m.decoded.resize(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t) {
      std::vector<double> diag(static_cast<std::size_t>(d));
      for (int k = 0; k < d; ++k) diag[k] = reg.qudits()[t].rho()(k, k).real();
      m.decoded[t] = static_cast<int>(argmax_first(diag));
    }
    return m;
  }
  m.distribution.assign(dim, 0.0);
  std::vector<std::size_t> strides(static_cast<std::size_t>(n));
  std::size_t s = 1;
  for (int t = 0; t < n; ++t, s *= static_cast<std::size_t>(d)) strides[t] = s;
  for (const auto& b : reg.branches()) {
    std::vector<std::vector<std::pair<int, double>>> support(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t)
      for (int k = 0; k < d; ++k) {
        const double pk = b.qudits[t].rho()(k, k).real();
        if (pk > 0.0) support[t].emplace_back(k, pk);
      }
    std::function<void(int, std::size_t, double)> walk = [&](int t, std::size_t idx, double pr) {
      if (t < 0) {
        m.distribution[idx] += pr;
        return;
      }
      for (const auto& [k, pk] : support[t]) walk(t - 1, idx + k * strides[t], pr * pk);
    };
    walk(n - 1, 0, b.prob);
  }
  m.decoded = index_digits(static_cast<std::size_t>(argmax_first(m.distribution)), d, n);
  return m;
}

Measurement decode_measure(const JointState& joint, const DigitString& expected) {
  const int d = joint.local_dim();
  const int n = joint.size();
  if (static_cast<int>(expected.size()) != n) throw ContractError("expected digits length mismatch");
  Measurement m;
  m.distribution.resize(joint.dim());
  for (std::size_t i = 0; i < joint.dim(); ++i)
    m.distribution[i] = joint.rho()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
  std::size_t idx = 0, stride = 1;
  for (int t = 0; t < n; ++t, stride *= static_cast<std::size_t>(d)) idx += expected[t] * stride;
  m.success_prob = m.distribution[idx];
  m.decoded = index_digits(static_cast<std::size_t>(argmax_first(m.distribution)), d, n);
  return m;
}

RunRecord run_adder(const AdderConfig& cfg, const Observer& observer) {
  cfg.validate();
  const GateSchedule sched = adder_schedule(cfg);
  RunRecord rec;
  rec.config = cfg;
  rec.gate_count = sched.size();
  rec.depth = sched.depth;
  const int na = cfg.augend_size();
  rec.metadata.emplace_back("backend", to_string(cfg.backend));
  rec.metadata.emplace_back("sum_depth", std::to_string(sum_schedule(na, cfg.band(), cfg.n).depth));
  rec.metadata.emplace_back("seed", std::to_string(cfg.seed));
  if (cfg.backend == Backend::ClosedForm) {
    run_closed_form(cfg, rec, observer);
    return rec;
  }

  const References refs = build_references(cfg);
  const auto offsets = stage_offsets(sched);
  const double total = std::pow(static_cast<double>(cfg.d), na);
  const DigitString expected = expected_digits(cfg);
  bool coherence_missing = false;

  if (cfg.backend == Backend::Joint) {
    JointEngine eng(cfg, sched);
    auto emit = [&](const std::string& label, const std::string& stage, int index, const Product& ref) {
      const CMatrix rho = eng.augend();
      const CVector psi = joint_vector(ref);
      const double f = (psi.adjoint() * rho * psi)(0, 0).real();
      rec.samples.push_back(make_sample(label, stage, index, f, l1_coherence(rho), total));
      if (observer) {
        const JointState js = JointState::trusted(cfg.d, na, rho);
        observer(CheckpointView{rec.samples.back(), nullptr, &js});
      }
    };
    emit("initial", "initial", 0, refs.initial);
    for (std::size_t i = 0; i < sched.size(); ++i) {
      eng.apply(i);
      const Gate& g = sched.gates[i];
      if (cfg.per_gate_samples)
        emit("after_gate_" + std::to_string(i), to_string(g.stage), static_cast<int>(i),
             reference_for(refs, g.stage, offsets[i]));
      const bool stage_end = i + 1 == sched.size() || sched.gates[i + 1].stage != g.stage;
      if (stage_end && g.stage == Stage::Qft) emit("pre_sum", "pre_sum", -1, refs.pre_sum);
      if (stage_end && g.stage == Stage::Sum) emit("post_sum", "post_sum", -1, refs.post_sum);
      if (stage_end && g.stage == Stage::Iqft) emit("final", "final", -1, refs.final);
    }
    if (!cfg.stop_after_sum) {
      finish_readout(rec, decode_measure(JointState::trusted(cfg.d, na, eng.augend()), expected));
    } else {
      rec.success_prob = rec.at("post_sum").fidelity;
    }
    rec.metadata.emplace_back("joint_mode", cfg.joint_mode == JointMode::Coherent
                                                ? "coherent"
                                                : "dephase_used_controls");
    return rec;
  }

  ProductEngine eng(cfg, sched);
  auto emit = [&](const std::string& label, const std::string& stage, int index, const Product& ref) {
    const double c = eng.coherence();
    coherence_missing = coherence_missing || std::isnan(c);
    rec.samples.push_back(make_sample(label, stage, index, eng.fidelity(ref), c, total));
    if (observer) {
      const RegisterState reg = eng.augend();
      observer(CheckpointView{rec.samples.back(), &reg, nullptr});
    }
  };
  emit("initial", "initial", 0, refs.initial);
  for (std::size_t i = 0; i < sched.size(); ++i) {
    eng.apply(i);
    const Gate& g = sched.gates[i];
    if (cfg.per_gate_samples)
      emit("after_gate_" + std::to_string(i), to_string(g.stage), static_cast<int>(i),
           reference_for(refs, g.stage, offsets[i]));
    const bool stage_end = i + 1 == sched.size() || sched.gates[i + 1].stage != g.stage;
    if (stage_end && g.stage == Stage::Qft) emit("pre_sum", "pre_sum", -1, refs.pre_sum);
    if (stage_end && g.stage == Stage::Sum) emit("post_sum", "post_sum", -1, refs.post_sum);
    if (stage_end && g.stage == Stage::Iqft) emit("final", "final", -1, refs.final);
  }
  rec.pruned_mass = eng.pruned();
  if (!cfg.stop_after_sum) {
    finish_readout(rec, decode_measure(eng.augend(), expected, cfg.distribution_cap));
  } else {
    rec.success_prob = rec.at("post_sum").fidelity;
  }
  rec.metadata.emplace_back("branches", std::to_string(eng.branches().size()));
  rec.metadata.emplace_back("semiclassical_readout", fmt_bool(eng.semiclassical()));
  if (coherence_missing)
    rec.metadata.emplace_back("coherence", "unavailable where branches overlap beyond the joint cap");
  return rec;
}

}  // namespace quditsum
