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

#ifndef QUDITSUM_ADDER_HPP
#define QUDITSUM_ADDER_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "quditsum/channels.hpp"
#include "quditsum/closed_form.hpp"
#include "quditsum/gates.hpp"
#include "quditsum/metrics.hpp"
#include "quditsum/tensor.hpp"

namespace quditsum {

// Product: one product state per branch; branches appear only where a
// control qudit is not a basis state. Branch: as Product, and also accepts
// non-trivial noise on control qudits. Joint: dense density matrix of the
// augend (plus the addend when its qudits can become mixed). ClosedForm:
// analytic fidelities at the named checkpoints.
enum class Backend { Product, Branch, Joint, ClosedForm };

// Coherent evolves the joint state exactly. DephaseUsedControls dephases an
// augend qudit before its first use as a control in the inverse transform,
// matching the branch representation.
enum class JointMode { Coherent, DephaseUsedControls };

std::string to_string(Backend b);
Backend parse_backend(const std::string& s);

struct AdderConfig {
  int d = 2;
  int n = 1;
  DigitString a;  // augend, least significant digit first
  DigitString b;  // addend
  int q = 0;      // 0 selects the unbanded sum stage
  NoiseSpec noise;
  Backend backend = Backend::Product;
  bool modular = true;
  bool per_gate_samples = true;
  bool stop_after_sum = false;
  JointMode joint_mode = JointMode::Coherent;
  std::size_t joint_cap = kDefaultJointCap;
  std::size_t branch_cap = std::size_t{1} << 16;
  std::size_t distribution_cap = std::size_t{1} << 22;
  double prune_threshold = 1e-15;
  // Test hook: added to every rotation angle, scaled by the digit product.
  double rotation_phase_error = 0.0;
  // Recorded only; every backend is deterministic.
  std::uint64_t seed = 0;

  static AdderConfig from_integers(std::uint64_t a, std::uint64_t b, int d, int n);
  int augend_size() const { return modular ? n : n + 1; }
  int band() const { return q == 0 ? augend_size() : q; }
  // Throws DomainError / ContractError on an inconsistent config.
  void validate() const;
};

struct RunRecord {
  AdderConfig config;
  std::vector<MetricSample> samples;
  DigitString decoded_digits;
  std::optional<std::uint64_t> decoded;
  double success_prob = 0.0;
  std::size_t gate_count = 0;
  int depth = 0;
  double pruned_mass = 0.0;
  std::vector<double> distribution;
  std::vector<std::pair<std::string, std::string>> metadata;

  const MetricSample& at(const std::string& label) const;
};

struct CheckpointView {
  const MetricSample& sample;
  const RegisterState* reg = nullptr;  // Product / Branch
  const JointState* joint = nullptr;   // Joint, addend traced out
};

using Observer = std::function<void(const CheckpointView&)>;

// Full schedule of the configured circuit: transform, sum, inverse transform.
GateSchedule adder_schedule(const AdderConfig& cfg);

// Digits of the exact result: (a+b) mod d^n, or a+b on n+1 digits.
DigitString expected_digits(const AdderConfig& cfg);

RunRecord run_adder(const AdderConfig& cfg, const Observer& observer = {});

struct Measurement {
  DigitString decoded;
  double success_prob = 0.0;
  std::vector<double> distribution;  // empty when d^n exceeds the cap
};

// Computational-basis readout. Ties go to the smaller integer.
Measurement decode_measure(const RegisterState& reg, const DigitString& expected,
                           std::size_t cap = std::size_t{1} << 22);
Measurement decode_measure(const JointState& joint, const DigitString& expected);

}  // namespace quditsum

#endif  // QUDITSUM_ADDER_HPP
