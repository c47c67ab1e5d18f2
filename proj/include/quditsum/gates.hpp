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

#ifndef QUDITSUM_GATES_HPP
#define QUDITSUM_GATES_HPP

#include <optional>
#include <string>
#include <vector>

#include "quditsum/tensor.hpp"

namespace quditsum {

enum class GateKind { Hadamard, ControlledRotation, InverseHadamard, InverseControlledRotation };

// Augend is the register that accumulates the sum; the addend only controls.
enum class Register { Augend, Addend };

enum class Stage { Qft, Sum, Iqft };

struct Gate {
  GateKind kind = GateKind::Hadamard;
  Stage stage = Stage::Qft;
  int target = 0;
  std::optional<int> control;
  Register control_register = Register::Augend;
  int order = 0;
  int layer = 0;

  bool is_rotation() const {
    return kind == GateKind::ControlledRotation || kind == GateKind::InverseControlledRotation;
  }
  bool is_inverse() const {
    return kind == GateKind::InverseHadamard || kind == GateKind::InverseControlledRotation;
  }
};

struct GateSchedule {
  std::vector<Gate> gates;
  // Sorted gate indices after which a noise channel may be inserted.
  std::vector<std::size_t> noise_after;
  int depth = 0;

  std::size_t size() const { return gates.size(); }
  std::size_t rotation_count() const;
  bool noisy_after(std::size_t i) const;
};

std::string to_string(GateKind k);
std::string to_string(Stage s);

// H[m][n] = exp(2 pi i m n / d) / sqrt(d)
CMatrix hadamard_d(int d);

// Angle 2 pi m n / d^order of a controlled rotation on digits (m, n).
double rotation_angle(int d, int order, long long m, long long n);

// d^2 x d^2 diagonal; entry m*d+n is exp(i rotation_angle(d, order, m, n)),
// m the control digit.
CMatrix controlled_rotation(int d, int order);

// Target block of controlled_rotation at control digit b.
CMatrix reduced_rotation(int d, int order, int b);

// Hadamard on each target from the most significant down, each followed by
// rotations of order t-j+1 controlled by augend digit j = t-1 .. 0.
GateSchedule qft_schedule(int n);

// Target t receives orders 1..min(q, t+1); order o is controlled by addend
// digit t-o+1. Rotations whose control index is >= n_control are dropped
// (non-modular register). Layer = order - 1.
GateSchedule sum_schedule(int n, int q, int n_control = -1);

// Reverse of qft_schedule with each gate replaced by its adjoint.
GateSchedule iqft_schedule(int n);

// Concatenation; noise indices are shifted.
GateSchedule concat(const GateSchedule& a, const GateSchedule& b);

}  // namespace quditsum

#endif  // QUDITSUM_GATES_HPP
