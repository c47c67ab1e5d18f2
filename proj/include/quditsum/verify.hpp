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

#ifndef QUDITSUM_VERIFY_HPP
#define QUDITSUM_VERIFY_HPP

#include <string>
#include <vector>

namespace quditsum {

struct VerifyOptions {
  bool quick = false;
  // Forwarded to AdderConfig::rotation_phase_error for negative controls.
  double phase_error = 0.0;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

// Property suite: exact addition, closed forms against simulation, backend
// agreement, banding bound soundness, phase flattening, coherence-fidelity
// laws and spin-chain revivals.
std::vector<CheckResult> run_verify(const VerifyOptions& opts);

}  // namespace quditsum

#endif  // QUDITSUM_VERIFY_HPP
