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

#include "quditsum/channels.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

namespace quditsum {

std::string to_string(ChannelKind k) {
  switch (k) {
    case ChannelKind::None: return "none";
    case ChannelKind::PDC: return "pdc";
    case ChannelKind::ADC: return "adc";
    case ChannelKind::CDPC: return "cdpc";
  }
  return "?";
}

ChannelKind parse_channel(const std::string& s) {
  std::string l = s;
  std::transform(l.begin(), l.end(), l.begin(), [](unsigned char c) { return std::tolower(c); });
  if (l == "none") return ChannelKind::None;
  if (l == "pdc") return ChannelKind::PDC;
  if (l == "adc") return ChannelKind::ADC;
  if (l == "cdpc") return ChannelKind::CDPC;
  throw DomainError("unknown channel '" + s + "'");
}

double max_strength(ChannelKind k, int d) {
  if (k == ChannelKind::ADC) return 1.0 / (d - 1);
  return 1.0;
}

void NoiseSpec::validate(int d) const {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("noise strength must lie in [0,1]");
  if (kind == ChannelKind::ADC && p > max_strength(kind, d) + 1e-15)
    throw DomainError("amplitude damping requires p <= 1/(d-1)");
}

double KrausSet::completeness_defect() const {
  CMatrix s = CMatrix::Zero(d, d);
  for (const auto& m : operators) s += m.adjoint() * m;
  return (s - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
}

namespace {

void check_args(int d, double p) {
  if (d < 2) throw DomainError("channel requires d >= 2");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("noise strength must lie in [0,1]");
}

}  // namespace

KrausSet kraus_pdc(int d, double p) {
  check_args(d, p);
  KrausSet ks{d, ChannelKind::PDC, p, {}};
  ks.operators.push_back(std::sqrt(1.0 - p) * CMatrix::Identity(d, d));
  for (int i = 0; i < d; ++i) {
    CMatrix m = CMatrix::Zero(d, d);
    m(i, i) = std::sqrt(p);
    ks.operators.push_back(std::move(m));
  }
  return ks;
}

KrausSet kraus_adc(int d, double p) {
  check_args(d, p);
  if (p > max_strength(ChannelKind::ADC, d) + 1e-15)
    throw DomainError("amplitude damping requires p <= 1/(d-1)");
  KrausSet ks{d, ChannelKind::ADC, p, {}};
  CMatrix m0 = CMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k) m0(k, k) = std::sqrt(std::max(0.0, 1.0 - k * p));
  ks.operators.push_back(std::move(m0));
  for (int i = 1; i < d; ++i) {
    CMatrix m = CMatrix::Zero(d, d);
    for (int k = 0; k + i < d; ++k) m(k, k + i) = std::sqrt(p);
    ks.operators.push_back(std::move(m));
  }
  return ks;
}

KrausSet kraus_cdpc(int d, double p) {
  check_args(d, p);
  KrausSet ks{d, ChannelKind::CDPC, p, {}};
  const double dd = static_cast<double>(d) * d;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      CMatrix w = CMatrix::Zero(d, d);
      for (int j = 0; j < d; ++j)
        w((j + a) % d, j) = std::polar(1.0, 2.0 * std::numbers::pi * b * j / d);
      const double c = (a == 0 && b == 0) ? std::sqrt(1.0 - p + p / dd) : std::sqrt(p / dd);
      ks.operators.push_back(c * w);
    }
  return ks;
}

KrausSet make_kraus(ChannelKind k, int d, double p) {
  switch (k) {
    case ChannelKind::PDC: return kraus_pdc(d, p);
    case ChannelKind::ADC: return kraus_adc(d, p);
    case ChannelKind::CDPC: return kraus_cdpc(d, p);
    case ChannelKind::None: break;
  }
  check_args(d, p);
  return KrausSet{d, ChannelKind::None, p, {CMatrix::Identity(d, d)}};
}

CMatrix apply_channel(const CMatrix& rho, const KrausSet& ch) {
  if (rho.rows() != ch.d || rho.cols() != ch.d) throw ContractError("channel dimension mismatch");
  switch (ch.kind) {
    case ChannelKind::None: return rho;
    case ChannelKind::CDPC: {
      CMatrix out = (1.0 - ch.p) * rho;
      out.diagonal().array() += ch.p * rho.trace() / static_cast<double>(ch.d);
      return out;
    }
    case ChannelKind::PDC: {
      CMatrix out = (1.0 - ch.p) * rho;
      out.diagonal() = rho.diagonal();
      return out;
    }
    case ChannelKind::ADC: break;
  }
  CMatrix out = CMatrix::Zero(ch.d, ch.d);
  for (const auto& m : ch.operators) out.noalias() += m * rho * m.adjoint();
  return out;
}

QuditState apply_channel(const QuditState& state, const KrausSet& ch) {
  if (state.dim() != ch.d) throw ContractError("channel dimension mismatch");
  return QuditState::trusted(apply_channel(state.rho(), ch));
}

void apply_channel_site(CMatrix& rho, int d, int n, int site, const KrausSet& ch) {
  if (ch.d != d) throw ContractError("channel dimension mismatch");
  switch (ch.kind) {
    case ChannelKind::None: return;
    case ChannelKind::CDPC: joint::depolarize_site(rho, d, n, site, ch.p); return;
    case ChannelKind::PDC: {
      Eigen::Index stride = 1;
      for (int s = 0; s < site; ++s) stride *= d;
      const double keep = 1.0 - ch.p;
      for (Eigen::Index j = 0; j < rho.cols(); ++j) {
        const Eigen::Index kj = (j / stride) % d;
        for (Eigen::Index i = 0; i < rho.rows(); ++i)
          if ((i / stride) % d != kj) rho(i, j) *= keep;
      }
      return;
    }
    case ChannelKind::ADC: break;
  }
  CMatrix out = CMatrix::Zero(rho.rows(), rho.cols());
  for (const auto& m : ch.operators) out += joint::local_sandwich(rho, d, n, site, m, m);
  rho = std::move(out);
}

RMatrix element_scaling_pdc(int t_exposures, int d, double p) {
  check_args(d, p);
  if (t_exposures < 0) throw DomainError("exposure count must be >= 0");
  const double off = std::pow(1.0 - p, t_exposures);
  RMatrix s = RMatrix::Constant(d, d, off);
  s.diagonal().setOnes();
  return s;
}

RMatrix element_scaling_adc(int d, double p) {
  check_args(d, p);
  if (p > max_strength(ChannelKind::ADC, d) + 1e-15)
    throw DomainError("amplitude damping requires p <= 1/(d-1)");
  RMatrix s(d, d);
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l)
      s(k, l) = std::sqrt(std::max(0.0, (1.0 - k * p) * (1.0 - l * p))) +
                p * (d - 1 - std::max(k, l));
  return s;
}

bool has_shift_invariant_coherences(const CMatrix& rho, double eps) {
  const auto d = rho.rows();
  for (Eigen::Index k = 0; k < d; ++k)
    for (Eigen::Index l = 0; l < d; ++l)
      for (Eigen::Index m = 1; k + m < d && l + m < d; ++m)
        if (std::abs(rho(k, l) - rho(k + m, l + m)) > eps) return false;
  return true;
}

RMatrix element_scaling_adc(const QuditState& state, double p) {
  if (!has_shift_invariant_coherences(state.rho()))
    throw ContractError("amplitude-damping scaling needs rho_kl = rho_(k+m)(l+m)");
  return element_scaling_adc(state.dim(), p);
}

}  // namespace quditsum
