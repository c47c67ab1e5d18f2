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

#include "quditsum/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "quditsum/adder.hpp"
#include "quditsum/banding.hpp"
#include "quditsum/io.hpp"
#include "quditsum/spin_chain.hpp"
#include "quditsum/verify.hpp"

namespace quditsum {

namespace {

struct UnwritableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

double to_double(const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw DomainError("not a number: '" + s + "'");
  }
  if (pos != s.size()) throw DomainError("not a number: '" + s + "'");
  return v;
}

int to_int(const std::string& s) {
  const double v = to_double(s);
  if (v != std::floor(v)) throw DomainError("not an integer: '" + s + "'");
  return static_cast<int>(v);
}

// lo:hi[:step] with inclusive endpoints, or a comma-separated list.
std::vector<double> parse_real_range(const std::string& s) {
  std::vector<double> out;
  if (s.find(':') == std::string::npos) {
    for (const auto& part : split(s, ',')) out.push_back(to_double(part));
  } else {
    const auto parts = split(s, ':');
    if (parts.size() < 2 || parts.size() > 3) throw DomainError("range must be lo:hi[:step]");
    const double lo = to_double(parts[0]);
    const double hi = to_double(parts[1]);
    const double step = parts.size() == 3 ? to_double(parts[2]) : 1.0;
    if (!(step > 0.0) || hi < lo) throw DomainError("range needs lo <= hi and step > 0");
    const auto count = static_cast<long long>(std::floor((hi - lo) / step + 1e-9)) + 1;
    if (count > 10'000'000) throw DomainError("range has too many points");
    for (long long i = 0; i < count; ++i) out.push_back(std::strtod(fmt_num(lo + i * step).c_str(), nullptr));
  }
  if (out.empty()) throw DomainError("empty range");
  return out;
}

std::vector<int> parse_int_range(const std::string& s) {
  std::vector<int> out;
  for (double v : parse_real_range(s)) {
    if (v != std::floor(v)) throw DomainError("integer range expected: '" + s + "'");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

InputPolicy parse_input(const std::string& s) {
  if (s == "worst") return InputPolicy::worst();
  if (s.rfind("uniform:", 0) == 0) return InputPolicy::uniform(to_int(s.substr(8)));
  if (s.rfind("digits:", 0) == 0) {
    // Most significant digit first, as written.
    DigitString b;
    for (char c : s.substr(7)) {
      if (c < '0' || c > '9') throw DomainError("digits must be decimal characters");
      b.push_back(c - '0');
    }
    std::reverse(b.begin(), b.end());
    return InputPolicy::explicit_digits(b);
  }
  throw DomainError("input must be worst, uniform:<k> or digits:<string>");
}

int default_jobs() {
  if (const char* e = std::getenv("QUDITSUM_JOBS")) {
    try {
      return std::max(1, to_int(e));
    } catch (const DomainError&) {
    }
  }
  return 1;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw UnwritableError("cannot write '" + path + "'");
  f << text;
  f.flush();
  if (!f) throw UnwritableError("cannot write '" + path + "'");
}

struct AdderOpts {
  int d = 2;
  int n = 1;
  int q = 0;
  std::string noise = "none";
  double p = 0.0;
  std::string backend = "product";
  std::string joint_mode = "coherent";
  bool non_modular = false;
  bool on_control = false;
  bool no_qft_noise = false;
  bool no_sum_noise = false;
  std::uint64_t seed = 0;
};

void add_adder_options(CLI::App* s, AdderOpts& o) {
  s->add_option("--dim,-d", o.d, "local dimension")->capture_default_str();
  s->add_option("--qudits,-n", o.n, "register length")->capture_default_str();
  s->add_option("--band,-q", o.q, "banding order (0: unbanded)")->capture_default_str();
  s->add_option("--noise", o.noise, "none | pdc | adc | cdpc")->capture_default_str();
  s->add_option("--p", o.p, "noise strength")->capture_default_str();
  s->add_option("--backend", o.backend, "product | branch | joint | closed-form")->capture_default_str();
  s->add_option("--joint-mode", o.joint_mode, "coherent | dephase")->capture_default_str();
  s->add_flag("--non-modular", o.non_modular, "augend register with n+1 qudits");
  s->add_flag("--on-control", o.on_control, "also apply noise to control qudits");
  s->add_flag("--no-qft-noise", o.no_qft_noise, "no noise after transform rotations");
  s->add_flag("--no-sum-noise", o.no_sum_noise, "no noise after sum rotations");
  s->add_option("--seed", o.seed, "recorded only; all runs are deterministic")->capture_default_str();
}

// d^n, or 0 when it does not fit in 64 bits.
std::uint64_t register_size(int d, int n) {
  if (d < 2 || n < 1) throw DomainError("need d >= 2 and n >= 1");
  std::uint64_t v = 1;
  for (int i = 0; i < n; ++i) {
    if (v > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(d)) return 0;
    v *= static_cast<std::uint64_t>(d);
  }
  return v;
}

// Modular runs take the inputs modulo d^n; sets `reduced` when that changed them.
AdderConfig make_config(const AdderOpts& o, std::uint64_t a, std::uint64_t b, bool* reduced = nullptr) {
  const std::uint64_t size = register_size(o.d, o.n);
  if (!o.non_modular && size != 0 && (a >= size || b >= size)) {
    a %= size;
    b %= size;
    if (reduced) *reduced = true;
  }
  AdderConfig c = AdderConfig::from_integers(a, b, o.d, o.n);
  c.q = o.q;
  c.noise.kind = parse_channel(o.noise);
  c.noise.p = c.noise.kind == ChannelKind::None ? 0.0 : o.p;
  c.noise.placement.on_control = o.on_control;
  c.noise.placement.after_qft_rotations = !o.no_qft_noise;
  c.noise.placement.after_sum_rotations = !o.no_sum_noise;
  c.backend = parse_backend(o.backend);
  if (o.joint_mode == "coherent")
    c.joint_mode = JointMode::Coherent;
  else if (o.joint_mode == "dephase")
    c.joint_mode = JointMode::DephaseUsedControls;
  else
    throw DomainError("joint mode must be coherent or dephase");
  c.modular = !o.non_modular;
  c.seed = o.seed;
  return c;
}

// Reads key=value lines into --key=value tokens.
std::vector<std::string> read_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DomainError("cannot read config '" + path + "'");
  std::vector<std::string> out;
  std::string line;
  while (std::getline(f, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    line = line.substr(b, e - b + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw DomainError("config line without '=': " + line);
    auto key = line.substr(0, eq);
    auto val = line.substr(eq + 1);
    key.erase(key.find_last_not_of(" \t") + 1);
    val.erase(0, val.find_first_not_of(" \t"));
    out.push_back("--" + key + "=" + val);
  }
  return out;
}

// Splices --config contents in front of the explicit flags so that the
// latter win under the take-last policy.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::vector<std::string> cfg;
  for (std::size_t i = 0; i < args.size();) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw DomainError("--config needs a path");
      const auto extra = read_config(args[i + 1]);
      cfg.insert(cfg.end(), extra.begin(), extra.end());
      args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
    } else if (args[i].rfind("--config=", 0) == 0) {
      const auto extra = read_config(args[i].substr(9));
      cfg.insert(cfg.end(), extra.begin(), extra.end());
      args.erase(args.begin() + static_cast<long>(i));
    } else {
      ++i;
    }
  }
  if (cfg.empty()) return args;
  const std::size_t at = !args.empty() && args[0].rfind('-', 0) != 0 ? 1 : 0;
  args.insert(args.begin() + static_cast<long>(at), cfg.begin(), cfg.end());
  return args;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Qudit QFT adder simulator and banding analysis", "quditsum"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "expand help for every command");

  std::string out_path;
  int jobs = default_jobs();

  // add
  AdderOpts add_o;
  std::uint64_t add_a = 0, add_b = 0;
  bool add_csv = false;
  auto* add = app.add_subcommand("add", "run one addition and print its run record");
  add->add_option("a", add_a, "augend")->required();
  add->add_option("b", add_b, "addend")->required();
  add_adder_options(add, add_o);
  add->add_flag("--csv", add_csv, "emit checkpoint CSV instead of JSON");
  add->add_option("--out,-o", out_path, "output file");

  // trace
  AdderOpts tr_o;
  std::uint64_t tr_a = 0, tr_b = 0;
  auto* trace = app.add_subcommand("trace", "per-gate fidelity and coherence CSV");
  trace->add_option("--a", tr_a, "augend")->capture_default_str();
  trace->add_option("--b", tr_b, "addend")->capture_default_str();
  add_adder_options(trace, tr_o);
  trace->add_option("--out,-o", out_path, "output file");

  // band-curve
  int bc_d = 2, bc_n = 2;
  std::string bc_input = "worst", bc_noise = "none";
  double bc_p = 0.0;
  auto* band = app.add_subcommand("band-curve", "fidelity against banding order");
  band->add_option("--dim,-d", bc_d, "local dimension")->capture_default_str();
  band->add_option("--qudits,-n", bc_n, "register length")->capture_default_str();
  band->add_option("--input", bc_input, "worst | uniform:<k> | digits:<msd..lsd>")->capture_default_str();
  band->add_option("--noise", bc_noise, "none | pdc | adc | cdpc")->capture_default_str();
  band->add_option("--p", bc_p, "noise strength")->capture_default_str();
  band->add_option("--out,-o", out_path, "output file");

  // bound
  int bd_d = 2, bd_n = 2;
  double bd_eps = 0.01;
  bool bd_json = false;
  auto* bound = app.add_subcommand("bound", "smallest banding order meeting an infidelity budget");
  bound->add_option("--dim,-d", bd_d, "local dimension")->capture_default_str();
  bound->add_option("--qudits,-n", bd_n, "register length")->capture_default_str();
  bound->add_option("--eps", bd_eps, "allowed infidelity")->capture_default_str();
  bound->add_flag("--json", bd_json, "print raw bound and clamped order as JSON");

  // qbest
  int qb_d = 2, qb_n = 2;
  double qb_p = 0.0;
  std::string qb_noise = "pdc", qb_input = "worst";
  auto* qbest = app.add_subcommand("qbest", "optimal banding order for one point");
  qbest->add_option("--dim,-d", qb_d, "local dimension")->capture_default_str();
  qbest->add_option("--qudits,-n", qb_n, "register length")->capture_default_str();
  qbest->add_option("--p", qb_p, "noise strength")->capture_default_str();
  qbest->add_option("--noise", qb_noise, "none | pdc | adc | cdpc")->capture_default_str();
  qbest->add_option("--input", qb_input, "worst | uniform:<k> | digits:<msd..lsd>")->capture_default_str();
  qbest->add_option("--out,-o", out_path, "output file");

  // qbest-map
  std::string qm_d = "2", qm_n = "5:50", qm_p = "0.0:0.2:0.02", qm_noise = "pdc", qm_input = "worst",
              qm_json;
  auto* qmap = app.add_subcommand("qbest-map", "optimal banding order over a grid");
  qmap->add_option("--dim,-d", qm_d, "dimensions (list or range)")->capture_default_str();
  qmap->add_option("--n", qm_n, "register lengths (lo:hi[:step] or list)")->capture_default_str();
  qmap->add_option("--p", qm_p, "noise strengths (lo:hi[:step] or list)")->capture_default_str();
  qmap->add_option("--noise", qm_noise, "pdc | adc | cdpc | none")->capture_default_str();
  qmap->add_option("--input", qm_input, "worst | uniform:<k>")->capture_default_str();
  qmap->add_option("--jobs,-j", jobs, "worker threads")->capture_default_str();
  qmap->add_option("--out,-o", out_path, "CSV output file");
  qmap->add_option("--json-out", qm_json, "JSON mirror with grid metadata and saturation");

  // dim-compare
  unsigned long long dc_v = 500;
  double dc_p = 0.1;
  int dc_dmin = 2, dc_dmax = 8;
  auto* dimc = app.add_subcommand("dim-compare", "fixed value across local dimensions");
  dimc->add_option("--value,-v", dc_v, "value to hold")->capture_default_str();
  dimc->add_option("--p", dc_p, "phase damping strength")->capture_default_str();
  dimc->add_option("--dmin", dc_dmin, "smallest dimension")->capture_default_str();
  dimc->add_option("--dmax", dc_dmax, "largest dimension")->capture_default_str();
  dimc->add_option("--out,-o", out_path, "output file");

  // spin-evolve
  std::uint64_t sp_a = 7, sp_b = 7;
  int sp_n = 4;
  std::string sp_band = "4", sp_tau = "0:48:0.125", sp_meta;
  auto* spin = app.add_subcommand("spin-evolve", "Hamiltonian realization swept over evolution time");
  spin->add_option("--a", sp_a, "augend")->capture_default_str();
  spin->add_option("--b", sp_b, "addend")->capture_default_str();
  spin->add_option("--qudits,-n", sp_n, "register length (qubits)")->capture_default_str();
  spin->add_option("--band,-q", sp_band, "banding orders (list or range)")->capture_default_str();
  spin->add_option("--tau", sp_tau, "evolution times lo:hi[:step]")->capture_default_str();
  spin->add_option("--jobs,-j", jobs, "worker threads")->capture_default_str();
  spin->add_option("--out,-o", out_path, "CSV output file");
  spin->add_option("--meta", sp_meta, "JSON file with periods and phase scaling factors");

  // verify
  bool vf_quick = false;
  double vf_corrupt = 0.0;
  auto* verify = app.add_subcommand("verify", "run the property suite");
  verify->add_flag("--quick", vf_quick, "small grids only");
  verify->add_option("--corrupt-phase", vf_corrupt)->group("");

  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  try {
    args = expand_config(std::move(args));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadArgs;
  }
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitBadArgs;
  }

  try {
    std::ostringstream os;
    if (add->parsed()) {
      bool reduced = false;
      RunRecord r = run_adder(make_config(add_o, add_a, add_b, &reduced));
      if (reduced) r.metadata.emplace_back("inputs", "reduced modulo d^n");
      if (add_csv) {
        write_run_csv_header(os);
        write_run_csv(os, r, "run0");
      } else {
        os << to_json(r).dump(2) << '\n';
      }
    } else if (trace->parsed()) {
      const RunRecord r = run_adder(make_config(tr_o, tr_a, tr_b));
      write_run_csv_header(os);
      write_run_csv(os, r, "trace");
    } else if (band->parsed()) {
      const ChannelKind ch = parse_channel(bc_noise);
      const QBestCell c = qbest_search(bc_d, bc_n, ch == ChannelKind::None ? 0.0 : bc_p, ch, parse_input(bc_input));
      os << "d,n,p,channel,q,fidelity\n";
      for (int q = 1; q <= bc_n; ++q)
        os << bc_d << ',' << bc_n << ',' << fmt_num(c.p) << ',' << to_string(ch) << ',' << q << ','
           << fmt_num(c.curve[q - 1]) << '\n';
    } else if (bound->parsed()) {
      const BandingBound b = min_banding_order(bd_d, bd_n, bd_eps);
      if (bd_json)
        os << nlohmann::json{{"raw", json_num(b.raw)}, {"q_min", b.q_min}, {"q_effective", b.q_effective}}.dump()
           << '\n';
      else
        os << b.q_min << '\n';
    } else if (qbest->parsed()) {
      const ChannelKind ch = parse_channel(qb_noise);
      write_qbest_csv(os, {qbest_search(qb_d, qb_n, ch == ChannelKind::None ? 0.0 : qb_p, ch, parse_input(qb_input))});
    } else if (qmap->parsed()) {
      SweepGrid g;
      g.d = parse_int_range(qm_d);
      g.n = parse_int_range(qm_n);
      g.p = parse_real_range(qm_p);
      g.channel = parse_channel(qm_noise);
      g.input = parse_input(qm_input);
      const QBestMap m = qbest_map(g, jobs);
      write_qbest_csv(os, m.cells);
      if (!qm_json.empty()) emit(to_json(m, g).dump(2) + "\n", qm_json, out);
    } else if (dimc->parsed()) {
      if (dc_dmin < 2 || dc_dmax < dc_dmin) throw DomainError("need 2 <= dmin <= dmax");
      os << "d,n,fidelity,c_l1_norm,n_inclusive,fidelity_inclusive,c_l1_norm_inclusive\n";
      for (int d = dc_dmin; d <= dc_dmax; ++d) {
        const int n = digits_for_value(dc_v, d);
        const double f = dimension_fixed_value_fidelity(dc_v, d, dc_p);
        const double fi = dimension_fixed_value_fidelity(dc_v, d, dc_p, true);
        os << d << ',' << n << ',' << fmt_num(f) << ',' << fmt_num(coherence_from_fidelity(f, std::pow(d, n)))
           << ',' << n + 1 << ',' << fmt_num(fi) << ','
           << fmt_num(coherence_from_fidelity(fi, std::pow(d, n + 1))) << '\n';
      }
    } else if (spin->parsed()) {
      const std::vector<double> taus = parse_real_range(sp_tau);
      const std::vector<int> bands = parse_int_range(sp_band);
      nlohmann::json meta;
      meta["periods"] = nlohmann::json::array();
      write_spin_csv_header(os);
      for (int q : bands) {
        const auto pts = spin_trace(sp_a, sp_b, sp_n, q, taus, jobs);
        write_spin_csv(os, pts, q);
        std::vector<double> f;
        for (const auto& p : pts) f.push_back(p.f_out);
        const double step = taus.size() > 1 ? taus[1] - taus[0] : 0.0;
        const auto period = detect_period(f, step, 1e-9);
        meta["periods"].push_back({{"q_band", q}, {"period", period ? json_num(*period) : nullptr}});
      }
      meta["scaling"] = nlohmann::json::array();
      for (int q = 1; q <= 4; ++q)
        for (int tau = 1; tau <= (1 << q) + 1; tau += 2)
          meta["scaling"].push_back({{"q", q},
                                     {"tau", tau},
                                     {"m", effective_scaling(tau, q)},
                                     {"m_digit_formula", combinatorial_scaling(tau, q)}});
      if (!sp_meta.empty()) emit(meta.dump(2) + "\n", sp_meta, out);
    } else if (verify->parsed()) {
      const auto results = run_verify({vf_quick, vf_corrupt});
      bool ok = true;
      for (const auto& r : results) {
        os << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
        ok = ok && r.passed;
      }
      out << os.str();
      return ok ? kExitOk : kExitVerifyFailed;
    }
    emit(os.str(), out_path, out);
  } catch (const UnwritableError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUnwritable;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadArgs;
  }
  return kExitOk;
}

}  // namespace quditsum
