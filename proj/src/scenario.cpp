#include "qicd/scenario.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "qicd/csv.hpp"
#include "qicd/error.hpp"

namespace qicd {

namespace {

// CODATA 2018 (exact SI values).
constexpr double kPlanck = 6.62607015e-34;
constexpr double kBoltzmann = 1.380649e-23;

constexpr std::array<std::string_view, 13> kKeys{
    "N_S", "N_B", "kappa", "theta", "G", "N_V", "eta_S", "N_E1", "eta_I", "N_E2", "G_PCR", "N_VPCR", "M"};

void require(bool ok, std::string_view field, std::string_view what) {
  if (!ok) throw ValidationError(std::string(field) + " " + std::string(what));
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view text) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ValidationError("value for " + std::string(key) + " is not a number: '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

void validate(const ScenarioParams& p) {
  auto nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };
  auto efficiency = [](double v) { return std::isfinite(v) && v > 0.0 && v <= 1.0; };
  require(nonneg(p.n_s), "N_S", "must be finite and >= 0");
  require(nonneg(p.n_b), "N_B", "must be finite and >= 0");
  require(std::isfinite(p.kappa) && p.kappa >= 0.0 && p.kappa <= 1.0, "kappa", "must lie in [0, 1]");
  require(std::isfinite(p.theta), "theta", "must be finite");
  require(std::isfinite(p.gain) && p.gain >= 1.0, "G", "must be >= 1");
  require(nonneg(p.n_v), "N_V", "must be finite and >= 0");
  require(efficiency(p.eta_s), "eta_S", "must lie in (0, 1]");
  require(nonneg(p.n_e1), "N_E1", "must be finite and >= 0");
  require(efficiency(p.eta_i), "eta_I", "must lie in (0, 1]");
  require(nonneg(p.n_e2), "N_E2", "must be finite and >= 0");
  require(std::isfinite(p.gain_pcr) && p.gain_pcr >= 1.0, "G_PCR", "must be >= 1");
  require(nonneg(p.n_v_pcr), "N_VPCR", "must be finite and >= 0");
  require(p.copies >= 1, "M", "must be a positive integer");
}

Scenario::Scenario(const ScenarioParams& p) : p_(p) { validate(p_); }

Scenario Scenario::with(std::string_view key, double value) const {
  ScenarioParams q = p_;
  set_parameter(q, key, value);
  return Scenario(q);
}

Scenario Scenario::with_copies(std::int64_t m) const {
  ScenarioParams q = p_;
  q.copies = m;
  return Scenario(q);
}

Scenario Scenario::target_absent() const { return with("kappa", 0.0); }

Scenario Scenario::ideal() const {
  ScenarioParams q = p_;
  q.gain = 1.0;
  q.n_v = 0.0;
  q.eta_s = 1.0;
  q.n_e1 = 0.0;
  q.eta_i = 1.0;
  q.n_e2 = 0.0;
  return Scenario(q);
}

double thermal_occupation(double freq_hz, double temp_k) {
  if (!(freq_hz > 0.0) || !(temp_k > 0.0)) {
    throw ValidationError("thermal_occupation: frequency and temperature must be > 0");
  }
  const double x = kPlanck * freq_hz / (kBoltzmann * temp_k);
  return 1.0 / std::expm1(x);
}

EffectiveChannel compose_channel(const Scenario& s) {
  const auto& p = s.params();
  const double kappa_eff = p.eta_s * p.gain * p.kappa;
  if (kappa_eff > 1.0) {
    throw PhysicalityError("compose_channel: eta_S * G * kappa = " + format_number(kappa_eff) + " exceeds 1");
  }
  const double n_b_eff = p.eta_s * p.gain * (p.n_b + (1.0 - 1.0 / p.gain) * (p.n_v + 1.0)) +
                         (1.0 - p.eta_s) * p.n_e1;
  return {kappa_eff, n_b_eff};
}

EffectiveMoments effective_moments(const Scenario& s) {
  const auto& p = s.params();
  const double n_a = p.eta_s * p.gain * (p.kappa * p.n_s + p.n_b + (1.0 - 1.0 / p.gain) * (p.n_v + 1.0)) +
                     (1.0 - p.eta_s) * p.n_e1;
  const double v12 = 2.0 * std::sqrt(p.eta_s * p.eta_i * p.gain * p.kappa * p.n_s * (p.n_s + 1.0));
  const double n_i = p.eta_i * p.n_s + (1.0 - p.eta_i) * p.n_e2;
  return {n_a, v12, n_i};
}

std::span<const std::string_view> parameter_keys() { return kKeys; }

double get_parameter(const ScenarioParams& p, std::string_view key) {
  if (key == "N_S") return p.n_s;
  if (key == "N_B") return p.n_b;
  if (key == "kappa") return p.kappa;
  if (key == "theta") return p.theta;
  if (key == "G") return p.gain;
  if (key == "N_V") return p.n_v;
  if (key == "eta_S") return p.eta_s;
  if (key == "N_E1") return p.n_e1;
  if (key == "eta_I") return p.eta_i;
  if (key == "N_E2") return p.n_e2;
  if (key == "G_PCR") return p.gain_pcr;
  if (key == "N_VPCR") return p.n_v_pcr;
  if (key == "M") return static_cast<double>(p.copies);
  throw ValidationError("unknown scenario parameter '" + std::string(key) + "'");
}

void set_parameter(ScenarioParams& p, std::string_view key, double value) {
  if (key == "N_S") p.n_s = value;
  else if (key == "N_B") p.n_b = value;
  else if (key == "kappa") p.kappa = value;
  else if (key == "theta") p.theta = value;
  else if (key == "G") p.gain = value;
  else if (key == "N_V") p.n_v = value;
  else if (key == "eta_S") p.eta_s = value;
  else if (key == "N_E1") p.n_e1 = value;
  else if (key == "eta_I") p.eta_i = value;
  else if (key == "N_E2") p.n_e2 = value;
  else if (key == "G_PCR") p.gain_pcr = value;
  else if (key == "N_VPCR") p.n_v_pcr = value;
  else if (key == "M") {
    if (!(value >= 1.0 && value < 9.2e18) || std::floor(value) != value) {
      throw ValidationError("M must be a positive integer, got " + format_number(value));
    }
    p.copies = static_cast<std::int64_t>(value);
  } else {
    throw ValidationError("unknown scenario parameter '" + std::string(key) + "'");
  }
}

void apply_override(ScenarioParams& p, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ValidationError("override must look like key=value: '" + std::string(assignment) + "'");
  }
  const auto key = trim(assignment.substr(0, eq));
  set_parameter(p, key, parse_double(key, trim(assignment.substr(eq + 1))));
}

Scenario parse_scenario(std::string_view text, const ScenarioParams& base) {
  ScenarioParams p = base;
  std::set<std::string, std::less<>> seen;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError("scenario line " + std::to_string(line_no) + ": expected key = value");
    }
    const auto key = trim(line.substr(0, eq));
    if (!seen.insert(std::string(key)).second) {
      throw ValidationError("scenario line " + std::to_string(line_no) + ": duplicate key '" + std::string(key) + "'");
    }
    try {
      set_parameter(p, key, parse_double(key, trim(line.substr(eq + 1))));
    } catch (const ValidationError& e) {
      throw ValidationError("scenario line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return Scenario(p);
}

Scenario load_scenario_file(const std::string& path, const ScenarioParams& base) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open scenario file " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_scenario(ss.str(), base);
}

std::string format_scenario(const ScenarioParams& p) {
  std::string out;
  for (auto key : kKeys) {
    out += key;
    out += " = ";
    out += key == "M" ? std::to_string(p.copies) : format_number(get_parameter(p, key));
    out += '\n';
  }
  return out;
}

namespace presets {

namespace {
ScenarioParams practical_base() {
  ScenarioParams p;
  p.n_s = 1e-3;
  p.n_b = 1250.0;
  p.kappa = 0.01;
  p.gain = 100.0;
  p.eta_s = 0.1;
  p.eta_i = 0.9;
  p.n_e2 = 4e-11;
  p.gain_pcr = 2.0;
  return p;
}
}  // namespace

Scenario cool_case() {
  ScenarioParams p = practical_base();
  p.n_v = p.n_e1 = p.n_v_pcr = 0.1;
  return Scenario(p);
}

Scenario warm_case() {
  ScenarioParams p = practical_base();
  p.n_v = p.n_e1 = p.n_v_pcr = 1250.0;
  return Scenario(p);
}

}  // namespace presets

}  // namespace qicd
