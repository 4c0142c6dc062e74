#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace qicd {

/// Every physical knob of one detection experiment, in photon-number units.
struct ScenarioParams {
  double n_s = 1e-3;
  double n_b = 1250.0;
  double kappa = 0.01;
  double theta = 0.0;
  double gain = 1.0;
  double n_v = 0.0;
  double eta_s = 1.0;
  double n_e1 = 0.0;
  double eta_i = 1.0;
  double n_e2 = 4e-11;
  double gain_pcr = 2.0;
  double n_v_pcr = 0.0;
  std::int64_t copies = 1;
};

/// Throws ValidationError naming the first out-of-range field.
void validate(const ScenarioParams& p);

/// Validated, immutable scenario. Construction is the only place ranges are checked.
class Scenario {
 public:
  Scenario() : Scenario(ScenarioParams{}) {}
  explicit Scenario(const ScenarioParams& p);

  const ScenarioParams& params() const { return p_; }

  /// Copy with one field replaced; `key` uses the scenario-file names.
  Scenario with(std::string_view key, double value) const;
  Scenario with_copies(std::int64_t m) const;
  /// Same scenario with kappa = 0 (hypothesis H0).
  Scenario target_absent() const;
  /// Same scenario with ideal return and idler detection: G = 1, eta_S = eta_I = 1, no added noise.
  Scenario ideal() const;

 private:
  ScenarioParams p_;
};

struct EffectiveChannel {
  double kappa_eff;
  double n_b_eff;
};

struct EffectiveMoments {
  double n_a;
  double v12;
  double n_i;
};

/// Bose-Einstein occupation of a mode at ordinary frequency `freq_hz` and temperature `temp_k`.
double thermal_occupation(double freq_hz, double temp_k);

/// Loss, amplifier and lossy heterodyne folded into a single thermal-loss channel.
/// Throws PhysicalityError when the folded transmissivity exceeds one.
EffectiveChannel compose_channel(const Scenario& s);

/// Return/idler second moments after channel, amplifier and both detection inefficiencies.
EffectiveMoments effective_moments(const Scenario& s);

/// Scenario-file keys, in canonical order.
std::span<const std::string_view> parameter_keys();

double get_parameter(const ScenarioParams& p, std::string_view key);
/// Sets a field without validating the whole parameter set. Unknown keys and a
/// non-integral M throw ValidationError.
void set_parameter(ScenarioParams& p, std::string_view key, double value);

/// Parses `key = value` lines (`#` starts a comment) on top of `base`.
/// Unknown or repeated keys are errors.
Scenario parse_scenario(std::string_view text, const ScenarioParams& base = {});
Scenario load_scenario_file(const std::string& path, const ScenarioParams& base = {});

/// Applies a `key=value` override string.
void apply_override(ScenarioParams& p, std::string_view assignment);

/// One `key = value` line per field, canonical order, shortest round-trip numbers.
std::string format_scenario(const ScenarioParams& p);

namespace presets {
// Return electronics at 100 mK: N_V = N_E1 = N_VPCR = 0.1.
Scenario cool_case();
// Return electronics at room temperature: N_V = N_E1 = N_VPCR = N_B.
Scenario warm_case();
}  // namespace presets

}  // namespace qicd
