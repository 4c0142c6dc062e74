#include "qicd/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <thread>

#include "qicd/conversion.hpp"
#include "qicd/error.hpp"
#include "qicd/gaussian.hpp"
#include "qicd/receivers.hpp"
#include "qicd/version.hpp"

namespace qicd {

namespace {

double to_double(std::string_view s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ValidationError("grid: not a number: '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    const auto pos = s.find(sep);
    out.push_back(s.substr(0, pos));
    if (pos == std::string_view::npos) break;
    s = s.substr(pos + 1);
  }
  return out;
}

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

const std::vector<std::pair<std::string, SweepOutput>>& registry() {
  static const std::vector<std::pair<std::string, SweepOutput>> r = {
      {"kappa_eff", [](const Scenario& s) { return compose_channel(s).kappa_eff; }},
      {"N_B_eff", [](const Scenario& s) { return compose_channel(s).n_b_eff; }},
      {"N_A_prime", [](const Scenario& s) { return effective_moments(s).n_a; }},
      {"V12_prime", [](const Scenario& s) { return effective_moments(s).v12; }},
      {"N_I_prime", [](const Scenario& s) { return effective_moments(s).n_i; }},
      {"xi", [](const Scenario& s) { return xi_of(s).xi; }},
      {"E_prime", [](const Scenario& s) { return xi_of(s).e_prime; }},
      {"two_M_xi", [](const Scenario& s) { return 2.0 * static_cast<double>(s.params().copies) * xi_of(s).xi; }},
      {"r_lb", [](const Scenario& s) { return error_exponents(s).r_lb; }},
      {"r_ub", [](const Scenario& s) { return error_exponents(s).r_ub; }},
      {"r_cs", [](const Scenario& s) { return error_exponents(s).r_cs; }},
      {"r_cs_ni", [](const Scenario& s) { return error_exponents(s).r_cs_nonideal.value_or(kNan); }},
      {"r_qcb", [](const Scenario& s) { return qcb(s).exponent; }},
      {"r_pcr", [](const Scenario& s) { return pcr_rate(pcr_stats(s)); }},
      {"ratio_lb", [](const Scenario& s) {
         const auto r = error_exponents(s);
         return r.r_lb / r.r_cs;
       }},
      {"ratio_qcb", [](const Scenario& s) { return qcb(s).exponent / error_exponents(s).r_cs; }},
      {"p_kennedy", [](const Scenario& s) { return kennedy_error(xi_of(s)).p_error; }},
      {"p_pnrd_opt", [](const Scenario& s) { return pnrd_optimal(xi_of(s)).p_error; }},
      {"n_d_opt", [](const Scenario& s) { return static_cast<double>(*pnrd_optimal(xi_of(s)).threshold); }},
      {"p_homo", [](const Scenario& s) { return homodyne_error(s, false).p_error; }},
      {"p_homo_ni", [](const Scenario& s) { return homodyne_error(s, true).p_error; }},
      {"p_pcr", [](const Scenario& s) { return pcr_error(s).p_error; }},
      {"p_qcb", [](const Scenario& s) { return qcb(s).probability; }},
  };
  return r;
}

}  // namespace

std::vector<double> parse_grid(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) throw ValidationError("grid must start with log:, lin: or list:");
  const auto kind = spec.substr(0, colon);
  const auto rest = spec.substr(colon + 1);
  std::vector<double> out;
  if (kind == "list") {
    for (auto item : split(rest, ',')) out.push_back(to_double(item));
  } else if (kind == "log" || kind == "lin") {
    const auto parts = split(rest, ':');
    if (parts.size() != 3) throw ValidationError("grid " + std::string(kind) + ": expected a:b:n");
    const double a = to_double(parts[0]);
    const double b = to_double(parts[1]);
    const double nd = to_double(parts[2]);
    if (!(nd >= 1.0) || std::floor(nd) != nd) throw ValidationError("grid: point count must be a positive integer");
    const int n = static_cast<int>(nd);
    if (kind == "log" && !(a > 0.0 && b > 0.0)) throw ValidationError("grid log: endpoints must be > 0");
    for (int i = 0; i < n; ++i) {
      const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
      out.push_back(kind == "lin" ? a + (b - a) * t
                                  : std::pow(10.0, std::log10(a) + (std::log10(b) - std::log10(a)) * t));
    }
    if (n > 1) out.back() = b;
  } else {
    throw ValidationError("unknown grid kind '" + std::string(kind) + "'");
  }
  if (out.empty()) throw ValidationError("grid is empty");
  return out;
}

std::vector<std::string> sweep_output_names() {
  std::vector<std::string> out;
  for (const auto& [name, fn] : registry()) out.push_back(name);
  return out;
}

const SweepOutput& sweep_output(std::string_view name) {
  for (const auto& [n, fn] : registry()) {
    if (n == name) return fn;
  }
  throw ValidationError("unknown sweep output '" + std::string(name) + "'");
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(std::min<std::size_t>(count, 1024))));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      try {
        for (std::size_t i = next++; i < count && !failed; i = next++) fn(i);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

CsvTable run_sweep(const SweepSpec& spec, int threads) {
  if (spec.outputs.empty()) throw ValidationError("sweep: no outputs requested");
  if (spec.axes.empty()) throw ValidationError("sweep: no swept parameter");
  std::vector<const SweepOutput*> fns;
  for (const auto& name : spec.outputs) fns.push_back(&sweep_output(name));
  std::size_t total = 1;
  for (const auto& ax : spec.axes) {
    get_parameter(spec.base, ax.parameter);
    if (ax.values.empty()) throw ValidationError("sweep: empty grid for " + ax.parameter);
    total *= ax.values.size();
  }
  validate(spec.base);

  CsvTable table;
  table.add_meta("tool", std::string("qicd ") + kVersion);
  std::string base;
  for (auto key : parameter_keys()) {
    if (!base.empty()) base += ", ";
    base += std::string(key) + "=" +
            (key == "M" ? std::to_string(spec.base.copies) : format_number(get_parameter(spec.base, key)));
  }
  table.add_meta("base", "{" + base + "}");
  for (const auto& ax : spec.axes) table.columns.push_back(ax.parameter);
  for (const auto& name : spec.outputs) table.columns.push_back(name);

  std::vector<std::vector<CsvCell>> rows(total);
  parallel_for(total, threads, [&](std::size_t idx) {
    ScenarioParams p = spec.base;
    std::vector<CsvCell> row;
    std::size_t rem = idx;
    std::vector<double> coords(spec.axes.size());
    for (std::size_t a = spec.axes.size(); a-- > 0;) {
      const auto& vals = spec.axes[a].values;
      coords[a] = vals[rem % vals.size()];
      rem /= vals.size();
    }
    bool ok = true;
    try {
      for (std::size_t a = 0; a < spec.axes.size(); ++a) set_parameter(p, spec.axes[a].parameter, coords[a]);
      validate(p);
    } catch (const ValidationError&) {
      ok = false;
    }
    for (double c : coords) row.emplace_back(c);
    for (const auto* fn : fns) {
      double v = kNan;
      if (ok) {
        try {
          v = (*fn)(Scenario(p));
        } catch (const Error&) {
          v = kNan;
        }
      }
      row.emplace_back(v);
    }
    rows[idx] = std::move(row);
  });
  for (auto& r : rows) table.add_row(std::move(r));
  return table;
}

}  // namespace qicd
