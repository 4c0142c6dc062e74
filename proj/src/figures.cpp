#include "qicd/figures.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "qicd/conversion.hpp"
#include "qicd/error.hpp"
#include "qicd/gaussian.hpp"
#include "qicd/receivers.hpp"
#include "qicd/roc.hpp"
#include "qicd/sweep.hpp"
#include "qicd/version.hpp"

namespace qicd {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
  return v;
}

std::string one_line(const ScenarioParams& p) {
  std::string out;
  for (auto key : parameter_keys()) {
    if (!out.empty()) out += ", ";
    out += std::string(key) + "=" + (key == "M" ? std::to_string(p.copies) : format_number(get_parameter(p, key)));
  }
  return "{" + out + "}";
}

CsvTable header(int id, const std::string& preset, const ScenarioParams& p, std::string sweep) {
  CsvTable t;
  t.add_meta("tool", std::string("qicd ") + kVersion);
  t.add_meta("figure", std::to_string(id));
  t.add_meta("preset", preset);
  t.add_meta("scenario", one_line(p));
  if (!sweep.empty()) t.add_meta("sweep", std::move(sweep));
  return t;
}

ScenarioParams with_overrides(ScenarioParams p, const std::vector<std::string>& overrides) {
  for (const auto& o : overrides) apply_override(p, o);
  validate(p);
  return p;
}

std::string tag(double v) { return format_number(v); }

// Evaluates `fn`, mapping library errors at a single point to nan.
double guarded(const std::function<double()>& fn) {
  try {
    return fn();
  } catch (const Error&) {
    return kNan;
  }
}

ScenarioParams exponent_base() {
  ScenarioParams p;
  p.n_b = 1250.0;
  p.kappa = 0.01;
  p.n_s = 1e-3;
  p.eta_i = 1.0;
  p.n_e2 = 0.0;
  return p;
}

std::vector<FigureFile> figure2(const std::vector<std::string>& ov) {
  std::vector<FigureFile> out;
  ScenarioParams base = exponent_base();
  base.gain = 100.0;
  base = with_overrides(base, ov);
  for (double n_s : {10.0, 1.0, 0.1, 1e-2, 1e-3, 1e-6}) {
    ScenarioParams p = base;
    p.n_s = n_s;
    auto t = header(2, "ideal detection, amplified return", p, "log10[N_V (1 - 1/G)] in [-3, 5]");
    t.columns = {"log10_nv_eff", "N_V", "ratio_lb"};
    for (double v : linspace(-3.0, 5.0, 81)) {
      p.n_v = std::pow(10.0, v) / (1.0 - 1.0 / p.gain);
      const auto r = error_exponents(Scenario(p));
      t.add_row({v, p.n_v, r.r_lb / r.r_cs});
    }
    out.push_back({"fig2_ns_" + tag(n_s) + ".csv", std::move(t)});
  }
  return out;
}

std::vector<FigureFile> figure3(const std::vector<std::string>& ov) {
  struct Panel {
    const char* name;
    double eta_s, n_e1, gain, n_v;
  };
  const double nb = 1250.0;
  const Panel panels[] = {{"a", 1.0, 0.0, 1.0, 0.0},
                          {"b", 0.1, 0.0, 100.0, 0.0},
                          {"c", 1.0, 0.0, 100.0, nb},
                          {"d", 0.1, nb, 100.0, nb}};
  std::vector<FigureFile> out;
  for (const auto& pan : panels) {
    ScenarioParams p = exponent_base();
    p.eta_s = pan.eta_s;
    p.n_e1 = pan.n_e1;
    p.gain = pan.gain;
    p.n_v = pan.n_v;
    p = with_overrides(p, ov);
    auto t = header(3, std::string("panel ") + pan.name, p, "log10 N_S in [-6, 1]");
    t.columns = {"log10_ns", "ratio_lb", "ratio_ub", "ratio_qcb", "ratio_cs_ni"};
    for (double v : linspace(-6.0, 1.0, 71)) {
      p.n_s = std::pow(10.0, v);
      const Scenario s(p);
      const auto r = error_exponents(s);
      const double q = qcb(s).exponent;
      t.add_row({v, r.r_lb / r.r_cs, r.r_ub / r.r_cs, q / r.r_cs, r.r_cs_nonideal.value_or(kNan) / r.r_cs});
    }
    out.push_back({std::string("fig3_") + pan.name + ".csv", std::move(t)});
  }
  return out;
}

std::vector<FigureFile> figure4(const std::vector<std::string>& ov) {
  std::vector<FigureFile> out;
  for (const auto& [name, noise] : {std::pair<const char*, double>{"cool", 0.1}, {"warm", 1250.0}}) {
    for (double eta_s : {1.0, 0.5, 0.1, 0.01}) {
      ScenarioParams p = exponent_base();
      p.n_v = p.n_e1 = noise;
      p.eta_s = eta_s;
      p = with_overrides(p, ov);
      auto t = header(4, std::string(name) + " case, eta_S=" + tag(eta_s), p, "log10 G in [0, 4]");
      t.columns = {"log10_G", "ratio_lb", "ratio_cs_ni"};
      for (double v : linspace(0.0, 4.0, 101)) {
        p.gain = std::pow(10.0, v);
        const auto r = error_exponents(Scenario(p));
        t.add_row({v, r.r_lb / r.r_cs, r.r_cs_nonideal.value_or(kNan) / r.r_cs});
      }
      out.push_back({std::string("fig4_") + name + "_eta_" + tag(eta_s) + ".csv", std::move(t)});
    }
  }
  return out;
}

std::vector<FigureFile> figure5(const std::vector<std::string>& ov, int threads) {
  ScenarioParams base = with_overrides(presets::cool_case().params(), ov);
  auto t = header(5, "cool case", base, "log10 N_S in [-6, 0] x log10 N_B in [0, 4]");
  t.columns = {"log10_ns", "log10_nb", "ratio_lb", "ratio_pcr"};
  const auto xs = linspace(-6.0, 0.0, 25);
  const auto ys = linspace(0.0, 4.0, 25);
  std::vector<std::vector<CsvCell>> rows(xs.size() * ys.size());
  parallel_for(rows.size(), threads, [&](std::size_t i) {
    ScenarioParams p = base;
    const double x = xs[i / ys.size()], y = ys[i % ys.size()];
    p.n_s = std::pow(10.0, x);
    p.n_b = std::pow(10.0, y);
    const Scenario s(p);
    const auto r = error_exponents(s);
    rows[i] = {x, y, r.r_lb / r.r_cs, guarded([&] { return pcr_rate(pcr_stats(s)) / r.r_cs; })};
  });
  for (auto& r : rows) t.add_row(std::move(r));
  return {{"fig5_cool.csv", std::move(t)}};
}

std::vector<FigureFile> figure6(const std::vector<std::string>& ov) {
  std::vector<FigureFile> out;
  for (const auto& [name, preset] :
       {std::pair<const char*, Scenario>{"cool", presets::cool_case()}, {"warm", presets::warm_case()}}) {
    const Scenario practical(with_overrides(preset.params(), ov));
    for (bool ideal : {false, true}) {
      const Scenario sc = ideal ? practical.ideal() : practical;
      auto t = header(6, std::string(name) + (ideal ? " case, ideal equipment" : " case"), sc.params(),
                      "M in [1e5, 1e11]");
      t.columns = {"M", "p_qcb", "p_kennedy", "p_pcr", "p_homo", "kennedy_floor"};
      for (double v : linspace(5.0, 11.0, 61)) {
        const auto m = static_cast<std::int64_t>(std::llround(std::pow(10.0, v)));
        const Scenario s = sc.with_copies(m);
        const auto e = xi_of(s);
        t.add_row({m, qcb(s).probability, kennedy_error(e).p_error, pcr_error(s).p_error,
                   homodyne_error(s, false).p_error, e.n_i_prime / (2.0 * (e.n_i_prime + 1.0))});
      }
      out.push_back({std::string("fig6_") + name + (ideal ? "_ideal" : "") + ".csv", std::move(t)});
    }
  }
  return out;
}

std::vector<FigureFile> figure7(const std::vector<std::string>& ov, int threads) {
  ScenarioParams base = with_overrides(presets::cool_case().params(), ov);
  auto t = header(7, "cool case, M set by P_homo = 0.05", base, "log10 N_S in [-6, 0] x log10 N_B in [0, 4]");
  t.columns = {"log10_ns", "log10_nb", "M", "log10_ratio_kennedy", "log10_ratio_pcr"};
  const auto xs = linspace(-6.0, 0.0, 25);
  const auto ys = linspace(0.0, 4.0, 25);
  std::vector<std::vector<CsvCell>> rows(xs.size() * ys.size());
  parallel_for(rows.size(), threads, [&](std::size_t i) {
    ScenarioParams p = base;
    const double x = xs[i / ys.size()], y = ys[i % ys.size()];
    p.n_s = std::pow(10.0, x);
    p.n_b = std::pow(10.0, y);
    const Scenario probe(p);
    const auto m = copies_for_homodyne_error(probe, 0.05);
    const Scenario s = probe.with_copies(m);
    const double homo = homodyne_error(s, false).p_error;
    rows[i] = {x, y, m, std::log10(kennedy_error(xi_of(s)).p_error / homo),
               guarded([&] { return std::log10(pcr_error(s).p_error / homo); })};
  });
  for (auto& r : rows) t.add_row(std::move(r));
  return {{"fig7_cool.csv", std::move(t)}};
}

std::vector<FigureFile> figure8(const std::vector<std::string>& ov) {
  const Scenario sc(with_overrides(presets::cool_case().params(), ov));
  auto t = header(8, "cool case", sc.params(), "M in [1e7, 1e11]");
  t.columns = {"M", "p_kennedy", "p_nd2", "p_nd3", "p_nd4", "p_nd5", "p_opt", "n_d_opt", "p_qcb"};
  for (double v : linspace(7.0, 11.0, 81)) {
    const auto m = static_cast<std::int64_t>(std::llround(std::pow(10.0, v)));
    const Scenario s = sc.with_copies(m);
    const auto e = xi_of(s);
    const auto opt = pnrd_optimal(e);
    t.add_row({m, kennedy_error(e).p_error, pnrd_error(e, 2).p_error, pnrd_error(e, 3).p_error,
               pnrd_error(e, 4).p_error, pnrd_error(e, 5).p_error, opt.p_error,
               static_cast<std::int64_t>(*opt.threshold), qcb(s).probability});
  }
  return {{"fig8_cool.csv", std::move(t)}};
}

std::vector<FigureFile> figure9(const std::vector<std::string>& ov) {
  std::vector<FigureFile> out;
  for (const auto& [name, preset] :
       {std::pair<const char*, Scenario>{"cool", presets::cool_case()}, {"warm", presets::warm_case()}}) {
    ScenarioParams p = preset.params();
    p.copies = kRocCopies;
    const Scenario s(with_overrides(p, ov));
    const auto e = xi_of(s);
    auto curve = cd_roc(e, default_n_max(e.n_i_prime));
    auto t = header(9, std::string(name) + " case, photon counting", s.params(), "n_D from n_max down to 0");
    t.columns = {"n_D", "P_F", "P_D"};
    for (const auto& pt : curve.points) t.add_row({static_cast<std::int64_t>(pt.threshold), pt.p_f, pt.p_d});
    out.push_back({std::string("fig9_") + name + "_cd.csv", std::move(t)});

    auto a = header(9, std::string(name) + " case, analytic curves", s.params(), "log10 P_F in [-6, 0)");
    a.columns = {"P_F", "cd_gaussian", "pcr", "pcr_van_trees", "classical_ni"};
    for (double v : linspace(-6.0, -1e-3, 121)) {
      const double pf = std::pow(10.0, v);
      a.add_row({pf, cd_roc_gaussian(e, pf), pcr_roc(s, pf), guarded([&] { return pcr_roc_van_trees(s, pf); }),
                 guarded([&] { return classical_roc(s, pf, true); })});
    }
    out.push_back({std::string("fig9_") + name + "_analytic.csv", std::move(a)});
  }
  return out;
}

}  // namespace

CsvTable table1() {
  CsvTable t;
  t.add_meta("tool", std::string("qicd ") + kVersion);
  t.add_meta("frequency_hz", format_number(kTable1FrequencyHz));
  t.columns = {"T_K", "N"};
  for (double temp : kTable1Temperatures) t.add_row({temp, thermal_occupation(kTable1FrequencyHz, temp)});
  return t;
}

std::vector<FigureFile> make_figure(int id, const std::vector<std::string>& overrides, int threads) {
  switch (id) {
    case 2: return figure2(overrides);
    case 3: return figure3(overrides);
    case 4: return figure4(overrides);
    case 5: return figure5(overrides, threads);
    case 6: return figure6(overrides);
    case 7: return figure7(overrides, threads);
    case 8: return figure8(overrides);
    case 9: return figure9(overrides);
    default: throw ValidationError("figure id must be in 2..9");
  }
}

}  // namespace qicd
