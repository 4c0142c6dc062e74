#pragma once

#include <string>
#include <vector>

#include "qicd/csv.hpp"
#include "qicd/scenario.hpp"

namespace qicd {

struct FigureFile {
  std::string name;  // file name without directory
  CsvTable table;
};

/// Thermal occupations at 5 GHz for the eight reference temperatures.
CsvTable table1();

inline constexpr double kTable1FrequencyHz = 5e9;
inline constexpr double kTable1Temperatures[8] = {300.0, 100.0, 10.0, 4.0, 1.0, 0.1, 0.01, 0.004};

/// Data behind figure `id` (2..9), one CSV per curve or panel. `overrides` are
/// `key=value` strings applied on top of every preset the figure uses (swept
/// parameters are then overwritten by the sweep).
std::vector<FigureFile> make_figure(int id, const std::vector<std::string>& overrides = {}, int threads = 1);

/// Copy count used for the ROC comparison figure.
inline constexpr std::int64_t kRocCopies = 690'000'000;

}  // namespace qicd
