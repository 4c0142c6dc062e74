#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qicd/csv.hpp"
#include "qicd/scenario.hpp"

namespace qicd {

/// `log:a:b:n` (n points log-spaced from a to b), `lin:a:b:n`, or `list:v1,v2,...`.
std::vector<double> parse_grid(std::string_view spec);

struct SweepAxis {
  std::string parameter;
  std::vector<double> values;
};

struct SweepSpec {
  ScenarioParams base;
  std::vector<SweepAxis> axes;  // Cartesian product, last axis fastest
  std::vector<std::string> outputs;
  std::string output_path;
};

using SweepOutput = std::function<double(const Scenario&)>;

/// Output names accepted by run_sweep, in registry order.
std::vector<std::string> sweep_output_names();
const SweepOutput& sweep_output(std::string_view name);

/// Evaluates every grid point on `threads` workers; rows come out in grid order.
/// A point whose parameters are invalid or unphysical yields nan in every output column.
CsvTable run_sweep(const SweepSpec& spec, int threads = 1);

/// Applies `fn` to indices 0..count-1 on up to `threads` workers.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace qicd
