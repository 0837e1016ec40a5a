#pragma once

// End-to-end orchestration: load -> CA -> supplementary projection ->
// unit rescale -> base-10 histogram -> coarsening chain -> grid index, with
// artifact export. Every failure is re-thrown tagged with its stage.

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pfm/factor_map.hpp"
#include "pfm/grid_search.hpp"
#include "pfm/io.hpp"
#include "pfm/madic_chain.hpp"
#include "pfm/pixel_grid.hpp"

namespace pfm {

enum class Stage { config, load, ca, grid, chain, index, query, bench, write };

std::string_view to_string(Stage stage);

/// Process exit status for a failure in stage; always non-zero.
int exit_code(Stage stage);

class PipelineError : public std::runtime_error {
 public:
  PipelineError(Stage stage, const std::string& message)
      : std::runtime_error("error [" + std::string(to_string(stage)) + "]: " + message),
        stage_(stage) {}

  Stage stage() const noexcept { return stage_; }

 private:
  Stage stage_;
};

struct PipelineConfig {
  std::filesystem::path input;
  std::vector<std::string> sup_rows;
  std::vector<std::string> sup_cols;
  std::optional<int> axes;        // default: default_axes()
  std::pair<int, int> pair{1, 2};  // 1-based factor indices
  MergeRule merge_rule = MergeRule::least_sum;
  std::optional<int> resolution;  // default: resolution_for(n, occupancy)
  double occupancy = 4.0;
  std::filesystem::path out_dir = ".";
  std::uint64_t seed = 1;
};

/// Last stage a run should reach; later products stay empty.
enum class RunDepth { ca, grid, chain, index };

struct PipelineResult {
  LoadedMatrix input;
  FactorMap map;
  UnitCloud cloud;
  std::vector<Marker> markers;
  std::optional<GridHistogram> hist;
  std::optional<OverlapReport> overlap;
  std::optional<CoarseningChain> chain;
  std::optional<GridIndex> index;
};

/// Validates the config fields that do not need the data.
void validate_config(const PipelineConfig& config);

PipelineResult run_stages(const PipelineConfig& config, RunDepth depth = RunDepth::index);

/// Artifact names written for a given depth, in write order.
std::vector<std::string> artifact_names(RunDepth depth);

/// Writes the artifacts for depth into config.out_dir.
void write_artifacts(const PipelineConfig& config, const PipelineResult& result, RunDepth depth);

/// run_stages + write_artifacts at full depth.
PipelineResult run_pipeline(const PipelineConfig& config);

/// Point cloud built from a coordinates CSV as written by the pipeline.
UnitCloud cloud_from_coords(const CoordTable& table, std::pair<int, int> pair);

}  // namespace pfm
