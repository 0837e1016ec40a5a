#include "pfm/pipeline.hpp"

#include <algorithm>

#include "json.hpp"
#include "pfm/error.hpp"

namespace pfm {

namespace {

template <class Fn>
auto staged(Stage stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    throw PipelineError(stage, e.what());
  }
}

std::vector<double> column(const Eigen::MatrixXd& m, int one_based) {
  const auto c = m.col(one_based - 1);
  return {c.begin(), c.end()};
}

std::string index_json(const GridIndex& index) {
  nlohmann::ordered_json j;
  j["resolution"] = index.resolution();
  j["points"] = index.size();
  std::size_t occupied = 0, largest = 0;
  const auto g = static_cast<std::uint32_t>(index.resolution());
  for (std::uint32_t i = 0; i < g; ++i) {
    for (std::uint32_t k = 0; k < g; ++k) {
      const auto s = index.bucket_size(i, k);
      occupied += s > 0 ? 1 : 0;
      largest = std::max(largest, s);
    }
  }
  j["occupied_cells"] = occupied;
  j["largest_bucket"] = largest;
  j["mean_occupancy"] = static_cast<double>(index.size()) / (static_cast<double>(g) * g);
  return j.dump(2) + '\n';
}

}  // namespace

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::config: return "config";
    case Stage::load: return "load";
    case Stage::ca: return "ca";
    case Stage::grid: return "grid";
    case Stage::chain: return "chain";
    case Stage::index: return "index";
    case Stage::query: return "query";
    case Stage::bench: return "bench";
    case Stage::write: return "write";
  }
  return "unknown";
}

int exit_code(Stage stage) { return 2 + static_cast<int>(stage); }

void validate_config(const PipelineConfig& config) {
  const auto [a, b] = config.pair;
  if (a < 1 || b < 1 || a == b) {
    throw PipelineError(Stage::config, "factor pair must be two distinct positive axis indices");
  }
  if (config.axes && *config.axes < 1) {
    throw PipelineError(Stage::config, "retained axes must be positive");
  }
  if (config.resolution && *config.resolution < 1) {
    throw PipelineError(Stage::config, "index resolution must be at least 1");
  }
  if (!(config.occupancy > 0.0)) throw PipelineError(Stage::config, "occupancy must be positive");
}

PipelineResult run_stages(const PipelineConfig& config, RunDepth depth) {
  validate_config(config);
  PipelineResult out;
  out.input = staged(Stage::load,
                     [&] { return load_matrix(config.input, config.sup_rows, config.sup_cols); });

  const int axes = config.axes.value_or(default_axes(out.input.matrix));
  if (axes < 1 || axes > max_axes(out.input.matrix)) {
    throw PipelineError(Stage::config, "retained axes " + std::to_string(axes) + " outside 1.." +
                                           std::to_string(max_axes(out.input.matrix)));
  }
  if (std::max(config.pair.first, config.pair.second) > axes) {
    throw PipelineError(Stage::config, "factor pair exceeds the " + std::to_string(axes) +
                                           " retained axes");
  }
  out.map = staged(Stage::ca, [&] {
    FactorMap map = build_correspondence_map(out.input.matrix, axes);
    for (const auto& profile : out.input.supplementary) {
      map.supplementary.push_back({profile.id, profile.kind, project_supplementary(map, profile)});
    }
    return map;
  });
  out.cloud = staged(Stage::ca, [&] {
    return rescale_unit(column(out.map.row_coords, config.pair.first),
                        column(out.map.row_coords, config.pair.second), out.map.row_ids,
                        config.pair);
  });
  if (depth == RunDepth::ca) return out;

  staged(Stage::grid, [&] {
    out.hist = build_histogram(out.cloud, kFinestBase);
    out.overlap = overlap_report(out.cloud, *out.hist);
    for (const auto& sp : out.map.supplementary) {
      const double u = std::clamp(out.cloud.rescale_x.apply(sp.coords[config.pair.first - 1]), 0.0, 1.0);
      const double v = std::clamp(out.cloud.rescale_y.apply(sp.coords[config.pair.second - 1]), 0.0, 1.0);
      out.markers.push_back({sp.id, assign_cell(u, v, out.hist->boundaries_x, out.hist->boundaries_y)});
    }
    return 0;
  });
  if (depth == RunDepth::grid) return out;

  out.chain = staged(Stage::chain, [&] { return build_chain(*out.hist, out.cloud, config.merge_rule); });
  if (depth == RunDepth::chain) return out;

  out.index = staged(Stage::index, [&] {
    const int g = config.resolution.value_or(resolution_for(out.cloud.size(), config.occupancy));
    return GridIndex::build(out.cloud, g);
  });
  return out;
}

std::vector<std::string> artifact_names(RunDepth depth) {
  std::vector<std::string> names{"coords.csv", "col_coords.csv", "sup_coords.csv",
                                 "factor_map.json"};
  if (depth == RunDepth::ca) return names;
  for (const char* n : {"hist.json", "overlap.json", "grid.txt", "grid.svg"}) names.push_back(n);
  if (depth == RunDepth::grid) return names;
  names.push_back("chain.json");
  names.push_back("partitions.csv");
  if (depth == RunDepth::chain) return names;
  names.push_back("index.json");
  return names;
}

void write_artifacts(const PipelineConfig& config, const PipelineResult& r, RunDepth depth) {
  staged(Stage::write, [&] {
    std::filesystem::create_directories(config.out_dir);
    const auto& dir = config.out_dir;
    write_file(dir / "coords.csv", coords_csv(r.map.row_ids, r.map.row_coords));
    write_file(dir / "col_coords.csv", coords_csv(r.map.col_ids, r.map.col_coords));
    write_file(dir / "sup_coords.csv", supplementary_csv(r.map.supplementary, r.map.axes()));
    write_file(dir / "factor_map.json", factor_map_json(r.map));
    if (depth == RunDepth::ca) return 0;
    write_file(dir / "hist.json", histogram_json(*r.hist, r.cloud));
    write_file(dir / "overlap.json", overlap_json(*r.overlap, r.cloud));
    write_file(dir / "grid.txt", render_text(*r.hist, r.markers));
    write_file(dir / "grid.svg", render_svg(*r.hist, r.markers));
    if (depth == RunDepth::grid) return 0;
    write_file(dir / "chain.json", chain_json(*r.chain));
    write_file(dir / "partitions.csv", partitions_csv(*r.chain));
    if (depth == RunDepth::chain) return 0;
    write_file(dir / "index.json", index_json(*r.index));
    return 0;
  });
}

PipelineResult run_pipeline(const PipelineConfig& config) {
  auto result = run_stages(config, RunDepth::index);
  write_artifacts(config, result, RunDepth::index);
  return result;
}

UnitCloud cloud_from_coords(const CoordTable& table, std::pair<int, int> pair) {
  const auto k = static_cast<int>(table.coords.cols());
  if (pair.first < 1 || pair.second < 1 || pair.first > k || pair.second > k) {
    throw Error(Errc::out_of_range, "factor pair exceeds the coordinate columns");
  }
  return rescale_unit(column(table.coords, pair.first), column(table.coords, pair.second),
                      table.ids, pair);
}

}  // namespace pfm
