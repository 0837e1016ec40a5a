// pfm: factor-plane pixellation, coarsening chain and grid nearest-neighbour CLI.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pfm/error.hpp"
#include "pfm/format.hpp"
#include "pfm/pipeline.hpp"

namespace {

using pfm::PipelineError;
using pfm::Stage;

std::vector<std::string> split(const std::string& text, char sep = ',') {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::pair<double, double> parse_point(const std::string& text) {
  const auto parts = split(text);
  if (parts.size() != 2) throw PipelineError(Stage::config, "--point expects u,v");
  const auto u = pfm::parse_double(parts[0]);
  const auto v = pfm::parse_double(parts[1]);
  if (!u || !v) throw PipelineError(Stage::config, "--point '" + text + "' is not numeric");
  return {*u, *v};
}

std::pair<int, int> parse_pair(const std::string& text) {
  const auto parts = split(text);
  try {
    if (parts.size() == 2) return {std::stoi(parts[0]), std::stoi(parts[1])};
  } catch (const std::exception&) {
  }
  throw PipelineError(Stage::config, "--pair expects two axis indices a,b");
}

struct Options {
  std::string input;
  std::string coords;
  std::string sup_rows;
  std::string sup_cols;
  std::optional<int> axes;
  std::string pair = "1,2";
  std::string merge_rule = "least-sum";
  std::optional<int> resolution;
  double occupancy = 4.0;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  // query
  std::vector<std::string> points;
  std::string exclude;
  // bench
  std::string n_values = "1000,10000,100000";
  std::size_t queries = 1000;
  std::string distribution = "uniform";
  bool no_timing = false;
};

void add_pipeline_options(CLI::App* cmd, Options& o, bool input_required = true) {
  auto* in = cmd->add_option("--input", o.input, "CSV matrix: header of column ids, rows of id + counts");
  if (input_required) in->required();
  cmd->add_option("--sup-rows", o.sup_rows, "comma-separated supplementary row ids");
  cmd->add_option("--sup-cols", o.sup_cols, "comma-separated supplementary column ids");
  cmd->add_option("--axes", o.axes, "retained factor axes (default 5, or fewer if the table is small)");
  cmd->add_option("--pair", o.pair, "factor pair a,b to pixellate (1-based)")->capture_default_str();
  cmd->add_option("--merge-rule", o.merge_rule, "least-sum | least-abs-diff")->capture_default_str();
  cmd->add_option("--resolution", o.resolution, "grid index resolution G");
  cmd->add_option("--occupancy", o.occupancy, "target mean points per index cell")->capture_default_str();
  cmd->add_option("--seed", o.seed, "random seed")->capture_default_str();
  cmd->add_option("--out-dir", o.out_dir, "artifact directory")->capture_default_str();
}

pfm::PipelineConfig to_config(const Options& o) {
  pfm::PipelineConfig c;
  c.input = o.input;
  if (!o.sup_rows.empty()) c.sup_rows = split(o.sup_rows);
  if (!o.sup_cols.empty()) c.sup_cols = split(o.sup_cols);
  c.axes = o.axes;
  c.pair = parse_pair(o.pair);
  const auto rule = pfm::parse_merge_rule(o.merge_rule);
  if (!rule) throw PipelineError(Stage::config, "unknown merge rule '" + o.merge_rule + "'");
  c.merge_rule = *rule;
  c.resolution = o.resolution;
  c.occupancy = o.occupancy;
  c.seed = o.seed;
  c.out_dir = o.out_dir;
  pfm::validate_config(c);
  return c;
}

int run_depth(const Options& o, pfm::RunDepth depth) {
  const auto config = to_config(o);
  const auto result = pfm::run_stages(config, depth);
  pfm::write_artifacts(config, result, depth);
  for (const auto& name : pfm::artifact_names(depth)) {
    std::cout << (config.out_dir / name).string() << '\n';
  }
  return 0;
}

int run_query(const Options& o) {
  if (o.points.empty()) throw PipelineError(Stage::config, "query needs at least one --point");
  if (o.input.empty() == o.coords.empty()) {
    throw PipelineError(Stage::config, "query needs exactly one of --input or --coords");
  }
  auto config = to_config(o);
  pfm::UnitCloud cloud;
  if (!o.coords.empty()) {
    cloud = [&] {
      try {
        return pfm::cloud_from_coords(pfm::load_coords(o.coords), config.pair);
      } catch (const std::exception& e) {
        throw PipelineError(Stage::load, e.what());
      }
    }();
  } else {
    cloud = pfm::run_stages(config, pfm::RunDepth::ca).cloud;
  }
  std::optional<pfm::PointId> exclude;
  if (!o.exclude.empty()) {
    for (std::size_t p = 0; p < cloud.size(); ++p) {
      if (cloud.labels[p] == o.exclude) exclude = static_cast<pfm::PointId>(p);
    }
    if (!exclude) throw PipelineError(Stage::query, "unknown --exclude id '" + o.exclude + "'");
  }
  const int g = config.resolution.value_or(pfm::resolution_for(cloud.size(), config.occupancy));
  const auto index = [&] {
    try {
      return pfm::GridIndex::build(cloud, g);
    } catch (const std::exception& e) {
      throw PipelineError(Stage::index, e.what());
    }
  }();
  for (const auto& text : o.points) {
    const auto [u, v] = parse_point(text);
    try {
      const auto r = pfm::nearest(index, u, v, exclude);
      std::cout << pfm::query_json(u, v, r, cloud) << '\n';
    } catch (const std::exception& e) {
      throw PipelineError(Stage::query, e.what());
    }
  }
  return 0;
}

int run_bench(const Options& o) {
  pfm::BenchConfig bc;
  for (const auto& s : split(o.n_values)) {
    try {
      const long long v = std::stoll(s);
      if (v <= 0) throw std::invalid_argument("non-positive");
      bc.n_values.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw PipelineError(Stage::config, "--n expects positive integers, got '" + s + "'");
    }
  }
  if (!(o.occupancy > 0.0)) throw PipelineError(Stage::config, "occupancy must be positive");
  if (o.queries == 0) throw PipelineError(Stage::config, "--queries must be positive");
  bc.occupancy = o.occupancy;
  bc.queries = o.queries;
  bc.seed = o.seed;
  if (o.distribution == "uniform") {
    bc.distribution = pfm::PointDistribution::uniform;
  } else if (o.distribution == "skewed") {
    bc.distribution = pfm::PointDistribution::skewed;
  } else {
    throw PipelineError(Stage::config, "unknown distribution '" + o.distribution + "'");
  }
  std::string csv;
  try {
    csv = pfm::bench_csv(pfm::bench_uniform(bc), !o.no_timing);
  } catch (const std::exception& e) {
    throw PipelineError(Stage::bench, e.what());
  }
  try {
    std::filesystem::create_directories(o.out_dir);
    pfm::write_file(std::filesystem::path(o.out_dir) / "bench.csv", csv);
  } catch (const std::exception& e) {
    throw PipelineError(Stage::write, e.what());
  }
  std::cout << csv;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Correspondence-analysis factor plane pixellation, m-ary coarsening chain and grid search"};
  app.require_subcommand(1);
  Options o;

  auto* run = app.add_subcommand("run", "full pipeline: all artifacts");
  add_pipeline_options(run, o);
  auto* ca = app.add_subcommand("ca", "factor coordinates and inertia");
  add_pipeline_options(ca, o);
  auto* grid = app.add_subcommand("grid", "10x10 histogram, overlap report, text and SVG renders");
  add_pipeline_options(grid, o);
  auto* chain = app.add_subcommand("chain", "coarsening chain 10..2 and partitions");
  add_pipeline_options(chain, o);
  auto* query = app.add_subcommand("query", "exact nearest neighbour, one JSON line per point");
  add_pipeline_options(query, o, false);
  query->add_option("--coords", o.coords, "coords.csv from a previous run instead of --input");
  query->add_option("--point", o.points, "query u,v in unit-square scale (repeatable)")->required();
  query->add_option("--exclude", o.exclude, "row id to leave out of the search");
  auto* bench = app.add_subcommand("bench", "grid search cost versus n on generated data");
  bench->add_option("--n", o.n_values, "comma-separated point counts")->capture_default_str();
  bench->add_option("--occupancy", o.occupancy, "target mean points per cell")->capture_default_str();
  bench->add_option("--queries", o.queries, "queries per size")->capture_default_str();
  bench->add_option("--seed", o.seed, "random seed")->capture_default_str();
  bench->add_option("--distribution", o.distribution, "uniform | skewed")->capture_default_str();
  bench->add_flag("--no-timing", o.no_timing, "write 0 in the wall-time column");
  bench->add_option("--out-dir", o.out_dir, "directory for bench.csv")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error [config]: " << e.what() << '\n';
    return pfm::exit_code(Stage::config);
  }

  try {
    if (*run) return run_depth(o, pfm::RunDepth::index);
    if (*ca) return run_depth(o, pfm::RunDepth::ca);
    if (*grid) return run_depth(o, pfm::RunDepth::grid);
    if (*chain) return run_depth(o, pfm::RunDepth::chain);
    if (*query) return run_query(o);
    if (*bench) return run_bench(o);
  } catch (const PipelineError& e) {
    std::cerr << e.what() << '\n';
    return pfm::exit_code(e.stage());
  } catch (const std::exception& e) {
    std::cerr << "error [internal]: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
