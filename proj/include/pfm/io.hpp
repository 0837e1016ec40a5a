#pragma once

// Matrix ingestion, artifact serialization and the text/SVG histogram
// renderers.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pfm/factor_map.hpp"
#include "pfm/grid_search.hpp"
#include "pfm/madic_chain.hpp"
#include "pfm/pixel_grid.hpp"

namespace pfm {

struct LoadedMatrix {
  DataMatrix matrix;
  std::vector<SupplementaryProfile> supplementary;
};

/// CSV: a header row (corner cell, then column ids) followed by one row per
/// record (row id, then numeric non-negative cells). Rows and columns named
/// as supplementary are split off as profiles over the active set.
LoadedMatrix parse_matrix(std::istream& in, const std::vector<std::string>& sup_rows = {},
                          const std::vector<std::string>& sup_cols = {});
LoadedMatrix load_matrix(const std::filesystem::path& path,
                         const std::vector<std::string>& sup_rows = {},
                         const std::vector<std::string>& sup_cols = {});

/// id,axis1..axisk with shortest round-trip number formatting.
std::string coords_csv(const std::vector<std::string>& ids, const Eigen::MatrixXd& coords);
std::string supplementary_csv(const std::vector<SupplementaryPoint>& points, int axes);

struct CoordTable {
  std::vector<std::string> ids;
  Eigen::MatrixXd coords;
};
CoordTable parse_coords(std::istream& in);
CoordTable load_coords(const std::filesystem::path& path);

std::string factor_map_json(const FactorMap& map);
std::string histogram_json(const GridHistogram& hist, const UnitCloud& cloud);
std::string overlap_json(const OverlapReport& report, const UnitCloud& cloud);
std::string chain_json(const CoarseningChain& chain);
/// id,base,cell_i,cell_j for every point at every base 10..2.
std::string partitions_csv(const CoarseningChain& chain);
std::string query_json(double u, double v, const NNResult& result, const UnitCloud& cloud);

struct Marker {
  std::string label;
  Cell cell;
};

enum class ZeroMode { counts, blank_zero };

/// Rows top to bottom from j = g-1 down to 0 so the second factor points up.
std::string render_text(const GridHistogram& hist, const std::vector<Marker>& markers = {},
                        ZeroMode mode = ZeroMode::blank_zero);

/// Linear grayscale heatmap, one rect per cell, markers at cell centres.
std::string render_svg(const GridHistogram& hist, const std::vector<Marker>& markers = {});

void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace pfm
