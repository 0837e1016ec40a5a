#include "pfm/io.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

#include "pfm/error.hpp"
#include "pfm/format.hpp"

namespace pfm {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// RFC 4180 style fields on one physical line; quoted fields may contain
// commas and doubled quotes but not newlines.
std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char ch = line[k];
    if (quoted) {
      if (ch == '"') {
        if (k + 1 < line.size() && line[k + 1] == '"') {
          field += '"';
          ++k;
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
    } else if (ch == '"' && trim(field).empty()) {
      quoted = true;
      was_quoted = true;
      field.clear();
    } else if (ch == ',') {
      fields.push_back(was_quoted ? field : std::string(trim(field)));
      field.clear();
      was_quoted = false;
    } else {
      field += ch;
    }
  }
  if (quoted) {
    throw Error(Errc::malformed_csv,
                "malformed CSV at line " + std::to_string(line_no) + ": unterminated quote");
  }
  fields.push_back(was_quoted ? field : std::string(trim(field)));
  return fields;
}

std::vector<std::vector<std::string>> read_csv(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    rows.push_back(split_csv_line(line, line_no));
  }
  return rows;
}


std::unordered_map<std::string, std::size_t> index_ids(const std::vector<std::string>& ids,
                                                       const char* what) {
  std::unordered_map<std::string, std::size_t> out;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    if (ids[k].empty()) throw Error(Errc::malformed_csv, std::string("empty ") + what + " id");
    if (!out.emplace(ids[k], k).second) {
      throw Error(Errc::duplicate_id, std::string("duplicate ") + what + " id '" + ids[k] + "'");
    }
  }
  return out;
}

std::unordered_set<std::size_t> resolve_sup(const std::vector<std::string>& wanted,
                                            const std::unordered_map<std::string, std::size_t>& ids,
                                            const char* what) {
  std::unordered_set<std::size_t> out;
  for (const auto& id : wanted) {
    const auto it = ids.find(id);
    if (it == ids.end()) {
      throw Error(Errc::unknown_id,
                  std::string("unknown supplementary ") + what + " id '" + id + "'");
    }
    out.insert(it->second);
  }
  return out;
}

std::string escape_xml(std::string_view s) {
  std::string out;
  for (const char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

void check_markers(const GridHistogram& hist, const std::vector<Marker>& markers) {
  for (const auto& m : markers) {
    if (m.cell.i >= static_cast<std::uint32_t>(hist.base) ||
        m.cell.j >= static_cast<std::uint32_t>(hist.base)) {
      throw Error(Errc::out_of_range, "marker '" + m.label + "' outside the grid");
    }
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos && trim(s) == s) return s;
  std::string out = "\"";
  for (const char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

}  // namespace

LoadedMatrix parse_matrix(std::istream& in, const std::vector<std::string>& sup_rows,
                          const std::vector<std::string>& sup_cols) {
  const auto rows = read_csv(in);
  if (rows.empty()) throw Error(Errc::empty_input, "empty input: no header row");
  const auto& header = rows.front();
  if (header.size() < 2) {
    throw Error(Errc::malformed_csv, "malformed CSV: header needs at least one column id");
  }
  const std::vector<std::string> col_ids(header.begin() + 1, header.end());
  const std::size_t m_all = col_ids.size();
  if (rows.size() < 2) throw Error(Errc::empty_input, "empty input: no data rows");

  std::vector<std::string> row_ids;
  Eigen::MatrixXd all(static_cast<Eigen::Index>(rows.size() - 1),
                      static_cast<Eigen::Index>(m_all));
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& fields = rows[r];
    if (fields.size() != m_all + 1) {
      throw Error(Errc::malformed_csv, "malformed CSV at data row " + std::to_string(r) +
                                           ": expected " + std::to_string(m_all + 1) +
                                           " fields, got " + std::to_string(fields.size()));
    }
    row_ids.push_back(fields[0]);
    for (std::size_t c = 0; c < m_all; ++c) {
      const auto value = parse_double(fields[c + 1]);
      const std::string where = "(" + fields[0] + "," + col_ids[c] + ")";
      if (!value || !std::isfinite(*value)) {
        throw Error(Errc::non_numeric,
                    "non-numeric value '" + fields[c + 1] + "' at " + where);
      }
      if (*value < 0.0) throw Error(Errc::negative_value, "negative value at " + where);
      all(static_cast<Eigen::Index>(r - 1), static_cast<Eigen::Index>(c)) = *value;
    }
  }

  const auto row_index = index_ids(row_ids, "row");
  const auto col_index = index_ids(col_ids, "column");
  const auto sup_r = resolve_sup(sup_rows, row_index, "row");
  const auto sup_c = resolve_sup(sup_cols, col_index, "column");

  std::vector<Eigen::Index> active_r, active_c;
  for (std::size_t r = 0; r < row_ids.size(); ++r) {
    if (!sup_r.count(r)) active_r.push_back(static_cast<Eigen::Index>(r));
  }
  for (std::size_t c = 0; c < m_all; ++c) {
    if (!sup_c.count(c)) active_c.push_back(static_cast<Eigen::Index>(c));
  }
  if (active_r.empty() || active_c.empty()) {
    throw Error(Errc::empty_input, "no active rows or columns remain");
  }

  LoadedMatrix out;
  out.matrix.values = all(active_r, active_c);
  for (auto r : active_r) out.matrix.row_ids.push_back(row_ids[r]);
  for (auto c : active_c) out.matrix.col_ids.push_back(col_ids[c]);

  // Input order, rows before columns.
  for (std::size_t r = 0; r < row_ids.size(); ++r) {
    if (!sup_r.count(r)) continue;
    SupplementaryProfile p{row_ids[r], ProfileKind::row_like, {}};
    for (auto c : active_c) p.values.push_back(all(static_cast<Eigen::Index>(r), c));
    out.supplementary.push_back(std::move(p));
  }
  for (std::size_t c = 0; c < m_all; ++c) {
    if (!sup_c.count(c)) continue;
    SupplementaryProfile p{col_ids[c], ProfileKind::column_like, {}};
    for (auto r : active_r) p.values.push_back(all(r, static_cast<Eigen::Index>(c)));
    out.supplementary.push_back(std::move(p));
  }
  validate(out.matrix);
  return out;
}

LoadedMatrix load_matrix(const std::filesystem::path& path, const std::vector<std::string>& sup_rows,
                         const std::vector<std::string>& sup_cols) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_failure, "cannot open '" + path.string() + "'");
  return parse_matrix(in, sup_rows, sup_cols);
}

std::string coords_csv(const std::vector<std::string>& ids, const Eigen::MatrixXd& coords) {
  std::string out = "id";
  for (Eigen::Index a = 0; a < coords.cols(); ++a) out += ",axis" + std::to_string(a + 1);
  out += '\n';
  for (Eigen::Index i = 0; i < coords.rows(); ++i) {
    out += csv_field(ids[static_cast<std::size_t>(i)]);
    for (Eigen::Index a = 0; a < coords.cols(); ++a) out += ',' + format_double(coords(i, a));
    out += '\n';
  }
  return out;
}

std::string supplementary_csv(const std::vector<SupplementaryPoint>& points, int axes) {
  std::string out = "id,kind";
  for (int a = 0; a < axes; ++a) out += ",axis" + std::to_string(a + 1);
  out += '\n';
  for (const auto& p : points) {
    out += csv_field(p.id);
    out += p.kind == ProfileKind::row_like ? ",row" : ",column";
    for (double v : p.coords) out += ',' + format_double(v);
    out += '\n';
  }
  return out;
}

CoordTable parse_coords(std::istream& in) {
  const auto rows = read_csv(in);
  if (rows.size() < 2) throw Error(Errc::empty_input, "coordinate file has no data rows");
  const std::size_t k = rows.front().size() - 1;
  if (k == 0) throw Error(Errc::malformed_csv, "coordinate file has no axis columns");
  CoordTable out;
  out.coords.resize(static_cast<Eigen::Index>(rows.size() - 1), static_cast<Eigen::Index>(k));
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != k + 1) {
      throw Error(Errc::malformed_csv, "malformed CSV at data row " + std::to_string(r) +
                                           ": expected " + std::to_string(k + 1) + " fields");
    }
    out.ids.push_back(rows[r][0]);
    for (std::size_t a = 0; a < k; ++a) {
      const auto v = parse_double(rows[r][a + 1]);
      if (!v) {
        throw Error(Errc::non_numeric, "non-numeric coordinate '" + rows[r][a + 1] +
                                           "' at data row " + std::to_string(r));
      }
      out.coords(static_cast<Eigen::Index>(r - 1), static_cast<Eigen::Index>(a)) = *v;
    }
  }
  index_ids(out.ids, "row");
  return out;
}

CoordTable load_coords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_failure, "cannot open '" + path.string() + "'");
  return parse_coords(in);
}

std::string factor_map_json(const FactorMap& map) {
  ordered_json j;
  j["rows"] = map.row_ids.size();
  j["columns"] = map.col_ids.size();
  j["axes"] = map.axes();
  j["total_inertia"] = map.total_inertia;
  std::vector<double> eig(map.eigenvalues.begin(), map.eigenvalues.end());
  j["eigenvalues"] = eig;
  std::vector<double> share;
  for (double l : eig) share.push_back(map.total_inertia > 0.0 ? l / map.total_inertia : 0.0);
  j["inertia_share"] = share;
  j["row_ids"] = map.row_ids;
  j["row_masses"] = std::vector<double>(map.row_masses.begin(), map.row_masses.end());
  j["column_ids"] = map.col_ids;
  j["column_masses"] = std::vector<double>(map.col_masses.begin(), map.col_masses.end());
  ordered_json sup = ordered_json::array();
  for (const auto& p : map.supplementary) {
    sup.push_back({{"id", p.id},
                   {"kind", p.kind == ProfileKind::row_like ? "row" : "column"},
                   {"coords", p.coords}});
  }
  j["supplementary"] = sup;
  return j.dump(2) + '\n';
}

std::string histogram_json(const GridHistogram& hist, const UnitCloud& cloud) {
  ordered_json j;
  j["base"] = hist.base;
  j["points"] = hist.total();
  j["axis_pair"] = {cloud.axis_pair.first, cloud.axis_pair.second};
  j["rescale"] = {{"x", {{"min", cloud.rescale_x.min}, {"max", cloud.rescale_x.max}}},
                  {"y", {{"min", cloud.rescale_y.min}, {"max", cloud.rescale_y.max}}}};
  j["boundaries_x"] = hist.boundaries_x;
  j["boundaries_y"] = hist.boundaries_y;
  ordered_json counts = ordered_json::array();
  for (int i = 0; i < hist.base; ++i) {
    std::vector<std::uint64_t> col(hist.counts.begin() + i * hist.base,
                                   hist.counts.begin() + (i + 1) * hist.base);
    counts.push_back(col);
  }
  j["counts"] = counts;
  return j.dump(2) + '\n';
}

std::string overlap_json(const OverlapReport& report, const UnitCloud& cloud) {
  ordered_json j;
  j["max_cell"] = {report.max_cell.i, report.max_cell.j};
  j["max_count"] = report.max_count;
  j["redundant_points"] = report.redundant_points();
  ordered_json groups = ordered_json::array();
  for (const auto& g : report.duplicate_groups) {
    std::vector<std::string> ids;
    for (auto p : g.members) ids.push_back(cloud.labels[p]);
    groups.push_back({{"x", g.x}, {"y", g.y}, {"size", g.members.size()}, {"ids", ids}});
  }
  j["duplicate_groups"] = groups;
  return j.dump(2) + '\n';
}

std::string chain_json(const CoarseningChain& chain) {
  ordered_json j;
  j["merge_rule"] = std::string(to_string(chain.rule));
  ordered_json axes;
  for (int axis = 0; axis < 2; ++axis) {
    ordered_json levels = ordered_json::array();
    for (int base = kFinestBase; base >= kCoarsestBase; --base) {
      const auto& b = chain.binning(axis, base);
      levels.push_back({{"base", base},
                        {"kind", std::string(base_kind(base))},
                        {"boundaries", b.boundaries},
                        {"marginal", b.marginal}});
    }
    axes[axis == 0 ? "x" : "y"] = levels;
  }
  j["axes"] = axes;
  ordered_json points = ordered_json::array();
  for (std::size_t p = 0; p < chain.size(); ++p) {
    const auto id = static_cast<PointId>(p);
    points.push_back({{"id", chain.labels[p]},
                      {"x", "x:" + chain.code(0, id)},
                      {"y", "y:" + chain.code(1, id)}});
  }
  j["points"] = points;
  return j.dump(2) + '\n';
}

std::string partitions_csv(const CoarseningChain& chain) {
  std::string out = "id,base,cell_i,cell_j\n";
  for (std::size_t p = 0; p < chain.size(); ++p) {
    const auto id = static_cast<PointId>(p);
    for (int base = kFinestBase; base >= kCoarsestBase; --base) {
      out += csv_field(chain.labels[p]) + ',' + std::to_string(base) + ',' +
             std::to_string(chain.digit(0, id, base)) + ',' +
             std::to_string(chain.digit(1, id, base)) + '\n';
    }
  }
  return out;
}

std::string query_json(double u, double v, const NNResult& result, const UnitCloud& cloud) {
  ordered_json j;
  j["query"] = {u, v};
  j["id"] = cloud.labels[result.id];
  j["index"] = result.id;
  j["distance"] = result.distance;
  j["cells_examined"] = result.cells_examined;
  j["candidates_compared"] = result.candidates_compared;
  return j.dump();
}

std::string render_text(const GridHistogram& hist, const std::vector<Marker>& markers,
                        ZeroMode mode) {
  check_markers(hist, markers);
  std::string out;
  for (int j = hist.base - 1; j >= 0; --j) {
    for (int i = 0; i < hist.base; ++i) {
      if (i > 0) out += ' ';
      const auto c = hist.count(i, j);
      out += (c == 0 && mode == ZeroMode::blank_zero) ? std::string(".") : std::to_string(c);
    }
    out += '\n';
  }
  for (const auto& m : markers) {
    out += m.label + "@(" + std::to_string(m.cell.i) + "," + std::to_string(m.cell.j) + ")\n";
  }
  return out;
}

std::string render_svg(const GridHistogram& hist, const std::vector<Marker>& markers) {
  check_markers(hist, markers);
  constexpr double kPlot = 400.0;
  constexpr double kMargin = 20.0;
  const double size = kPlot + 2 * kMargin;
  std::uint64_t max_count = 0;
  for (auto c : hist.counts) max_count = std::max(max_count, c);

  auto len = [](double v) { return format_fixed(v, 3); };
  auto px = [&](double b) { return len(kMargin + b * kPlot); };
  auto py = [&](double b) { return len(kMargin + (1.0 - b) * kPlot); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << len(size) << "\" height=\""
      << len(size) << "\" viewBox=\"0 0 " << len(size) << ' ' << len(size) << "\">\n";
  svg << "<!-- " << hist.base << "x" << hist.base
      << " histogram; fill is linear grayscale, white = 0, black = max count " << max_count
      << " -->\n";
  svg << "<g stroke=\"none\">\n";
  for (int i = 0; i < hist.base; ++i) {
    for (int j = 0; j < hist.base; ++j) {
      const auto c = hist.count(i, j);
      const long gray =
          max_count == 0 ? 255
                         : 255 - std::lround(255.0 * static_cast<double>(c) /
                                             static_cast<double>(max_count));
      const double x0 = hist.boundaries_x[i];
      const double x1 = hist.boundaries_x[i + 1];
      const double y0 = hist.boundaries_y[j];
      const double y1 = hist.boundaries_y[j + 1];
      svg << "<rect x=\"" << px(x0) << "\" y=\"" << py(y1) << "\" width=\""
          << len((x1 - x0) * kPlot) << "\" height=\""
          << len((y1 - y0) * kPlot) << "\" fill=\"rgb(" << gray << ',' << gray << ','
          << gray << ")\"/>\n";
    }
  }
  svg << "</g>\n<g stroke=\"#808080\" stroke-width=\"1\">\n";
  for (double b : hist.boundaries_x) {
    svg << "<line x1=\"" << px(b) << "\" y1=\"" << py(0.0) << "\" x2=\"" << px(b) << "\" y2=\""
        << py(1.0) << "\"/>\n";
  }
  for (double b : hist.boundaries_y) {
    svg << "<line x1=\"" << px(0.0) << "\" y1=\"" << py(b) << "\" x2=\"" << px(1.0) << "\" y2=\""
        << py(b) << "\"/>\n";
  }
  svg << "</g>\n";
  if (!markers.empty()) {
    svg << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#c00000\" "
           "text-anchor=\"middle\" dominant-baseline=\"middle\">\n";
    for (const auto& m : markers) {
      const double cx = 0.5 * (hist.boundaries_x[m.cell.i] + hist.boundaries_x[m.cell.i + 1]);
      const double cy = 0.5 * (hist.boundaries_y[m.cell.j] + hist.boundaries_y[m.cell.j + 1]);
      svg << "<text x=\"" << px(cx) << "\" y=\"" << py(cy) << "\">" << escape_xml(m.label)
          << "</text>\n";
    }
    svg << "</g>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_failure, "cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw Error(Errc::io_failure, "failed writing '" + path.string() + "'");
}

}  // namespace pfm
