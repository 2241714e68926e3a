#include <charconv>
#include <fstream>
#include <sstream>

#include "xcsbm/errors.hpp"
#include "xcsbm/experiment.hpp"

namespace xcsbm {

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string(), 0);
  return in;
}

bool blank(const std::string& s) { return s.find_first_not_of(" \t\r") == std::string::npos; }

template <class T>
T parse_number(std::string_view tok, const std::string& what, std::size_t line_no) {
  while (!tok.empty() && (tok.front() == ' ' || tok.front() == '\t')) tok.remove_prefix(1);
  while (!tok.empty() && (tok.back() == ' ' || tok.back() == '\t' || tok.back() == '\r'))
    tok.remove_suffix(1);
  T v{};
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || tok.empty())
    throw ParseError("bad " + what + " '" + std::string(tok) + "'", line_no);
  return v;
}

}  // namespace

std::pair<Dataset, Graph> load_graph_dataset(const std::filesystem::path& edge_path,
                                             const std::filesystem::path& feature_path,
                                             const std::filesystem::path& label_path) {
  std::string line;
  std::size_t line_no = 0;

  std::vector<std::vector<double>> feats;
  {
    auto in = open_input(feature_path);
    while (std::getline(in, line)) {
      ++line_no;
      if (blank(line)) continue;
      std::vector<double> row;
      std::stringstream ss(line);
      std::string cell;
      while (std::getline(ss, cell, ',')) row.push_back(parse_number<double>(cell, "feature", line_no));
      if (!feats.empty() && row.size() != feats.front().size())
        throw ParseError("feature row has " + std::to_string(row.size()) + " columns, expected " +
                             std::to_string(feats.front().size()),
                         line_no);
      feats.push_back(std::move(row));
    }
  }
  if (feats.empty()) throw ParseError("feature file is empty", 0);
  const std::size_t n = feats.size();
  const std::size_t d = feats.front().size();

  Dataset ds;
  ds.x.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j)
      ds.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = feats[i][j];

  {
    auto in = open_input(label_path);
    line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (blank(line)) continue;
      const long v = parse_number<long>(line, "label", line_no);
      if (v != 0 && v != 1) throw ParseError("label must be 0 or 1, got " + std::to_string(v), line_no);
      ds.eps.push_back(static_cast<std::uint8_t>(v));
    }
  }
  if (ds.eps.size() != n)
    throw ParseError("label count " + std::to_string(ds.eps.size()) + " != feature rows " +
                         std::to_string(n),
                     0);
  ds.eta.assign(n, 0);

  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  {
    auto in = open_input(edge_path);
    line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (blank(line)) continue;
      std::istringstream ss(line);
      std::string a, b, extra;
      if (!(ss >> a >> b) || (ss >> extra))
        throw ParseError("expected two node ids", line_no);
      const auto u = parse_number<unsigned long>(a, "node id", line_no);
      const auto v = parse_number<unsigned long>(b, "node id", line_no);
      if (u >= n || v >= n)
        throw ParseError("node id out of range [0, " + std::to_string(n) + ")", line_no);
      edges.emplace_back(static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v));
    }
  }
  return {std::move(ds), Graph::from_edges(n, edges)};
}

}  // namespace xcsbm
