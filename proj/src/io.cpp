#include "torsionshape/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "torsionshape/error.hpp"

namespace tshape::io {

namespace {

void append(std::string& s, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  s += buf;
}

std::vector<double> split_numbers(const std::string& line) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(cell, &used));
      if (cell.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ConfigParse, "grid csv: bad number '" + cell + "'");
    }
  }
  return out;
}

}  // namespace

std::string grid_csv(const NodeField& f) {
  const GridSpec& g = f.grid();
  std::string s;
  s.reserve(g.node_count() * 24);
  s += std::to_string(g.nx) + "," + std::to_string(g.ny) + ",";
  append(s, g.x0);
  s += ',';
  append(s, g.y0);
  s += ',';
  append(s, g.x1);
  s += ',';
  append(s, g.y1);
  s += '\n';
  for (int j = 0; j <= g.ny; ++j) {
    for (int i = 0; i <= g.nx; ++i) {
      if (i) s += ',';
      append(s, f(i, j));
    }
    s += '\n';
  }
  return s;
}

NodeField parse_grid_csv(const std::string& text) {
  std::stringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::ConfigParse, "grid csv: empty");
  const auto head = split_numbers(line);
  if (head.size() != 6) throw Error(ErrorCode::ConfigParse, "grid csv: header needs 6 values");
  const GridSpec g(static_cast<int>(head[0]), static_cast<int>(head[1]), head[2], head[3], head[4], head[5]);
  NodeField f(g);
  for (int j = 0; j <= g.ny; ++j) {
    if (!std::getline(in, line)) throw Error(ErrorCode::ConfigParse, "grid csv: missing rows");
    const auto row = split_numbers(line);
    if (row.size() != static_cast<std::size_t>(g.nx + 1)) throw Error(ErrorCode::ConfigParse, "grid csv: bad row length");
    for (int i = 0; i <= g.nx; ++i) f(i, j) = row[static_cast<std::size_t>(i)];
  }
  return f;
}

std::string boundary_csv(const std::vector<BoundarySample>& samples) {
  std::string s = "x,y,nx,ny,ds\n";
  for (const auto& b : samples) {
    for (double v : {b.point.x, b.point.y, b.normal.x, b.normal.y}) {
      append(s, v);
      s += ',';
    }
    append(s, b.ds);
    s += '\n';
  }
  return s;
}

Domain load_domain_csv(const std::filesystem::path& path) {
  return reinitialize(Domain(parse_grid_csv(read_file(path)), false));
}

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
    out << contents;
    if (!out.flush()) throw Error(ErrorCode::Io, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::Io, "rename " + tmp.string() + ": " + ec.message());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace tshape::io
