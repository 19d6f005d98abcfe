#include "curvelab/io.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace curvelab {

void save_field(const ScalarField2D& f, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("save_field: cannot open " + path);
  const GridSpec& s = f.spec();
  std::int64_t nx = s.nx, ny = s.ny;
  auto put = [&os](const void* p, std::size_t n) {
    os.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
  };
  put(&nx, 8);
  put(&ny, 8);
  put(&s.lx, 8);
  put(&s.ly, 8);
  put(&s.origin.x, 8);
  put(&s.origin.y, 8);
  put(f.values().data(), f.values().size() * 8);
  if (!os) throw std::runtime_error("save_field: write failed for " + path);
}

ScalarField2D load_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("load_field: cannot open " + path);
  auto get = [&is, &path](void* p, std::size_t n) {
    is.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (!is) throw std::runtime_error("load_field: truncated file " + path);
  };
  std::int64_t nx, ny;
  GridSpec s;
  get(&nx, 8);
  get(&ny, 8);
  s.nx = static_cast<int>(nx);
  s.ny = static_cast<int>(ny);
  get(&s.lx, 8);
  get(&s.ly, 8);
  get(&s.origin.x, 8);
  get(&s.origin.y, 8);
  s.validate();
  std::vector<double> vals(s.size());
  get(vals.data(), vals.size() * 8);
  return ScalarField2D(s, std::move(vals));
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_text_file: cannot open " + path);
  os << content;
  if (!os) throw std::runtime_error("write_text_file: write failed " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_text_file: cannot open " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

std::string field_to_csv(const ScalarField2D& f) {
  std::ostringstream os;
  os << "x,y,value\n";
  os.precision(17);
  const GridSpec& s = f.spec();
  for (int j = 0; j < s.ny; ++j)
    for (int i = 0; i < s.nx; ++i) {
      Point2 p = f.node(i, j);
      os << p.x << "," << p.y << "," << f.at(i, j) << "\n";
    }
  return os.str();
}

std::string field_to_pgm(const ScalarField2D& f) {
  const GridSpec& s = f.spec();
  double lo = f.min_value(), hi = f.max_value();
  double span = hi > lo ? hi - lo : 1.0;
  std::ostringstream os;
  os << "P2\n" << s.nx << " " << s.ny << "\n255\n";
  for (int j = s.ny - 1; j >= 0; --j) {
    for (int i = 0; i < s.nx; ++i) {
      int v = static_cast<int>(255.0 * (f.at(i, j) - lo) / span + 0.5);
      os << v << (i + 1 == s.nx ? '\n' : ' ');
    }
  }
  return os.str();
}

}  // namespace curvelab
