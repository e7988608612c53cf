#include "pam/field_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "pam/errors.hpp"

namespace pam {

namespace {

constexpr char kMagic[4] = {'P', 'A', 'M', 'F'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little, "binary field layout assumes a little-endian host");

template <class T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v{};
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(T))) throw Error(ErrorCode::Io, "truncated field file");
  return v;
}

}  // namespace

void write_field_binary(std::ostream& os, const FieldGrid& f) {
  os.write(kMagic, 4);
  put<std::uint32_t>(os, kVersion);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(f.h.size()));
  for (std::size_t a = 0; a < f.grid.axes(); ++a) put<std::uint64_t>(os, f.grid.axis(a).size());
  put<double>(os, f.h0);
  for (double h : f.h) put<double>(os, h);
  put<std::uint64_t>(os, f.seed);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(f.method));
  for (std::size_t a = 0; a < f.grid.axes(); ++a)
    for (double x : f.grid.axis(a)) put<double>(os, x);
  os.write(reinterpret_cast<const char*>(f.values.data()),
           static_cast<std::streamsize>(f.values.size() * sizeof(double)));
  if (!os) throw Error(ErrorCode::Io, "failed to write field");
}

FieldGrid read_field_binary(std::istream& is) {
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) throw Error(ErrorCode::Io, "not a PAMF field file");
  if (get<std::uint32_t>(is) != kVersion) throw Error(ErrorCode::Io, "unsupported field file version");
  const auto d = get<std::uint32_t>(is);
  if (d == 0 || d > 64) throw Error(ErrorCode::Io, "implausible dimension in field file");
  std::vector<std::uint64_t> sizes(d + 1);
  std::uint64_t total = 1;
  for (auto& n : sizes) {
    n = get<std::uint64_t>(is);
    if (n == 0 || n > (std::uint64_t{1} << 32)) throw Error(ErrorCode::Io, "implausible axis size in field file");
    total *= n;
    if (total > (std::uint64_t{1} << 34)) throw Error(ErrorCode::Io, "field file too large");
  }
  FieldGrid f;
  f.h0 = get<double>(is);
  f.h.resize(d);
  for (double& h : f.h) h = get<double>(is);
  f.seed = get<std::uint64_t>(is);
  const auto m = get<std::uint32_t>(is);
  if (m > 1) throw Error(ErrorCode::Io, "unknown field method in file");
  f.method = static_cast<FieldMethod>(m);
  f.grid.time_points.resize(sizes[0]);
  f.grid.space_points.resize(d);
  for (double& x : f.grid.time_points) x = get<double>(is);
  for (std::uint32_t a = 0; a < d; ++a) {
    f.grid.space_points[a].resize(sizes[a + 1]);
    for (double& x : f.grid.space_points[a]) x = get<double>(is);
  }
  f.values.resize(total);
  if (!is.read(reinterpret_cast<char*>(f.values.data()), static_cast<std::streamsize>(total * sizeof(double))))
    throw Error(ErrorCode::Io, "truncated field payload");
  return f;
}

void save_field(const std::string& path, const FieldGrid& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::Io, "cannot open " + path);
  write_field_binary(os, f);
}

FieldGrid load_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::Io, "cannot open " + path);
  return read_field_binary(is);
}

void write_field_csv(std::ostream& os, const FieldGrid& f) {
  os << "t";
  for (std::size_t a = 1; a < f.grid.axes(); ++a) os << ",x" << a;
  os << ",value\n";
  os << std::scientific << std::setprecision(16);
  std::vector<std::size_t> idx(f.grid.axes(), 0);
  for (double v : f.values) {
    for (std::size_t a = 0; a < idx.size(); ++a) os << (a ? "," : "") << f.grid.axis(a)[idx[a]];
    os << ',' << v << '\n';
    for (std::size_t a = idx.size(); a-- > 0;) {
      if (++idx[a] < f.grid.axis(a).size()) break;
      idx[a] = 0;
    }
  }
}

}  // namespace pam
