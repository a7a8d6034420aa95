#include "phnls/field_io.hpp"

#include "phnls/error.hpp"

#include <json.hpp>

#include <array>
#include <bit>
#include <cstring>
#include <fstream>

namespace phnls {

namespace {

constexpr std::array<char, 8> kMagic{'N', 'L', 'S', 'F', 'L', 'D', '0', '1'};

void put_u64(std::ostream &os, std::uint64_t v) {
  std::array<unsigned char, 8> b{};
  for (int i = 0; i < 8; ++i)
    b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xffu);
  os.write(reinterpret_cast<const char *>(b.data()), 8);
}

std::uint64_t get_u64(std::istream &is) {
  std::array<unsigned char, 8> b{};
  if (!is.read(reinterpret_cast<char *>(b.data()), 8))
    throw ValidationError("field file: truncated length prefix");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i)
    v = (v << 8) | b[i];
  return v;
}

void put_f64(std::ostream &os, double x) { put_u64(os, std::bit_cast<std::uint64_t>(x)); }

} // namespace

void write_field(std::ostream &os, const Field &f) {
  const Grid &g = f.grid();
  nlohmann::ordered_json h;
  h["d"] = f.params().d;
  h["n"] = f.params().n;
  h["sigma"] = f.params().sigma.str();
  h["lambda"] = f.params().lambda;
  h["hermite_modes"] = g.hermite_modes();
  auto points = nlohmann::json::array();
  auto lengths = nlohmann::json::array();
  for (const auto &ax : g.z_axes()) {
    points.push_back(ax.points);
    lengths.push_back(ax.length);
  }
  h["z_points"] = points;
  h["z_length"] = lengths;
  h["representation"] = to_string(f.representation());
  const std::string text = h.dump();

  os.write(kMagic.data(), kMagic.size());
  put_u64(os, text.size());
  os.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const auto &v : f.data()) {
    put_f64(os, v.real());
    put_f64(os, v.imag());
  }
  if (!os)
    throw std::runtime_error("field file: write failed");
}

void write_field(const std::string &path, const Field &f) {
  std::ofstream os(path, std::ios::binary);
  if (!os)
    throw std::runtime_error("field file: cannot open '" + path + "' for writing");
  write_field(os, f);
}

FieldHeader read_field_header(std::istream &is) {
  std::array<char, 8> magic{};
  if (!is.read(magic.data(), magic.size()) || magic != kMagic)
    throw ValidationError("field file: bad magic");
  const auto len = get_u64(is);
  if (len > (1u << 20))
    throw ValidationError("field file: header too long");
  std::string text(len, '\0');
  if (!is.read(text.data(), static_cast<std::streamsize>(len)))
    throw ValidationError("field file: truncated header");

  FieldHeader out;
  try {
    const auto h = nlohmann::json::parse(text);
    out.params.d = h.at("d").get<int>();
    out.params.n = h.at("n").get<int>();
    out.params.sigma = Rational::parse(h.at("sigma").get<std::string>());
    out.params.lambda = h.at("lambda").get<int>();
    out.hermite_modes = h.at("hermite_modes").get<int>();
    const auto points = h.at("z_points").get<std::vector<int>>();
    const auto lengths = h.at("z_length").get<std::vector<double>>();
    if (points.size() != lengths.size())
      throw ValidationError("field file: z_points and z_length differ in length");
    for (std::size_t a = 0; a < points.size(); ++a)
      out.z_axes.push_back({points[a], lengths[a]});
    out.representation = representation_from_string(h.at("representation").get<std::string>());
  } catch (const nlohmann::json::exception &e) {
    throw ValidationError(std::string("field file: bad header: ") + e.what());
  }
  check(out.params);
  return out;
}

Field read_field(std::istream &is) {
  const auto h = read_field_header(is);
  auto grid = Grid::make(h.hermite_modes, h.z_axes);
  std::vector<cplx> data(grid->size());
  for (auto &v : data) {
    const double re = std::bit_cast<double>(get_u64(is));
    const double im = std::bit_cast<double>(get_u64(is));
    v = {re, im};
  }
  return Field(h.params, std::move(grid), h.representation, std::move(data));
}

Field read_field(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is)
    throw ValidationError("field file: cannot open '" + path + "'");
  return read_field(is);
}

} // namespace phnls
