#include <bit>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <locale>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "gwm/errors.hpp"
#include "gwm/fieldsim.hpp"

namespace gwm {
namespace {

using nlohmann::json;

constexpr const char* kSchema = "gwm.field/1";

json params_json(const ModelParams& p) {
  return {{"alpha", p.alpha}, {"gamma", p.gamma}, {"lambda", p.lambda}, {"n", p.n}};
}

}  // namespace

void write_csv(std::ostream& out, const FieldSample& s) {
  std::ostringstream buf;
  buf.imbue(std::locale::classic());
  buf << std::setprecision(17);
  const Grid& g = s.grid;
  if (g.dims == 1) {
    buf << "x,value\n";
    for (std::size_t i = 0; i < g.sizes[0]; ++i) buf << i * g.spacing[0] << ',' << s.values[i] << '\n';
  } else {
    buf << "x,y,value\n";
    for (std::size_t i = 0; i < g.sizes[0]; ++i) {
      for (std::size_t j = 0; j < g.sizes[1]; ++j) {
        buf << i * g.spacing[0] << ',' << j * g.spacing[1] << ',' << s.values[i * g.sizes[1] + j] << '\n';
      }
    }
  }
  out << buf.str();
}

void write_raw(const std::string& prefix, const FieldSample& s) {
  std::ofstream bin(prefix + ".bin", std::ios::binary);
  if (!bin) throw DataError("cannot open " + prefix + ".bin for writing");
  std::vector<unsigned char> bytes(8 * s.values.size());
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    const auto bits = std::bit_cast<std::uint64_t>(s.values[i]);
    for (int b = 0; b < 8; ++b) bytes[8 * i + b] = static_cast<unsigned char>(bits >> (8 * b));
  }
  bin.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!bin) throw DataError("write failed: " + prefix + ".bin");

  const Grid& g = s.grid;
  json meta = {
      {"schema", kSchema},
      {"dtype", "float64-le"},
      {"layout", "row-major"},
      {"dims", g.dims},
      {"sizes", std::vector<std::size_t>(g.sizes.begin(), g.sizes.begin() + g.dims)},
      {"spacing", std::vector<double>(g.spacing.begin(), g.spacing.begin() + g.dims)},
      {"seed", s.seed},
      {"params", params_json(s.params)},
      {"embedding",
       {{"min_eigenvalue", s.min_eigenvalue}, {"clipped_fraction", s.clipped_fraction}, {"doublings", s.doublings}}},
  };
  std::ofstream side(prefix + ".json");
  if (!side) throw DataError("cannot open " + prefix + ".json for writing");
  side << meta.dump(2) << '\n';
}

FieldSample read_raw(const std::string& prefix) {
  std::ifstream side(prefix + ".json");
  if (!side) throw DataError("cannot open " + prefix + ".json");
  json meta;
  try {
    side >> meta;
  } catch (const json::exception& e) {
    throw DataError(prefix + ".json: " + e.what());
  }
  if (meta.value("schema", "") != kSchema) throw DataError(prefix + ".json: unsupported schema");

  FieldSample s;
  try {
    s.grid.dims = meta.at("dims").get<int>();
    const auto sizes = meta.at("sizes").get<std::vector<std::size_t>>();
    const auto spacing = meta.at("spacing").get<std::vector<double>>();
    if (sizes.size() != static_cast<std::size_t>(s.grid.dims) || spacing.size() != sizes.size()) {
      throw DataError(prefix + ".json: sizes/spacing do not match dims");
    }
    for (std::size_t a = 0; a < sizes.size(); ++a) {
      s.grid.sizes[a] = sizes[a];
      s.grid.spacing[a] = spacing[a];
    }
    s.seed = meta.at("seed").get<std::uint64_t>();
    const auto& p = meta.at("params");
    s.params = {p.at("alpha").get<double>(), p.at("gamma").get<double>(), p.at("lambda").get<double>(),
                p.at("n").get<int>()};
    const auto& e = meta.at("embedding");
    s.min_eigenvalue = e.at("min_eigenvalue").get<double>();
    s.clipped_fraction = e.at("clipped_fraction").get<double>();
    s.doublings = e.at("doublings").get<int>();
  } catch (const json::exception& e) {
    throw DataError(prefix + ".json: " + e.what());
  }

  std::ifstream bin(prefix + ".bin", std::ios::binary);
  if (!bin) throw DataError("cannot open " + prefix + ".bin");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(bin)), std::istreambuf_iterator<char>());
  if (bytes.size() != 8 * s.grid.total()) throw DataError(prefix + ".bin: size does not match grid");
  s.values.resize(s.grid.total());
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(bytes[8 * i + b]) << (8 * b);
    s.values[i] = std::bit_cast<double>(bits);
  }
  return s;
}

}  // namespace gwm
