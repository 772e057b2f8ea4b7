#include "lpdisc/pointset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "lpdisc/errors.hpp"

namespace lpdisc {

namespace {

constexpr unsigned kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
                                43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

double parse_real(std::string_view field, std::size_t row, const std::string& source) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (!field.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || field.empty()) {
    throw ValidationError(source + ": row " + std::to_string(row) + ": cannot parse '" +
                          std::string(field) + "' as a real number");
  }
  return value;
}

}  // namespace

GeneratorKind parse_generator_kind(const std::string& name) {
  if (name == "random") return GeneratorKind::random;
  if (name == "grid") return GeneratorKind::grid;
  if (name == "hammersley") return GeneratorKind::hammersley;
  if (name == "corners") return GeneratorKind::corners;
  throw ValidationError("unknown generator kind '" + name + "'");
}

std::string to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::random: return "random";
    case GeneratorKind::grid: return "grid";
    case GeneratorKind::hammersley: return "hammersley";
    case GeneratorKind::corners: return "corners";
  }
  return "unknown";
}

PointSet::PointSet(std::size_t dimension, std::vector<double> coordinates,
                   std::optional<std::vector<double>> coefficients, std::string provenance)
    : dimension_(dimension),
      coordinates_(std::move(coordinates)),
      coefficients_(std::move(coefficients)),
      provenance_(std::move(provenance)) {
  if (dimension_ == 0) throw ValidationError("point set dimension must be >= 1");
  if (coordinates_.size() % dimension_ != 0) {
    throw ValidationError("coordinate count is not a multiple of the dimension");
  }
  for (std::size_t i = 0; i < coordinates_.size(); ++i) {
    const double x = coordinates_[i];
    if (!(x >= 0.0 && x <= 1.0)) {
      throw ValidationError("point " + std::to_string(i / dimension_ + 1) + ": coordinate " +
                            std::to_string(x) + " outside [0,1]");
    }
  }
  if (coefficients_ && coefficients_->size() != size()) {
    throw ValidationError("coefficient count does not match the number of points");
  }
}

PointSet PointSet::without_coefficients() const {
  return PointSet(dimension_, coordinates_, std::nullopt, provenance_);
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  const std::uint64_t key = mix64(mix64(mix64(seed) ^ stream) ^ index);
  return static_cast<double>(key >> 11) * 0x1.0p-53;
}

double radical_inverse(std::uint64_t k, unsigned base) {
  double result = 0.0;
  double scale = 1.0 / base;
  while (k > 0) {
    result += static_cast<double>(k % base) * scale;
    k /= base;
    scale /= base;
  }
  return result;
}

PointSet generate(GeneratorKind kind, std::size_t n, std::size_t d, std::uint64_t seed) {
  if (d == 0) throw ValidationError("generate requires d >= 1");
  if (n == 0 && kind != GeneratorKind::random) {
    throw ValidationError("generate requires n >= 1");
  }
  std::vector<double> coords;
  coords.reserve(n * d);
  std::string provenance = to_string(kind) + " n=" + std::to_string(n) + " d=" + std::to_string(d);

  switch (kind) {
    case GeneratorKind::random:
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < d; ++j) coords.push_back(counter_uniform(seed, k, j));
      }
      provenance += " seed=" + std::to_string(seed);
      break;
    case GeneratorKind::grid: {
      const auto m = static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(n), 1.0 / d)));
      std::size_t total = 1;
      for (std::size_t j = 0; j < d; ++j) total *= m;
      if (m == 0 || total != n) {
        throw ValidationError("grid requires n = m^d; got n=" + std::to_string(n) +
                              ", d=" + std::to_string(d));
      }
      for (std::size_t k = 0; k < n; ++k) {
        std::size_t rest = k;
        std::vector<double> point(d);
        for (std::size_t j = d; j-- > 0;) {
          point[j] = static_cast<double>(rest % m) / static_cast<double>(m);
          rest /= m;
        }
        coords.insert(coords.end(), point.begin(), point.end());
      }
      break;
    }
    case GeneratorKind::hammersley:
      if (d > std::size(kPrimes) + 1) throw ValidationError("hammersley supports d <= 26");
      for (std::size_t k = 0; k < n; ++k) {
        coords.push_back(static_cast<double>(k) / static_cast<double>(n));
        for (std::size_t j = 1; j < d; ++j) coords.push_back(radical_inverse(k, kPrimes[j - 1]));
      }
      break;
    case GeneratorKind::corners:
      if (d < 64 && n > (std::size_t{1} << d)) {
        throw ValidationError("corners requires n <= 2^d");
      }
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < d; ++j) coords.push_back(((k >> j) & 1U) ? 0.5 : 0.0);
      }
      break;
  }
  return PointSet(d, std::move(coords), std::nullopt, std::move(provenance));
}

PointSet reflect(const PointSet& points) {
  std::vector<double> coords(points.coordinates().begin(), points.coordinates().end());
  for (double& x : coords) x = 1.0 - x;
  return PointSet(points.dimension(), std::move(coords), points.coefficients(),
                  "reflect(" + points.provenance() + ")");
}

PointSet parse_csv(const std::string& text, const std::string& source) {
  bool weighted = false;
  std::optional<std::size_t> declared_dim;
  std::optional<std::size_t> columns;
  std::vector<double> coords;
  std::vector<double> coefficients;

  std::istringstream in(text);
  std::string raw;
  std::size_t row = 0;
  while (std::getline(in, raw)) {
    std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      const std::string_view tag = trim(line.substr(1));
      if (tag == "weights") {
        if (columns) throw ValidationError(source + ": #weights must precede the data rows");
        weighted = true;
      } else if (tag.starts_with("dim=")) {
        std::size_t dim = 0;
        const auto value = tag.substr(4);
        const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), dim);
        if (ec != std::errc() || ptr != value.data() + value.size() || dim == 0) {
          throw ValidationError(source + ": malformed dimension header '" + std::string(line) + "'");
        }
        declared_dim = dim;
      }
      continue;
    }
    ++row;
    const auto fields = split_fields(line);
    if (!columns) {
      columns = fields.size();
      if (weighted && *columns < 2) {
        throw ValidationError(source + ": row 1: weighted rows need a coordinate and a coefficient");
      }
    } else if (fields.size() != *columns) {
      throw ValidationError(source + ": row " + std::to_string(row) + ": expected " +
                            std::to_string(*columns) + " fields, found " +
                            std::to_string(fields.size()));
    }
    const std::size_t d = weighted ? *columns - 1 : *columns;
    for (std::size_t j = 0; j < d; ++j) {
      const double x = parse_real(fields[j], row, source);
      if (!(x >= 0.0 && x <= 1.0)) {
        throw ValidationError(source + ": row " + std::to_string(row) + ": coordinate " +
                              std::string(fields[j]) + " outside [0,1]");
      }
      coords.push_back(x);
    }
    if (weighted) coefficients.push_back(parse_real(fields[d], row, source));
  }

  std::size_t d = 1;
  if (columns) {
    d = weighted ? *columns - 1 : *columns;
    if (declared_dim && *declared_dim != d) {
      throw ValidationError(source + ": header declares dim=" + std::to_string(*declared_dim) +
                            " but rows have " + std::to_string(d) + " coordinates");
    }
  } else if (declared_dim) {
    d = *declared_dim;
  }
  std::optional<std::vector<double>> coeffs;
  if (weighted) coeffs = std::move(coefficients);
  return PointSet(d, std::move(coords), std::move(coeffs), source);
}

PointSet read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open point file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str(), path.string());
}

std::string shortest_repr(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

std::string format_csv(const PointSet& points) {
  std::string out = "#dim=" + std::to_string(points.dimension()) + "\n";
  if (points.has_coefficients()) out += "#weights\n";
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto x = points.point(k);
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (j > 0) out += ',';
      out += shortest_repr(x[j]);
    }
    if (points.has_coefficients()) {
      out += ',';
      out += shortest_repr((*points.coefficients())[k]);
    }
    out += '\n';
  }
  return out;
}

void write_csv(const PointSet& points, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write point file " + path.string());
  out << format_csv(points);
}

}  // namespace lpdisc
