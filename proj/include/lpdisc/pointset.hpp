#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lpdisc {

enum class GeneratorKind { random, grid, hammersley, corners };

GeneratorKind parse_generator_kind(const std::string& name);
std::string to_string(GeneratorKind kind);

/// N points in [0,1]^d, optionally with one real coefficient per point.
/// Without coefficients every point weighs 1/N. Immutable after construction.
class PointSet {
 public:
  /// Coordinates are row-major (point k occupies [k*d, (k+1)*d)).
  PointSet(std::size_t dimension, std::vector<double> coordinates,
           std::optional<std::vector<double>> coefficients = std::nullopt,
           std::string provenance = {});

  static PointSet empty(std::size_t dimension) { return PointSet(dimension, {}); }

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return dimension_ == 0 ? 0 : coordinates_.size() / dimension_; }
  bool is_empty() const { return coordinates_.empty(); }

  std::span<const double> point(std::size_t k) const {
    return {coordinates_.data() + k * dimension_, dimension_};
  }
  std::span<const double> coordinates() const { return coordinates_; }

  bool has_coefficients() const { return coefficients_.has_value(); }
  const std::optional<std::vector<double>>& coefficients() const { return coefficients_; }

  /// Coefficient of point k, or 1/N when the set carries none.
  double weight(std::size_t k) const {
    return coefficients_ ? (*coefficients_)[k] : 1.0 / static_cast<double>(size());
  }

  const std::string& provenance() const { return provenance_; }

  /// Same points, coefficients dropped (weights fall back to 1/N).
  PointSet without_coefficients() const;

  friend bool operator==(const PointSet& a, const PointSet& b) {
    return a.dimension_ == b.dimension_ && a.coordinates_ == b.coordinates_ &&
           a.coefficients_ == b.coefficients_;
  }

 private:
  std::size_t dimension_;
  std::vector<double> coordinates_;
  std::optional<std::vector<double>> coefficients_;
  std::string provenance_;
};

/// Deterministic point generation; coordinates land in [0,1).
///   random     - uniform, counter-based stream keyed by (seed, point, coordinate)
///   grid       - m^d lattice {0, 1/m, ..., (m-1)/m}^d, last coordinate fastest
///   hammersley - (k/n, phi_2(k), phi_3(k), ...) with radical inverses in prime bases
///   corners    - vertices of {0, 1/2}^d, point k taking coordinate j from bit j of k;
///                requires n <= 2^d
PointSet generate(GeneratorKind kind, std::size_t n, std::size_t d, std::uint64_t seed = 0);

/// Component-wise x -> 1 - x. Coefficients are kept.
PointSet reflect(const PointSet& points);

/// Radical inverse of k in the given base.
double radical_inverse(std::uint64_t k, unsigned base);

/// splitmix64 finalizer; building block of every counter-based stream.
std::uint64_t mix64(std::uint64_t x);

/// Uniform double in [0,1) determined by (seed, stream, index) only.
double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

// CSV interchange: one point per line, d comma-separated reals, '#' lines are
// comments. "#weights" switches on a trailing coefficient column and
// "#dim=<d>" pins the dimension (needed for empty files).

PointSet parse_csv(const std::string& text, const std::string& source = "<string>");
PointSet read_csv(const std::filesystem::path& path);
std::string format_csv(const PointSet& points);
void write_csv(const PointSet& points, const std::filesystem::path& path);

/// Shortest decimal string that round-trips to the same double.
std::string shortest_repr(double value);

}  // namespace lpdisc
