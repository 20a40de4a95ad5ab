#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace evo {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  double clamp(double x) const { return x < lo ? lo : (x > hi ? hi : x); }
  bool contains(double x) const { return x >= lo && x <= hi; }
  double width() const { return hi - lo; }
  bool operator==(const Interval&) const = default;
};

/// Fixed-length bit string; bit 0 is the leftmost (most significant) bit.
struct BitString {
  std::vector<std::uint8_t> bits;

  static BitString from_text(std::string_view text);
  std::string to_text() const;
  std::size_t size() const { return bits.size(); }
  bool operator==(const BitString&) const = default;
};

/// Real vector confined to a per-dimension box.
struct RealVector {
  std::vector<double> values;
  std::vector<Interval> bounds;

  std::size_t size() const { return values.size(); }
  bool within_bounds() const;
  void clamp_to_bounds();
  bool operator==(const RealVector&) const = default;
};

/// Symbol string over a finite alphabet (lattice moves).
struct MoveString {
  std::string alphabet;
  std::string moves;

  std::size_t size() const { return moves.size(); }
  bool valid() const;
  bool operator==(const MoveString&) const = default;
};

using Genome = std::variant<BitString, RealVector, MoveString>;

std::size_t genome_size(const Genome& g);
bool same_shape(const Genome& a, const Genome& b);
/// Bounds, alphabet and value-set closure.
bool genome_valid(const Genome& g);
std::string genome_to_string(const Genome& g);

/// Shortest round-trip decimal text of a double.
std::string format_double(double v);

/// Member of a population. Fitness follows the maximization convention.
struct Individual {
  Genome genome;
  double fitness = 0.0;
  bool evaluated = false;
  /// Temporal-locality history; same length as a RealVector genome when set.
  std::optional<std::vector<double>> delta;

  Individual() = default;
  explicit Individual(Genome g) : genome(std::move(g)) {}
  Individual(Genome g, double f) : genome(std::move(g)), fitness(f), evaluated(true) {}
};

using Population = std::vector<Individual>;

/// Unsigned big-endian value of a bit string.
std::uint64_t decode_binary_integer(const BitString& bits);

/// Splits a bit string into consecutive fields and decodes each one.
std::vector<std::uint64_t> decode_binary_vector(const BitString& bits,
                                                std::span<const std::size_t> field_widths);

std::size_t best_index(const Population& pop);
double mean_fitness(const Population& pop);

}  // namespace evo
