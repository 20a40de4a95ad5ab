#pragma once

/// @file hp_lattice.hpp
/// HP protein model on the 3D cubic lattice.
///
/// Relative moves {F,L,R,U,D} are read in a frame (forward f, up u) that
/// starts as f=+x, u=+z with left l = u x f. Residues 0 and 1 sit at the
/// origin and +x. After each step the frame becomes
///   F/L/R: f' = step direction, u' = u
///   U:     f' = u,              u' = -f
///   D:     f' = -u,             u' = f
/// Absolute moves use fixed axes L=-x, R=+x, F=+y, B=-y, U=+z, D=-z.

#include <cstdint>
#include <cstdlib>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "evo/evaluate.hpp"
#include "evo/genome.hpp"
#include "evo/random.hpp"

namespace evo::hp {

inline constexpr std::string_view kRelativeAlphabet = "FLRUD";
inline constexpr std::string_view kAbsoluteAlphabet = "UDLRFB";

enum class Residue : std::uint8_t { H, P };

struct Vec3 {
  int x = 0, y = 0, z = 0;
  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
  bool operator==(const Vec3&) const = default;
};

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline int dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline int manhattan(const Vec3& a, const Vec3& b) {
  return std::abs(a.x - b.x) + std::abs(a.y - b.y) + std::abs(a.z - b.z);
}

struct HPSequence {
  std::vector<Residue> residues;

  static HPSequence parse(std::string_view text);
  std::string to_string() const;
  std::size_t size() const { return residues.size(); }
};

/// Reads one H/P sequence per line; blank lines and '#' comments skipped.
std::vector<HPSequence> read_sequences(std::istream& in);
std::vector<HPSequence> read_sequence_file(const std::string& path);

struct Conformation {
  std::vector<Vec3> coords;
  bool feasible = true;
  /// Sum over lattice sites of (occupancy - 1).
  std::size_t collision_count = 0;
};

struct EnergyScheme {
  double e_hh = -1.0, e_hp = 0.0, e_ph = 0.0, e_pp = 0.0;

  static EnergyScheme scheme1() { return {-1.0, 0.0, 0.0, 0.0}; }
  static EnergyScheme scheme2() { return {-2.3, -1.0, -1.0, 0.0}; }
  /// Functional-model energies.
  static EnergyScheme scheme3() { return {-2.0, 1.0, 1.0, 1.0}; }
  static EnergyScheme preset(int number);

  double operator()(Residue a, Residue b) const {
    if (a == Residue::H) return b == Residue::H ? e_hh : e_hp;
    return b == Residue::H ? e_ph : e_pp;
  }
};

struct DeletePolicy {};
struct PenaltyPolicy {
  double per_collision = 2.0;
};
using FeasibilityPolicy = std::variant<DeletePolicy, PenaltyPolicy>;

enum class Encoding { Relative, Absolute };

std::string_view alphabet(Encoding e);
/// Number of moves encoding an n-residue chain (n-2 relative, n-1 absolute).
std::size_t move_count(Encoding e, std::size_t residues);

/// Counts of non-chain lattice contacts by residue-type pair, i < j.
struct ContactCounts {
  std::uint32_t hh = 0, hp = 0, ph = 0, pp = 0;
  double energy(const EnergyScheme& s) const {
    return s.e_hh * hh + s.e_hp * hp + s.e_ph * ph + s.e_pp * pp;
  }
};

Conformation decode_absolute(std::string_view moves);
Conformation decode_relative(std::string_view moves);
Conformation decode(std::string_view moves, Encoding encoding);

/// Validates the alphabet and decodes a relative move string.
Conformation parse_relative_conformation(std::string_view text);

ContactCounts count_contacts(const std::vector<Vec3>& coords, const HPSequence& seq);

/// Sum of E(r_i, r_j) over lattice-adjacent pairs with i + 1 < j.
double energy(const Conformation& conf, const HPSequence& seq, const EnergyScheme& scheme);

/// Maximization-form fitness: -energy for feasible chains. Infeasible chains
/// are rejected (nullopt) under DeletePolicy and scored
/// -energy - c * collisions under PenaltyPolicy.
Fitness fitness(std::string_view moves, const HPSequence& seq, const EnergyScheme& scheme,
                const FeasibilityPolicy& policy, Encoding encoding = Encoding::Relative);

struct OptimumSummary {
  double min_energy = 0.0;
  /// Number of self-avoiding relative move strings attaining the minimum.
  std::uint64_t optimal_count = 0;
  /// Number of self-avoiding relative move strings visited.
  std::uint64_t feasible_count = 0;
};

inline constexpr std::size_t kDefaultMaxEnumerate = 12;

/// Exhaustive depth-first search over relative move strings with
/// self-avoidance pruning. Serial reference.
OptimumSummary enumerate_optimal(const HPSequence& seq, const EnergyScheme& scheme,
                                 std::size_t max_n = kDefaultMaxEnumerate);

/// Same search split over the first two moves across OpenMP threads.
OptimumSummary enumerate_optimal_parallel(const HPSequence& seq, const EnergyScheme& scheme,
                                          std::size_t max_n = kDefaultMaxEnumerate,
                                          int threads = 0);

/// Uniform random move strings until one decodes self-avoiding.
std::string random_feasible_genome(std::size_t residues, Random& rng, std::size_t max_retries,
                                   Encoding encoding = Encoding::Relative);

Problem make_problem(const HPSequence& seq, const EnergyScheme& scheme,
                     const FeasibilityPolicy& policy, Encoding encoding = Encoding::Relative,
                     std::size_t max_retries = 1000);

/// Text block: "moves <m>", one "x y z H|P" line per residue, "energy <e>".
void write_conformation(std::ostream& out, std::string_view moves, const Conformation& conf,
                        const HPSequence& seq, double energy_value);

struct ConformationRecord {
  std::string moves;
  std::vector<Vec3> coords;
  HPSequence sequence;
  double energy = 0.0;
};
ConformationRecord read_conformation(std::istream& in);

}  // namespace evo::hp
