#include <array>
#include <cmath>
#include <limits>
#include <string>

#include <omp.h>

#include "evo/error.hpp"
#include "evo/hp_lattice.hpp"

namespace evo::hp {

namespace {

constexpr double kEnergyTol = 1e-9;

struct Frame {
  Vec3 f{1, 0, 0};
  Vec3 u{0, 0, 1};
};

// Step direction and updated frame for relative move `m` (index into FLRUD).
std::pair<Vec3, Frame> advance(const Frame& fr, int m) {
  const Vec3 l = cross(fr.u, fr.f);
  switch (m) {
    case 0: return {fr.f, {fr.f, fr.u}};
    case 1: return {l, {l, fr.u}};
    case 2: return {-l, {-l, fr.u}};
    case 3: return {fr.u, {fr.u, -fr.f}};
    default: return {-fr.u, {-fr.u, fr.f}};
  }
}

// Depth-first self-avoiding walk search with incremental contact counts.
class Search {
 public:
  Search(const HPSequence& seq, const EnergyScheme& scheme)
      : seq_(seq),
        scheme_(scheme),
        n_(static_cast<int>(seq.size())),
        side_(2 * n_ + 3),
        grid_(static_cast<std::size_t>(side_) * side_ * side_, -1),
        pos_(seq.size()) {
    place(0, {0, 0, 0});
    place(1, {1, 0, 0});
  }

  // Applies a fixed prefix of moves; false if the prefix self-intersects.
  bool apply_prefix(const std::vector<int>& moves, Frame& frame) {
    int k = 2;
    for (int m : moves) {
      auto [step, next] = advance(frame, m);
      const Vec3 p = pos_[k - 1] + step;
      if (occupant(p) >= 0) return false;
      place(k++, p);
      frame = next;
    }
    depth_ = k;
    return true;
  }

  void run(const Frame& frame) { dfs(depth_, frame); }

  OptimumSummary result() const { return {best_, best_count_, feasible_}; }

 private:
  std::size_t cell(const Vec3& p) const {
    const int o = n_ + 1;
    return (static_cast<std::size_t>(p.x + o) * side_ + (p.y + o)) * side_ + (p.z + o);
  }
  int occupant(const Vec3& p) const { return grid_[cell(p)]; }

  void tally(int j, int k, int sign) {
    const bool hj = seq_.residues[j] == Residue::H, hk = seq_.residues[k] == Residue::H;
    auto& c = hj ? (hk ? counts_.hh : counts_.hp) : (hk ? counts_.ph : counts_.pp);
    c = static_cast<std::uint32_t>(static_cast<int>(c) + sign);
  }

  void contacts(int k, const Vec3& p, int sign) {
    static constexpr std::array<Vec3, 6> kNeighbours = {
        Vec3{1, 0, 0}, Vec3{-1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, -1, 0}, Vec3{0, 0, 1}, Vec3{0, 0, -1}};
    for (const auto& d : kNeighbours) {
      const int j = occupant(p + d);
      if (j >= 0 && j + 1 < k) tally(j, k, sign);
    }
  }

  void place(int k, const Vec3& p) {
    pos_[k] = p;
    grid_[cell(p)] = k;
    contacts(k, p, +1);
  }

  void remove(int k) {
    contacts(k, pos_[k], -1);
    grid_[cell(pos_[k])] = -1;
  }

  void dfs(int k, const Frame& frame) {
    if (k == n_) {
      ++feasible_;
      const double e = counts_.energy(scheme_);
      if (e < best_ - kEnergyTol) {
        best_ = e;
        best_count_ = 1;
      } else if (std::abs(e - best_) <= kEnergyTol) {
        ++best_count_;
      }
      return;
    }
    for (int m = 0; m < 5; ++m) {
      auto [step, next] = advance(frame, m);
      const Vec3 p = pos_[k - 1] + step;
      if (occupant(p) >= 0) continue;
      place(k, p);
      dfs(k + 1, next);
      remove(k);
    }
  }

  const HPSequence& seq_;
  EnergyScheme scheme_;
  int n_;
  int side_;
  std::vector<int> grid_;
  std::vector<Vec3> pos_;
  ContactCounts counts_;
  int depth_ = 2;
  double best_ = std::numeric_limits<double>::infinity();
  std::uint64_t best_count_ = 0;
  std::uint64_t feasible_ = 0;
};

void check_size(const HPSequence& seq, std::size_t max_n) {
  if (seq.size() > max_n)
    throw InvalidInput("exhaustive enumeration refused: sequence length " +
                       std::to_string(seq.size()) + " exceeds limit " + std::to_string(max_n));
}

OptimumSummary merge(const OptimumSummary& a, const OptimumSummary& b) {
  OptimumSummary out;
  out.feasible_count = a.feasible_count + b.feasible_count;
  if (b.optimal_count == 0) {
    out.min_energy = a.min_energy;
    out.optimal_count = a.optimal_count;
  } else if (a.optimal_count == 0 || b.min_energy < a.min_energy - kEnergyTol) {
    out.min_energy = b.min_energy;
    out.optimal_count = b.optimal_count;
  } else if (std::abs(a.min_energy - b.min_energy) <= kEnergyTol) {
    out.min_energy = a.min_energy;
    out.optimal_count = a.optimal_count + b.optimal_count;
  } else {
    out.min_energy = a.min_energy;
    out.optimal_count = a.optimal_count;
  }
  return out;
}

}  // namespace

OptimumSummary enumerate_optimal(const HPSequence& seq, const EnergyScheme& scheme,
                                 std::size_t max_n) {
  check_size(seq, max_n);
  if (seq.size() < 2) return {0.0, 1, 1};
  Search s(seq, scheme);
  s.run(Frame{});
  return s.result();
}

OptimumSummary enumerate_optimal_parallel(const HPSequence& seq, const EnergyScheme& scheme,
                                          std::size_t max_n, int threads) {
  check_size(seq, max_n);
  if (seq.size() < 4) return enumerate_optimal(seq, scheme, max_n);
  if (threads <= 0) threads = omp_get_max_threads();

  constexpr int kPrefixes = 25;
  std::array<OptimumSummary, kPrefixes> partial{};
#pragma omp parallel for num_threads(threads) schedule(dynamic, 1)
  for (int p = 0; p < kPrefixes; ++p) {
    Search s(seq, scheme);
    Frame frame;
    if (s.apply_prefix({p / 5, p % 5}, frame)) {
      s.run(frame);
      partial[p] = s.result();
    }
  }
  OptimumSummary total{std::numeric_limits<double>::infinity(), 0, 0};
  for (const auto& r : partial) total = merge(total, r);
  return total;
}

}  // namespace evo::hp
