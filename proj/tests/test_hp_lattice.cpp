#include <doctest.h>

#include <array>
#include <set>
#include <sstream>

#include "evo/error.hpp"
#include "evo/hp_lattice.hpp"
#include "evo/multimodal.hpp"

using namespace evo;
using namespace evo::hp;

namespace {

/// Independent decoder: tracks the frame explicitly and checks it.
std::vector<Vec3> reference_decode(const std::string& moves) {
  Vec3 f{1, 0, 0}, u{0, 0, 1};
  std::vector<Vec3> c{{0, 0, 0}, {1, 0, 0}};
  for (char m : moves) {
    const Vec3 l = cross(u, f);
    Vec3 step;
    Vec3 nu = u;
    switch (m) {
      case 'F': step = f; break;
      case 'L': step = l; break;
      case 'R': step = -l; break;
      case 'U': step = u; nu = -f; break;
      default: step = -u; nu = f; break;
    }
    f = step;
    u = nu;
    REQUIRE(dot(f, u) == 0);
    REQUIRE(dot(f, f) == 1);
    REQUIRE(dot(u, u) == 1);
    c.push_back(c.back() + step);
  }
  return c;
}

/// Pairwise energy without the library's contact counter.
double pair_energy(const std::vector<Vec3>& c, const HPSequence& s, const EnergyScheme& e) {
  double total = 0;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = i + 2; j < c.size(); ++j)
      if (manhattan(c[i], c[j]) == 1) total += e(s.residues[i], s.residues[j]);
  return total;
}

bool self_avoiding(const std::vector<Vec3>& c) {
  std::set<std::array<int, 3>> seen;
  for (const auto& p : c)
    if (!seen.insert({p.x, p.y, p.z}).second) return false;
  return true;
}

/// Brute force over every relative move string.
std::pair<double, std::uint64_t> brute_force(const HPSequence& seq, const EnergyScheme& e) {
  const std::size_t len = seq.size() < 2 ? 0 : seq.size() - 2;
  std::size_t total = 1;
  for (std::size_t i = 0; i < len; ++i) total *= 5;
  double best = 1e300;
  std::uint64_t count = 0;
  std::string moves(len, 'F');
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t k = code;
    for (auto& m : moves) { m = "FLRUD"[k % 5]; k /= 5; }
    const auto c = reference_decode(moves);
    if (!self_avoiding(c)) continue;
    const double en = pair_energy(c, seq, e);
    if (en < best - 1e-9) { best = en; count = 1; }
    else if (std::abs(en - best) <= 1e-9) ++count;
  }
  return {best, count};
}

/// The 24 proper rotations of the cube as signed permutation matrices.
std::vector<std::array<std::array<int, 3>, 3>> rotations() {
  std::vector<std::array<std::array<int, 3>, 3>> out;
  const std::array<std::array<int, 3>, 6> perms{{{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  for (const auto& p : perms)
    for (int signs = 0; signs < 8; ++signs) {
      std::array<std::array<int, 3>, 3> m{};
      for (int r = 0; r < 3; ++r) m[r][p[r]] = (signs >> r & 1) ? -1 : 1;
      const int det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                      m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                      m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
      if (det == 1) out.push_back(m);
    }
  return out;
}

Vec3 rotate(const std::array<std::array<int, 3>, 3>& m, const Vec3& v) {
  return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z, m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
          m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
}

}  // namespace

TEST_CASE("sequences") {
  CHECK(HPSequence::parse("HPPH").to_string() == "HPPH");
  CHECK_THROWS_AS(HPSequence::parse("HPX"), InvalidInput);
  CHECK_THROWS_AS(HPSequence::parse(""), InvalidInput);
  std::istringstream in("# comment\nHPH\n\nPPHH  \n");
  const auto seqs = read_sequences(in);
  REQUIRE(seqs.size() == 2);
  CHECK(seqs[1].to_string() == "PPHH");
  CHECK(EnergyScheme::preset(2).e_hh == -2.3);
  CHECK(EnergyScheme::preset(3).e_pp == 1.0);
  CHECK_THROWS_AS(EnergyScheme::preset(4), InvalidInput);
  CHECK(move_count(Encoding::Relative, 10) == 8);
  CHECK(move_count(Encoding::Absolute, 10) == 9);
}

TEST_CASE("absolute decoding") {
  const auto straight = decode_absolute("FFF");
  CHECK(straight.coords == std::vector<Vec3>{{0, 0, 0}, {0, 1, 0}, {0, 2, 0}, {0, 3, 0}});
  CHECK(straight.feasible);
  const auto back = decode_absolute("FB");
  CHECK(back.coords[2] == Vec3{0, 0, 0});
  CHECK(back.collision_count == 1);
  CHECK_FALSE(back.feasible);
  const auto c = decode_absolute("RFLF");
  for (std::size_t i = 1; i < c.coords.size(); ++i) CHECK(manhattan(c.coords[i - 1], c.coords[i]) == 1);
  CHECK(decode_absolute("UDLRFB").coords.size() == 7);
}

TEST_CASE("relative decoding") {
  const auto ff = decode_relative("FF");
  CHECK(ff.coords == std::vector<Vec3>{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {3, 0, 0}});
  const auto ll = decode_relative("LL");
  CHECK(ll.coords == std::vector<Vec3>{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}});
  CHECK(manhattan(ll.coords[0], ll.coords[3]) == 1);
  CHECK(ll.feasible);
  for (char m : std::string("LRUD")) {
    const auto cyc = decode_relative(std::string(4, m));
    CHECK_FALSE(cyc.feasible);
    CHECK(cyc.coords[5] == cyc.coords[1]);
  }
  CHECK(decode_relative(std::string(10, 'F')).feasible);
}

TEST_CASE("relative decoding matches the frame rules") {
  Random rng(1);
  for (int t = 0; t < 2000; ++t) {
    std::string moves(rng.index(20), 'F');
    for (auto& m : moves) m = "FLRUD"[rng.index(5)];
    const auto c = decode_relative(moves);
    CHECK(c.coords == reference_decode(moves));
    CHECK(c.feasible == self_avoiding(c.coords));
    for (std::size_t i = 1; i < c.coords.size(); ++i) CHECK(manhattan(c.coords[i - 1], c.coords[i]) == 1);
  }
}

TEST_CASE("energy") {
  const auto square = decode_relative("LL");
  CHECK(energy(square, HPSequence::parse("HHHH"), EnergyScheme::scheme1()) == -1);
  CHECK(energy(square, HPSequence::parse("PPPP"), EnergyScheme::scheme1()) == 0);
  CHECK(energy(square, HPSequence::parse("PPPP"), EnergyScheme::scheme3()) == 1);
  CHECK(energy(square, HPSequence::parse("HPPP"), EnergyScheme::scheme2()) == -1);
  CHECK(energy(decode_relative("FFFF"), HPSequence::parse("HHHHHH"), EnergyScheme::scheme1()) == 0);
  CHECK_THROWS_AS(energy(square, HPSequence::parse("HHH"), EnergyScheme::scheme1()), InvalidInput);

  Random rng(2);
  const auto s1 = EnergyScheme::scheme1();
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = 3 + rng.index(15);
    std::string text(n, 'H');
    for (auto& ch : text) ch = rng.index(2) ? 'H' : 'P';
    const auto seq = HPSequence::parse(text);
    const auto moves = random_feasible_genome(n, rng, 100000);
    const auto c = decode_relative(moves);
    const double e = energy(c, seq, s1);
    CHECK(e == pair_energy(c.coords, seq, s1));
    CHECK(e <= 0);
    CHECK(e == std::floor(e));
    CHECK(e == -double(count_contacts(c.coords, seq).hh));
  }
}

TEST_CASE("fitness and feasibility policies") {
  const auto seq4 = HPSequence::parse("HHHH");
  CHECK(*fitness("LL", seq4, EnergyScheme::scheme1(), DeletePolicy{}) == 1);
  CHECK(*fitness("LL", seq4, EnergyScheme::scheme2(), DeletePolicy{}) == 2.3);
  CHECK_FALSE(fitness("LLLL", HPSequence::parse("HHHHHH"), EnergyScheme::scheme1(), DeletePolicy{}));

  // Penalty arithmetic over every infeasible 9-residue chain, and one
  // chain with two collisions and a single H-H contact pinned exactly.
  const auto seq = HPSequence::parse("HPPPPPPPH");
  bool found = false;
  std::string moves(7, 'F');
  for (std::size_t code = 0; code < 78125; ++code) {
    std::size_t k = code;
    for (auto& m : moves) { m = "FLRUD"[k % 5]; k /= 5; }
    const auto c = decode_relative(moves);
    if (c.feasible) continue;
    const double e = energy(c, seq, EnergyScheme::scheme1());
    CHECK(*fitness(moves, seq, EnergyScheme::scheme1(), PenaltyPolicy{10.0}) ==
          -e - 10.0 * double(c.collision_count));
    CHECK_FALSE(fitness(moves, seq, EnergyScheme::scheme1(), DeletePolicy{}));
    if (found || c.collision_count != 2) continue;
    // Place the only two H residues on one lattice contact.
    for (std::size_t i = 0; i < c.coords.size() && !found; ++i)
      for (std::size_t j = i + 2; j < c.coords.size() && !found; ++j) {
        if (manhattan(c.coords[i], c.coords[j]) != 1) continue;
        std::string text(c.coords.size(), 'P');
        text[i] = text[j] = 'H';
        const auto pair = HPSequence::parse(text);
        if (energy(c, pair, EnergyScheme::scheme1()) != -1) continue;
        found = true;
        CHECK(*fitness(moves, pair, EnergyScheme::scheme1(), PenaltyPolicy{10.0}) == -19);
      }
  }
  CHECK(found);
}

TEST_CASE("enumeration oracle") {
  const auto s1 = EnergyScheme::scheme1();
  const auto hh = enumerate_optimal(HPSequence::parse("HH"), s1);
  CHECK(hh.min_energy == 0);
  CHECK(hh.optimal_count == hh.feasible_count);
  CHECK(enumerate_optimal(HPSequence::parse("HHHH"), s1).min_energy == -1);
  CHECK(enumerate_optimal(HPSequence::parse("HPH"), s1).min_energy == 0);
  CHECK_THROWS_AS(enumerate_optimal(HPSequence::parse(std::string(13, 'H')), s1), InvalidInput);
  CHECK_NOTHROW(enumerate_optimal(HPSequence::parse(std::string(5, 'H')), s1, 5));

  Random rng(3);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 2 + rng.index(7);
    std::string text(n, 'H');
    for (auto& ch : text) ch = rng.index(2) ? 'H' : 'P';
    const auto seq = HPSequence::parse(text);
    const auto scheme = EnergyScheme::preset(1 + int(rng.index(3)));
    const auto oracle = enumerate_optimal(seq, scheme);
    const auto [best, count] = brute_force(seq, scheme);
    CHECK(oracle.min_energy == doctest::Approx(best));
    CHECK(oracle.optimal_count == count);
    const auto par = enumerate_optimal_parallel(seq, scheme, kDefaultMaxEnumerate, 2);
    CHECK(par.min_energy == oracle.min_energy);
    CHECK(par.optimal_count == oracle.optimal_count);
    CHECK(par.feasible_count == oracle.feasible_count);
  }
}

TEST_CASE("long relative move strings") {
  const auto a = parse_relative_conformation("LDLDFLUFDDDFRFRDDFD");
  CHECK(a.coords.size() == 21);
  const auto b = parse_relative_conformation("LDLDLLRLLDRFRDDFD");
  CHECK(b.coords.size() == 19);
  CHECK(parse_relative_conformation(std::string(19, 'F')).feasible);
  CHECK_THROWS_AS(parse_relative_conformation("FFB"), InvalidInput);
}

TEST_CASE("random feasible genomes") {
  Random rng(4);
  for (int t = 0; t < 50; ++t) {
    const auto g = random_feasible_genome(3, rng, 1);
    CHECK(g.size() == 1);
  }
  for (int t = 0; t < 200; ++t) CHECK(decode_relative(random_feasible_genome(15, rng, 100000)).feasible);
  CHECK(decode_absolute(random_feasible_genome(10, rng, 100000, Encoding::Absolute)).feasible);
  Random a(5), b(5);
  CHECK(random_feasible_genome(20, a, 100000) == random_feasible_genome(20, b, 100000));
  CHECK_THROWS_AS(random_feasible_genome(5, rng, 0), InvalidInput);
  CHECK_THROWS_AS(random_feasible_genome(200, rng, 1), InitializationFailure);
}

TEST_CASE("HP problem") {
  const auto seq = HPSequence::parse("HPHPPHHPH");
  const auto p = make_problem(seq, EnergyScheme::scheme1(), DeletePolicy{});
  Random rng(6);
  for (int t = 0; t < 50; ++t) {
    const Genome g = p.sample(rng);
    const auto& m = std::get<MoveString>(g);
    CHECK(m.moves.size() == 7);
    CHECK(m.alphabet == "FLRUD");
    CHECK(p.evaluate(g));
  }
  // A single-position mutant is at Hamming distance 1.
  MoveString m{"FLRUD", "FFLRUDF"};
  MoveString mutant = m;
  mutant.moves[3] = 'F';
  CHECK(distance(m, mutant, DistanceMetric::Hamming) == 1);
}

TEST_CASE("conformation text round trip") {
  const auto seq = HPSequence::parse("HPPHH");
  const auto c = decode_relative("LUL");
  std::ostringstream out;
  write_conformation(out, "LUL", c, seq, energy(c, seq, EnergyScheme::scheme1()));
  std::istringstream in(out.str());
  const auto rec = read_conformation(in);
  CHECK(rec.moves == "LUL");
  CHECK(rec.coords == c.coords);
  CHECK(rec.sequence.to_string() == "HPPHH");
  CHECK(rec.energy == energy(c, seq, EnergyScheme::scheme1()));
  std::istringstream bad("moves F\n0 0 0 H\n");
  CHECK_THROWS_AS(read_conformation(bad), InvalidInput);
}

TEST_CASE("energy is invariant under lattice symmetries") {
  const auto rots = rotations();
  REQUIRE(rots.size() == 24);
  Random rng(7);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 4 + rng.index(12);
    std::string text(n, 'H');
    for (auto& ch : text) ch = rng.index(2) ? 'H' : 'P';
    const auto seq = HPSequence::parse(text);
    const auto c = decode_relative(random_feasible_genome(n, rng, 100000));
    const double e = energy(c, seq, EnergyScheme::scheme2());
    const Vec3 shift{int(rng.index(21)) - 10, int(rng.index(21)) - 10, int(rng.index(21)) - 10};
    for (const auto& r : rots) {
      Conformation moved = c;
      for (auto& p : moved.coords) p = rotate(r, p) + shift;
      CHECK(energy(moved, seq, EnergyScheme::scheme2()) == e);
    }
  }
}
