#include "evo/hp_lattice.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include "evo/error.hpp"

namespace evo::hp {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

Vec3 absolute_direction(char m) {
  switch (m) {
    case 'L': return {-1, 0, 0};
    case 'R': return {1, 0, 0};
    case 'F': return {0, 1, 0};
    case 'B': return {0, -1, 0};
    case 'U': return {0, 0, 1};
    case 'D': return {0, 0, -1};
    default: throw InvalidInput(std::string("invalid absolute move '") + m + "'");
  }
}

void finish(Conformation& conf) {
  std::map<std::tuple<int, int, int>, std::size_t> occupancy;
  for (const auto& p : conf.coords) ++occupancy[{p.x, p.y, p.z}];
  conf.collision_count = 0;
  for (const auto& [site, count] : occupancy) conf.collision_count += count - 1;
  conf.feasible = conf.collision_count == 0;
}

}  // namespace

HPSequence HPSequence::parse(std::string_view text) {
  HPSequence seq;
  for (char c : trim(text)) {
    if (c == 'H' || c == 'h') seq.residues.push_back(Residue::H);
    else if (c == 'P' || c == 'p') seq.residues.push_back(Residue::P);
    else throw InvalidInput(std::string("invalid residue '") + c + "' in HP sequence");
  }
  if (seq.residues.empty()) throw InvalidInput("empty HP sequence");
  return seq;
}

std::string HPSequence::to_string() const {
  std::string s;
  for (auto r : residues) s.push_back(r == Residue::H ? 'H' : 'P');
  return s;
}

std::vector<HPSequence> read_sequences(std::istream& in) {
  std::vector<HPSequence> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto t = trim(line);
    if (!t.empty()) out.push_back(HPSequence::parse(t));
  }
  return out;
}

std::vector<HPSequence> read_sequence_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open sequence file '" + path + "'");
  return read_sequences(in);
}

EnergyScheme EnergyScheme::preset(int number) {
  switch (number) {
    case 1: return scheme1();
    case 2: return scheme2();
    case 3: return scheme3();
    default: throw InvalidInput("energy scheme must be 1, 2 or 3");
  }
}

std::string_view alphabet(Encoding e) {
  return e == Encoding::Relative ? kRelativeAlphabet : kAbsoluteAlphabet;
}

std::size_t move_count(Encoding e, std::size_t residues) {
  const std::size_t fixed = e == Encoding::Relative ? 2 : 1;
  return residues > fixed ? residues - fixed : 0;
}

Conformation decode_absolute(std::string_view moves) {
  Conformation conf;
  conf.coords.reserve(moves.size() + 1);
  conf.coords.push_back({0, 0, 0});
  for (char m : moves) conf.coords.push_back(conf.coords.back() + absolute_direction(m));
  finish(conf);
  return conf;
}

Conformation decode_relative(std::string_view moves) {
  Conformation conf;
  conf.coords.reserve(moves.size() + 2);
  conf.coords.push_back({0, 0, 0});
  conf.coords.push_back({1, 0, 0});
  Vec3 f{1, 0, 0}, u{0, 0, 1};
  for (char m : moves) {
    const Vec3 l = cross(u, f);
    Vec3 step;
    switch (m) {
      case 'F': step = f; break;
      case 'L': step = l; break;
      case 'R': step = -l; break;
      case 'U': step = u; u = -f; break;
      case 'D': step = -u; u = f; break;
      default: throw InvalidInput(std::string("invalid relative move '") + m + "'");
    }
    f = step;
    conf.coords.push_back(conf.coords.back() + step);
  }
  finish(conf);
  return conf;
}

Conformation decode(std::string_view moves, Encoding encoding) {
  return encoding == Encoding::Relative ? decode_relative(moves) : decode_absolute(moves);
}

Conformation parse_relative_conformation(std::string_view text) {
  const auto t = trim(text);
  for (char c : t)
    if (kRelativeAlphabet.find(c) == std::string_view::npos)
      throw InvalidInput(std::string("parse error: '") + c + "' is not a relative move (FLRUD)");
  return decode_relative(t);
}

ContactCounts count_contacts(const std::vector<Vec3>& coords, const HPSequence& seq) {
  if (coords.size() != seq.size())
    throw InvalidInput("conformation has " + std::to_string(coords.size()) +
                       " residues but the sequence has " + std::to_string(seq.size()));
  ContactCounts c;
  for (std::size_t i = 0; i < coords.size(); ++i)
    for (std::size_t j = i + 2; j < coords.size(); ++j) {
      if (manhattan(coords[i], coords[j]) != 1) continue;
      const bool hi = seq.residues[i] == Residue::H, hj = seq.residues[j] == Residue::H;
      if (hi && hj) ++c.hh;
      else if (hi) ++c.hp;
      else if (hj) ++c.ph;
      else ++c.pp;
    }
  return c;
}

double energy(const Conformation& conf, const HPSequence& seq, const EnergyScheme& scheme) {
  return count_contacts(conf.coords, seq).energy(scheme);
}

Fitness fitness(std::string_view moves, const HPSequence& seq, const EnergyScheme& scheme,
                const FeasibilityPolicy& policy, Encoding encoding) {
  const Conformation conf = decode(moves, encoding);
  const double e = energy(conf, seq, scheme);
  if (conf.feasible) return -e;
  if (std::holds_alternative<DeletePolicy>(policy)) return std::nullopt;
  const double c = std::get<PenaltyPolicy>(policy).per_collision;
  return -e - c * static_cast<double>(conf.collision_count);
}

std::string random_feasible_genome(std::size_t residues, Random& rng, std::size_t max_retries,
                                   Encoding encoding) {
  if (max_retries == 0) throw InvalidInput("max_retries must be >= 1");
  const auto alpha = alphabet(encoding);
  const std::size_t len = move_count(encoding, residues);
  std::string moves(len, alpha[0]);
  for (std::size_t attempt = 0; attempt < max_retries; ++attempt) {
    for (auto& c : moves) c = alpha[rng.index(alpha.size())];
    if (decode(moves, encoding).feasible) return moves;
  }
  throw InitializationFailure("no self-avoiding conformation found in " +
                              std::to_string(max_retries) + " draws");
}

Problem make_problem(const HPSequence& seq, const EnergyScheme& scheme,
                     const FeasibilityPolicy& policy, Encoding encoding,
                     std::size_t max_retries) {
  Problem p;
  p.name = "hp:" + seq.to_string();
  const std::string alpha(alphabet(encoding));
  const bool must_be_feasible = std::holds_alternative<DeletePolicy>(policy);
  p.sample = [seq, alpha, encoding, max_retries, must_be_feasible](Random& rng) -> Genome {
    MoveString g{alpha, {}};
    if (must_be_feasible) {
      g.moves = random_feasible_genome(seq.size(), rng, max_retries, encoding);
    } else {
      g.moves.resize(move_count(encoding, seq.size()));
      for (auto& c : g.moves) c = alpha[rng.index(alpha.size())];
    }
    return g;
  };
  p.evaluate = [seq, scheme, policy, encoding](const Genome& g) -> Fitness {
    const auto* m = std::get_if<MoveString>(&g);
    if (!m) throw InvalidInput("HP problems take move-string genomes");
    return fitness(m->moves, seq, scheme, policy, encoding);
  };
  return p;
}

void write_conformation(std::ostream& out, std::string_view moves, const Conformation& conf,
                        const HPSequence& seq, double energy_value) {
  if (conf.coords.size() != seq.size())
    throw InvalidInput("conformation and sequence lengths differ");
  out << "moves " << moves << '\n';
  for (std::size_t i = 0; i < conf.coords.size(); ++i) {
    const auto& p = conf.coords[i];
    out << p.x << ' ' << p.y << ' ' << p.z << ' '
        << (seq.residues[i] == Residue::H ? 'H' : 'P') << '\n';
  }
  out << "energy " << format_double(energy_value) << '\n';
}

ConformationRecord read_conformation(std::istream& in) {
  ConformationRecord rec;
  std::string line;
  bool have_moves = false, have_energy = false;
  std::string residues;
  while (std::getline(in, line)) {
    const auto t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::istringstream ls(t);
    std::string head;
    ls >> head;
    if (head == "moves") {
      ls >> rec.moves;
      have_moves = true;
    } else if (head == "energy") {
      if (!(ls >> rec.energy)) throw InvalidInput("malformed energy line");
      have_energy = true;
    } else {
      std::istringstream cs(t);
      Vec3 p;
      char type = 0;
      if (!(cs >> p.x >> p.y >> p.z >> type) || (type != 'H' && type != 'P'))
        throw InvalidInput("malformed residue line '" + t + "'");
      rec.coords.push_back(p);
      residues.push_back(type);
    }
  }
  if (!have_moves || !have_energy || residues.empty())
    throw InvalidInput("conformation block needs moves, residues and energy");
  rec.sequence = HPSequence::parse(residues);
  return rec;
}

}  // namespace evo::hp
