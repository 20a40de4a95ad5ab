#include "evo/genome.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

#include "evo/error.hpp"

namespace evo {

BitString BitString::from_text(std::string_view text) {
  BitString out;
  out.bits.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') throw InvalidInput("bit string may only contain '0' and '1'");
    out.bits.push_back(c == '1' ? 1 : 0);
  }
  return out;
}

std::string BitString::to_text() const {
  std::string s;
  s.reserve(bits.size());
  for (auto b : bits) s.push_back(b ? '1' : '0');
  return s;
}

bool RealVector::within_bounds() const {
  if (values.size() != bounds.size()) return false;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (!bounds[i].contains(values[i])) return false;
  return true;
}

void RealVector::clamp_to_bounds() {
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = bounds[i].clamp(values[i]);
}

bool MoveString::valid() const {
  return std::all_of(moves.begin(), moves.end(),
                     [&](char c) { return alphabet.find(c) != std::string::npos; });
}

std::size_t genome_size(const Genome& g) {
  return std::visit([](const auto& x) { return x.size(); }, g);
}

bool same_shape(const Genome& a, const Genome& b) {
  return a.index() == b.index() && genome_size(a) == genome_size(b);
}

bool genome_valid(const Genome& g) {
  if (const auto* r = std::get_if<RealVector>(&g)) return r->within_bounds();
  if (const auto* m = std::get_if<MoveString>(&g)) return m->valid();
  const auto& b = std::get<BitString>(g);
  return std::all_of(b.bits.begin(), b.bits.end(), [](auto v) { return v <= 1; });
}

std::string genome_to_string(const Genome& g) {
  if (const auto* b = std::get_if<BitString>(&g)) return b->to_text();
  if (const auto* m = std::get_if<MoveString>(&g)) return m->moves;
  const auto& r = std::get<RealVector>(g);
  std::string s = "[";
  for (std::size_t i = 0; i < r.values.size(); ++i) {
    if (i) s += ",";
    s += format_double(r.values[i]);
  }
  return s + "]";
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::uint64_t decode_binary_integer(const BitString& bits) {
  if (bits.bits.empty()) throw InvalidInput("cannot decode an empty bit string");
  if (bits.bits.size() > 64) throw InvalidInput("bit string longer than 64 bits");
  std::uint64_t v = 0;
  for (auto b : bits.bits) v = (v << 1) | (b ? 1u : 0u);
  return v;
}

std::vector<std::uint64_t> decode_binary_vector(const BitString& bits,
                                                std::span<const std::size_t> field_widths) {
  const auto total = std::accumulate(field_widths.begin(), field_widths.end(), std::size_t{0});
  if (total != bits.size())
    throw InvalidInput("field widths sum to " + std::to_string(total) + " but bit string has " +
                       std::to_string(bits.size()) + " bits");
  std::vector<std::uint64_t> out;
  out.reserve(field_widths.size());
  std::size_t pos = 0;
  for (auto w : field_widths) {
    if (w == 0) throw InvalidInput("field widths must be positive");
    BitString field;
    field.bits.assign(bits.bits.begin() + static_cast<std::ptrdiff_t>(pos),
                      bits.bits.begin() + static_cast<std::ptrdiff_t>(pos + w));
    out.push_back(decode_binary_integer(field));
    pos += w;
  }
  return out;
}

std::size_t best_index(const Population& pop) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < pop.size(); ++i)
    if (pop[i].fitness > pop[best].fitness) best = i;
  return best;
}

double mean_fitness(const Population& pop) {
  if (pop.empty()) return 0.0;
  double s = 0.0;
  for (const auto& ind : pop) s += ind.fitness;
  return s / static_cast<double>(pop.size());
}

}  // namespace evo
