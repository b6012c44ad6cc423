#pragma once

#include "scr/dictionary.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace scr::cli {

// Dictionary spec mini-language:
//   dft:M  identity:M  hadamard:M  dct2d:SIDE  haar2d:SIDE[:octaves=K]
//   etf:MxN:seed=S[:iters=K]  (one half of an M x 2N approximate ETF)
//   etf-partner                (the other half; only valid as the second spec)
//   file:PATH[:label=NAME]
Dictionary parse_dictionary_spec(const std::string& spec);

// Parses a pair, resolving `etf-partner` in the second slot against the
// first spec's frame.
std::pair<Dictionary, Dictionary> parse_dictionary_pair(
    const std::string& spec_a, const std::string& spec_b);

// "3,17,42" -> sorted unique 0-based indices.
IndexSet parse_index_list(const std::string& text);

// "LO:HI" inclusive integer range.
std::pair<Index, Index> parse_range(const std::string& text);

// "mu_a,mu_b,mu_m[,mu_d]"; mu_d defaults to the max of the three.
CoherenceProfile parse_profile(const std::string& text);

// Effective-config echo: ordered key=value pairs, written as CSV comment
// lines together with an FNV-1a hash for provenance.
class ConfigEcho {
 public:
  void add(const std::string& key, const std::string& value);
  void add(const std::string& key, double value);
  void add(const std::string& key, Index value);
  std::uint64_t hash() const;
  void write_header(std::ostream& out) const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace scr::cli
