#include "scr/cli_support.hpp"

#include "scr/errors.hpp"
#include "scr/io.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace scr::cli {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : text) {
    if (c == sep) {
      parts.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  parts.push_back(current);
  return parts;
}

Index parse_positive(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used != text.size() || v < 1) throw std::invalid_argument(what);
    return static_cast<Index>(v);
  } catch (const std::exception&) {
    throw PreconditionError("invalid " + what + " '" + text + "'");
  }
}

struct EtfSpec {
  Index m = 0;
  Index n_half = 0;
  std::uint64_t seed = 0;
  int iterations = 5000;
};

EtfSpec parse_etf_params(const std::vector<std::string>& parts) {
  if (parts.size() < 2) {
    throw PreconditionError("etf spec needs a size, e.g. etf:64x80:seed=7");
  }
  EtfSpec spec;
  const auto dims = split(parts[1], 'x');
  if (dims.size() != 2) {
    throw PreconditionError("etf size must look like MxN");
  }
  spec.m = parse_positive(dims[0], "etf rows");
  spec.n_half = parse_positive(dims[1], "etf half width");
  for (std::size_t i = 2; i < parts.size(); ++i) {
    const auto kv = split(parts[i], '=');
    if (kv.size() != 2) {
      throw PreconditionError("etf option '" + parts[i] +
                              "' must look like key=value");
    }
    if (kv[0] == "seed") {
      spec.seed = static_cast<std::uint64_t>(std::stoull(kv[1]));
    } else if (kv[0] == "iters") {
      spec.iterations = static_cast<int>(parse_positive(kv[1], "etf iters"));
    } else {
      throw PreconditionError("unknown etf option '" + kv[0] + "'");
    }
  }
  return spec;
}

Dictionary etf_half(const EtfSpec& spec, bool second_half) {
  const Dictionary frame =
      build_etf_approx(spec.m, 2 * spec.n_half, spec.iterations, spec.seed);
  const Matrix half = second_half
                          ? frame.entries().rightCols(spec.n_half)
                          : frame.entries().leftCols(spec.n_half);
  return Dictionary(half, second_half ? "etf-b" : "etf-a");
}

}  // namespace

Dictionary parse_dictionary_spec(const std::string& spec) {
  const auto parts = split(spec, ':');
  const std::string& kind = parts[0];
  if (kind == "etf-partner") {
    throw PreconditionError(
        "etf-partner is only meaningful as the second dictionary of a pair");
  }
  if (kind == "etf") {
    return etf_half(parse_etf_params(parts), false);
  }
  if (kind == "file") {
    if (parts.size() < 2 || parts[1].empty()) {
      throw PreconditionError("file spec needs a path, e.g. file:dict.mat");
    }
    std::string label = parts[1];
    for (std::size_t i = 2; i < parts.size(); ++i) {
      const auto kv = split(parts[i], '=');
      if (kv.size() == 2 && kv[0] == "label") label = kv[1];
    }
    return load_dictionary(parts[1], label);
  }
  if (parts.size() < 2) {
    throw PreconditionError("dictionary spec '" + spec +
                            "' needs a size, e.g. dft:64");
  }
  const Index size = parse_positive(parts[1], "dictionary size");
  if (kind == "dft") return build_dft(size);
  if (kind == "identity") return build_identity(size);
  if (kind == "hadamard") return build_hadamard(size);
  if (kind == "dct2d") return build_dct2d(size);
  if (kind == "haar2d") {
    int octaves = 3;
    for (std::size_t i = 2; i < parts.size(); ++i) {
      const auto kv = split(parts[i], '=');
      if (kv.size() == 2 && kv[0] == "octaves") {
        octaves = static_cast<int>(parse_positive(kv[1], "octaves"));
      }
    }
    return build_haar2d(size, octaves);
  }
  throw PreconditionError("unknown dictionary kind '" + kind + "'");
}

std::pair<Dictionary, Dictionary> parse_dictionary_pair(
    const std::string& spec_a, const std::string& spec_b) {
  if (spec_b == "etf-partner") {
    const auto parts = split(spec_a, ':');
    if (parts[0] != "etf") {
      throw PreconditionError(
          "etf-partner requires the first dictionary to be an etf spec");
    }
    const EtfSpec spec = parse_etf_params(parts);
    return {etf_half(spec, false), etf_half(spec, true)};
  }
  return {parse_dictionary_spec(spec_a), parse_dictionary_spec(spec_b)};
}

IndexSet parse_index_list(const std::string& text) {
  IndexSet out;
  if (text.empty()) return out;
  for (const std::string& token : split(text, ',')) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(token, &used);
      if (used != token.size() || v < 0) throw std::invalid_argument(token);
      out.push_back(static_cast<Index>(v));
    } catch (const std::exception&) {
      throw PreconditionError("invalid index '" + token + "'");
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::pair<Index, Index> parse_range(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 2) {
    throw PreconditionError("range '" + text + "' must look like LO:HI");
  }
  try {
    const long long lo = std::stoll(parts[0]);
    const long long hi = std::stoll(parts[1]);
    if (lo < 0 || hi < lo) throw std::invalid_argument(text);
    return {static_cast<Index>(lo), static_cast<Index>(hi)};
  } catch (const std::exception&) {
    throw PreconditionError("invalid range '" + text + "'");
  }
}

CoherenceProfile parse_profile(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 3 && parts.size() != 4) {
    throw PreconditionError(
        "profile must be mu_a,mu_b,mu_m or mu_a,mu_b,mu_m,mu_d");
  }
  CoherenceProfile prof;
  try {
    prof.mu_a = std::stod(parts[0]);
    prof.mu_b = std::stod(parts[1]);
    prof.mu_m = std::stod(parts[2]);
    prof.mu_d = parts.size() == 4
                    ? std::stod(parts[3])
                    : std::max({prof.mu_a, prof.mu_b, prof.mu_m});
  } catch (const std::exception&) {
    throw PreconditionError("invalid profile '" + text + "'");
  }
  for (double v : {prof.mu_a, prof.mu_b, prof.mu_m, prof.mu_d}) {
    if (v < 0.0 || v > 1.0 + 1e-9) {
      throw PreconditionError("profile values must lie in [0, 1]");
    }
  }
  return prof;
}

void ConfigEcho::add(const std::string& key, const std::string& value) {
  entries_.emplace_back(key, value);
}

void ConfigEcho::add(const std::string& key, double value) {
  std::ostringstream s;
  s << std::setprecision(17) << value;
  entries_.emplace_back(key, s.str());
}

void ConfigEcho::add(const std::string& key, Index value) {
  entries_.emplace_back(key, std::to_string(value));
}

std::uint64_t ConfigEcho::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const auto mix = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& [k, v] : entries_) {
    mix(k);
    h ^= 0x3d;
    h *= 0x100000001b3ULL;
    mix(v);
    h ^= 0x0a;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void ConfigEcho::write_header(std::ostream& out) const {
  for (const auto& [k, v] : entries_) {
    out << "# " << k << '=' << v << '\n';
  }
  out << "# config_hash=" << std::hex << hash() << std::dec << '\n';
}

}  // namespace scr::cli
