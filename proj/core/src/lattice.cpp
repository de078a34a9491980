// Copyright 2026 The percspin Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "percspin/lattice.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "percspin/io.hpp"

namespace percspin {

void validate_window(const Window& window) {
  if (window.width < 2 || window.height < 2) {
    throw std::invalid_argument("window must be at least 2x2 vertices");
  }
}

BondCell bond_cell(const Window& window, BondId bond) {
  const std::int64_t row_len = bond.orientation == Orientation::kHorizontal
                                   ? window.width - 1
                                   : window.width;
  return BondCell{static_cast<int>(bond.index % row_len),
                  static_cast<int>(bond.index / row_len)};
}

BondId horizontal_bond(const Window& window, int i, int j) {
  if (i < 0 || i >= window.width - 1 || j < 0 || j >= window.height) {
    throw std::out_of_range("horizontal bond cell outside window");
  }
  return BondId{Orientation::kHorizontal,
                static_cast<std::int64_t>(j) * (window.width - 1) + i};
}

BondId vertical_bond(const Window& window, int i, int j) {
  if (i < 0 || i >= window.width || j < 0 || j >= window.height - 1) {
    throw std::out_of_range("vertical bond cell outside window");
  }
  return BondId{Orientation::kVertical,
                static_cast<std::int64_t>(j) * window.width + i};
}

std::int64_t flat_index(const Window& window, BondId bond) {
  const std::int64_t count = bond.orientation == Orientation::kHorizontal
                                 ? window.horizontal_bond_count()
                                 : window.vertical_bond_count();
  if (bond.index < 0 || bond.index >= count) {
    throw std::out_of_range("bond index outside window");
  }
  return bond.orientation == Orientation::kHorizontal
             ? bond.index
             : window.horizontal_bond_count() + bond.index;
}

BondId bond_from_flat(const Window& window, std::int64_t flat) {
  if (flat < 0 || flat >= window.bond_count()) {
    throw std::out_of_range("flat bond index outside window");
  }
  const std::int64_t h = window.horizontal_bond_count();
  if (flat < h) return BondId{Orientation::kHorizontal, flat};
  return BondId{Orientation::kVertical, flat - h};
}

std::pair<Vertex, Vertex> bond_endpoints(const Window& window, BondId bond) {
  const BondCell c = bond_cell(window, bond);
  const std::int64_t gx = window.origin_x + c.i;
  const std::int64_t gy = window.origin_y + c.j;
  if (bond.orientation == Orientation::kHorizontal) {
    return {Vertex{gx, gy}, Vertex{gx + 1, gy}};
  }
  return {Vertex{gx, gy}, Vertex{gx, gy + 1}};
}

DualPoint dual_midpoint(const Window& window, BondId bond) {
  const auto [a, b] = bond_endpoints(window, bond);
  return DualPoint{a.x + b.x, a.y + b.y};
}

BondId nearest_bond(const Window& window, DualPoint point) {
  const bool x_half = (point.x2 & 1) != 0;
  const bool y_half = (point.y2 & 1) != 0;
  if (x_half == y_half) {
    throw std::invalid_argument("point is not a bond midpoint");
  }
  if (x_half) {
    // Horizontal bond (i,j)-(i+1,j) with midpoint (i+1/2, j).
    const std::int64_t i = (point.x2 - 1) / 2 - window.origin_x;
    const std::int64_t j = point.y2 / 2 - window.origin_y;
    if (i < 0 || i >= window.width - 1 || j < 0 || j >= window.height) {
      throw std::out_of_range("dual point outside window");
    }
    return horizontal_bond(window, static_cast<int>(i), static_cast<int>(j));
  }
  const std::int64_t i = point.x2 / 2 - window.origin_x;
  const std::int64_t j = (point.y2 - 1) / 2 - window.origin_y;
  if (i < 0 || i >= window.width || j < 0 || j >= window.height - 1) {
    throw std::out_of_range("dual point outside window");
  }
  return vertical_bond(window, static_cast<int>(i), static_cast<int>(j));
}

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double bond_uniform(std::uint64_t seed, Orientation orientation,
                    std::int64_t global_x, std::int64_t global_y) {
  // Counter-based: the key is the bond identity, not a stream position, so
  // any window enumeration order yields the same label for a given bond.
  const std::uint64_t tag = orientation == Orientation::kHorizontal
                                ? 0x9d5c0d4d3cd4f1a5ull
                                : 0x6a09e667f3bcc909ull;
  std::uint64_t h = splitmix64(seed ^ tag);
  h = splitmix64(h ^ static_cast<std::uint64_t>(global_x));
  h = splitmix64(h ^ static_cast<std::uint64_t>(global_y));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

BondConfig::BondConfig(const Window& window, double p, std::uint64_t seed)
    : window_(window), p_(p), seed_(seed) {
  validate_window(window);
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("p must lie in [0,1]");
  }
  bits_.assign(static_cast<std::size_t>((window.bond_count() + 63) / 64), 0);
}

BondConfig BondConfig::sample(const Window& window, double p,
                              std::uint64_t seed) {
  BondConfig cfg(window, p, seed);
  std::int64_t flat = 0;
  for (int j = 0; j < window.height; ++j) {
    for (int i = 0; i < window.width - 1; ++i, ++flat) {
      if (bond_uniform(seed, Orientation::kHorizontal, window.origin_x + i,
                       window.origin_y + j) < p) {
        cfg.bits_[static_cast<std::size_t>(flat >> 6)] |= 1ull << (flat & 63);
      }
    }
  }
  for (int j = 0; j < window.height - 1; ++j) {
    for (int i = 0; i < window.width; ++i, ++flat) {
      if (bond_uniform(seed, Orientation::kVertical, window.origin_x + i,
                       window.origin_y + j) < p) {
        cfg.bits_[static_cast<std::size_t>(flat >> 6)] |= 1ull << (flat & 63);
      }
    }
  }
  return cfg;
}

BondConfig BondConfig::with_labels(const Window& window, double p,
                                   std::uint64_t seed,
                                   const std::vector<bool>& strong_flags) {
  BondConfig cfg(window, p, seed);
  if (static_cast<std::int64_t>(strong_flags.size()) != window.bond_count()) {
    throw std::invalid_argument("label vector does not match window");
  }
  for (std::size_t k = 0; k < strong_flags.size(); ++k) {
    if (strong_flags[k]) cfg.bits_[k >> 6] |= 1ull << (k & 63);
  }
  return cfg;
}

BondConfig sample_config(const Window& window, double p, std::uint64_t seed) {
  return BondConfig::sample(window, p, seed);
}

std::int64_t BondConfig::strong_count() const {
  std::int64_t n = 0;
  for (std::uint64_t w : bits_) n += __builtin_popcountll(w);
  return n;
}

std::string BondConfig::serialize() const {
  std::ostringstream out;
  out << window_.width << ' ' << window_.height << ' ' << window_.origin_x
      << ' ' << window_.origin_y << ' ' << format_number(p_) << ' ' << seed_
      << '\n';
  static const char* kHex = "0123456789abcdef";
  const std::int64_t bonds = window_.bond_count();
  std::string hex;
  hex.reserve(static_cast<std::size_t>((bonds + 3) / 4));
  for (std::int64_t base = 0; base < bonds; base += 4) {
    unsigned nibble = 0;
    for (int k = 0; k < 4 && base + k < bonds; ++k) {
      nibble |= static_cast<unsigned>(strong_flat(base + k)) << k;
    }
    hex.push_back(kHex[nibble]);
  }
  out << hex << '\n';
  return out.str();
}

BondConfig BondConfig::deserialize(std::string_view text) {
  std::istringstream in{std::string(text)};
  Window window;
  double p = 0.0;
  std::uint64_t seed = 0;
  std::string hex;
  if (!(in >> window.width >> window.height >> window.origin_x >>
        window.origin_y >> p >> seed >> hex)) {
    throw std::invalid_argument("malformed bond configuration text");
  }
  validate_window(window);
  const std::int64_t bonds = window.bond_count();
  if (static_cast<std::int64_t>(hex.size()) != (bonds + 3) / 4) {
    throw std::invalid_argument("label block does not match window size");
  }
  std::vector<bool> strong(static_cast<std::size_t>(bonds), false);
  for (std::int64_t base = 0; base < bonds; base += 4) {
    const char c = hex[static_cast<std::size_t>(base / 4)];
    unsigned nibble = 0;
    if (c >= '0' && c <= '9') {
      nibble = static_cast<unsigned>(c - '0');
    } else if (c >= 'a' && c <= 'f') {
      nibble = static_cast<unsigned>(c - 'a') + 10;
    } else if (c >= 'A' && c <= 'F') {
      nibble = static_cast<unsigned>(c - 'A') + 10;
    } else {
      throw std::invalid_argument("label block is not hex");
    }
    for (int k = 0; k < 4 && base + k < bonds; ++k) {
      strong[static_cast<std::size_t>(base + k)] = (nibble >> k) & 1u;
    }
  }
  return with_labels(window, p, seed, strong);
}

std::vector<BondId> bond_neighbors(const Window& window, BondId bond) {
  std::vector<BondId> out;
  out.reserve(6);
  const auto [a, b] = bond_endpoints(window, bond);
  for (const Vertex& v : {a, b}) {
    const int i = static_cast<int>(v.x - window.origin_x);
    const int j = static_cast<int>(v.y - window.origin_y);
    const BondId incident[4] = {
        {Orientation::kHorizontal, static_cast<std::int64_t>(j) * (window.width - 1) + i - 1},
        {Orientation::kHorizontal, static_cast<std::int64_t>(j) * (window.width - 1) + i},
        {Orientation::kVertical, static_cast<std::int64_t>(j - 1) * window.width + i},
        {Orientation::kVertical, static_cast<std::int64_t>(j) * window.width + i},
    };
    const bool valid[4] = {
        i - 1 >= 0 && i - 1 < window.width - 1,
        i >= 0 && i < window.width - 1,
        j - 1 >= 0 && j - 1 < window.height - 1,
        j >= 0 && j < window.height - 1,
    };
    for (int k = 0; k < 4; ++k) {
      if (valid[k] && !(incident[k] == bond)) out.push_back(incident[k]);
    }
  }
  return out;
}

bool adjacent_weak(const BondConfig& cfg, BondId a, BondId b) {
  if (a == b) return false;
  if (!cfg.weak(a) || !cfg.weak(b)) return false;
  const auto [a0, a1] = bond_endpoints(cfg.window(), a);
  const auto [b0, b1] = bond_endpoints(cfg.window(), b);
  return a0 == b0 || a0 == b1 || a1 == b0 || a1 == b1;
}

}  // namespace percspin
