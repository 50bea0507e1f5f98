#pragma once
// Congruence fingerprints. Lattice assemblies get an exact canonical form over the
// cubic point group and lattice translations; anything else gets a distance-multiset
// invariant that is reliable at the scale of a handful of cells but not complete.

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "octet/assembly.hpp"

namespace octet {

struct Fingerprint {
  std::string bytes;

  bool lattice() const { return !bytes.empty() && bytes[0] == 'L'; }
  std::string hex() const { return hex64(fnv1a(bytes)); }

  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
  friend auto operator<=>(const Fingerprint&, const Fingerprint&) = default;
};

namespace detail {

inline char species_char(Species s) {
  switch (s) {
    case Species::TetraUp: return 'u';
    case Species::TetraDown: return 'd';
    case Species::Octa: return 'o';
    case Species::HalfOcta: return 'h';
  }
  return '?';
}

inline std::vector<LatticePlacement> normalized(std::vector<LatticePlacement> cells) {
  LatticePoint lo = cells.front().anchor;
  for (const auto& c : cells) lo = std::min(lo, c.anchor);
  for (auto& c : cells) c.anchor = c.anchor - lo;
  std::sort(cells.begin(), cells.end());
  return cells;
}

}  // namespace detail

/// Lexicographic minimum, over the 48 signed permutations, of the sorted
/// translation-normalized cell list.
inline Fingerprint fingerprint(const LatticeAssembly& a) {
  if (a.empty()) throw EmptyAssembly("cannot fingerprint an empty assembly");
  std::vector<LatticePlacement> best;
  for (const SignedPermutation& g : SignedPermutation::all()) {
    std::vector<LatticePlacement> img;
    img.reserve(a.size());
    for (const auto& c : a.cells()) img.push_back(g(c));
    img = detail::normalized(std::move(img));
    if (best.empty() || img < best) best = std::move(img);
  }
  std::string out = "L";
  for (const auto& c : best) {
    out += detail::species_char(c.species);
    out += std::to_string(c.anchor.x) + ',' + std::to_string(c.anchor.y) + ',' + std::to_string(c.anchor.z) + ';';
  }
  return {out};
}

/// Shape multiset, total volume and sorted pairwise squared vertex distances
/// (all cell vertices, coincident ones included), rounded to 1e-6.
inline Fingerprint free_fingerprint(std::span<const ConvexCell> cells) {
  if (cells.empty()) throw EmptyAssembly("cannot fingerprint an empty assembly");
  std::map<Shape, int> shapes;
  std::vector<Vec3> pts;
  double vol = 0;
  for (const auto& c : cells) {
    ++shapes[c.shape()];
    vol += c.volume();
    for (const Vec3& v : c.vertices()) pts.push_back(v);
  }
  std::vector<long long> d2;
  d2.reserve(pts.size() * (pts.size() - 1) / 2);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) d2.push_back(std::llround(distance2(pts[i], pts[j]) * 1e6));
  std::sort(d2.begin(), d2.end());
  std::string out = "F";
  for (auto [s, n] : shapes) out += std::string(to_string(s)) + ':' + std::to_string(n) + ';';
  out += "v" + std::to_string(std::llround(vol * 1e6)) + ';';
  for (long long d : d2) out += std::to_string(d) + ',';
  return {out};
}

inline Fingerprint fingerprint(const Assembly& a) {
  if (a.empty()) throw EmptyAssembly("cannot fingerprint an empty assembly");
  if (a.is_lattice()) return fingerprint(a.to_lattice());
  const auto g = a.geometry();
  return free_fingerprint(std::span<const ConvexCell>(g));
}

}  // namespace octet
