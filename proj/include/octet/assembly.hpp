#pragma once
// Mixed assemblies of lattice and free cells, and the derivation record that built them.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "octet/cell.hpp"
#include "octet/lattice.hpp"
#include "octet/overlap.hpp"

namespace octet {

struct DerivationStep {
  std::string rule;
  std::size_t host = 0;
  std::size_t feature = 0;
  std::size_t variant = 0;
  friend bool operator==(const DerivationStep&, const DerivationStep&) = default;
};

/// `initial` names a species ("octa", "tetra", ...) or a pipeline product
/// ("fundamental_unit", "half_module", "hexagonal_module").
struct DerivationScript {
  std::string initial = "octa";
  std::vector<DerivationStep> steps;
  friend bool operator==(const DerivationScript&, const DerivationScript&) = default;
};

struct AssemblyCell {
  ConvexCell cell;
  std::optional<LatticePlacement> placement;
  std::uint8_t tags = kTagNone;
};

/// 64-bit FNV-1a, used for short digests.
inline std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 14695981039346656037ull) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = digits[v & 15];
  return s;
}

/// Cells in insertion order. Cells lying on honeycomb positions are kept in exact
/// form alongside their floating geometry.
class Assembly {
 public:
  Assembly() = default;

  static Assembly from_lattice(const LatticeAssembly& la) {
    Assembly a;
    for (std::size_t i = 0; i < la.size(); ++i) a.add(la.cell(i), la.tags(i));
    return a;
  }

  void add(const LatticePlacement& p, std::uint8_t tags = kTagNone) {
    p.validate();
    cells_.push_back({p.to_cell(), p, tags});
  }

  /// Adds a floating cell, snapping it to its honeycomb placement when it has one.
  void add(const ConvexCell& c, std::uint8_t tags = kTagNone) {
    if (auto p = identify(c)) {
      add(*p, tags);
      return;
    }
    cells_.push_back({c, std::nullopt, tags});
  }

  std::size_t size() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }
  const AssemblyCell& at(std::size_t i) const { return cells_[i]; }
  const ConvexCell& cell(std::size_t i) const { return cells_[i].cell; }
  std::span<const AssemblyCell> cells() const { return cells_; }
  void set_tags(std::size_t i, std::uint8_t t) { cells_[i].tags = t; }

  bool is_lattice() const {
    for (const auto& c : cells_)
      if (!c.placement) return false;
    return true;
  }

  LatticeAssembly to_lattice() const {
    LatticeAssembly la;
    for (const auto& c : cells_) {
      if (!c.placement) throw NotOnLattice("assembly contains a cell off the honeycomb");
      la.add(*c.placement, c.tags);
    }
    return la;
  }

  Rational volume() const {
    Rational v(0);
    for (const auto& c : cells_) v += exact_volume(c.cell.shape());
    return v;
  }

  double measured_volume() const {
    double v = 0;
    for (const auto& c : cells_) v += c.cell.volume();
    return v;
  }

  std::vector<ConvexCell> geometry() const {
    std::vector<ConvexCell> out;
    out.reserve(size());
    for (const auto& c : cells_) out.push_back(c.cell);
    return out;
  }

  /// Applies `iso` to every cell; lattice status is re-derived per cell.
  Assembly transformed(const Isometry& iso) const {
    Assembly out;
    for (const auto& c : cells_) out.add(c.cell.transformed(iso), c.tags);
    out.provenance_ = provenance_;
    return out;
  }

  void append(const Assembly& o) {
    for (const auto& c : o.cells_) cells_.push_back(c);
  }

  const std::optional<DerivationScript>& provenance() const { return provenance_; }
  void set_provenance(DerivationScript s) { provenance_ = std::move(s); }
  void clear_provenance() { provenance_.reset(); }

  /// Exact content digest (order-sensitive); changes whenever any cell changes.
  std::string digest() const {
    std::string buf;
    for (const auto& c : cells_) {
      buf += to_string(c.cell.species());
      for (const Vec3& v : c.cell.vertices())
        for (int k = 0; k < 3; ++k) buf += ' ' + std::to_string(std::llround(v[k] * 1e6));
      buf += ';';
    }
    return hex64(fnv1a(buf));
  }

 private:
  std::vector<AssemblyCell> cells_;
  std::optional<DerivationScript> provenance_;
};

/// Returns the index pairs of cells whose interiors overlap (empty when the audit passes).
inline std::vector<std::pair<std::size_t, std::size_t>> overlap_audit(std::span<const ConvexCell> cells) {
  std::vector<std::pair<std::size_t, std::size_t>> bad;
  std::vector<Vec3> centers;
  std::vector<double> radii;
  for (const auto& c : cells) {
    centers.push_back(c.centroid());
    double r = 0;
    for (const Vec3& v : c.vertices()) r = std::max(r, distance(v, centers.back()));
    radii.push_back(r);
  }
  for (std::size_t i = 0; i < cells.size(); ++i)
    for (std::size_t j = i + 1; j < cells.size(); ++j) {
      if (distance(centers[i], centers[j]) >= radii[i] + radii[j]) continue;
      if (interiors_overlap(cells[i], cells[j])) bad.emplace_back(i, j);
    }
  return bad;
}

inline std::vector<std::pair<std::size_t, std::size_t>> overlap_audit(const Assembly& a) {
  const auto g = a.geometry();
  return overlap_audit(std::span<const ConvexCell>(g));
}

inline std::vector<std::pair<std::size_t, std::size_t>> overlap_audit(const LatticeAssembly& a) {
  const auto g = a.to_cells();
  return overlap_audit(std::span<const ConvexCell>(g));
}

}  // namespace octet
