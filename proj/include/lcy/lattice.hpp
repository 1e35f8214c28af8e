#ifndef LCY_LATTICE_HPP
#define LCY_LATTICE_HPP

#include <string>
#include <vector>

#include "lcy/linalg.hpp"

namespace lcy {

// Divisor-class lattice with a fixed integer intersection form. Blowups of
// the plane carry diag(1, -1, ..., -1); the exceptional bases of the
// space-map catalog carry no form and support only linear class arithmetic.
struct ClassLattice {
  std::vector<std::string> labels;
  MatZ gram;  // empty when no intersection form is defined
  static ClassLattice blowup_plane(int k) {
    ClassLattice l;
    l.labels.push_back("h");
    for (int i = 1; i <= k; ++i) l.labels.push_back("e" + std::to_string(i));
    l.gram.assign(k + 1, std::vector<long>(k + 1, 0));
    l.gram[0][0] = 1;
    for (int i = 1; i <= k; ++i) l.gram[i][i] = -1;
    return l;
  }
};

struct DivisorClass {
  std::vector<long> coords;
};

inline long intersect(const ClassLattice& l, const DivisorClass& a, const DivisorClass& b) {
  if (l.gram.empty()) throw std::invalid_argument("lattice carries no intersection form");
  if (a.coords.size() != l.labels.size() || b.coords.size() != l.labels.size())
    throw std::invalid_argument("class/lattice size mismatch");
  long s = 0;
  for (size_t i = 0; i < a.coords.size(); ++i)
    for (size_t j = 0; j < b.coords.size(); ++j) s += a.coords[i] * l.gram[i][j] * b.coords[j];
  return s;
}

// Base-change data for one catalog map: rel expresses the target basis in
// the source basis, partner the source basis in the target basis (equal to
// rel for the involutions). minus_k vectors are class coordinates.
struct ClassMatrix {
  std::string name;
  std::vector<std::string> source_labels, target_labels;
  MatZ rel, partner;
  std::vector<long> minus_k_source, minus_k_target;
};

// Raw matrix-vector action of the displayed relation.
inline DivisorClass transform(const ClassMatrix& m, const DivisorClass& c) {
  if (c.coords.size() != m.rel.size()) throw std::invalid_argument("class/matrix size mismatch");
  return DivisorClass{mat_vec(m.rel, c.coords)};
}

// Transport class coordinates from the source basis to the target basis.
inline DivisorClass to_target_coords(const ClassMatrix& m, const DivisorClass& c) {
  return DivisorClass{mat_vec(transpose(m.partner), c.coords)};
}
inline DivisorClass to_source_coords(const ClassMatrix& m, const DivisorClass& c) {
  return DivisorClass{mat_vec(transpose(m.rel), c.coords)};
}

struct CheckReport {
  std::vector<std::pair<std::string, bool>> checks;
  bool all_pass() const {
    for (auto& [n, ok] : checks)
      if (!ok) return false;
    return true;
  }
  void add(const std::string& name, bool ok) { checks.push_back({name, ok}); }
};

// The catalog of class-transformation matrices for the low-bidegree maps.
const ClassMatrix& matrix_bidegree22();
const ClassMatrix& matrix_bidegree32();
const ClassMatrix& matrix_cubo_cubic();
const ClassMatrix& matrix_special_cubo_cubic();

// rel * partner = identity and anticanonical correspondence
CheckReport verify_matrix_pair(const ClassMatrix& m);

// Lattice rows for the surface tables: case tag, blowup count, polarization
// class A; D is always 3h - sum(e_i). double_curve_degree < 0 marks the
// isolated-singularity table (A . D = 0), otherwise A . D = 2 * degree.
struct SurfaceRow {
  std::string tag;
  int k;
  std::vector<long> A;
  int double_curve_degree;  // -1 for the isolated table
  int h0;                   // recorded, not verified
};

const std::vector<SurfaceRow>& surface_table_rows();
CheckReport verify_tables();

// Strict-transform bookkeeping checks for the reduction steps.
CheckReport verify_strict_transforms();

}  // namespace lcy

#endif
