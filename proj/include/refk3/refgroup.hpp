// Finite matrix reflection-group engine: closure from generators,
// structural subgroups, orbits/stabilizers, Springer-theory data,
// and Reynolds averaging.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "refk3/exactmath.hpp"
#include "refk3/multipoly.hpp"
#include "refk3/nflinalg.hpp"

namespace refk3 {

// Canonical injective key for a matrix over a fixed field.
std::string matrix_key(const NFMat& m);

struct MatrixGroup {
  FieldPtr F;
  std::vector<NFMat> generators;
  std::vector<NFMat> elements;  // BFS order, elements[0] = identity
  std::unordered_map<std::string, int> index;  // matrix_key -> position
  std::vector<int> degrees;     // invariant degrees (verified against |W|)
  std::vector<int> codegrees;
  std::string name;             // e.g. "G29"

  std::size_t order() const { return elements.size(); }
  bool contains(const NFMat& m) const { return index.count(matrix_key(m)) > 0; }
  int index_of(const NFMat& m) const;

  // lazily computed structural data (mutable caches)
  const std::vector<int>& reflections() const;       // indices of reflections
  const std::vector<int>& center() const;            // indices of central elts
  const std::vector<int>& special_elements() const;  // det = 1 ("W^SL")
  const std::vector<char>& special_mask() const;     // per-element det = 1 flag
  std::size_t derived_order() const;                 // |W'| (closure of commutators)

 private:
  mutable std::vector<int> refl_, center_, special_;
  mutable std::vector<char> special_mask_;
  mutable std::size_t derived_order_ = 0;
};

struct StructureReport {
  std::size_t order = 0;
  int reflection_count = 0;
  std::size_t center_order = 0;
  std::size_t derived_order = 0;
  std::size_t special_order = 0;
  bool derived_equals_special = false;
  bool degree_product_ok = false;  // prod(degrees) == |W|
};

struct ParabolicSubgroup {
  NFVec vector;                // representative vector v with z = [v]
  std::size_t fixator_order;   // |W_v| (pointwise)
  std::size_t stabilizer_order;  // |W_z| (line stabilizer)
  std::size_t stabilizer_special_order;  // |W_z ∩ W^SL|
  std::size_t normalizer_order;          // |N_W(W_v)|
};

struct SpringerData {
  int e = 0;
  int delta = 0;        // #degrees divisible by e
  int delta_star = 0;   // #codegrees divisible by e (0 counts for every e)
  FieldPtr E;           // cyclotomic extension containing the base field and zeta_e
  NFElem zeta;          // image of zeta_e in E
  std::optional<NFMat> w_e;      // witness over E with dim V(w_e, zeta_e) = delta
  std::vector<NFVec> V_e;        // basis of the zeta_e-eigenspace of w_e
  std::size_t setwise_order = 0;   // |{g : g V(e) = V(e)}|
  std::size_t pointwise_order = 0; // |{g : g|_{V(e)} = id}|
  std::size_t We_order = 0;        // setwise / pointwise
};

struct OrbitInfo {
  std::size_t size = 0;
  std::size_t suborbits_special = 0;  // number of W^SL-orbits inside
  std::size_t stabilizer_order = 0;   // |W_z| for a point (orbit-stabilizer)
};

MatrixGroup close_group(const FieldPtr& F, const std::vector<NFMat>& generators,
                        std::size_t cap = 100000);

StructureReport structure_report(const MatrixGroup& W);

ParabolicSubgroup stabilizers(const MatrixGroup& W, const NFVec& v);

// Orbit of a projective point [v].
OrbitInfo orbit_size_point(const MatrixGroup& W, const NFVec& v);
// Orbit of a projective line spanned by two vectors.
OrbitInfo orbit_size_line(const MatrixGroup& W, const NFVec& a, const NFVec& b);

SpringerData springer_data(const MatrixGroup& W, int e);

// Cyclotomic extension E of the group field with a distinguished root of
// unity zeta_e; returns (E, zeta_e, image of the field generator in E).
struct CycloExt {
  FieldPtr E;
  NFElem zeta_e;
  NFElem gen_image;  // image of the generator of W.F in E
};
CycloExt cyclo_extension(const FieldPtr& F, int e);

// dim V(w, zeta) = multiplicity of zeta as a root of charpoly(w); w over F,
// computed inside the extension ext.
int eigenspace_dim(const NFMat& w, const FieldPtr& F, const CycloExt& ext);

// (1/|W|) sum_{g in W} m(g x): exact Reynolds average of a monomial
// exponent vector in the group's natural coordinates.
MultiPoly reynolds(const MatrixGroup& W, const std::vector<int>& monomial);

// Is g.f = f (i.e. f(g x) = f(x)) for every generator g?
bool is_invariant(const MatrixGroup& W, const MultiPoly& f);

// Image of f under x -> g x (substitution of the linear forms given by g).
MultiPoly apply_matrix(const MultiPoly& f, const NFMat& g, const FieldPtr& F);

// Generator of the fixed line V^{P} of the subgroup generated by the listed
// generator indices; throws unless that fixed space is one-dimensional.
NFVec parabolic_fixed_vector(const MatrixGroup& W, const std::vector<int>& gens);

// --- cache ---
std::string generators_hash(const FieldPtr& F, const std::vector<NFMat>& gens);
bool save_group_cache(const MatrixGroup& W, const std::string& dir);
std::optional<MatrixGroup> load_group_cache(const FieldPtr& F,
                                            const std::vector<NFMat>& gens,
                                            const std::string& dir);

// --- fixed models (groupdata.cpp) ---
struct GroupModel {
  FieldPtr F;
  std::vector<NFMat> generators;
  std::vector<int> degrees;
  std::vector<int> codegrees;
  std::string name;
};
GroupModel g29_model();
GroupModel g30_model();
GroupModel g31_model();

// Closure with the model's degree data attached (and optional cache dir).
MatrixGroup build_group(const GroupModel& model, const std::string& cache_dir = "");

}  // namespace refk3
