// Small exact dense linear algebra over number-field elements.
#pragma once

#include <vector>

#include "refk3/exactmath.hpp"

namespace refk3 {

using NFVec = std::vector<NFElem>;
using NFMat = std::vector<NFVec>;  // row-major

NFMat nf_identity(int n);
NFMat nf_mat_mul(const NFMat& a, const NFMat& b);
NFVec nf_mat_vec(const NFMat& a, const NFVec& v);
NFMat nf_mat_add(const NFMat& a, const NFMat& b);
NFMat nf_mat_sub(const NFMat& a, const NFMat& b);
NFMat nf_mat_scale(const NFMat& a, const NFElem& s);
NFMat nf_transpose(const NFMat& a);
bool nf_mat_eq(const NFMat& a, const NFMat& b);

NFElem nf_det(NFMat a);
int nf_rank(NFMat a);
NFMat nf_inverse(const NFMat& a);  // throws if singular

// reduced row echelon form in place; returns pivot column indices
std::vector<int> nf_rref(NFMat& a);

// basis of the right kernel of a (list of column vectors)
std::vector<NFVec> nf_kernel(const NFMat& a);

// solve a x = b; nullopt if inconsistent (least-degree solution from rref)
std::optional<NFVec> nf_solve(const NFMat& a, const NFVec& b);

// characteristic polynomial det(tI - a) via the Faddeev–LeVerrier recursion
NFPoly nf_charpoly(const NFMat& a, const FieldPtr& F);

// apply an embedding entrywise
NFMat nf_mat_embed(const NFMat& a, const FieldPtr& G, const NFElem& gen_image);

}  // namespace refk3
