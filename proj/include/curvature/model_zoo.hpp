#pragma once

#include <cstdint>

#include "curvature/tensor.hpp"

namespace curv {

/// (c/4)(<X,Z><Y,W> - <X,W><Y,Z> + <JX,Z><JY,W> - <JX,W><JY,Z> + 2<JX,Y><JZ,W>)
/// on R^{2m} with J e_{2k} = e_{2k+1}.
template <typename T>
CurvatureTensor<T> complex_space_form(int m, const T& c);

/// Same construction with the three left quaternion multiplications on each
/// block of four coordinates (basis 1, i, j, k); n = 4q.
template <typename T>
CurvatureTensor<T> quaternionic_space_form(int q, const T& c);

/// Curvature of SU(3)/SO(3) at the origin. The tangent space is the traceless
/// symmetric 3x3 matrices with <X,Y> = scale * tr(XY), and R(X,Y)Z = -[[X,Y],Z].
/// Orthonormal basis at scale 3/2 (all entries rational):
///   e_0 = diag(1,-2,1)/3,
///   e_{1+k} = (1/3) sum_j Lq[j][k] g_j,   g = (diag(1,0,-1), E12, E13, E23),
/// where E_ab = e_ab + e_ba and Lq is left multiplication by the quaternion
/// 1+i+j (Lq^T Lq = 3 I). Components scale as (3/2)/scale.
template <typename T>
CurvatureTensor<T> su3_so3_tensor(const T& scale);

/// The orthonormal basis used by su3_so3_tensor at scale 3/2, as 3x3 matrices.
std::vector<Matrix<Rational>> su3_so3_basis();

/// Block-diagonal constant curvature: kappa1 on coordinates 0..p-1, kappa2 on p..p+q-1.
template <typename T>
CurvatureTensor<T> product_sphere_tensor(int p, int q, const T& kappa1, const T& kappa2);

/// Orthogonal projection of a tensor with the two antisymmetries and pair
/// symmetry onto the Bianchi-closed subspace: (2R(ijkl) - R(jkil) - R(kijl)) / 3.
template <typename T>
CurvatureTensor<T> bianchi_projection(const CurvatureTensor<T>& t);

/// Seeded random algebraic curvature tensor: integer raw entries in [-5, 5],
/// summed over the symmetry orbit, then Bianchi-projected.
template <typename T>
CurvatureTensor<T> random_tensor(int n, std::uint64_t seed);

/// random_tensor(d1 + d2, seed) with the R_ijka, R_ijab, R_iabc orbits zeroed
/// and R_iajb replaced by (R_iajb + R_ibja) / 2.
template <typename T>
CurvatureTensor<T> random_block_tensor(int d1, int d2, std::uint64_t seed);

}  // namespace curv
