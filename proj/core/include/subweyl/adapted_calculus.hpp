#ifndef SUBWEYL_ADAPTED_CALCULUS_HPP
#define SUBWEYL_ADAPTED_CALCULUS_HPP

#include <functional>

#include "subweyl/frame_geometry.hpp"

namespace subweyl {

// ---- block-level jet derivatives ------------------------------------------

namespace detail {

struct Shift {
    int slot;
    bool drop;
};

inline Jet apply_shift(const Jet& j, const Shift& s) {
    Jet d = j.derivative(s.slot);
    return s.drop ? d.without_seed(s.slot) : d;
}
inline JVec apply_shift(const JVec& v, const Shift& s) {
    JVec r;
    r.reserve(v.size());
    for (const Jet& j : v) r.push_back(apply_shift(j, s));
    return r;
}
inline JMat apply_shift(const JMat& m, const Shift& s) {
    JMat r;
    r.reserve(m.size());
    for (const JVec& v : m) r.push_back(apply_shift(v, s));
    return r;
}
inline JTen3 apply_shift(const JTen3& t, const Shift& s) {
    JTen3 r;
    r.reserve(t.size());
    for (const JMat& m : t) r.push_back(apply_shift(m, s));
    return r;
}
inline std::pair<JVec, JVec> apply_shift(const std::pair<JVec, JVec>& p,
                                         const Shift& s) {
    return {apply_shift(p.first, s), apply_shift(p.second, s)};
}

std::pair<JetPoint, Shift> extended_point(const JetPoint& base, int dir);

} // namespace detail

// Coordinate partial of a block-valued field, in the jet context of `base`.
template <class F>
auto block_partial(F&& f, const JetPoint& base, int dir) {
    auto [ext, shift] = detail::extended_point(base, dir);
    return detail::apply_shift(f(ext), shift);
}

// ---- adapted-frame differential operators ---------------------------------

// δf/δx^a = ∂_{tdir[a]} f − Σ_k A^k_a ∂_{sdir[k]} f
Jet delta_partial(const FrameGeometry&, const ScalarField& f,
                  const JetPoint& base, int a);

// Transversal torsion T[k][a][b] = δA^k_a/δx^b − δA^k_b/δx^a, the structural
// part of [δ_a, δ_b].
JTen3 torsion(const FrameGeometry&, const JetPoint&);
Ten3 torsion(const FrameGeometry&, const std::vector<double>& point);

// ---- curvature -------------------------------------------------------------

// The six curvature blocks of the adapted connection. Slot order matches the
// defining equations: in each block the curvature arguments pair with the
// trailing lower indices (see the per-block comments in the implementation).
struct CurvatureBlocks {
    Ten4 r_ddd; // R^mu_{a b c}: transversal args δ_c, δ_b on δ_a
    Ten4 r_ddi; // R^mu_{a b i}: args ∂_i, δ_b on δ_a
    Ten4 r_dii; // R^mu_{a i j}: identically zero
    Ten4 r_idd; // R^h_{i a b}:  args δ_a, δ_b on ∂_i (torsion-corrected)
    Ten4 r_iak; // R^h_{i a k}:  args ∂_k, δ_a on ∂_i
    Ten4 r_ijk; // R^h_{i j k}:  args ∂_k, ∂_j on ∂_i
};
CurvatureBlocks curvature_blocks(const FrameGeometry&,
                                 const std::vector<double>& point);

// Vector with adapted components.
struct AdaptedVec {
    Vec s, t;
};

// Definitional curvature R(X,Y)Z = ∇_X ∇_Y Z − ∇_Y ∇_X Z − ∇_{[X,Y]} Z on
// frame fields, with brackets taken honestly through jets. Frame indices:
// 0..ns-1 are ∂_i, ns..ns+nt-1 are δ_a.
AdaptedVec curvature_commutator(const FrameGeometry&,
                                const std::vector<double>& point,
                                int X, int Y, int Z);

// ---- covariant derivative of the metric ------------------------------------

struct MetricDerivative {
    Mat ss; // (∇_X g)(∂_i, ∂_j)
    Mat tt; // (∇_X g)(δ_a, δ_b)
    Mat st; // (∇_X g)(∂_i, δ_a) — zero by adaptedness
};
MetricDerivative nabla_metric(const FrameGeometry&,
                              const std::vector<double>& point,
                              const AdaptedVec& X);
// Closed forms of the two diagonal blocks.
Mat nabla_trans_closed(const FrameGeometry&, const std::vector<double>& point,
                       const AdaptedVec& X);
Mat nabla_struct_closed(const FrameGeometry&, const std::vector<double>& point,
                        const AdaptedVec& X);

// ---- oracles ----------------------------------------------------------------

// 2 g(∇_{∂_j} ∂_i, ∂_k) by the metric/Weyl expansion on structural coordinate
// fields (whose mutual brackets vanish).
double koszul_structural(const FrameGeometry&, const std::vector<double>& point,
                         int i, int j, int k);
// Coefficients extracted from the expansion: ½ g^{kl} K(i, j, l).
Ten3 koszul_C(const FrameGeometry&, const std::vector<double>& point);
// Structural components of [δ_a, ∂_i] via honest vector-field brackets;
// reproduces the D block.
Ten3 bracket_D(const FrameGeometry&, const std::vector<double>& point);
// Torsion via the honest bracket [δ_a, δ_b] instead of the δA formula.
Ten3 bracket_torsion(const FrameGeometry&, const std::vector<double>& point);

// Residual of the complement-torsion identity
//   ∇_X QY − ∇_{QY} QX − Q[X, QY]
// on frame fields; structural components. Zero for the constructed connection.
Vec dprime_residual(const FrameGeometry&, const std::vector<double>& point,
                    int X, int Y);

// Nijenhuis tensor of P = Q − Q⊥ on frame fields, coordinate components.
Vec nijenhuis(const FrameGeometry&, const std::vector<double>& point,
              int X, int Y);

// ---- vector-field plumbing ---------------------------------------------------

using VecField = std::function<JVec(const JetPoint&)>; // coordinate components

VecField frame_field(const FrameGeometry&, int frameIndex);
JVec bracket(const VecField& U, const VecField& V, const JetPoint& base,
             int dims);
// coordinate components -> adapted components (jets)
std::pair<JVec, JVec> to_adapted(const FrameGeometry&, const JVec& coord,
                                 const JetPoint& jp);

} // namespace subweyl

#endif
