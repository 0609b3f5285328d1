#ifndef SUBWEYL_FINSLER_HPP
#define SUBWEYL_FINSLER_HPP

#include "subweyl/adapted_calculus.hpp"
#include "subweyl/connection.hpp"
#include "subweyl/manifold.hpp"

namespace subweyl {

// A Finsler structure on an n-manifold, presented on the slit tangent bundle
// with coordinates (x^1..x^n, y^1..y^n). F is the fundamental function; the
// optional one-form W is given in the coordinate coframe (dx components
// first, then dy). Everything below y-differentiates F^2, so the zero
// section is excluded (hard floor |y| >= 1e-8; sampling stays outside the
// |y| < 0.1 ball).
struct FinslerSpec {
    int n = 0;
    std::vector<std::string> base_coords;
    std::vector<std::string> fiber_coords;
    Expr F;
    std::vector<std::optional<Expr>> weyl; // 2n entries, nullopt = 0
    std::vector<std::string> constant_names;
    std::vector<double> constant_values;
    Box domain; // 2n ranges, base then fiber
    std::string name;
    FixtureTags tags;

    int dim() const { return 2 * n; }
    SymbolTable symbols() const;
};

enum class WeylSource { Zero, Cartan, Spec, Constant };

// The tangent bundle as an adapted-frame geometry: the vertical distribution
// is structural (directions y^a), the horizontal one transversal, with
// A^k_a = G^k_a the nonlinear connection from the geodesic spray.
class TangentGeometry : public FrameGeometry {
public:
    TangentGeometry(const FinslerSpec&, WeylSource source = WeylSource::Cartan);
    // `Constant` source: fixed adapted components (θ structural, ρ transversal).
    TangentGeometry(const FinslerSpec&, Vec theta, Vec rho);

    Jet F2(const JetPoint&) const;       // squared fundamental function
    JMat hessian(const JetPoint&) const; // g_ab = ½ ∂²F²/∂y^a∂y^b, PD-checked
    JVec spray_G(const JetPoint&) const;
    JMat spray_Gb(const JetPoint&) const;

    const FinslerSpec& spec() const { return spec_; }

protected:
    JMat frame_A_impl(const JetPoint&) const override;
    JMat metric_struct_impl(const JetPoint&) const override;
    JMat metric_trans_impl(const JetPoint&) const override;
    JVec weyl_struct_impl(const JetPoint&) const override;
    JVec weyl_trans_impl(const JetPoint&) const override;
    // Vertical block in its fiberwise form ½(g^{cd} ∂g_ab/∂y^d + Weyl terms).
    JTen3 conn_C_impl(const JetPoint&) const override;

private:
    JMat hessian_uncached(const JetPoint&) const;
    JVec spray_G_uncached(const JetPoint&) const;
    JMat spray_Gb_uncached(const JetPoint&) const;

    FinslerSpec spec_;
    WeylSource source_;
    Vec const_theta_, const_rho_;
};

struct HessianMetric {
    Mat g, gInv;
};
HessianMetric hessian_metric(const FinslerSpec&, const Vec& x, const Vec& y);

struct SprayData {
    Vec G;    // spray coefficients
    Mat Gb;   // nonlinear connection G^a_b
    Ten3 Gbc; // ∂²G^a/∂y^b∂y^c
};
SprayData spray(const FinslerSpec&, const Vec& x, const Vec& y);

// Coordinate components of the adapted frame and coframe on T(TN):
// rows are frame/coframe elements, columns the 2n coordinate slots.
struct HorizontalFrame {
    Mat delta_x; // δ/δx^a
    Mat vert;    // ∂/∂y^a
    Mat dx;      // dx^a
    Mat delta_y; // δy^a
};
HorizontalFrame horizontal_frame(const FinslerSpec&, const Vec& x, const Vec& y);

// Sasaki-type metric in the adapted frame: two copies of the hessian block.
Mat sasaki_metric(const FinslerSpec&, const Vec& x, const Vec& y);

struct TangentWeyl {
    Vec rho, theta;     // adapted components (dx^a / δy^a)
    Vec rhoUp, thetaUp; // raised with the hessian metric
};
TangentWeyl cartan_form(const FinslerSpec&, const Vec& x, const Vec& y);
// Adapt coordinate-coframe components from the spec's W (or zero).
TangentWeyl spec_weyl_adapted(const FinslerSpec&, const Vec& x, const Vec& y);

// Connection blocks with a pointwise Weyl form. C and F depend on W only
// through its value at the point.
ConnectionBlocks vranceanu_finsler(const FinslerSpec&, const TangentWeyl& W,
                                   const Vec& x, const Vec& y);

// Left side minus right side of the Landsberg identity: the δ-Christoffel
// combination of g against ∂G^c_a/∂y^b. Zero identifies Landsberg spaces.
Ten3 landsberg_residual(const FinslerSpec&, const Vec& x, const Vec& y);

// Riemannian-base detection: the hessian is fiber-independent.
bool riemannian_base(const FinslerSpec&);
Mat base_metric(const FinslerSpec&, const Vec& x);
Ten3 base_christoffel(const FinslerSpec&, const Vec& x); // [c][a][b]
// (Rg)^j_{i a b} with the same slot order as the adapted curvature blocks.
Ten4 base_riemann(const FinslerSpec&, const Vec& x);

// Closed forms for the Riemannian case: the never-vanishing mixed curvature
// block, the torsion as the y-contraction of the base curvature, and the
// structural block equal to the base curvature.
struct FinslerCurvature {
    Ten4 mixed;      // R^c_{a b i} = ½(g_ib δ^c_a + g_ai δ^c_b − g_ab δ^c_i)
    Ten3 torsion;    // T^c_{ab} = (Rg)^c_{dab} y^d
    Ten4 structural; // R^j_{i a b} = (Rg)^j_{iab}
};
FinslerCurvature finsler_curvature_torsion(const FinslerSpec&, const Vec& x,
                                           const Vec& y);

// Covariant derivative of the Sasaki metric for a Riemannian base with the
// Cartan form: vertical block X^a ∂g_ij/∂x^a, horizontal block
// −(g_ci X^c y^i) g_ab, mixed block zero. X in adapted components
// (s = vertical, t = horizontal).
MetricDerivative nabla_sasaki(const FinslerSpec&, const AdaptedVec& X,
                              const Vec& x, const Vec& y);

struct LiouvilleDerivs {
    Vec vertical;   // components of ∇*_X L on ∂/∂y^i
    Vec horizontal; // components of ∇*_X L* on δ/δx^a
};
// Coefficient expansion of the covariant derivatives of the Liouville field
// L = y^i ∂/∂y^i and its horizontal counterpart L* = y^a δ/δx^a.
LiouvilleDerivs liouville_raw(const FinslerSpec&, const TangentWeyl& W,
                              const AdaptedVec& X, const Vec& x, const Vec& y);
// Closed form for a general W: the Weyl terms against y.
LiouvilleDerivs liouville_general_closed(const FinslerSpec&, const TangentWeyl& W,
                                         const AdaptedVec& X, const Vec& x,
                                         const Vec& y);
// Closed form for the Cartan form: VX vertically, Θ(X) + ½F² HX horizontally.
LiouvilleDerivs liouville_cartan_closed(const FinslerSpec&, const AdaptedVec& X,
                                        const Vec& x, const Vec& y);

std::vector<double> tn_point(const Vec& x, const Vec& y);

} // namespace subweyl

#endif
