#ifndef SUBWEYL_CONNECTION_HPP
#define SUBWEYL_CONNECTION_HPP

#include "subweyl/adapted_calculus.hpp"
#include "subweyl/manifold.hpp"

namespace subweyl {

// The foliated manifold as an adapted-frame geometry: structural directions
// are the first n coordinates, transversal the remaining p.
class ManifoldGeometry : public FrameGeometry {
public:
    explicit ManifoldGeometry(const ManifoldSpec& spec);

    const ManifoldSpec& spec() const { return spec_; }

protected:
    JMat frame_A_impl(const JetPoint&) const override;
    JMat metric_struct_impl(const JetPoint&) const override;
    JMat metric_trans_impl(const JetPoint&) const override;
    JVec weyl_struct_impl(const JetPoint&) const override;
    JVec weyl_trans_impl(const JetPoint&) const override;

private:
    const eval::FrameEval& frame(const JetPoint&) const;
    ManifoldSpec spec_;
};

// Connection coefficient blocks at a point. L is identically zero for the
// adapted (Vranceanu) connection and omitted.
struct ConnectionBlocks {
    Ten3 C; // [k][i][j]
    Ten3 D; // [k][i][a]
    Ten3 F; // [c][a][b], empty for the distribution-only connection
};

ConnectionBlocks compatible_connection(const ManifoldSpec&,
                                       const std::vector<double>& point);
ConnectionBlocks vranceanu_connection(const ManifoldSpec&,
                                      const std::vector<double>& point);

// Right side of the defining inner-product expansion on structural
// coordinate fields: 2 g(∇_{∂_j} ∂_i, ∂_k).
double koszul_oracle(const ManifoldSpec&, const std::vector<double>& point,
                     int i, int j, int k);

// Full Weyl connection of the ambient metric: Christoffel symbols of the
// whole (n+p)-metric plus the Weyl correction, over all coordinates.
// gamma[c][a][b] with ∇_{∂_b} ∂_a = gamma^c_ab ∂_c.
Ten3 full_weyl_connection(const ManifoldSpec&, const std::vector<double>& point);

// Residual of the defining property of the full Weyl connection,
// (∇̃ g)_{c a b} + w_c g_ab, all coordinate indices.
Ten3 full_weyl_compatibility_residual(const ManifoldSpec&,
                                      const std::vector<double>& point);

// The adapted connection assembled globally: projections of the full Weyl
// connection plus projected brackets, expressed in the adapted frame. Must
// reproduce the local formulas.
ConnectionBlocks vranceanu_global_oracle(const ManifoldSpec&,
                                         const std::vector<double>& point);

Ten3 torsion_transversal(const ManifoldSpec&, const std::vector<double>& point);
CurvatureBlocks curvature(const ManifoldSpec&, const std::vector<double>& point);

MetricDerivative nabla_g(const ManifoldSpec&, const std::vector<double>& point,
                         const AdaptedVec& X);

// Frame-field oracles (frame indices: 0..n-1 structural, n..n+p-1 transversal).
Vec dprime_torsion_residual(const ManifoldSpec&, const std::vector<double>& point,
                            int X, int Y);
AdaptedVec curvature_commutator_oracle(const ManifoldSpec&,
                                       const std::vector<double>& point,
                                       int X, int Y, int Z);
Vec nijenhuis_P(const ManifoldSpec&, const std::vector<double>& point,
                int X, int Y);

} // namespace subweyl

#endif
