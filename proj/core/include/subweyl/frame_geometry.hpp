#ifndef SUBWEYL_FRAME_GEOMETRY_HPP
#define SUBWEYL_FRAME_GEOMETRY_HPP

#include <any>
#include <functional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "subweyl/linalg.hpp"

namespace subweyl {

namespace detail {

struct MemoKey {
    int tag = 0;
    std::vector<int> dirs;
    int order = 0;
    std::vector<double> x;
    bool operator==(const MemoKey&) const = default;
};

struct MemoKeyHash {
    size_t operator()(const MemoKey& k) const;
};

} // namespace detail

// A geometry presented in an adapted frame {∂_i, δ_a}: structural coordinate
// directions sdirs (spanning the distribution) and transversal directions
// tdirs, with
//     δ_a = ∂_{tdirs[a]} − Σ_k A[k][a] ∂_{sdirs[k]},
// an adapted metric (block-diagonal against this frame) and a Weyl one-form
// in adapted components. The connection blocks C, D, F are derived here
// once; the foliated manifold and the tangent bundle of a Finsler space are
// the two realizations.
//
// Index conventions, fixed throughout:
//   C[k][i][j]: ∇_{∂_j} ∂_i = C^k_ij ∂_k   (direction is the second lower index)
//   D[k][i][a]: ∇_{δ_a} ∂_i = D^k_ia ∂_k
//   F[c][a][b]: ∇_{δ_b} δ_a = F^c_ab δ_c
// and the fourth block ∇_{∂_i} δ_a vanishes identically.
//
// Evaluations are memoized per (point, seed plan); instances are therefore
// not thread-safe — use one per thread.
class FrameGeometry {
public:
    virtual ~FrameGeometry() = default;

    int dims() const { return int(sdirs_.size() + tdirs_.size()); }
    int ns() const { return int(sdirs_.size()); }
    int nt() const { return int(tdirs_.size()); }
    const std::vector<int>& sdirs() const { return sdirs_; }
    const std::vector<int>& tdirs() const { return tdirs_; }

    JMat frame_A(const JetPoint&) const;       // ns x nt
    JMat metric_struct(const JetPoint&) const; // g(∂_i, ∂_j)
    JMat metric_trans(const JetPoint&) const;  // g(δ_a, δ_b)
    JVec weyl_struct(const JetPoint&) const;   // θ_i
    JVec weyl_trans(const JetPoint&) const;    // ρ_a

    // Structural Christoffel symbols (structural derivatives only) plus the
    // Weyl correction ½(θ_i δ^k_j + θ_j δ^k_i − g_ij θ^k).
    JTen3 conn_C(const JetPoint&) const;
    // ∂A^k_a along structural directions.
    JTen3 conn_D(const JetPoint&) const;
    // δ-Christoffels of the adapted transversal metric plus
    // ½(ρ_a δ^c_b + ρ_b δ^c_a − ρ^c g_ab).
    JTen3 conn_F(const JetPoint&) const;

protected:
    FrameGeometry(std::vector<int> sdirs, std::vector<int> tdirs)
        : sdirs_(std::move(sdirs)), tdirs_(std::move(tdirs)) {}

    virtual JMat frame_A_impl(const JetPoint&) const = 0;
    virtual JMat metric_struct_impl(const JetPoint&) const = 0;
    virtual JMat metric_trans_impl(const JetPoint&) const = 0;
    virtual JVec weyl_struct_impl(const JetPoint&) const = 0;
    virtual JVec weyl_trans_impl(const JetPoint&) const = 0;
    virtual JTen3 conn_C_impl(const JetPoint&) const;

    template <class T, class Fn>
    const T& memo(int tag, const JetPoint& jp, Fn&& compute) const {
        detail::MemoKey key{tag, jp.plan.dirs, jp.plan.order, jp.x};
        auto it = memo_.find(key);
        if (it == memo_.end())
            it = memo_.emplace(std::move(key), std::any(compute())).first;
        return *std::any_cast<T>(&it->second);
    }

    // tags for subclass-cached quantities start here
    static constexpr int kUserTag = 100;

private:
    JTen3 conn_D_impl(const JetPoint&) const;
    JTen3 conn_F_impl(const JetPoint&) const;

    std::vector<int> sdirs_, tdirs_;
    mutable std::unordered_map<detail::MemoKey, std::any, detail::MemoKeyHash> memo_;
};

} // namespace subweyl

#endif
