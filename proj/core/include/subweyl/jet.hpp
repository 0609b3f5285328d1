#ifndef SUBWEYL_JET_HPP
#define SUBWEYL_JET_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "subweyl/errors.hpp"

namespace subweyl {

// Truncated multivariate Taylor arithmetic ("jets"). A jet carries the value
// and all mixed partial derivatives, up to a fixed total order, of a scalar
// quantity with respect to a small set of seeded coordinate directions.
// Coefficients are stored Taylor-style (derivative / factorial of the
// multi-index), which makes multiplication a plain truncated convolution;
// `partial()` rescales on extraction.
//
// Orders run 0..4 and seed sets have at most 4 directions: the deepest client
// is the curvature of connection coefficients that already contain third
// derivatives of a squared Finsler norm. Derivatives in more than four
// distinct directions are obtained by re-seeding per direction subset.

inline constexpr int kMaxJetOrder = 4;
inline constexpr int kMaxJetSeeds = 4;

struct MultiIndex {
    std::array<std::uint8_t, kMaxJetSeeds> e{};

    int degree() const {
        return int(e[0]) + int(e[1]) + int(e[2]) + int(e[3]);
    }
    double factorial() const; // product of per-slot factorials
    bool operator==(const MultiIndex&) const = default;

    static MultiIndex of(std::initializer_list<int> exps);
};

class Jet {
public:
    // Default: the zero scalar (no seeds, order 0).
    Jet() : c_(1, 0.0) {}

    static Jet constant(double v, int nseeds, int order);
    static Jet variable(double v, int slot, int nseeds, int order);

    int order() const { return order_; }
    int seeds() const { return nseeds_; }
    double value() const { return c_[0]; }

    double coeff(const MultiIndex& mi) const;           // raw Taylor coefficient
    double partial(const MultiIndex& mi) const;         // derivative value

    Jet derivative(int slot) const;   // d/dt_slot, order drops by one
    Jet truncated(int order) const;   // forget coefficients above `order`
    Jet without_seed(int slot) const; // restrict to the sub-jet with that slot unused

    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    Jet& operator+=(double s) { c_[0] += s; return *this; }
    Jet& operator-=(double s) { c_[0] -= s; return *this; }
    Jet& operator*=(double s);

    friend Jet operator+(const Jet& a, const Jet& b);
    friend Jet operator-(const Jet& a, const Jet& b);
    friend Jet operator*(const Jet& a, const Jet& b);
    friend Jet operator/(const Jet& a, const Jet& b);
    friend Jet operator-(const Jet& a);

    // Truncated composition f(u) = sum taylor[k] * (u - u.value())^k.
    // `taylor` holds f^(k)(u.value())/k! for k = 0..order; exact in the
    // truncated algebra because (u - value) is nilpotent.
    friend Jet compose(const Jet& u, std::span<const double> taylor);

private:
    Jet(int nseeds, int order);
    void check_same(const Jet& o) const;

    std::uint8_t nseeds_ = 0;
    std::uint8_t order_ = 0;
    std::vector<double> c_;
};

inline Jet operator+(const Jet& a, double s) { Jet r = a; r += s; return r; }
inline Jet operator+(double s, const Jet& a) { return a + s; }
inline Jet operator-(const Jet& a, double s) { Jet r = a; r -= s; return r; }
inline Jet operator-(double s, const Jet& a) { return (-a) + s; }
inline Jet operator*(const Jet& a, double s) { Jet r = a; r *= s; return r; }
inline Jet operator*(double s, const Jet& a) { return a * s; }
inline Jet operator/(const Jet& a, double s) { Jet r = a; r *= 1.0 / s; return r; }
Jet operator/(double s, const Jet& a);

Jet exp(const Jet& u);
Jet log(const Jet& u);
Jet sqrt(const Jet& u);
Jet sin(const Jet& u);
Jet cos(const Jet& u);
Jet pow(const Jet& u, double q); // integral q works for any base, else base > 0
Jet pow(const Jet& u, int k);

// A seeding plan: which coordinate directions carry Taylor slots, and the
// truncation order shared by all jets of the evaluation.
struct SeedPlan {
    std::vector<int> dirs; // dirs[slot] = coordinate index
    int order = 0;
};

// A point with its coordinate functions lifted to jets under a plan. Plain
// evaluation is the degenerate case of an empty plan.
struct JetPoint {
    std::vector<double> x;
    SeedPlan plan;
    std::vector<Jet> coord;

    int dims() const { return int(x.size()); }
    Jet lift(double v) const {
        return Jet::constant(v, int(plan.dirs.size()), plan.order);
    }
    Jet zero() const { return lift(0.0); }

    static JetPoint at(std::vector<double> x);
    static JetPoint seeded(std::vector<double> x, SeedPlan plan);
};

using ScalarField = std::function<Jet(const JetPoint&)>;

// d(f)/d(x^dir) as a jet in the context of `base`. Evaluates f one order
// deeper, seeding `dir` as an extra slot when it is not already in the plan,
// and shifts coefficients down. This is the workhorse behind every frame
// derivative in the library.
Jet partial_jet(const ScalarField& f, const JetPoint& base, int dir);

// Mixed partial of f at x; `exponents` per coordinate, total degree <= 4,
// at most 4 distinct directions involved.
double partial(const ScalarField& f, const std::vector<double>& x,
               const std::vector<int>& exponents);

// Coordinate jets for the given point: each coordinate expanded at x in the
// seeded directions. Throws OrderOutOfRange unless 1 <= order <= 4.
std::vector<Jet> lift_point(const std::vector<double>& x,
                            const std::vector<int>& seed_dirs, int order);

} // namespace subweyl

#endif
