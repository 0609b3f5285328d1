#include "subweyl/jet.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <mutex>
#include <string>

namespace subweyl {

namespace {

// Per-(nseeds, order) layout: the graded-lex enumeration of multi-indices,
// a base-5 position lookup, and the truncated-convolution pair table.
struct Layout {
    int nseeds = 0, order = 0;
    std::vector<MultiIndex> idx;
    std::array<int, 625> pos{}; // encode(mi) -> position, -1 when absent
    struct Triple { int a, b, c; };
    std::vector<Triple> prod;
};

int encode(const MultiIndex& mi) {
    return int(mi.e[0]) + 5 * (int(mi.e[1]) + 5 * (int(mi.e[2]) + 5 * int(mi.e[3])));
}

void enumerate(int nseeds, int degree, int slot, MultiIndex cur,
               std::vector<MultiIndex>& out) {
    if (slot == nseeds) {
        if (degree == 0) out.push_back(cur);
        return;
    }
    for (int k = degree; k >= 0; --k) { // lexicographic within a degree
        cur.e[slot] = std::uint8_t(k);
        enumerate(nseeds, degree - k, slot + 1, cur, out);
    }
    cur.e[slot] = 0;
}

Layout build_layout(int nseeds, int order) {
    Layout L;
    L.nseeds = nseeds;
    L.order = order;
    L.pos.fill(-1);
    for (int d = 0; d <= order; ++d)
        enumerate(nseeds, d, 0, MultiIndex{}, L.idx);
    for (int i = 0; i < int(L.idx.size()); ++i)
        L.pos[encode(L.idx[i])] = i;
    for (int a = 0; a < int(L.idx.size()); ++a) {
        for (int b = 0; b < int(L.idx.size()); ++b) {
            if (L.idx[a].degree() + L.idx[b].degree() > order) continue;
            MultiIndex s;
            for (int k = 0; k < kMaxJetSeeds; ++k)
                s.e[k] = std::uint8_t(L.idx[a].e[k] + L.idx[b].e[k]);
            L.prod.push_back({a, b, L.pos[encode(s)]});
        }
    }
    return L;
}

const Layout& layout(int nseeds, int order) {
    static std::array<Layout, (kMaxJetSeeds + 1) * (kMaxJetOrder + 1)> table = [] {
        std::array<Layout, (kMaxJetSeeds + 1) * (kMaxJetOrder + 1)> t;
        for (int s = 0; s <= kMaxJetSeeds; ++s)
            for (int o = 0; o <= kMaxJetOrder; ++o)
                t[s * (kMaxJetOrder + 1) + o] = build_layout(s, o);
        return t;
    }();
    assert(nseeds >= 0 && nseeds <= kMaxJetSeeds);
    assert(order >= 0 && order <= kMaxJetOrder);
    return table[nseeds * (kMaxJetOrder + 1) + order];
}

double fact(int k) {
    static const double f[] = {1, 1, 2, 6, 24};
    return f[k];
}

} // namespace

MultiIndex MultiIndex::of(std::initializer_list<int> exps) {
    MultiIndex mi;
    int slot = 0;
    for (int v : exps) mi.e[slot++] = std::uint8_t(v);
    return mi;
}

double MultiIndex::factorial() const {
    return fact(e[0]) * fact(e[1]) * fact(e[2]) * fact(e[3]);
}

Jet::Jet(int nseeds, int order)
    : nseeds_(std::uint8_t(nseeds)), order_(std::uint8_t(order)),
      c_(layout(nseeds, order).idx.size(), 0.0) {}

Jet Jet::constant(double v, int nseeds, int order) {
    Jet j(nseeds, order);
    j.c_[0] = v;
    return j;
}

Jet Jet::variable(double v, int slot, int nseeds, int order) {
    Jet j(nseeds, order);
    j.c_[0] = v;
    if (order >= 1) {
        MultiIndex mi;
        mi.e[slot] = 1;
        j.c_[layout(nseeds, order).pos[encode(mi)]] = 1.0;
    }
    return j;
}

void Jet::check_same(const Jet& o) const {
    assert(nseeds_ == o.nseeds_ && order_ == o.order_ &&
           "jets from different seeding contexts");
    (void)o;
}

double Jet::coeff(const MultiIndex& mi) const {
    int p = layout(nseeds_, order_).pos[encode(mi)];
    return p < 0 ? 0.0 : c_[p];
}

double Jet::partial(const MultiIndex& mi) const {
    return coeff(mi) * mi.factorial();
}

Jet Jet::derivative(int slot) const {
    assert(order_ >= 1);
    Jet r(nseeds_, order_ - 1);
    const Layout& lo = layout(nseeds_, order_);
    const Layout& lr = layout(nseeds_, order_ - 1);
    for (int i = 0; i < int(lr.idx.size()); ++i) {
        MultiIndex up = lr.idx[i];
        up.e[slot]++;
        r.c_[i] = c_[lo.pos[encode(up)]] * double(up.e[slot]);
    }
    return r;
}

Jet Jet::truncated(int order) const {
    assert(order <= order_);
    Jet r(nseeds_, order);
    // graded enumeration: the lower-order coefficients are a prefix
    std::copy_n(c_.begin(), r.c_.size(), r.c_.begin());
    return r;
}

Jet Jet::without_seed(int slot) const {
    Jet r(nseeds_ - 1, order_);
    const Layout& lo = layout(nseeds_, order_);
    const Layout& lr = layout(nseeds_ - 1, order_);
    for (int i = 0; i < int(lr.idx.size()); ++i) {
        MultiIndex full;
        int s = 0;
        for (int k = 0; k < nseeds_; ++k)
            full.e[k] = (k == slot) ? 0 : lr.idx[i].e[s++];
        r.c_[i] = c_[lo.pos[encode(full)]];
    }
    return r;
}

Jet& Jet::operator+=(const Jet& o) {
    check_same(o);
    for (size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

Jet& Jet::operator-=(const Jet& o) {
    check_same(o);
    for (size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
}

Jet& Jet::operator*=(double s) {
    for (double& v : c_) v *= s;
    return *this;
}

Jet operator+(const Jet& a, const Jet& b) { Jet r = a; r += b; return r; }
Jet operator-(const Jet& a, const Jet& b) { Jet r = a; r -= b; return r; }

Jet operator-(const Jet& a) {
    Jet r = a;
    for (double& v : r.c_) v = -v;
    return r;
}

Jet operator*(const Jet& a, const Jet& b) {
    a.check_same(b);
    Jet r(a.nseeds_, a.order_);
    for (const auto& t : layout(a.nseeds_, a.order_).prod)
        r.c_[t.c] += a.c_[t.a] * b.c_[t.b];
    return r;
}

Jet compose(const Jet& u, std::span<const double> taylor) {
    Jet p = u;
    p.c_[0] = 0.0; // nilpotent part
    Jet r = Jet::constant(taylor.back(), u.seeds(), u.order());
    for (int k = int(taylor.size()) - 2; k >= 0; --k) {
        r = r * p;
        r += taylor[k];
    }
    return r;
}

namespace {

Jet reciprocal(const Jet& u) {
    double v = u.value();
    if (v == 0.0) throw DomainError("division by zero value part");
    std::array<double, kMaxJetOrder + 1> a{};
    double p = 1.0 / v;
    for (int k = 0; k <= u.order(); ++k) {
        a[k] = (k % 2 == 0) ? p : -p;
        p /= v;
    }
    return compose(u, std::span<const double>(a.data(), u.order() + 1));
}

} // namespace

Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
Jet operator/(double s, const Jet& a) { return reciprocal(a) * s; }

Jet exp(const Jet& u) {
    std::array<double, kMaxJetOrder + 1> a{};
    double e = std::exp(u.value());
    for (int k = 0; k <= u.order(); ++k) a[k] = e / fact(k);
    return compose(u, std::span<const double>(a.data(), u.order() + 1));
}

Jet log(const Jet& u) {
    double v = u.value();
    if (v <= 0.0) throw DomainError("log of non-positive value part");
    std::array<double, kMaxJetOrder + 1> a{};
    a[0] = std::log(v);
    double p = 1.0 / v;
    for (int k = 1; k <= u.order(); ++k) {
        a[k] = ((k % 2 == 1) ? 1.0 : -1.0) * p / double(k);
        p /= v;
    }
    return compose(u, std::span<const double>(a.data(), u.order() + 1));
}

Jet pow(const Jet& u, double q) {
    if (double ip; std::modf(q, &ip) == 0.0 && std::abs(q) <= 64.0)
        return pow(u, int(ip));
    double v = u.value();
    if (v <= 0.0) throw DomainError("pow of non-positive value part with non-integral exponent");
    std::array<double, kMaxJetOrder + 1> a{};
    double coef = std::pow(v, q); // f^(k)/k! = C(q,k) v^(q-k)
    double binom = 1.0;
    for (int k = 0; k <= u.order(); ++k) {
        a[k] = binom * coef * std::pow(v, -k);
        binom *= (q - k) / double(k + 1);
    }
    return compose(u, std::span<const double>(a.data(), u.order() + 1));
}

Jet pow(const Jet& u, int k) {
    if (k < 0) return 1.0 / pow(u, -k);
    Jet r = Jet::constant(1.0, u.seeds(), u.order());
    Jet base = u;
    for (int m = k; m > 0; m >>= 1) {
        if (m & 1) r = r * base;
        if (m > 1) base = base * base;
    }
    return r;
}

Jet sqrt(const Jet& u) {
    if (u.value() <= 0.0) throw DomainError("sqrt of non-positive value part");
    return pow(u, 0.5);
}

Jet sin(const Jet& u) {
    double s = std::sin(u.value()), c = std::cos(u.value());
    const double d[4] = {s, c, -s, -c};
    std::array<double, kMaxJetOrder + 1> a{};
    for (int k = 0; k <= u.order(); ++k) a[k] = d[k % 4] / fact(k);
    return compose(u, std::span<const double>(a.data(), u.order() + 1));
}

Jet cos(const Jet& u) {
    double s = std::sin(u.value()), c = std::cos(u.value());
    const double d[4] = {c, -s, -c, s};
    std::array<double, kMaxJetOrder + 1> a{};
    for (int k = 0; k <= u.order(); ++k) a[k] = d[k % 4] / fact(k);
    return compose(u, std::span<const double>(a.data(), u.order() + 1));
}

JetPoint JetPoint::at(std::vector<double> x) {
    return seeded(std::move(x), SeedPlan{});
}

JetPoint JetPoint::seeded(std::vector<double> x, SeedPlan plan) {
    JetPoint jp;
    jp.x = std::move(x);
    jp.plan = std::move(plan);
    int ns = int(jp.plan.dirs.size());
    jp.coord.reserve(jp.x.size());
    for (int c = 0; c < int(jp.x.size()); ++c) {
        auto it = std::find(jp.plan.dirs.begin(), jp.plan.dirs.end(), c);
        if (it == jp.plan.dirs.end())
            jp.coord.push_back(Jet::constant(jp.x[c], ns, jp.plan.order));
        else
            jp.coord.push_back(Jet::variable(
                jp.x[c], int(it - jp.plan.dirs.begin()), ns, jp.plan.order));
    }
    return jp;
}

Jet partial_jet(const ScalarField& f, const JetPoint& base, int dir) {
    const auto& dirs = base.plan.dirs;
    int deeper = base.plan.order + 1;
    if (deeper > kMaxJetOrder)
        throw OrderOutOfRange("derivative request exceeds jet order " +
                              std::to_string(kMaxJetOrder));
    auto it = std::find(dirs.begin(), dirs.end(), dir);
    if (it != dirs.end()) {
        Jet v = f(JetPoint::seeded(base.x, SeedPlan{dirs, deeper}));
        return v.derivative(int(it - dirs.begin()));
    }
    if (int(dirs.size()) + 1 > kMaxJetSeeds)
        throw OrderOutOfRange("derivative request exceeds jet seed limit");
    SeedPlan ext{dirs, deeper};
    ext.dirs.push_back(dir);
    Jet v = f(JetPoint::seeded(base.x, ext));
    int slot = int(ext.dirs.size()) - 1;
    return v.derivative(slot).without_seed(slot);
}

double partial(const ScalarField& f, const std::vector<double>& x,
               const std::vector<int>& exponents) {
    std::vector<int> dirs;
    int degree = 0;
    for (int c = 0; c < int(exponents.size()); ++c) {
        degree += exponents[c];
        if (exponents[c] > 0) dirs.push_back(c);
    }
    if (degree > kMaxJetOrder)
        throw OrderOutOfRange("total derivative order " + std::to_string(degree) +
                              " exceeds " + std::to_string(kMaxJetOrder));
    if (int(dirs.size()) > kMaxJetSeeds)
        throw OrderOutOfRange("more than 4 distinct derivative directions");
    Jet v = f(JetPoint::seeded(x, SeedPlan{dirs, degree}));
    MultiIndex mi;
    for (int s = 0; s < int(dirs.size()); ++s)
        mi.e[s] = std::uint8_t(exponents[dirs[s]]);
    return v.partial(mi);
}

std::vector<Jet> lift_point(const std::vector<double>& x,
                            const std::vector<int>& seed_dirs, int order) {
    if (order < 1 || order > kMaxJetOrder)
        throw OrderOutOfRange("jet order " + std::to_string(order) +
                              " outside [1, " + std::to_string(kMaxJetOrder) + "]");
    if (int(seed_dirs.size()) > kMaxJetSeeds)
        throw OrderOutOfRange("more than 4 seed directions");
    for (size_t i = 0; i < seed_dirs.size(); ++i)
        for (size_t j = i + 1; j < seed_dirs.size(); ++j)
            if (seed_dirs[i] == seed_dirs[j])
                throw OrderOutOfRange("seed directions must be distinct");
    return JetPoint::seeded(x, SeedPlan{seed_dirs, order}).coord;
}

} // namespace subweyl
