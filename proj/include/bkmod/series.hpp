#pragma once

// Precision-tracked Laurent series over a finite field.
//
// A series knows its coefficients for exponents in [val, prec). After
// normalisation the coefficient at val is nonzero, unless no nonzero
// coefficient is visible: then val == prec and the series is "zero to
// precision". A series may also be exact (prec == kInfinite): a Laurent
// polynomial whose unstored coefficients are certified zero. The certified
// zero series is the exact series with no terms.
//
// Every operation propagates precision by its worst case:
//   a + b : min(prec a, prec b)
//   a * b : min(val a + prec b, val b + prec a)
//   phi(a): p * prec a
//   1 / a : -val a + (prec a - val a)   (relative precision is kept)

#include "bkmod/errors.hpp"
#include "bkmod/field.hpp"

#include <algorithm>
#include <climits>
#include <string>
#include <utility>
#include <vector>

namespace bkmod {

class LaurentSeries {
public:
    static constexpr int kInfinite = INT_MAX / 4;
    /// Relative precision used when an exact non-monomial series is inverted.
    static constexpr int kDefaultInversePrecision = 64;

    LaurentSeries() = default;

    /// Certified zero.
    static LaurentSeries zero(FieldPtr f) {
        LaurentSeries s;
        s.f_ = std::move(f);
        s.val_ = kInfinite;
        s.prec_ = kInfinite;
        return s;
    }

    /// Zero known only modulo u^prec.
    static LaurentSeries zero_to(FieldPtr f, int prec) {
        if (prec >= kInfinite) return zero(std::move(f));
        LaurentSeries s;
        s.f_ = std::move(f);
        s.val_ = prec;
        s.prec_ = prec;
        return s;
    }

    /// Coefficients c[0], c[1], ... at exponents val, val+1, ...; known below
    /// prec, or exact when prec == kInfinite.
    static LaurentSeries from_coeffs(FieldPtr f, int val, std::vector<Fq> c, int prec = kInfinite) {
        LaurentSeries s;
        s.f_ = std::move(f);
        if (prec >= kInfinite) {
            s.val_ = val;
            s.prec_ = kInfinite;
            s.c_ = std::move(c);
            s.normalize_exact();
            return s;
        }
        if (prec < val) throw InvalidArgument("series precision below its valuation");
        c.resize(static_cast<std::size_t>(prec - val), 0);
        s.val_ = val;
        s.prec_ = prec;
        s.c_ = std::move(c);
        s.normalize();
        return s;
    }

    /// Exact polynomial c[0] + c[1] u + ...
    static LaurentSeries polynomial(FieldPtr f, std::vector<Fq> c) { return from_coeffs(std::move(f), 0, std::move(c)); }

    static LaurentSeries monomial(FieldPtr f, Fq coeff, int exponent, int prec = kInfinite) {
        if (coeff == 0) return zero_to(std::move(f), prec);
        if (prec <= exponent) return zero_to(std::move(f), prec);
        return from_coeffs(std::move(f), exponent, {coeff}, prec);
    }

    static LaurentSeries constant(FieldPtr f, Fq c, int prec = kInfinite) { return monomial(std::move(f), c, 0, prec); }

    const FieldPtr& field() const { return f_; }
    int val() const { return val_; }
    int prec() const { return prec_; }
    const std::vector<Fq>& coeffs() const { return c_; }

    bool is_exact() const { return prec_ >= kInfinite; }
    bool is_certified_zero() const { return is_exact() && c_.empty(); }
    bool is_zero_to_precision() const { return !is_exact() && c_.empty(); }
    /// True when no nonzero coefficient is known (either zero state).
    bool known_zero() const { return c_.empty(); }
    bool has_exact_valuation() const { return !c_.empty(); }
    bool is_monomial() const { return is_exact() && c_.size() == 1; }

    /// Exclusive upper end of the stored coefficient window.
    int stored_end() const { return is_exact() ? val_ + static_cast<int>(c_.size()) : prec_; }

    /// Exact valuation; throws when no nonzero coefficient is visible.
    int valuation() const {
        if (c_.empty()) {
            if (is_exact()) throw ZeroLeadingCoefficient("valuation of the zero series");
            throw ZeroLeadingCoefficient("no nonzero coefficient visible below u^" + std::to_string(prec_));
        }
        return val_;
    }

    Fq leading() const {
        if (c_.empty()) throw ZeroLeadingCoefficient("leading coefficient of a series with no visible terms");
        return c_.front();
    }

    /// Coefficient at exponent e; throws if e lies beyond the known window.
    Fq coeff(int e) const {
        if (c_.empty()) {
            if (!is_exact() && e >= prec_) throw InsufficientPrecision(unknown_msg(e));
            return 0;
        }
        if (e < val_) return 0;
        if (e >= stored_end()) {
            if (is_exact()) return 0;
            throw InsufficientPrecision(unknown_msg(e));
        }
        return c_[static_cast<std::size_t>(e - val_)];
    }

    /// Coefficient at e, reading unknown coefficients as zero. Callers must
    /// check the window themselves.
    Fq coeff_unchecked(int e) const {
        if (c_.empty() || e < val_ || e >= stored_end()) return 0;
        return c_[static_cast<std::size_t>(e - val_)];
    }

    LaurentSeries truncated(int prec) const {
        if (prec >= prec_) return *this;
        if (c_.empty() || prec <= val_) return zero_to(f_, prec);
        std::vector<Fq> c;
        int end = std::min(prec, stored_end());
        c.assign(c_.begin(), c_.begin() + (end - val_));
        return from_coeffs(f_, val_, std::move(c), prec);
    }

    /// Multiplication by u^k.
    LaurentSeries shifted(int k) const {
        if (is_certified_zero()) return *this;
        LaurentSeries s = *this;
        s.val_ += k;
        if (!is_exact()) s.prec_ += k;
        return s;
    }

    LaurentSeries operator-() const {
        LaurentSeries s = *this;
        for (Fq& x : s.c_) x = f_->neg(x);
        return s;
    }

    LaurentSeries scaled(Fq a) const {
        if (a == 0) return is_exact() ? zero(f_) : zero_to(f_, prec_);
        LaurentSeries s = *this;
        for (Fq& x : s.c_) x = f_->mul(x, a);
        return s;
    }

    friend LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b) { return combine(a, b, false); }
    friend LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b) { return combine(a, b, true); }

    friend LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) {
        require_same_field(*a.f_, *b.f_);
        if (a.is_certified_zero() || b.is_certified_zero()) return zero(a.f_);
        const FieldSpec& F = *a.f_;
        if (a.is_exact() && b.is_exact()) {
            std::vector<Fq> c(a.c_.size() + b.c_.size() - 1, 0);
            for (std::size_t i = 0; i < a.c_.size(); ++i) {
                if (a.c_[i] == 0) continue;
                for (std::size_t j = 0; j < b.c_.size(); ++j)
                    if (b.c_[j] != 0) c[i + j] = F.add(c[i + j], F.mul(a.c_[i], b.c_[j]));
            }
            return from_coeffs(a.f_, a.val_ + b.val_, std::move(c));
        }
        int prec = std::min(sat_add(a.val_, b.prec_), sat_add(b.val_, a.prec_));
        if (a.c_.empty() || b.c_.empty()) return zero_to(a.f_, prec);
        int val = a.val_ + b.val_;
        if (prec <= val) return zero_to(a.f_, prec);
        int len = prec - val;
        std::vector<Fq> c(static_cast<std::size_t>(len), 0);
        int na = static_cast<int>(a.c_.size()), nb = static_cast<int>(b.c_.size());
        for (int i = 0; i < na && i < len; ++i) {
            Fq ai = a.c_[i];
            if (ai == 0) continue;
            int jmax = std::min(nb, len - i);
            for (int j = 0; j < jmax; ++j) {
                Fq bj = b.c_[j];
                if (bj != 0) c[i + j] = F.add(c[i + j], F.mul(ai, bj));
            }
        }
        return from_coeffs(a.f_, val, std::move(c), prec);
    }

    LaurentSeries& operator+=(const LaurentSeries& o) { return *this = *this + o; }
    LaurentSeries& operator-=(const LaurentSeries& o) { return *this = *this - o; }
    LaurentSeries& operator*=(const LaurentSeries& o) { return *this = *this * o; }

    /// Equality of every coefficient both operands know.
    bool agrees_with(const LaurentSeries& o) const {
        int hi = std::min(prec_, o.prec_);
        if (hi >= kInfinite) hi = std::max(stored_end(), o.stored_end());
        int lo = std::min(c_.empty() ? hi : val_, o.c_.empty() ? hi : o.val_);
        for (int e = lo; e < hi; ++e)
            if (coeff_unchecked(e) != o.coeff_unchecked(e)) return false;
        return true;
    }

    /// No negative exponent is visible.
    bool is_integral() const { return c_.empty() ? (is_exact() || prec_ >= 0) : val_ >= 0; }

private:
    std::string unknown_msg(int e) const {
        return "coefficient at u^" + std::to_string(e) + " is not known (precision u^" + std::to_string(prec_) + ")";
    }

    static int sat_add(int a, int b) {
        long long s = static_cast<long long>(a) + b;
        if (s >= kInfinite) return kInfinite;
        if (s <= -kInfinite) return -kInfinite;
        return static_cast<int>(s);
    }

    static LaurentSeries combine(const LaurentSeries& a, const LaurentSeries& b, bool subtract) {
        require_same_field(*a.f_, *b.f_);
        const FieldSpec& F = *a.f_;
        if (b.is_certified_zero()) return a;
        if (a.is_certified_zero()) return subtract ? -b : b;
        int prec = std::min(a.prec_, b.prec_);
        int lo = std::min(a.c_.empty() ? kInfinite : a.val_, b.c_.empty() ? kInfinite : b.val_);
        int hi = prec >= kInfinite ? std::max(a.stored_end(), b.stored_end()) : prec;
        if (lo >= hi) return zero_to(a.f_, prec);
        std::vector<Fq> c(static_cast<std::size_t>(hi - lo), 0);
        for (int e = lo; e < hi; ++e) {
            Fq x = a.coeff_unchecked(e), y = b.coeff_unchecked(e);
            c[e - lo] = subtract ? F.sub(x, y) : F.add(x, y);
        }
        return from_coeffs(a.f_, lo, std::move(c), prec);
    }

    void normalize() {
        std::size_t k = 0;
        while (k < c_.size() && c_[k] == 0) ++k;
        if (k == c_.size()) {
            c_.clear();
            val_ = prec_;
            return;
        }
        if (k > 0) {
            c_.erase(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(k));
            val_ += static_cast<int>(k);
        }
    }

    void normalize_exact() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
        std::size_t k = 0;
        while (k < c_.size() && c_[k] == 0) ++k;
        if (k == c_.size()) {
            c_.clear();
            val_ = kInfinite;
            return;
        }
        if (k > 0) {
            c_.erase(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(k));
            val_ += static_cast<int>(k);
        }
    }

    FieldPtr f_;
    int val_ = 0;
    int prec_ = 0;
    std::vector<Fq> c_;
};

/// u -> u^p substitution (applied `times` times); F-linear, so coefficients
/// are unchanged and only exponents scale.
inline LaurentSeries frobenius_substitute(const LaurentSeries& s, int times = 1) {
    if (s.is_certified_zero()) return s;
    long long scale = 1;
    for (int i = 0; i < times; ++i) scale *= s.field()->p();
    auto clamp = [](long long x) {
        if (x >= LaurentSeries::kInfinite) return LaurentSeries::kInfinite;
        if (x <= -LaurentSeries::kInfinite) return -LaurentSeries::kInfinite;
        return static_cast<int>(x);
    };
    int prec = s.is_exact() ? LaurentSeries::kInfinite : clamp(scale * s.prec());
    if (s.known_zero()) return LaurentSeries::zero_to(s.field(), prec);
    int val = clamp(scale * s.val());
    std::size_t len = s.is_exact() ? (s.coeffs().size() - 1) * static_cast<std::size_t>(scale) + 1
                                   : static_cast<std::size_t>(prec - val);
    std::vector<Fq> c(len, 0);
    for (std::size_t i = 0; i < s.coeffs().size(); ++i) c[static_cast<std::size_t>(scale) * i] = s.coeffs()[i];
    return LaurentSeries::from_coeffs(s.field(), val, std::move(c), prec);
}

/// Multiplicative inverse. Relative precision is kept: for s of valuation v
/// known below u^P the inverse has valuation -v and is known below u^{P-2v}.
/// Exact monomials invert exactly; other exact series are expanded to
/// `exact_rel_prec` terms.
inline LaurentSeries invert(const LaurentSeries& s, int exact_rel_prec = LaurentSeries::kDefaultInversePrecision) {
    if (s.known_zero())
        throw ZeroLeadingCoefficient("cannot invert: no nonzero coefficient visible below u^" +
                                     std::to_string(s.prec()));
    const FieldSpec& F = *s.field();
    if (s.is_monomial()) return LaurentSeries::monomial(s.field(), F.inv(s.leading()), -s.val());
    const auto& a = s.coeffs();
    int rel = s.is_exact() ? exact_rel_prec : s.prec() - s.val();
    std::vector<Fq> b(static_cast<std::size_t>(rel), 0);
    Fq b0 = F.inv(a[0]);
    b[0] = b0;
    for (int k = 1; k < rel; ++k) {
        Fq acc = 0;
        int imax = std::min(k, static_cast<int>(a.size()) - 1);
        for (int i = 1; i <= imax; ++i)
            if (a[i] != 0 && b[k - i] != 0) acc = F.add(acc, F.mul(a[i], b[k - i]));
        b[k] = F.neg(F.mul(b0, acc));
    }
    return LaurentSeries::from_coeffs(s.field(), -s.val(), std::move(b), -s.val() + rel);
}

inline LaurentSeries operator/(const LaurentSeries& a, const LaurentSeries& b) { return a * invert(b); }

struct UnitTwist {
    LaurentSeries z;
    FieldElement x;
};

/// Solves phi^n(z) = x^n f z for a unit z with z(0) = 1, where f is a unit of
/// F[[u]]. x is the smallest-code solution of x^n = f(0)^{-1}. The degree-k
/// coefficient of z is determined by lower ones because phi^n only produces
/// exponents divisible by p^n. The output is known to the precision of f
/// (exact f is expanded to `exact_prec` terms).
inline UnitTwist solve_unit_twist(const LaurentSeries& f, int n, int exact_prec = LaurentSeries::kDefaultInversePrecision) {
    if (n < 1) throw InvalidArgument("twist order must be positive");
    if (f.known_zero() || f.valuation() != 0) throw InvalidArgument("solve_unit_twist needs a unit of F[[u]]");
    const FieldPtr& Fp = f.field();
    const FieldSpec& F = *Fp;
    Fq target = F.inv(f.leading());
    auto rts = F.roots(target, n);
    if (rts.empty())
        throw RootNotInField("x^" + std::to_string(n) + " = f(0)^{-1} has no solution in F_" +
                             std::to_string(F.q()) + "; enlarge the field");
    Fq x = rts.front();
    Fq xn = F.pow(x, n);
    int prec = f.is_exact() ? exact_prec : f.prec();
    std::vector<Fq> g(static_cast<std::size_t>(prec), 0);
    for (int e = 0; e < prec; ++e) g[e] = F.mul(xn, f.coeff(e));
    long long pn = 1;
    for (int i = 0; i < n; ++i) pn *= F.p();
    std::vector<Fq> z(static_cast<std::size_t>(prec), 0);
    z[0] = 1;
    for (int k = 1; k < prec; ++k) {
        Fq acc = (k % pn == 0) ? z[static_cast<std::size_t>(k / pn)] : 0;
        for (int i = 1; i <= k; ++i)
            if (g[i] != 0 && z[k - i] != 0) acc = F.sub(acc, F.mul(g[i], z[k - i]));
        z[k] = acc;
    }
    return {LaurentSeries::from_coeffs(Fp, 0, std::move(z), prec), FieldElement(Fp, x)};
}

} // namespace bkmod
