#pragma once

// Finite fields F_{p^m} presented over a caller-supplied monic irreducible
// modulus. Elements are encoded as integers whose base-p digits are the
// coefficients of the residue class (little-endian), so 0 and 1 are the
// additive and multiplicative identities and the prime field is 0..p-1.

#include "bkmod/errors.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace bkmod {

using Fq = std::uint32_t;

class FieldSpec;
using FieldPtr = std::shared_ptr<const FieldSpec>;

class FieldSpec {
public:
    /// Validates that p is prime and the modulus is monic and irreducible.
    static FieldPtr make(int p, std::vector<int> modulus) {
        return FieldPtr(new FieldSpec(p, std::move(modulus)));
    }

    /// The lexicographically first monic irreducible modulus of degree m.
    static FieldPtr standard(int p, int m) {
        if (!is_prime(p)) throw InvalidArgument("p = " + std::to_string(p) + " is not prime");
        if (m < 1) throw InvalidArgument("extension degree must be positive");
        std::vector<int> f(m + 1, 0);
        f[m] = 1;
        // enumerate the lower coefficients as a base-p counter
        for (;;) {
            if (is_irreducible(p, f)) return make(p, f);
            int i = 0;
            while (i < m && ++f[i] == p) f[i++] = 0;
            if (i == m) break;
        }
        throw InvalidArgument("no irreducible polynomial found");
    }

    int p() const { return p_; }
    int m() const { return m_; }
    std::uint32_t q() const { return q_; }
    const std::vector<int>& modulus() const { return modulus_; }

    bool same_as(const FieldSpec& o) const {
        return this == &o || (p_ == o.p_ && modulus_ == o.modulus_);
    }

    Fq add(Fq a, Fq b) const {
        if (!add_table_.empty()) return add_table_[a * q_ + b];
        return add_digits(a, b, false);
    }
    Fq sub(Fq a, Fq b) const { return add(a, neg_[b]); }
    Fq neg(Fq a) const { return neg_[a]; }

    Fq mul(Fq a, Fq b) const {
        if (a == 0 || b == 0) return 0;
        std::uint32_t e = log_[a] + log_[b];
        if (e >= q_ - 1) e -= q_ - 1;
        return exp_[e];
    }

    Fq inv(Fq a) const {
        if (a == 0) throw InvalidArgument("inverse of zero field element");
        std::uint32_t l = log_[a];
        return exp_[l == 0 ? 0 : q_ - 1 - l];
    }

    Fq div(Fq a, Fq b) const { return mul(a, inv(b)); }

    Fq pow(Fq a, long long e) const {
        if (a == 0) {
            if (e == 0) return 1;
            if (e < 0) throw InvalidArgument("negative power of zero");
            return 0;
        }
        long long order = q_ - 1;
        long long r = ((static_cast<long long>(log_[a]) * (e % order)) % order + order) % order;
        return exp_[static_cast<std::size_t>(r)];
    }

    /// Image of an integer in the prime field.
    Fq from_int(long long k) const {
        long long r = ((k % p_) + p_) % p_;
        return static_cast<Fq>(r);
    }

    Fq from_coeffs(const std::vector<int>& c) const {
        if (static_cast<int>(c.size()) != m_)
            throw InvalidArgument("field element needs exactly " + std::to_string(m_) + " coefficients");
        Fq code = 0;
        for (int i = m_ - 1; i >= 0; --i) {
            if (c[i] < 0 || c[i] >= p_) throw InvalidArgument("field coefficient out of range [0,p)");
            code = code * p_ + static_cast<Fq>(c[i]);
        }
        return code;
    }

    std::vector<int> coeffs(Fq a) const {
        std::vector<int> c(m_);
        for (int i = 0; i < m_; ++i) {
            c[i] = static_cast<int>(a % p_);
            a /= p_;
        }
        return c;
    }

    /// A fixed generator of the multiplicative group.
    Fq generator() const { return exp_.size() > 1 ? exp_[1] : 1; }

    /// All n-th roots of a, in increasing code order.
    std::vector<Fq> roots(Fq a, long long n) const {
        std::vector<Fq> out;
        for (Fq y = 1; y < q_; ++y)
            if (pow(y, n) == a) out.push_back(y);
        if (a == 0) out.insert(out.begin(), 0);
        return out;
    }

    static bool is_prime(long long n) {
        if (n < 2) return false;
        for (long long d = 2; d * d <= n; ++d)
            if (n % d == 0) return false;
        return true;
    }

    /// Irreducibility over F_p by trial division with every monic polynomial
    /// of degree at most m/2. Only intended for the small fields used here.
    static bool is_irreducible(int p, const std::vector<int>& f) {
        int m = static_cast<int>(f.size()) - 1;
        if (m < 1 || f[m] % p == 0) return false;
        for (int k = 1; 2 * k <= m; ++k) {
            std::vector<int> g(k + 1, 0);
            g[k] = 1;
            for (;;) {
                if (divides(p, g, f)) return false;
                int i = 0;
                while (i < k && ++g[i] == p) g[i++] = 0;
                if (i == k) break;
            }
        }
        return true;
    }

private:
    FieldSpec(int p, std::vector<int> modulus) : p_(p), modulus_(std::move(modulus)) {
        if (!is_prime(p)) throw InvalidArgument("p = " + std::to_string(p) + " is not prime");
        m_ = static_cast<int>(modulus_.size()) - 1;
        if (m_ < 1) throw InvalidArgument("modulus must have degree at least 1");
        for (int& c : modulus_) {
            if (c < 0 || c >= p) throw InvalidArgument("modulus coefficient out of range [0,p)");
        }
        if (modulus_[m_] != 1) throw InvalidArgument("modulus must be monic");
        if (!is_irreducible(p, modulus_)) throw InvalidArgument("modulus is not irreducible over F_p");
        long long q = 1;
        for (int i = 0; i < m_; ++i) {
            q *= p;
            if (q > (1 << 20)) throw InvalidArgument("field too large (more than 2^20 elements)");
        }
        q_ = static_cast<std::uint32_t>(q);
        build_tables();
    }

    static bool divides(int p, const std::vector<int>& g, std::vector<int> f) {
        int k = static_cast<int>(g.size()) - 1;
        for (int i = static_cast<int>(f.size()) - 1; i >= k; --i) {
            int c = f[i] % p;
            if (c == 0) continue;
            for (int j = 0; j <= k; ++j) f[i - k + j] = ((f[i - k + j] - c * g[j]) % p + p) % p;
        }
        for (int i = 0; i < k; ++i)
            if (f[i] % p != 0) return false;
        return true;
    }

    Fq add_digits(Fq a, Fq b, bool subtract) const {
        Fq r = 0, scale = 1;
        for (int i = 0; i < m_; ++i) {
            int da = static_cast<int>(a % p_), db = static_cast<int>(b % p_);
            a /= p_;
            b /= p_;
            int s = subtract ? (da - db + p_) % p_ : (da + db) % p_;
            r += static_cast<Fq>(s) * scale;
            scale *= p_;
        }
        return r;
    }

    // multiplication of residue classes by schoolbook product and reduction
    Fq mul_slow(Fq a, Fq b) const {
        std::vector<int> x = coeffs(a), y = coeffs(b), z(2 * m_ - 1, 0);
        for (int i = 0; i < m_; ++i)
            for (int j = 0; j < m_; ++j) z[i + j] = (z[i + j] + x[i] * y[j]) % p_;
        for (int i = 2 * m_ - 2; i >= m_; --i) {
            int c = z[i];
            if (c == 0) continue;
            for (int j = 0; j <= m_; ++j) z[i - m_ + j] = ((z[i - m_ + j] - c * modulus_[j]) % p_ + p_) % p_;
        }
        z.resize(m_);
        return from_coeffs(z);
    }

    void build_tables() {
        neg_.resize(q_);
        for (Fq a = 0; a < q_; ++a) neg_[a] = add_digits(0, a, true);
        if (q_ <= 1024) {
            add_table_.resize(static_cast<std::size_t>(q_) * q_);
            for (Fq a = 0; a < q_; ++a)
                for (Fq b = 0; b < q_; ++b) add_table_[a * q_ + b] = add_digits(a, b, false);
        }
        exp_.assign(q_ - 1, 0);
        log_.assign(q_, 0);
        if (q_ == 2) {
            exp_[0] = 1;
            return;
        }
        for (Fq g = 2; g < q_ + 1; ++g) {
            Fq cand = g % q_;
            if (cand == 0) continue;
            std::vector<char> seen(q_, 0);
            Fq x = 1;
            std::uint32_t k = 0;
            bool ok = true;
            for (; k < q_ - 1; ++k) {
                if (seen[x]) {
                    ok = false;
                    break;
                }
                seen[x] = 1;
                exp_[k] = x;
                log_[x] = k;
                x = mul_slow(x, cand);
            }
            if (ok && x == 1) return;
        }
        throw InvalidArgument("failed to find a multiplicative generator");
    }

    int p_ = 0;
    int m_ = 0;
    std::uint32_t q_ = 0;
    std::vector<int> modulus_;
    std::vector<Fq> exp_;
    std::vector<std::uint32_t> log_;
    std::vector<Fq> neg_;
    std::vector<Fq> add_table_;
};

/// A field element bundled with its field, for use at API boundaries.
class FieldElement {
public:
    FieldElement() = default;
    FieldElement(FieldPtr f, Fq code) : f_(std::move(f)), code_(code) {}

    static FieldElement from_coeffs(const FieldPtr& f, const std::vector<int>& c) {
        return FieldElement(f, f->from_coeffs(c));
    }

    const FieldPtr& field() const { return f_; }
    Fq code() const { return code_; }
    std::vector<int> coeffs() const { return f_->coeffs(code_); }
    bool is_zero() const { return code_ == 0; }

    FieldElement operator+(const FieldElement& o) const { return {f_, f_->add(code_, o.code_)}; }
    FieldElement operator-(const FieldElement& o) const { return {f_, f_->sub(code_, o.code_)}; }
    FieldElement operator*(const FieldElement& o) const { return {f_, f_->mul(code_, o.code_)}; }
    FieldElement inverse() const { return {f_, f_->inv(code_)}; }
    FieldElement pow(long long e) const { return {f_, f_->pow(code_, e)}; }
    bool operator==(const FieldElement& o) const { return code_ == o.code_; }

private:
    FieldPtr f_;
    Fq code_ = 0;
};

inline void require_same_field(const FieldSpec& a, const FieldSpec& b) {
    if (!a.same_as(b)) throw InvalidArgument("operands live over different fields");
}

} // namespace bkmod
