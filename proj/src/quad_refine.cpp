#include "quad_refine.hpp"

#include <quadmath.h>

#include <cmath>

namespace ruelle::detail {

namespace {

struct Cq {
    __float128 re = 0, im = 0;

    Cq() = default;
    Cq(__float128 r, __float128 i) : re(r), im(i) {}
    explicit Cq(const std::complex<double> &z) : re(z.real()), im(z.imag()) {}

    Cq operator+(const Cq &o) const { return {re + o.re, im + o.im}; }
    Cq operator-(const Cq &o) const { return {re - o.re, im - o.im}; }
    Cq operator*(const Cq &o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    // Smith's algorithm
    Cq operator/(const Cq &o) const {
        if (fabsq(o.re) >= fabsq(o.im)) {
            const __float128 r = o.im / o.re, den = o.re + o.im * r;
            return {(re + im * r) / den, (im - re * r) / den};
        }
        const __float128 r = o.re / o.im, den = o.im + o.re * r;
        return {(re * r + im) / den, (im * r - re) / den};
    }
    Cq conj() const { return {re, -im}; }
    __float128 abs2() const { return re * re + im * im; }
    double abs_d() const { return static_cast<double>(sqrtq(abs2())); }
    std::complex<double> to_double() const {
        return {static_cast<double>(re), static_cast<double>(im)};
    }
};

using VecQ = std::vector<Cq>;
using MatQ = std::vector<VecQ>; // row major

// gkw-mode collocation matrix with quad entries (Mobius branches only).
bool build_matrix_quad(const IfsSystem &ifs, double a, double b, int M, MatQ &out) {
    if (!ifs.all_mobius()) return false;
    const int N = ifs.size();
    const int dim = N * M;
    const __float128 pi = M_PIq;

    std::vector<__float128> ref_nodes(M), ref_w(M);
    for (int k = 0; k < M; ++k) {
        const __float128 theta = (2 * k + 1) * pi / (2 * M);
        ref_nodes[k] = cosq(theta);
        ref_w[k] = (k % 2 == 0 ? 1 : -1) * sinq(theta);
    }
    std::vector<__float128> mid(N), half(N);
    for (int i = 0; i < N; ++i) {
        const Interval &iv = ifs.interval(i);
        mid[i] = (__float128(iv.lo) + iv.hi) / 2;
        half[i] = (__float128(iv.hi) - iv.lo) / 2;
    }

    out.assign(dim, VecQ(dim, Cq(0, 0)));
    std::vector<Cq> row(M);
    for (int i = 0; i < N; ++i) {
        for (int k = 0; k < M; ++k) {
            const __float128 y = mid[i] + half[i] * ref_nodes[k];
            for (int j = 0; j < N; ++j) {
                if (!ifs.admissible(i, j)) continue;
                const MobiusMap &g = *ifs.branch(i, j).mobius;
                const __float128 den = __float128(g.c) * y + g.d;
                const __float128 img = (__float128(g.a) * y + g.b) / den;
                const __float128 det = __float128(g.a) * g.d - __float128(g.b) * g.c;
                const __float128 absd = fabsq(det / (den * den));
                // |g'(y)|^s = e^{a log|g'|} (cos(b log|g'|) + i sin(b log|g'|))
                const __float128 L = logq(absd);
                const __float128 mag = expq(__float128(a) * L);
                const Cq w(mag * cosq(__float128(b) * L), mag * sinq(__float128(b) * L));

                const __float128 t = (img - mid[j]) / half[j];
                Cq denom(0, 0);
                bool exact = false;
                for (int l = 0; l < M; ++l) {
                    if (t == ref_nodes[l]) {
                        for (int q = 0; q < M; ++q) row[q] = Cq(0, 0);
                        row[l] = Cq(1, 0);
                        exact = true;
                        break;
                    }
                    row[l] = Cq(ref_w[l] / (t - ref_nodes[l]), 0);
                    denom = denom + row[l];
                }
                if (!exact)
                    for (int l = 0; l < M; ++l) row[l] = row[l] / denom;
                for (int l = 0; l < M; ++l) out[i * M + k][j * M + l] = w * row[l];
            }
        }
    }
    return true;
}

// LU solve of (A - lambda I) x = b with partial pivoting.
bool shifted_solve(const MatQ &A, const Cq &lambda, const VecQ &b, VecQ &x) {
    const int n = static_cast<int>(A.size());
    MatQ M = A;
    for (int i = 0; i < n; ++i) M[i][i] = M[i][i] - lambda;
    x = b;
    for (int c = 0; c < n; ++c) {
        int best = c;
        __float128 mag = M[c][c].abs2();
        for (int r = c + 1; r < n; ++r)
            if (M[r][c].abs2() > mag) {
                mag = M[r][c].abs2();
                best = r;
            }
        if (mag == 0) return false;
        if (best != c) {
            std::swap(M[best], M[c]);
            std::swap(x[best], x[c]);
        }
        for (int r = c + 1; r < n; ++r) {
            const Cq f = M[r][c] / M[c][c];
            if (f.abs2() == 0) continue;
            for (int k = c + 1; k < n; ++k) M[r][k] = M[r][k] - f * M[c][k];
            x[r] = x[r] - f * x[c];
        }
    }
    for (int r = n - 1; r >= 0; --r) {
        Cq acc = x[r];
        for (int k = r + 1; k < n; ++k) acc = acc - M[r][k] * x[k];
        x[r] = acc / M[r][r];
    }
    return true;
}

} // namespace

bool refine_eigenvalues_quad(const IfsSystem &ifs, double a, double b, int M,
                             std::vector<std::complex<double>> &values,
                             const Eigen::MatrixXcd &vectors,
                             const std::vector<int> &order) {
    MatQ Aq;
    if (!build_matrix_quad(ifs, a, b, M, Aq)) return false;
    const int n = static_cast<int>(Aq.size());
    MatQ AqH(n, VecQ(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) AqH[i][j] = Aq[j][i].conj();

    for (int idx : order) {
        Cq lambda(values[idx]);
        VecQ v(n), u(n);
        for (int i = 0; i < n; ++i) u[i] = v[i] = Cq(vectors(i, idx));

        // Two-sided (Ostrowski) Rayleigh-quotient iteration; the one-sided
        // quotient stalls at the eigenvalue's condition level on these
        // non-normal matrices.
        for (int it = 0; it < 5; ++it) {
            VecQ w, z;
            if (!shifted_solve(Aq, lambda, v, w) ||
                !shifted_solve(AqH, lambda.conj(), u, z)) {
                lambda.re *= (1 + __float128(1e-30));
                continue;
            }
            auto normalize = [](VecQ &vec) {
                __float128 norm2 = 0;
                for (const Cq &c : vec) norm2 += c.abs2();
                if (norm2 == 0) return false;
                const __float128 inv = 1 / sqrtq(norm2);
                for (Cq &c : vec) {
                    c.re *= inv;
                    c.im *= inv;
                }
                return true;
            };
            if (!normalize(w) || !normalize(z)) break;
            v = std::move(w);
            u = std::move(z);
            // lambda = (u^H A v) / (u^H v)
            Cq num(0, 0), den(0, 0);
            for (int i = 0; i < n; ++i) {
                Cq rowv(0, 0);
                for (int j = 0; j < n; ++j) rowv = rowv + Aq[i][j] * v[j];
                num = num + u[i].conj() * rowv;
                den = den + u[i].conj() * v[i];
            }
            if (den.abs2() == 0) break;
            const Cq rq = num / den;
            const Cq delta = rq - lambda;
            lambda = rq;
            if (delta.abs_d() <= 1e-30 * lambda.abs_d()) break;
        }
        values[idx] = lambda.to_double();
    }
    return true;
}

} // namespace ruelle::detail
