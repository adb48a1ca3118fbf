#include "resobem/specfun.hpp"

#include <cmath>
#include <numbers>

namespace resobem {
namespace bessel {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double euler_gamma = 0.57721566490153286060651209008240243;
const Cplx iu(0.0, 1.0);

// ---------------------------------------------------------------------------
// Minimal double-double arithmetic.  The power series for J/Y suffer from
// cancellation ~ exp(|z|) in the midrange 8 < |z| <= 30; accumulating the sums
// in ~31 significant digits keeps the final relative error below 1e-13 there.
// ---------------------------------------------------------------------------
struct DD {
    double hi = 0.0, lo = 0.0;
};

inline DD two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

inline DD quick_sum(double a, double b) { // requires |a| >= |b|
    double s = a + b;
    return {s, b - (s - a)};
}

inline DD two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline DD dd_add(DD a, DD b) {
    DD s = two_sum(a.hi, b.hi);
    s.lo += a.lo + b.lo;
    return quick_sum(s.hi, s.lo);
}

inline DD dd_neg(DD a) { return {-a.hi, -a.lo}; }

inline DD dd_mul(DD a, DD b) {
    DD p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return quick_sum(p.hi, p.lo);
}

inline DD dd_mul_d(DD a, double b) {
    DD p = two_prod(a.hi, b);
    p.lo += a.lo * b;
    return quick_sum(p.hi, p.lo);
}

inline DD dd_div_d(DD a, double b) {
    double q1 = a.hi / b;
    DD r = dd_add(a, dd_neg(dd_mul_d({q1, 0.0}, b)));
    double q2 = (r.hi + r.lo) / b;
    return quick_sum(q1, q2);
}

struct CDD {
    DD re, im;
};

inline CDD cdd(Cplx z) { return {{z.real(), 0.0}, {z.imag(), 0.0}}; }
inline Cplx to_cplx(CDD a) { return {a.re.hi + a.re.lo, a.im.hi + a.im.lo}; }

inline CDD cdd_add(CDD a, CDD b) { return {dd_add(a.re, b.re), dd_add(a.im, b.im)}; }

inline CDD cdd_mul(CDD a, CDD b) {
    DD re = dd_add(dd_mul(a.re, b.re), dd_neg(dd_mul(a.im, b.im)));
    DD im = dd_add(dd_mul(a.re, b.im), dd_mul(a.im, b.re));
    return {re, im};
}

inline CDD cdd_mul_d(CDD a, double b) { return {dd_mul_d(a.re, b), dd_mul_d(a.im, b)}; }
inline CDD cdd_mul_dd(CDD a, DD b) { return {dd_mul(a.re, b), dd_mul(a.im, b)}; }
inline CDD cdd_div_d(CDD a, double b) { return {dd_div_d(a.re, b), dd_div_d(a.im, b)}; }
inline CDD cdd_mul_i(CDD a) { return {dd_neg(a.im), a.re}; }
inline double cdd_abs(CDD a) { return std::hypot(a.re.hi, a.im.hi); }

const DD dd_gammaE{0.5772156649015329, -4.942915152430645e-18};
const DD dd_two_over_pi{0.6366197723675814, -3.935735335036497e-17};
const DD dd_ln2{0.6931471805599453, 2.3190468138462996e-17};

DD dd_exp(double a) {
    double k = std::nearbyint(a / dd_ln2.hi);
    DD r = dd_add({a, 0.0}, dd_neg(dd_mul_d(dd_ln2, k)));
    DD sum{1.0, 0.0}, term{1.0, 0.0};
    for (int n = 1; n < 40; ++n) {
        term = dd_div_d(dd_mul(term, r), double(n));
        sum = dd_add(sum, term);
        if (std::abs(term.hi) < 1e-36) break;
    }
    int ik = int(k);
    return {std::ldexp(sum.hi, ik), std::ldexp(sum.lo, ik)};
}

void dd_sincos(double b, DD& s, DD& c) { // |b| <= pi/2 + slack, no reduction
    DD bb = two_prod(b, b);
    DD ct{1.0, 0.0}, st{b, 0.0};
    c = ct;
    s = st;
    for (int k = 1; k < 30; ++k) {
        ct = dd_mul_d(dd_div_d(dd_mul(ct, bb), double(2 * k - 1) * (2 * k)), -1.0);
        st = dd_mul_d(dd_div_d(dd_mul(st, bb), double(2 * k) * (2 * k + 1)), -1.0);
        c = dd_add(c, ct);
        s = dd_add(s, st);
        if (std::abs(ct.hi) < 1e-36 && std::abs(st.hi) < 1e-36) break;
    }
}

// Complex log to ~double-double accuracy: one Newton correction of the double
// result.  Required because in H = J + iY the ln(z/2) J(z) part cancels the
// rest to ~exp(-2|Im z|); a plain double log would cap the accuracy of the
// small Hankel function at 1e-16 * exp(2|Im z|).
CDD cdd_log(Cplx w) {
    Cplx l0 = std::log(w);
    DD ea = dd_exp(-l0.real());
    DD sb, cb;
    dd_sincos(l0.imag(), sb, cb);
    CDD em = {dd_mul(ea, cb), dd_neg(dd_mul(ea, sb))}; // e^{-l0}
    CDD d = cdd_add(cdd_mul(cdd(w), em), cdd(-1.0));
    CDD corr = cdd_add(d, cdd_mul_d(cdd_mul(d, d), -0.5)); // log(1+d)
    return cdd_add(cdd(l0), corr);
}

CDD cdd_recip(Cplx z) {
    CDD q = cdd(1.0 / z);
    CDD r = cdd_add(cdd(1.0), cdd_mul_d(cdd_mul(cdd(z), q), -1.0));
    return cdd_add(q, cdd_mul(q, r));
}

// ---------------------------------------------------------------------------
// Power-series evaluation of J0, J1, Y0, Y1 (A&S 9.1.10-9.1.11), templated on
// the accumulator so the same loop serves the double and double-double paths.
// ---------------------------------------------------------------------------
Cyl01 cyl01_series_dd(Cplx z) {
    const CDD logz2 = cdd_log(z * 0.5);
    const CDD u = cdd_mul(cdd(z * 0.25), cdd(z)); // z^2/4

    CDD t = cdd(1.0);  // (-1)^k (z^2/4)^k / (k!)^2
    CDD s = cdd(1.0);  // (-1)^k (z^2/4)^k / (k! (k+1)!)
    CDD j0 = t, y0s = cdd(0.0);
    const DD m2g = dd_mul_d(dd_gammaE, -2.0);
    CDD j1s = s, y1s = cdd_mul_dd(s, dd_add({1.0, 0.0}, m2g)); // psi(1)+psi(2)
    DD hk{0.0, 0.0}; // harmonic numbers in dd: they multiply the cancelling part
    const double tol = 1e-34;
    double peak = 1.0;
    for (int k = 1; k < 250; ++k) {
        t = cdd_div_d(cdd_mul(t, u), double(k) * k);
        t = cdd_mul_d(t, -1.0);
        s = cdd_div_d(cdd_mul(s, u), double(k) * (k + 1));
        s = cdd_mul_d(s, -1.0);
        hk = dd_add(hk, dd_div_d({1.0, 0.0}, double(k)));
        DD hk1 = dd_add(hk, dd_div_d({1.0, 0.0}, double(k + 1)));
        j0 = cdd_add(j0, t);
        y0s = cdd_add(y0s, cdd_mul_d(cdd_mul_dd(t, hk), -1.0));
        j1s = cdd_add(j1s, s);
        y1s = cdd_add(y1s, cdd_mul_dd(s, dd_add(dd_add(hk, hk1), m2g)));
        double mag = cdd_abs(t);
        peak = std::max(peak, mag);
        if (mag < tol * peak && cdd_abs(s) < tol * peak) break;
    }
    CDD j1f = cdd_mul(cdd(z * 0.5), j1s);
    CDD gam{dd_gammaE, {0.0, 0.0}};
    CDD y0dd = cdd_mul_dd(cdd_add(cdd_mul(cdd_add(logz2, gam), j0), y0s), dd_two_over_pi);
    // y1 = (2/pi) [ log(z/2) J1 - 1/z - (z/4) * sum ]
    CDD y1in = cdd_add(cdd_add(cdd_mul(logz2, j1f), cdd_mul_d(cdd_recip(z), -1.0)),
                       cdd_mul(cdd(z * -0.25), y1s));
    CDD y1dd = cdd_mul_dd(y1in, dd_two_over_pi);
    Cyl01 r;
    r.j0 = to_cplx(j0);
    r.j1 = to_cplx(j1f);
    r.y0 = to_cplx(y0dd);
    r.y1 = to_cplx(y1dd);
    r.h10 = to_cplx(cdd_add(j0, cdd_mul_i(y0dd)));
    r.h11 = to_cplx(cdd_add(j1f, cdd_mul_i(y1dd)));
    r.h20 = to_cplx(cdd_add(j0, cdd_mul_d(cdd_mul_i(y0dd), -1.0)));
    r.h21 = to_cplx(cdd_add(j1f, cdd_mul_d(cdd_mul_i(y1dd), -1.0)));
    return r;
}

Cyl01 cyl01_series(Cplx z) {
    const Cplx logz2 = std::log(z / 2.0);
    const Cplx u = 0.25 * z * z;

    Cplx t = 1.0, s = 1.0;
    Cplx j0 = t, y0s = 0.0;
    Cplx j1s = s, y1s = (1.0 - 2.0 * euler_gamma) * s;
    double hk = 0.0;
    for (int k = 1; k < 120; ++k) {
        t *= -u / (double(k) * k);
        s *= -u / (double(k) * (k + 1));
        hk += 1.0 / k;
        double hk1 = hk + 1.0 / (k + 1);
        j0 += t;
        y0s += -hk * t;
        j1s += s;
        y1s += (hk + hk1 - 2.0 * euler_gamma) * s;
        if (std::abs(t) < 1e-18 * (1.0 + std::abs(j0))) break;
    }
    Cyl01 r;
    r.j0 = j0;
    r.j1 = (z * 0.5) * j1s;
    r.y0 = (2.0 / pi) * ((logz2 + euler_gamma) * j0 + y0s);
    r.y1 = (2.0 / pi) * (logz2 * r.j1) - 2.0 / (pi * z) - (z / (2.0 * pi)) * y1s;
    r.h10 = r.j0 + iu * r.y0;
    r.h11 = r.j1 + iu * r.y1;
    r.h20 = r.j0 - iu * r.y0;
    r.h21 = r.j1 - iu * r.y1;
    return r;
}

// Hankel asymptotic expansion (DLMF 10.17.5/10.17.6), |z| large.
Cplx hankel_asym(int n, Cplx z, int sign) { // sign +1 -> H1, -1 -> H2
    const double mu = 4.0 * n * n;
    Cplx ph = z - (0.5 * n + 0.25) * pi;
    Cplx pref = std::sqrt(2.0 / (pi * z)) * std::exp(Cplx(0, sign) * ph);
    Cplx sum = 1.0, term = 1.0;
    double last = 1.0;
    for (int k = 1; k < 60; ++k) {
        double num = mu - double(2 * k - 1) * (2 * k - 1);
        term *= Cplx(0, sign) * num / (8.0 * double(k) * z);
        double mag = std::abs(term);
        if (mag > last) break; // divergent tail of the asymptotic series
        sum += term;
        last = mag;
        if (mag < 1e-17 * std::abs(sum)) break;
    }
    return pref * sum;
}

Cyl01 cyl01_asym(Cplx z) {
    Cyl01 r;
    r.h10 = hankel_asym(0, z, +1);
    r.h20 = hankel_asym(0, z, -1);
    r.h11 = hankel_asym(1, z, +1);
    r.h21 = hankel_asym(1, z, -1);
    r.j0 = 0.5 * (r.h10 + r.h20);
    r.y0 = (r.h10 - r.h20) / (2.0 * iu);
    r.j1 = 0.5 * (r.h11 + r.h21);
    r.y1 = (r.h11 - r.h21) / (2.0 * iu);
    return r;
}

// Right half-plane dispatcher (Re z >= 0).
Cyl01 cyl01_rhp(Cplx z) {
    double a = std::abs(z);
    if (a <= 6.0 && std::abs(z.imag()) <= 1.0) return cyl01_series(z);
    if (a <= 17.0) return cyl01_series_dd(z);
    return cyl01_asym(z);
}

bool reflect_upper(Cplx z) {
    // principal-branch factorisation z = w e^{+i pi} (true) or w e^{-i pi}
    return z.imag() > 0.0 || (z.imag() == 0.0 && !std::signbit(z.imag()));
}

} // namespace

Cyl01 cyl01(Cplx z) {
    if (z == 0.0) throw DomainError("cylinder functions singular at z = 0");
    if (z.real() >= 0.0) return cyl01_rhp(z);

    // Reflection to the right half plane, DLMF 10.11 with m = +/-1.  In each
    // branch the exponentially small member of the {H1, H2} pair is mapped
    // directly to the small member at -z, never reconstructed by subtraction.
    Cyl01 w = cyl01_rhp(-z);
    Cyl01 r;
    r.j0 = w.j0;
    r.j1 = -w.j1;
    if (reflect_upper(z)) {
        // z = (-z) e^{i pi}:  H1_n(z) = -(-1)^n H2_n(-z)
        r.h10 = -w.h20;
        r.h11 = w.h21;
        r.h20 = 2.0 * r.j0 - r.h10;
        r.h21 = 2.0 * r.j1 - r.h11;
    } else {
        // z = (-z) e^{-i pi}: H1_n(z) = (-1)^n (H1_n(-z) + 2 J_n(-z)),
        //                     H2_n(z) = -(-1)^n H1_n(-z)
        r.h10 = w.h10 + 2.0 * w.j0;
        r.h11 = -(w.h11 + 2.0 * w.j1);
        r.h20 = -w.h10;
        r.h21 = w.h11;
    }
    r.y0 = (r.h10 - r.j0) / iu;
    r.y1 = (r.h11 - r.j1) / iu;
    return r;
}

std::vector<Cplx> jn_array(Cplx z, int nmax) {
    if (z == 0.0) {
        std::vector<Cplx> out(nmax + 1, 0.0);
        out[0] = 1.0;
        return out;
    }
    bool neg = z.real() < 0.0;
    Cplx w = neg ? -z : z;
    Cyl01 c = cyl01_rhp(w);
    std::vector<Cplx> out(nmax + 1);

    double a = std::abs(w);
    int start = std::max(nmax, int(a)) + 20 + int(2.0 * std::sqrt(double(std::max(nmax, int(a)) + 1)));
    std::vector<Cplx> f(start + 2);
    f[start + 1] = 0.0;
    f[start] = 1e-280;
    for (int n = start; n >= 1; --n) {
        f[n - 1] = (2.0 * n / w) * f[n] - f[n + 1];
        if (std::abs(f[n - 1]) > 1e280) { // rescale to avoid overflow
            for (int m = n - 1; m <= start + 1; ++m) f[m] *= 1e-280;
        }
    }
    // normalize against the directly computed J0 or J1, whichever is larger
    Cplx scale = (std::abs(c.j0) >= std::abs(c.j1) && std::abs(f[0]) > 0.0)
                     ? c.j0 / f[0]
                     : c.j1 / f[1];
    for (int n = 0; n <= nmax; ++n) out[n] = f[n] * scale;
    if (neg)
        for (int n = 1; n <= nmax; n += 2) out[n] = -out[n];
    return out;
}

std::vector<Cplx> h1n_array(Cplx z, int nmax) {
    if (z == 0.0) throw DomainError("H1_n singular at z = 0");
    Cyl01 c = cyl01(z);
    std::vector<Cplx> h(nmax + 1);
    h[0] = c.h10;
    if (nmax >= 1) h[1] = c.h11;
    for (int n = 1; n < nmax; ++n) h[n + 1] = (2.0 * n / z) * h[n] - h[n - 1];
    return h;
}

Cplx j(int n, Cplx z) { return jn_array(z, n)[n]; }

Cplx y(int n, Cplx z) {
    auto h = h1n_array(z, n);
    auto jv = jn_array(z, n);
    return (h[n] - jv[n]) / iu;
}

Cplx j_deriv(int n, Cplx z) {
    auto jv = jn_array(z, n + 1);
    if (n == 0) return -jv[1];
    return jv[n - 1] - (double(n) / z) * jv[n];
}

Cplx h1_deriv(int n, Cplx z) {
    auto h = h1n_array(z, std::max(1, n));
    if (n == 0) return -h[1];
    return h[n - 1] - (double(n) / z) * h[n];
}

} // namespace bessel

Cplx hankel1(int order, Cplx z) {
    if (z == 0.0) throw DomainError("hankel1: logarithmic singularity at z = 0");
    return bessel::h1n_array(z, order)[order];
}

Kernel Kernel::helmholtz(Cplx omega, double gamma) {
    if (gamma <= 0) throw Error("helmholtz kernel: gamma must be positive");
    Kernel k;
    k.family = KernelFamily::Helmholtz2d;
    k.omega = omega;
    k.gamma = gamma;
    return k;
}

Kernel Kernel::laplace(double gamma) {
    if (gamma <= 0) throw Error("laplace kernel: gamma must be positive");
    Kernel k;
    k.family = KernelFamily::Laplace2d;
    k.gamma = gamma;
    return k;
}

Kernel Kernel::anisotropic(Cplx omega, const Mat2& a) {
    if (std::abs(a(0, 1) - a(1, 0)) > 1e-13 * (1.0 + a.cwiseAbs().maxCoeff()))
        throw Error("anisotropic kernel: matrix must be symmetric");
    Eigen::SelfAdjointEigenSolver<Mat2> es(a);
    if (es.eigenvalues().minCoeff() <= 0)
        throw Error("anisotropic kernel: matrix must be positive definite");
    Kernel k;
    k.family = KernelFamily::Anisotropic2d;
    k.omega = omega;
    k.aniso = a;
    k.metric_ = es.operatorInverseSqrt();
    k.sqrt_det_ = std::sqrt(es.eigenvalues().prod());
    return k;
}

Cplx Kernel::wavenumber() const {
    switch (family) {
    case KernelFamily::Helmholtz2d: return omega / std::sqrt(gamma);
    case KernelFamily::Anisotropic2d: return omega;
    case KernelFamily::Laplace2d: return 0.0;
    }
    return 0.0;
}

Cplx Kernel::amplitude() const {
    switch (family) {
    case KernelFamily::Helmholtz2d: return Cplx(0, 0.25) / gamma;
    case KernelFamily::Anisotropic2d: return Cplx(0, 0.25) / sqrt_det_;
    case KernelFamily::Laplace2d: return 0.0;
    }
    return 0.0;
}

Cplx green(const Kernel& kernel, const Vec2& x, const Vec2& y) {
    Vec2 d = y - x;
    if (d.norm() == 0.0) throw CoincidentPoints("green: x == y");
    switch (kernel.family) {
    case KernelFamily::Laplace2d:
        return Cplx(-std::log(d.norm()) / (2.0 * std::numbers::pi * kernel.gamma), 0.0);
    case KernelFamily::Helmholtz2d:
        return kernel.amplitude() * hankel1(0, kernel.wavenumber() * d.norm());
    case KernelFamily::Anisotropic2d: {
        double rho = (kernel.metric() * d).norm();
        return kernel.amplitude() * hankel1(0, kernel.omega * rho);
    }
    }
    return 0.0;
}

Eigen::Vector2cd green_gradient_y(const Kernel& kernel, const Vec2& x, const Vec2& y) {
    Vec2 d = y - x;
    double r = d.norm();
    if (r == 0.0) throw CoincidentPoints("green_gradient_y: x == y");
    switch (kernel.family) {
    case KernelFamily::Laplace2d:
        return (-1.0 / (2.0 * std::numbers::pi * kernel.gamma * r * r)) *
               d.cast<Cplx>();
    case KernelFamily::Helmholtz2d: {
        Cplx k = kernel.wavenumber();
        Cplx f = -kernel.amplitude() * k * hankel1(1, k * r) / r;
        return f * d.cast<Cplx>();
    }
    case KernelFamily::Anisotropic2d: {
        double rho = (kernel.metric() * d).norm();
        Vec2 ainv_d = kernel.metric() * (kernel.metric() * d);
        Cplx f = -kernel.amplitude() * kernel.omega * hankel1(1, kernel.omega * rho) / rho;
        return f * ainv_d.cast<Cplx>();
    }
    }
    return Eigen::Vector2cd::Zero();
}

} // namespace resobem
