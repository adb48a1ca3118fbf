#ifndef RESOBEM_SPECFUN_HPP
#define RESOBEM_SPECFUN_HPP

#include <complex>
#include <vector>

#include "resobem/errors.hpp"
#include "resobem/geometry.hpp"

namespace resobem {

using Cplx = std::complex<double>;

/// Cylinder functions of integer order for complex argument on the principal
/// branch.  Target relative accuracy ~1e-13 for |z| in [1e-3, 1e3], |Im z| <= 20.
namespace bessel {

struct Cyl01 {
    // H^(1) and H^(2) are stored separately: whichever of the pair is
    // exponentially small off the real axis cannot be recovered from J and Y
    // in double precision.
    Cplx j0, j1, y0, y1, h10, h11, h20, h21;
    Cplx h0() const { return h10; }
    Cplx h1() const { return h11; }
};

/// J0, J1, Y0, Y1 at z (z != 0, principal branch of the log in Y).
Cyl01 cyl01(Cplx z);

/// J_n(z) for n = 0..nmax (stable for n beyond |z| via backward recurrence).
std::vector<Cplx> jn_array(Cplx z, int nmax);

/// H^(1)_n(z) for n = 0..nmax (forward recurrence; the Hankel function is the
/// dominant solution so this is stable).
std::vector<Cplx> h1n_array(Cplx z, int nmax);

Cplx j(int n, Cplx z);
Cplx y(int n, Cplx z);

/// Derivatives via Z_n' = Z_{n-1} - (n/z) Z_n (Z_0' = -Z_1).
Cplx j_deriv(int n, Cplx z);
Cplx h1_deriv(int n, Cplx z);

} // namespace bessel

/// H^(1)_order(z); throws DomainError at z = 0.
Cplx hankel1(int order, Cplx z);

enum class KernelFamily { Helmholtz2d, Laplace2d, Anisotropic2d };

/// Fundamental solution descriptor.  All families satisfy
///   (div gamma grad + omega^2) G = -delta
/// with gamma = conductivity * I (helmholtz/laplace) or the SPD matrix A.
struct Kernel {
    KernelFamily family = KernelFamily::Laplace2d;
    Cplx omega = 0.0;     // frequency (unused for laplace2d)
    double gamma = 1.0;   // scalar conductivity (helmholtz2d / laplace2d)
    Mat2 aniso = Mat2::Identity();

    static Kernel helmholtz(Cplx omega, double gamma);
    static Kernel laplace(double gamma);
    static Kernel anisotropic(Cplx omega, const Mat2& a);

    /// Effective wavenumber of the reduced isotropic problem.
    Cplx wavenumber() const;
    /// Metric factor L with rho = |L (x - y)|; identity except anisotropic2d
    /// where L = A^{-1/2}.
    const Mat2& metric() const { return metric_; }
    /// Overall scale c0 of the kernel c0 * H1_0(k rho) (helmholtz/anisotropic).
    Cplx amplitude() const;

  private:
    Mat2 metric_ = Mat2::Identity();
    double sqrt_det_ = 1.0;
};

Cplx green(const Kernel& kernel, const Vec2& x, const Vec2& y);
Eigen::Vector2cd green_gradient_y(const Kernel& kernel, const Vec2& x, const Vec2& y);

} // namespace resobem

#endif
