#include "qsor/spectrum.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "qsor/errors.hpp"

namespace qsor {

namespace {

// Householder similarity reduction to upper Hessenberg form, in place.
void hessenberg_reduce(Matrix& h) {
    const std::size_t n = h.rows();
    if (n < 3) return;
    std::vector<double> v(n), w(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double scale = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) scale += std::abs(h(i, k));
        if (scale == 0.0) continue;

        double sumsq = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) {
            v[i] = h(i, k) / scale;
            sumsq += v[i] * v[i];
        }
        double alpha = std::sqrt(sumsq);
        if (v[k + 1] > 0.0) alpha = -alpha;
        const double beta_denom = sumsq - v[k + 1] * alpha;
        if (beta_denom == 0.0) continue;
        v[k + 1] -= alpha;
        const double beta = 1.0 / beta_denom;

        // left update: H -= beta v (v^T H) on rows k+1..n-1
        for (std::size_t j = k; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = k + 1; i < n; ++i) s += v[i] * h(i, j);
            s *= beta;
            for (std::size_t i = k + 1; i < n; ++i) h(i, j) -= s * v[i];
        }
        // right update: H -= (H v) beta v^T on cols k+1..n-1
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) s += h(i, j) * v[j];
            s *= beta;
            for (std::size_t j = k + 1; j < n; ++j) h(i, j) -= s * v[j];
        }
        h(k + 1, k) = scale * alpha;
        for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
    }
}

inline double sign_like(double magnitude, double sign_of) {
    return sign_of >= 0.0 ? std::abs(magnitude) : -std::abs(magnitude);
}

// Francis double-shift QR on an upper Hessenberg matrix (EISPACK hqr scheme).
std::vector<std::complex<double>> hessenberg_eigenvalues(Matrix& h) {
    const std::size_t size = h.rows();
    std::vector<std::complex<double>> eig;
    eig.reserve(size);
    if (size == 0) return eig;

    const double eps = std::numeric_limits<double>::epsilon();

    double anorm = 0.0;
    for (std::size_t i = 0; i < size; ++i)
        for (std::size_t j = (i == 0 ? 0 : i - 1); j < size; ++j)
            anorm += std::abs(h(i, j));
    if (anorm == 0.0) {
        eig.assign(size, {0.0, 0.0});
        return eig;
    }

    long nn = long(size) - 1;
    double shift_accum = 0.0;

    while (nn >= 0) {
        long its = 0;
        long l;
        do {
            // look for a negligible subdiagonal element
            for (l = nn; l >= 1; --l) {
                double s = std::abs(h(l - 1, l - 1)) + std::abs(h(l, l));
                if (s == 0.0) s = anorm;
                if (std::abs(h(l, l - 1)) <= eps * s) {
                    h(l, l - 1) = 0.0;
                    break;
                }
            }
            if (l < 0) l = 0;

            double x = h(nn, nn);
            if (l == nn) {
                eig.emplace_back(x + shift_accum, 0.0);
                --nn;
            } else {
                double y = h(nn - 1, nn - 1);
                double w = h(nn, nn - 1) * h(nn - 1, nn);
                if (l == nn - 1) {
                    double p = 0.5 * (y - x);
                    double q = p * p + w;
                    double z = std::sqrt(std::abs(q));
                    x += shift_accum;
                    if (q >= 0.0) {
                        z = p + sign_like(z, p);
                        eig.emplace_back(x + z, 0.0);
                        eig.emplace_back(z != 0.0 ? x - w / z : x + z, 0.0);
                    } else {
                        eig.emplace_back(x + p, z);
                        eig.emplace_back(x + p, -z);
                    }
                    nn -= 2;
                } else {
                    if (its == 30) {
                        throw NumericalFailureError(
                            std::abs(x + shift_accum),
                            "dense_eigenvalues: QR iteration did not converge");
                    }
                    if (its == 10 || its == 20) {
                        // exceptional shift
                        shift_accum += x;
                        for (long i = 0; i <= nn; ++i) h(i, i) -= x;
                        double s = std::abs(h(nn, nn - 1)) + std::abs(h(nn - 1, nn - 2));
                        x = y = 0.75 * s;
                        w = -0.4375 * s * s;
                    }
                    ++its;

                    // two consecutive small subdiagonals
                    long m;
                    double p = 0.0, q = 0.0, r = 0.0, z = 0.0;
                    for (m = nn - 2; m >= l; --m) {
                        z = h(m, m);
                        double rr = x - z;
                        double ss = y - z;
                        p = (rr * ss - w) / h(m + 1, m) + h(m, m + 1);
                        q = h(m + 1, m + 1) - z - rr - ss;
                        r = h(m + 2, m + 1);
                        double s = std::abs(p) + std::abs(q) + std::abs(r);
                        p /= s;
                        q /= s;
                        r /= s;
                        if (m == l) break;
                        double u = std::abs(h(m, m - 1)) * (std::abs(q) + std::abs(r));
                        double v = std::abs(p) * (std::abs(h(m - 1, m - 1)) + std::abs(z) +
                                                  std::abs(h(m + 1, m + 1)));
                        if (u <= eps * v) break;
                    }
                    for (long i = m + 2; i <= nn; ++i) {
                        h(i, i - 2) = 0.0;
                        if (i > m + 2) h(i, i - 3) = 0.0;
                    }

                    // double QR sweep over rows l..nn
                    for (long k = m; k <= nn - 1; ++k) {
                        if (k != m) {
                            p = h(k, k - 1);
                            q = h(k + 1, k - 1);
                            r = (k != nn - 1) ? h(k + 2, k - 1) : 0.0;
                            x = std::abs(p) + std::abs(q) + std::abs(r);
                            if (x != 0.0) {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        double s = sign_like(std::sqrt(p * p + q * q + r * r), p);
                        if (s == 0.0) continue;
                        if (k == m) {
                            if (l != m) h(k, k - 1) = -h(k, k - 1);
                        } else {
                            h(k, k - 1) = -s * x;
                        }
                        p += s;
                        x = p / s;
                        double yy = q / s;
                        z = r / s;
                        q /= p;
                        r /= p;
                        for (long j = k; j <= nn; ++j) {
                            double pp = h(k, j) + q * h(k + 1, j);
                            if (k != nn - 1) {
                                pp += r * h(k + 2, j);
                                h(k + 2, j) -= pp * z;
                            }
                            h(k + 1, j) -= pp * yy;
                            h(k, j) -= pp * x;
                        }
                        long mmin = (nn < k + 3) ? nn : k + 3;
                        for (long i = l; i <= mmin; ++i) {
                            double pp = x * h(i, k) + yy * h(i, k + 1);
                            if (k != nn - 1) {
                                pp += z * h(i, k + 2);
                                h(i, k + 2) -= pp * r;
                            }
                            h(i, k + 1) -= pp * q;
                            h(i, k) -= pp;
                        }
                    }
                }
            }
        } while (l < nn - 1);
    }
    return eig;
}

} // namespace

std::vector<std::complex<double>> dense_eigenvalues(Matrix a) {
    if (!a.square()) throw std::invalid_argument("dense_eigenvalues: matrix must be square");
    hessenberg_reduce(a);
    return hessenberg_eigenvalues(a);
}

double spectral_radius_dense(const Matrix& a) {
    double rho = 0.0;
    for (const auto& ev : dense_eigenvalues(a)) rho = std::max(rho, std::abs(ev));
    return rho;
}

} // namespace qsor
