#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace stokesdd {

using cdouble = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Wraps an angle into [-pi, pi).
double wrap_angle(double a);

/// True when two angles agree modulo 2*pi within `tol`.
bool angles_equal(double a, double b, double tol = 1e-9);

/// Both polarizations of one symbol slot, in any of the e/k/r domains.
struct JonesPair {
    cdouble x{};
    cdouble y{};

    double norm_sq() const { return std::norm(x) + std::norm(y); }
};

/// Indices of one four-dimensional symbol: ring of |e_x|, ring of |e_y|,
/// and the phase indices of theta = arg(e_x e_y*) and gamma = arg(e_x De_y*).
struct SymbolIndex {
    int ring_x = 0;
    int ring_y = 0;
    int theta = 0;
    int gamma = 0;

    friend bool operator==(const SymbolIndex&, const SymbolIndex&) = default;
};

/// Real-valued view of a four-dimensional symbol.
struct FourDSymbol {
    double mag_x = 0.0;
    double mag_y = 0.0;
    double theta = 0.0;
    double gamma = 0.0;
};

/// n_r-ring / n_p-ary phase alphabet with equally spaced squared radii
/// r1^2 (1 + m delta^2), m = 0..n_r-1.
///
/// A single-polarization point is indexed ring-major:
/// `point = ring * n_p + phase`. A per-slot pair of points (x, y) is indexed
/// x-major: `pair = point_x * points() + point_y`.
class Constellation {
public:
    Constellation(int n_r, int n_p, double r1, double delta_sq);

    int rings() const { return n_r_; }
    int phases() const { return n_p_; }
    double r1() const { return r1_; }
    double delta_sq() const { return delta_sq_; }

    int points() const { return n_r_ * n_p_; }
    int pairs() const { return points() * points(); }

    double radius(int ring) const { return radii_.at(static_cast<std::size_t>(ring)); }
    const std::vector<double>& radii() const { return radii_; }
    /// Phase 2*pi*l/n_p wrapped into [-pi, pi).
    double phase(int index) const;
    std::vector<double> phase_set() const;

    /// Phase index of an angle on the grid; throws if the angle is off-grid.
    int phase_index(double angle, double tol = 1e-9) const;
    /// Ring index of a magnitude; throws if it is not a ring radius.
    int ring_index(double magnitude, double tol = 1e-9) const;

    cdouble point(int index) const;
    int ring_of(int point_index) const { return point_index / n_p_; }
    int phase_of(int point_index) const { return point_index % n_p_; }
    int point_index(int ring, int phase) const { return ring * n_p_ + phase; }

    JonesPair pair_point(int pair_index) const;
    int pair_x(int pair_index) const { return pair_index / points(); }
    int pair_y(int pair_index) const { return pair_index % points(); }

    /// Absolute (x, y) point pair carrying `sym`, given the previous slot's
    /// Y phase index.
    int encode(const SymbolIndex& sym, int prev_phase_y) const;
    /// Four-dimensional symbol carried by `pair_index` after a slot whose Y
    /// phase index was `prev_phase_y`.
    SymbolIndex decode(int pair_index, int prev_phase_y) const;

    FourDSymbol values(const SymbolIndex& sym) const;

    /// Mean of |e_x|^2 over a uniform symbol: r1^2 (1 + delta^2 (n_r - 1) / 2).
    double mean_energy() const;

    /// Pair index of the block-opening pilot [r1, r1]^t.
    int pilot_pair() const { return point_index(0, 0) * points() + point_index(0, 0); }

private:
    int n_r_;
    int n_p_;
    double r1_;
    double delta_sq_;
    std::vector<double> radii_;
};

Constellation build_constellation(int n_r, int n_p, double r1, double delta_sq);

/// Ring spacing that equalizes the minimum intra-ring distance on the
/// innermost ring and the minimum inter-ring distance between the two
/// outermost rings. Requires n_r >= 2 and n_p >= 2.
double balanced_delta_sq(int n_r, int n_p);

/// Per-quadrature noise variance sigma^2 such that
/// snr = mean_energy / (2 sigma^2).
double snr_to_noise_sigma_sq(const Constellation& c, double snr_linear);

double db_to_linear(double db);

JonesPair pilot_symbol(const Constellation& c);

}  // namespace stokesdd
