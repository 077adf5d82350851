// Radial densities of Haar measure in KAK and K N_L K coordinates, the
// averaging measure families built from them (balls, shells, bi-sectors,
// horocycle windows, K-density convolutions), and the sector-domination
// construction.
#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hypererg/arcs.hpp"
#include "hypererg/group.hpp"
#include "hypererg/rng.hpp"

namespace hypererg {

// Radial density of Haar measure in KAK coordinates:
// sinh(t)^{m1+m2} cosh(t)^{m2}.
double kak_density(const RankOneProfile& profile, double t);

// Radial density psi of Haar measure in K N_L K coordinates, as a function
// of the horocycle parameter T:
//   m2 > 0:  psi(T) = 2^{-(m1+m2+1)} T^{m1+m2} (T^2/4 + 1)^{(m2-1)/2}
//   m2 = 0:  psi(T) = T^{m1} (T^2/4 + 1)^{(m1-1)/2}
// For the hyperbolic plane psi(T) = T.
double psi_density(const RankOneProfile& profile, double T);

// The substitution map pairing the two coordinate systems:
// T(R) = 2 sinh(R) when m2 > 0, T(R) = 2 sinh(R/2) when m2 = 0.
double psi_window_map(const RankOneProfile& profile, double R);

// Relative residual of the change-of-variables identity
//   int_0^R sinh^{m1+m2} cosh^{m2} = int_0^{T(R)} psi,
// both sides by adaptive quadrature at relative tolerance 1e-10.
double normalization_identity_residual(const RankOneProfile& profile, double R);

// Inverse-CDF sampler for an arbitrary positive density on [lo, hi]:
// 2048 Chebyshev-spaced nodes, monotone cubic (Fritsch-Carlson) CDF
// interpolation, Newton inversion with bisection fallback.
class RadialCdfTable {
  public:
    RadialCdfTable(std::function<double(double)> density, double lo, double hi,
                   int nodes = 2048);

    double invert(double u) const;     // u in [0, 1) -> t
    double cdf(double t) const;        // interpolated CDF
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    // Unnormalized mass of the density over [lo, hi] as the table computed it.
    double raw_total() const { return raw_total_; }

  private:
    double lo_, hi_;
    double raw_total_ = 0.0;
    std::vector<double> t_;      // nodes
    std::vector<double> cdf_;    // CDF values at nodes
    std::vector<double> slope_;  // monotone Hermite slopes
};

// Draw t on [r, r + eps] with density proportional to the KAK radial
// density.  Exact inverse CDF for profiles with (m1, m2) = (1, 0), table
// inversion otherwise.
double sample_radial_shell(const RankOneProfile& profile, double r, double eps, Rng& rng);
double sample_radial_ball(const RankOneProfile& profile, double r, Rng& rng);

// Draw t on [2 sinh(b r), 2 sinh(b (r + eps))] with density proportional
// to psi.
double sample_horocycle_window(const RankOneProfile& profile, double r, double eps, double b,
                               Rng& rng);

// Ratio eta([0,T)) / eta([T, T')) for the window T = 2 sinh(b r),
// T' = 2 sinh(b (r + eps)); finite for all r by the cosh lower bound
// on the window stretch factor.
double shell_mass_ratio(const RankOneProfile& profile, double r, double eps, double b);

// An averaging family: one of the probability measures on G studied here,
// parametrized by the radius r at sampling time.
class MeasureFamily {
  public:
    enum class Kind { Ball, Shell, Sector, HorocycleWindow, Convolution };

    static MeasureFamily ball(const RankOneProfile& profile);
    static MeasureFamily shell(const RankOneProfile& profile, double eps);
    static MeasureFamily sector(const RankOneProfile& profile, double eps, ArcSet left,
                                ArcSet right);
    // Window scale b defaults to 1/(2c).  Optional arc factors turn the bare
    // window measure on N into k1 n_t k2 convolutions.
    static MeasureFamily horocycle_window(const RankOneProfile& profile, double eps,
                                          std::optional<double> b = std::nullopt,
                                          std::optional<ArcSet> left = std::nullopt,
                                          std::optional<ArcSet> right = std::nullopt);
    static MeasureFamily convolution(const RankOneProfile& profile, double eps, KDensity left,
                                     KDensity right);

    Kind kind() const { return kind_; }
    const RankOneProfile& profile() const { return profile_; }
    double epsilon() const { return eps_; }
    double window_scale() const { return b_; }
    const std::optional<ArcSet>& left_arcs() const { return left_arcs_; }
    const std::optional<ArcSet>& right_arcs() const { return right_arcs_; }
    const std::optional<KDensity>& left_density() const { return left_density_; }
    const std::optional<KDensity>& right_density() const { return right_density_; }

    // Support [t_lo, t_hi] of the radial coordinate at radius r.
    std::pair<double, double> radial_support(double r) const;

    // Radial density (unnormalized) at radius parameter t.
    double radial_density(double t) const;

    // Analytic CDF of the radial coordinate on its support (for oracles).
    double radial_cdf(double r, double t) const;

    // |integral of the normalized radial density - 1| by quadrature.
    double normalization_residual(double r) const;

    // One group element k1 a_t k2 (or k1 n_t k2 for horocycle windows).
    GroupElement sample(double r, Rng& rng) const;

    // Radial coordinate sample only.
    double sample_radial(double r, Rng& rng) const;

    std::string kind_name() const;

  private:
    MeasureFamily(Kind kind, RankOneProfile profile, double eps, double b);

    Kind kind_;
    RankOneProfile profile_;
    double eps_;
    double b_;
    std::optional<ArcSet> left_arcs_;
    std::optional<ArcSet> right_arcs_;
    std::optional<KDensity> left_density_;
    std::optional<KDensity> right_density_;
};

// A family bound to a fixed radius: prepares the inverse-CDF table once so
// that repeated sampling is cheap.
class PreparedFamily {
  public:
    PreparedFamily(const MeasureFamily& family, double r);

    GroupElement sample(Rng& rng) const;
    double sample_radial(Rng& rng) const;
    const MeasureFamily& family() const { return family_; }
    double radius() const { return r_; }

  private:
    MeasureFamily family_;
    double r_;
    double t_lo_, t_hi_;
    bool exact_;  // closed-form inverse CDF for (m1, m2) = (1, 0)
    std::shared_ptr<const RadialCdfTable> table_;
};

// The objects of the sector-domination argument: the swept sectors
// U_r = union over s in [r, r+eps) of U w_s^{-1},
// V_r = union over s of (w'_s)^{-1} V, and
// C_r = m_K(U_r) m_K(V_r) / (m_K(U) m_K(V)) >= 1.
struct SectorDomination {
    ArcSet u_r;
    ArcSet v_r;
    double c_r;
};

SectorDomination sector_domination(const ArcSet& u, const ArcSet& v, double r, double eps,
                                   int sweep_panels = 64);

}  // namespace hypererg
