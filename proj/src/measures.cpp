#include "hypererg/measures.hpp"

#include <algorithm>
#include <cmath>

#include "hypererg/quadrature.hpp"

namespace hypererg {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool exact_invertible(const RankOneProfile& p) { return p.m1 == 1 && p.m2 == 0; }

// Shell inverse CDF for the hyperbolic plane: density sinh t, so
// CDF(t) = (cosh t - cosh lo) / (cosh hi - cosh lo).
double invert_sinh_cdf(double lo, double hi, double u) {
    const double clo = std::cosh(lo);
    const double chi = std::cosh(hi);
    return std::acosh(clo + u * (chi - clo));
}

// Horocycle window inverse CDF for psi(T) = T: CDF quadratic in T.
double invert_linear_cdf(double lo, double hi, double u) {
    return std::sqrt(lo * lo + u * (hi * hi - lo * lo));
}

}  // namespace

double kak_density(const RankOneProfile& profile, double t) {
    if (t < 0.0) throw DomainError("kak_density requires t >= 0");
    const double s = std::sinh(t);
    double v = std::pow(s, profile.m1 + profile.m2);
    if (profile.m2 > 0) v *= std::pow(std::cosh(t), profile.m2);
    return v;
}

double psi_density(const RankOneProfile& profile, double T) {
    if (T < 0.0) throw DomainError("psi_density requires T >= 0");
    const double q = 0.25 * T * T + 1.0;
    if (profile.m2 > 0) {
        const double scale = std::pow(2.0, -(profile.m1 + profile.m2 + 1));
        return scale * std::pow(T, profile.m1 + profile.m2) *
               std::pow(q, 0.5 * (profile.m2 - 1));
    }
    return std::pow(T, profile.m1) * std::pow(q, 0.5 * (profile.m1 - 1));
}

double psi_window_map(const RankOneProfile& profile, double R) {
    if (R < 0.0) throw DomainError("psi_window_map requires R >= 0");
    return profile.m2 > 0 ? 2.0 * std::sinh(R) : 2.0 * std::sinh(0.5 * R);
}

double normalization_identity_residual(const RankOneProfile& profile, double R) {
    if (R < 0.0) throw DomainError("normalization check requires R >= 0");
    if (R == 0.0) return 0.0;
    const double lhs = integrate_adaptive([&](double t) { return kak_density(profile, t); }, 0.0,
                                          R, 1e-10);
    const double rhs = integrate_adaptive([&](double t) { return psi_density(profile, t); }, 0.0,
                                          psi_window_map(profile, R), 1e-10);
    return std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

RadialCdfTable::RadialCdfTable(std::function<double(double)> density, double lo, double hi,
                               int nodes)
    : lo_(lo), hi_(hi) {
    if (!(hi > lo)) throw DomainError("RadialCdfTable requires hi > lo");
    if (nodes < 8) throw DomainError("RadialCdfTable requires at least 8 nodes");
    t_.resize(nodes);
    for (int k = 0; k < nodes; ++k) {
        // Chebyshev spacing: clustered at both endpoints.
        const double s = 0.5 * (1.0 - std::cos(kPi * k / (nodes - 1)));
        t_[k] = lo + (hi - lo) * s;
    }
    t_.front() = lo;
    t_.back() = hi;

    cdf_.assign(nodes, 0.0);
    for (int k = 1; k < nodes; ++k) {
        const double seg = integrate_panels(density, t_[k - 1], t_[k],
                                            std::max((t_[k] - t_[k - 1]), 1e-12));
        cdf_[k] = cdf_[k - 1] + std::max(seg, 0.0);
    }
    raw_total_ = cdf_.back();
    if (!(raw_total_ > 0.0) || !std::isfinite(raw_total_))
        throw DomainError("RadialCdfTable: density has zero or non-finite mass");
    for (double& v : cdf_) v /= raw_total_;
    cdf_.back() = 1.0;

    // Fritsch-Butland monotone Hermite slopes (harmonic mean of secants).
    slope_.assign(nodes, 0.0);
    std::vector<double> secant(nodes - 1);
    for (int k = 0; k + 1 < nodes; ++k)
        secant[k] = (cdf_[k + 1] - cdf_[k]) / (t_[k + 1] - t_[k]);
    slope_.front() = secant.front();
    slope_.back() = secant.back();
    for (int k = 1; k + 1 < nodes; ++k) {
        const double d0 = secant[k - 1];
        const double d1 = secant[k];
        slope_[k] = (d0 > 0.0 && d1 > 0.0) ? 2.0 * d0 * d1 / (d0 + d1) : 0.0;
    }
}

double RadialCdfTable::cdf(double t) const {
    if (t <= lo_) return 0.0;
    if (t >= hi_) return 1.0;
    const auto it = std::upper_bound(t_.begin(), t_.end(), t);
    const int k = static_cast<int>(it - t_.begin()) - 1;
    const double h = t_[k + 1] - t_[k];
    const double s = (t - t_[k]) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1;
    const double h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2;
    const double h11 = s3 - s2;
    return h00 * cdf_[k] + h10 * h * slope_[k] + h01 * cdf_[k + 1] + h11 * h * slope_[k + 1];
}

double RadialCdfTable::invert(double u) const {
    if (u <= 0.0) return lo_;
    if (u >= 1.0) return hi_;
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    int k = static_cast<int>(it - cdf_.begin()) - 1;
    k = std::clamp(k, 0, static_cast<int>(t_.size()) - 2);
    double a = t_[k];
    double b = t_[k + 1];
    double x = a + (b - a) * (u - cdf_[k]) / std::max(cdf_[k + 1] - cdf_[k], 1e-300);
    for (int iter = 0; iter < 64; ++iter) {
        const double f = cdf(x) - u;
        if (f > 0.0)
            b = x;
        else
            a = x;
        if (std::abs(f) < 1e-15 || b - a < 1e-15 * std::max(1.0, std::abs(b))) break;
        // Newton step from the Hermite derivative, clipped to the bracket.
        const double h = t_[k + 1] - t_[k];
        const double s = (x - t_[k]) / h;
        const double dh00 = 6 * s * s - 6 * s;
        const double dh10 = 3 * s * s - 4 * s + 1;
        const double dh01 = -dh00;
        const double dh11 = 3 * s * s - 2 * s;
        const double deriv = (dh00 * cdf_[k] + dh01 * cdf_[k + 1]) / h + dh10 * slope_[k] +
                             dh11 * slope_[k + 1];
        double next = (deriv > 1e-300) ? x - f / deriv : 0.5 * (a + b);
        if (!(next > a) || !(next < b)) next = 0.5 * (a + b);
        x = next;
    }
    return x;
}

double sample_radial_shell(const RankOneProfile& profile, double r, double eps, Rng& rng) {
    if (r < 0.0) throw DomainError("shell requires r >= 0");
    if (!(eps > 0.0)) throw DomainError("shell requires eps > 0");
    const double u = rng.uniform();
    if (exact_invertible(profile)) return invert_sinh_cdf(r, r + eps, u);
    thread_local std::shared_ptr<RadialCdfTable> cache;
    thread_local double cache_lo = -1.0, cache_hi = -1.0;
    thread_local int cache_m1 = -1, cache_m2 = -1;
    if (!cache || cache_lo != r || cache_hi != r + eps || cache_m1 != profile.m1 ||
        cache_m2 != profile.m2) {
        cache = std::make_shared<RadialCdfTable>(
            [profile](double t) { return kak_density(profile, t); }, r, r + eps);
        cache_lo = r;
        cache_hi = r + eps;
        cache_m1 = profile.m1;
        cache_m2 = profile.m2;
    }
    return cache->invert(u);
}

double sample_radial_ball(const RankOneProfile& profile, double r, Rng& rng) {
    if (r < 0.0) throw DomainError("ball requires r >= 0");
    if (r == 0.0) return 0.0;
    const double u = rng.uniform();
    if (exact_invertible(profile)) return invert_sinh_cdf(0.0, r, u);
    RadialCdfTable table([profile](double t) { return kak_density(profile, t); }, 0.0, r);
    return table.invert(u);
}

double sample_horocycle_window(const RankOneProfile& profile, double r, double eps, double b,
                               Rng& rng) {
    if (r < 0.0) throw DomainError("horocycle window requires r >= 0");
    if (!(eps > 0.0)) throw DomainError("horocycle window requires eps > 0");
    if (!(b > 0.0)) throw DomainError("horocycle window requires b > 0");
    const double lo = 2.0 * std::sinh(b * r);
    const double hi = 2.0 * std::sinh(b * (r + eps));
    const double u = rng.uniform();
    if (exact_invertible(profile)) return invert_linear_cdf(lo, hi, u);
    RadialCdfTable table([profile](double t) { return psi_density(profile, t); }, lo, hi);
    return table.invert(u);
}

double shell_mass_ratio(const RankOneProfile& profile, double r, double eps, double b) {
    if (!(r > 0.0) || !(eps > 0.0) || !(b > 0.0))
        throw DomainError("shell_mass_ratio requires positive r, eps, b");
    const double T = 2.0 * std::sinh(b * r);
    const double T1 = 2.0 * std::sinh(b * (r + eps));
    const auto psi = [&](double t) { return psi_density(profile, t); };
    const double head = integrate_adaptive(psi, 0.0, T, 1e-10);
    const double band = integrate_adaptive(psi, T, T1, 1e-10);
    return head / band;
}

MeasureFamily::MeasureFamily(Kind kind, RankOneProfile profile, double eps, double b)
    : kind_(kind), profile_(profile), eps_(eps), b_(b) {}

MeasureFamily MeasureFamily::ball(const RankOneProfile& profile) {
    return MeasureFamily(Kind::Ball, profile, 0.0, profile.default_window_scale());
}

MeasureFamily MeasureFamily::shell(const RankOneProfile& profile, double eps) {
    if (!(eps > 0.0)) throw DomainError("shell family requires eps > 0");
    return MeasureFamily(Kind::Shell, profile, eps, profile.default_window_scale());
}

MeasureFamily MeasureFamily::sector(const RankOneProfile& profile, double eps, ArcSet left,
                                    ArcSet right) {
    if (!(eps > 0.0)) throw DomainError("sector family requires eps > 0");
    if (left.empty() || right.empty()) throw DomainError("sector family requires nonempty arcs");
    MeasureFamily fam(Kind::Sector, profile, eps, profile.default_window_scale());
    fam.left_arcs_ = std::move(left);
    fam.right_arcs_ = std::move(right);
    return fam;
}

MeasureFamily MeasureFamily::horocycle_window(const RankOneProfile& profile, double eps,
                                              std::optional<double> b, std::optional<ArcSet> left,
                                              std::optional<ArcSet> right) {
    if (!(eps > 0.0)) throw DomainError("horocycle family requires eps > 0");
    const double scale = b.value_or(profile.default_window_scale());
    if (!(scale > 0.0)) throw DomainError("horocycle family requires b > 0");
    if ((left && left->empty()) || (right && right->empty()))
        throw DomainError("horocycle family factors must be nonempty");
    MeasureFamily fam(Kind::HorocycleWindow, profile, eps, scale);
    fam.left_arcs_ = std::move(left);
    fam.right_arcs_ = std::move(right);
    return fam;
}

MeasureFamily MeasureFamily::convolution(const RankOneProfile& profile, double eps, KDensity left,
                                         KDensity right) {
    if (!(eps > 0.0)) throw DomainError("convolution family requires eps > 0");
    MeasureFamily fam(Kind::Convolution, profile, eps, profile.default_window_scale());
    fam.left_density_ = std::move(left);
    fam.right_density_ = std::move(right);
    return fam;
}

std::pair<double, double> MeasureFamily::radial_support(double r) const {
    switch (kind_) {
        case Kind::Ball:
            return {0.0, r};
        case Kind::Shell:
        case Kind::Sector:
        case Kind::Convolution:
            return {r, r + eps_};
        case Kind::HorocycleWindow:
            return {2.0 * std::sinh(b_ * r), 2.0 * std::sinh(b_ * (r + eps_))};
    }
    throw DomainError("unknown family kind");
}

double MeasureFamily::radial_density(double t) const {
    return kind_ == Kind::HorocycleWindow ? psi_density(profile_, t) : kak_density(profile_, t);
}

double MeasureFamily::radial_cdf(double r, double t) const {
    const auto [lo, hi] = radial_support(r);
    if (t <= lo) return 0.0;
    if (t >= hi) return 1.0;
    if (exact_invertible(profile_)) {
        if (kind_ == Kind::HorocycleWindow)
            return (t * t - lo * lo) / (hi * hi - lo * lo);
        return (std::cosh(t) - std::cosh(lo)) / (std::cosh(hi) - std::cosh(lo));
    }
    const auto dens = [this](double s) { return radial_density(s); };
    const double head = integrate_adaptive(dens, lo, t, 1e-11);
    const double total = head + integrate_adaptive(dens, t, hi, 1e-11);
    return head / total;
}

double MeasureFamily::normalization_residual(double r) const {
    const auto [lo, hi] = radial_support(r);
    if (!(hi > lo)) return 0.0;
    const auto dens = [this](double s) { return radial_density(s); };
    const double quad = integrate_adaptive(dens, lo, hi, 1e-12);
    double z;
    if (exact_invertible(profile_)) {
        z = kind_ == Kind::HorocycleWindow ? 0.5 * (hi * hi - lo * lo)
                                           : std::cosh(hi) - std::cosh(lo);
    } else {
        // Normalizer the table sampler actually divides by.
        z = RadialCdfTable(dens, lo, hi).raw_total();
    }
    double k_mass = 1.0;
    if (left_density_) k_mass *= left_density_->total_mass();
    if (right_density_) k_mass *= right_density_->total_mass();
    return std::abs(quad / z * k_mass - 1.0);
}

GroupElement MeasureFamily::sample(double r, Rng& rng) const {
    return PreparedFamily(*this, r).sample(rng);
}

double MeasureFamily::sample_radial(double r, Rng& rng) const {
    return PreparedFamily(*this, r).sample_radial(rng);
}

std::string MeasureFamily::kind_name() const {
    switch (kind_) {
        case Kind::Ball: return "ball";
        case Kind::Shell: return "shell";
        case Kind::Sector: return "sector";
        case Kind::HorocycleWindow: return "horocycle";
        case Kind::Convolution: return "convolution";
    }
    return "unknown";
}

PreparedFamily::PreparedFamily(const MeasureFamily& family, double r) : family_(family), r_(r) {
    const auto [lo, hi] = family.radial_support(r);
    t_lo_ = lo;
    t_hi_ = hi;
    if (!(hi >= lo)) throw DomainError("family has empty radial support at this radius");
    exact_ = exact_invertible(family.profile());
    if (!exact_ && hi > lo) {
        table_ = std::make_shared<const RadialCdfTable>(
            [fam = family_](double t) { return fam.radial_density(t); }, lo, hi);
    }
}

double PreparedFamily::sample_radial(Rng& rng) const {
    if (t_hi_ == t_lo_) return t_lo_;
    const double u = rng.uniform();
    if (exact_) {
        if (family_.kind() == MeasureFamily::Kind::HorocycleWindow)
            return invert_linear_cdf(t_lo_, t_hi_, u);
        return invert_sinh_cdf(t_lo_, t_hi_, u);
    }
    return table_->invert(u);
}

GroupElement PreparedFamily::sample(Rng& rng) const {
    using Kind = MeasureFamily::Kind;
    const Kind kind = family_.kind();
    if (kind == Kind::HorocycleWindow) {
        if (!family_.left_arcs() && !family_.right_arcs())
            return GroupElement::translation(sample_radial(rng));
        const double k1 = family_.left_arcs() ? family_.left_arcs()->sample(rng) : 0.0;
        const double t = sample_radial(rng);
        const double k2 = family_.right_arcs() ? family_.right_arcs()->sample(rng) : 0.0;
        return GroupElement::rotation(k1) * GroupElement::translation(t) *
               GroupElement::rotation(k2);
    }
    double theta1;
    double theta2;
    switch (kind) {
        case Kind::Sector:
            theta1 = family_.left_arcs()->sample(rng);
            break;
        case Kind::Convolution:
            theta1 = family_.left_density() ? family_.left_density()->sample(rng)
                                           : rng.uniform(0.0, kPi);
            break;
        default:
            theta1 = rng.uniform(0.0, kPi);
    }
    const double t = sample_radial(rng);
    switch (kind) {
        case Kind::Sector:
            theta2 = family_.right_arcs()->sample(rng);
            break;
        case Kind::Convolution:
            theta2 = family_.right_density() ? family_.right_density()->sample(rng)
                                            : rng.uniform(0.0, kPi);
            break;
        default:
            theta2 = rng.uniform(0.0, kPi);
    }
    return GroupElement::rotation(theta1) * GroupElement::boost(t) *
           GroupElement::rotation(theta2);
}

SectorDomination sector_domination(const ArcSet& u, const ArcSet& v, double r, double eps,
                                   int sweep_panels) {
    if (!(r > 0.0)) throw DomainError("sector_domination requires r > 0");
    if (!(eps > 0.0)) throw DomainError("sector_domination requires eps > 0");
    if (u.empty() || v.empty()) throw DomainError("sector_domination requires nonempty arcs");
    if (sweep_panels < 1) throw DomainError("sector_domination requires >= 1 sweep panel");
    // theta(w_s) is continuous and monotone in s; the hull of the sampled
    // values over-approximates the sweep range only by evaluation error,
    // and enlarging the hull can only increase C_r.
    double theta_min = angular_component_theta(r);
    double theta_max = theta_min;
    for (int j = 1; j <= sweep_panels; ++j) {
        const double s = r + eps * static_cast<double>(j) / sweep_panels;
        const double th = angular_component_theta(s);
        theta_min = std::min(theta_min, th);
        theta_max = std::max(theta_max, th);
    }
    const ArcSet u_r = u.fattened(-theta_max, -theta_min);
    // theta(w'_s) = theta(w_s) + pi/2, so the shift hull is the same up to
    // the constant half-turn.
    const ArcSet v_r = v.fattened(-(theta_max + 0.5 * kPi), -(theta_min + 0.5 * kPi));
    const double c_r = (u_r.measure() * v_r.measure()) / (u.measure() * v.measure());
    return SectorDomination{u_r, v_r, c_r};
}

}  // namespace hypererg
