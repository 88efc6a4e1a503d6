#include "oscnet/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "oscnet/circular.hpp"
#include "oscnet/errors.hpp"
#include "oscnet/quadrature.hpp"
#include "oscnet/rng.hpp"

namespace oscnet {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInvSqrt2 = 0.7071067811865475244;

double arcsin_ratio(double num, double den) {
    if (den == 0.0) {
        if (std::abs(num) < 1e-12) return 0.0;
        throw DomainError("synchronized profile: omega - Omega != 0 where H1 vanishes");
    }
    double r = num / den;
    if (r > 1.0) {
        if (r > 1.0 + 1e-9) throw DomainError("synchronized profile: arcsin argument exceeds 1");
        r = 1.0;
    } else if (r < -1.0) {
        if (r < -1.0 - 1e-9) throw DomainError("synchronized profile: arcsin argument below -1");
        r = -1.0;
    }
    return std::asin(r);
}

} // namespace

std::string stability_name(Stability s) {
    switch (s) {
        case Stability::StableCertified: return "stable-certified";
        case Stability::AsymptoticallyStableCertified: return "asymptotically-stable-certified";
        case Stability::UnstableCertified: return "unstable-certified";
        case Stability::Undetermined: return "undetermined";
    }
    return "?";
}

double SyncSolution::profile(double x) const {
    return arcsin_ratio(omega_profile(x) - omega_cap, order_param * h1(x));
}

std::vector<double> SyncSolution::profile_on_mesh(int n) const {
    const auto x = mesh_midpoints(n);
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = profile(x[i]);
    return out;
}

double SyncSolution::profile_sup_abs() const {
    double sup = 0.0;
    auto consider = [&](double x) { sup = std::max(sup, std::abs(profile(x))); };
    const int grid = 4096;
    for (int k = 0; k <= grid; ++k) consider(static_cast<double>(k) / grid);
    for (double b : omega_profile.breakpoints()) consider(b);
    for (double b : h1.breakpoints()) consider(b);
    return sup;
}

// ---------------------------------------------------------------------------
// Order parameters
// ---------------------------------------------------------------------------

double phi_order(double eta) { return std::asin(eta) + eta * std::sqrt(1.0 - eta * eta); }

SimpleOrderParameter solve_order_parameter_simple(double a_over_p) {
    if (!(a_over_p > 0.0)) throw DomainError("solve_order_parameter_simple: a/p must be positive");
    SimpleOrderParameter out;
    if (a_over_p > 0.5 * kPi + 1e-12) return out; // phi(1) = pi/2 is the largest value
    // phi is strictly increasing on (0, 1]; plain bisection
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        const double mid = 0.5 * (lo + hi);
        (phi_order(mid) < a_over_p ? lo : hi) = mid;
    }
    out.exists = true;
    out.eta = 0.5 * (lo + hi);
    return out;
}

double simple_stability_boundary() { return phi_order(kInvSqrt2); }

namespace {

// Enumerate positive fixed points C = Phi(C) on [c_lo, c_hi]: damped
// iteration from c0 (0.5 damping, seeded random restarts), then a bracket
// scan of the residual with bisection. Roots are deduplicated and sorted.
std::vector<double> find_sync_roots(const std::function<double(double)>& phi_of_c, double c_lo,
                                    double c_hi, double c0) {
    std::vector<double> roots;
    auto residual = [&](double c) { return c - phi_of_c(c); };
    auto push_root = [&](double c) {
        if (!(c > 0.0)) return;
        for (double r : roots)
            if (std::abs(r - c) < 1e-9 * std::max(1.0, std::abs(r))) return;
        roots.push_back(c);
    };

    const double eps = 1e-13 * std::max(1.0, c_lo);
    auto damped = [&](double c) -> bool {
        c = std::max(c, c_lo + eps);
        for (int it = 0; it < 500; ++it) {
            const double next = 0.5 * c + 0.5 * phi_of_c(c);
            if (!(next >= c_lo) || !std::isfinite(next)) return false;
            if (std::abs(next - c) < 1e-14 * std::max(1.0, std::abs(next))) {
                if (std::abs(residual(next)) < 1e-10 * std::max(1.0, std::abs(next))) {
                    push_root(next);
                    return true;
                }
                return false;
            }
            c = next;
        }
        return false;
    };

    bool ok = damped(std::max(c0, c_lo + eps));
    for (int r = 0; !ok && r < 10; ++r)
        ok = damped(c_lo + eps + (c_hi - c_lo) * to_unit_double(mix64(0x5eedULL, r)));

    // bracket scan for the remaining (or all) roots
    const int grid = 256;
    double prev_c = c_lo + eps;
    double prev_r = residual(prev_c);
    if (std::abs(prev_r) < 1e-10 * std::max(1.0, prev_c)) push_root(prev_c); // boundary root
    for (int k = 1; k <= grid; ++k) {
        const double c = c_lo + eps + (c_hi - c_lo - eps) * k / grid;
        const double r = residual(c);
        if (std::isfinite(prev_r) && std::isfinite(r) && prev_r * r < 0.0) {
            double lo = prev_c, hi = c;
            for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
                const double mid = 0.5 * (lo + hi);
                (residual(mid) * residual(lo) <= 0.0 ? hi : lo) = mid;
            }
            push_root(0.5 * (lo + hi));
        }
        prev_c = c;
        prev_r = r;
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

} // namespace

SyncSolution solve_order_parameter_general(const Graphon& w, const ScalarProfile& omega) {
    const ScalarProfile& h1 = w.factor1();
    const ScalarProfile& h2 = w.factor2();
    if (!(h1.min_value() > 0.0))
        throw DomainError("solve_order_parameter_general: H1 must be positive on I");

    std::vector<double> breaks = h1.breakpoints();
    for (double b : h2.breakpoints()) breaks.push_back(b);
    for (double b : omega.breakpoints()) breaks.push_back(b);
    std::sort(breaks.begin(), breaks.end());

    auto integrate = [&](const std::function<double(double)>& f) {
        return gl_integrate_split(f, 0.0, 1.0, breaks, 64);
    };

    const double denom = integrate([&](double x) { return h2(x) / h1(x); });
    if (std::abs(denom) < 1e-14)
        throw DomainError("solve_order_parameter_general: ∫ H2/H1 vanishes; Omega undetermined");
    const double num = integrate([&](double x) { return h2(x) * omega(x) / h1(x); });
    const double omega_cap = num / denom;

    SyncSolution sol;
    sol.h1 = h1;
    sol.h2 = h2;
    sol.omega_profile = omega;
    sol.omega_cap = omega_cap;

    // smallest admissible C: |omega - Omega| <= C H1 everywhere
    double c_lo = 0.0;
    auto consider = [&](double x) { c_lo = std::max(c_lo, std::abs(omega(x) - omega_cap) / h1(x)); };
    const int grid = 4096;
    for (int k = 0; k <= grid; ++k) consider(static_cast<double>(k) / grid);
    for (double b : breaks) consider(std::clamp(b, 0.0, 1.0));

    const double h2_int = integrate([&](double x) { return h2(x); });
    if (c_lo == 0.0) {
        // omega == Omega a.e.: U == 0 and C = ∫ H2
        if (std::abs(h2_int) < 1e-14) return sol; // C = 0 excluded
        sol.exists = true;
        sol.order_param = h2_int;
        sol.all_roots = {h2_int};
        return sol;
    }

    auto phi_of_c = [&](double c) {
        return integrate([&](double x) {
            double r = (omega(x) - omega_cap) / (c * h1(x));
            r = std::clamp(r, -1.0, 1.0);
            return h2(x) * std::sqrt(1.0 - r * r);
        });
    };
    const double c_hi = std::max({h2.integral_abs(0.0, 1.0), c_lo * 2.0, std::abs(h2_int)}) + 1.0;
    sol.all_roots = find_sync_roots(phi_of_c, c_lo, c_hi, h2_int);
    if (!sol.all_roots.empty()) {
        sol.exists = true;
        sol.order_param = sol.all_roots.back();
    }
    return sol;
}

DiscreteSyncProfile sync_profile_discrete(const DiscreteSystem& sys, const SyncSolution& hint) {
    if (sys.layers().size() != 1)
        throw DomainError("sync_profile_discrete: exactly one layer expected");
    const auto& layer = sys.layers()[0];
    if (layer.matrix.construction() != Construction::DeterministicDense || !layer.provenance ||
        layer.provenance->graphon.kind() != Graphon::Kind::Rank1)
        throw DomainError("sync_profile_discrete: dense deterministic rank-1 layer required");

    const int n = sys.n();
    const auto h1 = layer.provenance->graphon.factor1().cell_averages(n);
    const auto h2 = layer.provenance->graphon.factor2().cell_averages(n);
    std::vector<double> om(static_cast<std::size_t>(n), 0.0);
    if (sys.frequencies()) om = *sys.frequencies();

    DiscreteSyncProfile out;
    double snum = 0.0, sden = 0.0;
    for (int i = 0; i < n; ++i) {
        if (h1[i] <= 0.0) throw DomainError("sync_profile_discrete: h1 cell average not positive");
        snum += h2[i] * om[i] / h1[i];
        sden += h2[i] / h1[i];
    }
    if (std::abs(sden) < 1e-14)
        throw DomainError("sync_profile_discrete: sum h2/h1 vanishes; Omega_D undetermined");
    const double omega_d = snum / sden;
    out.omega_cap = omega_d;

    double c_lo = 0.0;
    for (int i = 0; i < n; ++i) c_lo = std::max(c_lo, std::abs(om[i] - omega_d) / h1[i]);

    double h2_mean = 0.0;
    for (int i = 0; i < n; ++i) h2_mean += h2[i];
    h2_mean /= n;

    auto phi_of_c = [&](double c) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            double r = (om[i] - omega_d) / (c * h1[i]);
            r = std::clamp(r, -1.0, 1.0);
            s += h2[i] * std::sqrt(1.0 - r * r);
        }
        return s / n;
    };

    if (c_lo == 0.0) {
        if (std::abs(h2_mean) < 1e-14) return out;
        out.exists = true;
        out.order_param = h2_mean;
        out.all_roots = {h2_mean};
    } else {
        const double c0 = hint.exists ? hint.order_param : h2_mean;
        double h2_abs = 0.0;
        for (int i = 0; i < n; ++i) h2_abs += std::abs(h2[i]);
        const double c_hi = std::max({h2_abs / n, c_lo * 2.0, std::abs(h2_mean)}) + 1.0;
        out.all_roots = find_sync_roots(phi_of_c, c_lo, c_hi, c0);
        if (out.all_roots.empty()) return out;
        out.exists = true;
        out.order_param = out.all_roots.back();
    }

    out.profile.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        out.profile[i] = arcsin_ratio(om[i] - omega_d, out.order_param * h1[i]);
    return out;
}

// ---------------------------------------------------------------------------
// Stability
// ---------------------------------------------------------------------------

SyncSolution continuum_stability_check(SyncSolution solution, const Graphon& w) {
    if (!solution.exists) throw DomainError("continuum_stability_check: no solution to certify");
    solution.stability = Stability::Undetermined;
    solution.certificate.clear();

    const double sup_u = solution.profile_sup_abs();
    if (sup_u <= 0.25 * kPi + 1e-12 && w.nonnegative()) {
        solution.stability = Stability::StableCertified;
        solution.certificate = "sup|U| <= pi/4 with nonnegative kernel";
        // kernel-dimension condition for asymptotic stability of the family
        if (solution.h2.min_value() >= 0.0) {
            std::vector<double> breaks = solution.h1.breakpoints();
            for (double b : solution.h2.breakpoints()) breaks.push_back(b);
            for (double b : solution.omega_profile.breakpoints()) breaks.push_back(b);
            const double kernel_integral = gl_integrate_split(
                [&](double y) {
                    const double cu = std::cos(solution.profile(y));
                    return solution.h2(y) * (1.0 / cu - 2.0 * cu);
                },
                0.0, 1.0, breaks, 64);
            if (std::abs(kernel_integral) > 1e-8) {
                solution.stability = Stability::AsymptoticallyStableCertified;
                solution.certificate += "; H2 >= 0 and ∫H2(sec U - 2 cos U) != 0";
            }
        }
    }
    return solution;
}

SpectrumReport discrete_stability_check(const DiscreteSystem& sys,
                                        const std::vector<double>& profile) {
    if (sys.layers().size() != 1)
        throw DomainError("discrete_stability_check: exactly one layer expected");
    const auto& layer = sys.layers()[0];
    if (layer.matrix.construction() != Construction::DeterministicDense)
        throw DomainError("discrete_stability_check: deterministic dense layer required");
    const int n = sys.n();
    if (static_cast<int>(profile.size()) != n)
        throw DomainError("discrete_stability_check: profile size mismatch");

    SpectrumReport rep;
    Eigen::MatrixXd a(n, n);
    bool nonneg = true, any_positive = false;
    for (int i = 0; i < n; ++i) {
        double diag = 0.0, radius = 0.0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const double w = layer.matrix.entry(i, j);
            if (w < 0.0) nonneg = false;
            if (w > 0.0) any_positive = true;
            const double v = w * std::cos(profile[j] - profile[i]) / n;
            a(i, j) = v;
            diag -= v;
            radius += std::abs(v);
        }
        a(i, i) = diag;
        rep.discs.push_back(GershgorinDisc{diag, radius});
    }
    rep.max_disc_reach = 0.0;
    for (const auto& d : rep.discs) rep.max_disc_reach = std::max(rep.max_disc_reach, d.center + d.radius);
    rep.gershgorin_certified = rep.max_disc_reach <= 1e-12;

    rep.profile_within_quarter_pi = true;
    for (double u : profile)
        if (std::abs(u) > 0.25 * kPi + 1e-12) rep.profile_within_quarter_pi = false;

    if (layer.provenance && layer.provenance->graphon.kind() == Graphon::Kind::Rank1) {
        const auto h2 = layer.provenance->graphon.factor2().cell_averages(n);
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            const double cu = std::cos(profile[i]);
            s += h2[i] * (1.0 / cu - 2.0 * cu);
        }
        rep.kernel_test_available = true;
        rep.kernel_test_value = s;
        rep.kernel_dimension_one = std::abs(s) > 1e-8;
    }

    if (n <= 512) {
        Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
        rep.eigenvalues_computed = true;
        rep.eigenvalues.reserve(static_cast<std::size_t>(n));
        double max_re = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            const std::complex<double> ev = es.eigenvalues()[i];
            rep.eigenvalues.push_back(ev);
            max_re = std::max(max_re, ev.real());
            if (std::abs(ev) < 1e-8) ++rep.numeric_kernel_dimension;
        }
        rep.max_real_eigenvalue = max_re;
    }

    if (rep.gershgorin_certified) {
        rep.verdict = Stability::StableCertified;
        if (rep.kernel_test_available && rep.kernel_dimension_one && nonneg && any_positive)
            rep.verdict = Stability::AsymptoticallyStableCertified;
    } else if (rep.eigenvalues_computed && rep.max_real_eigenvalue > 1e-6) {
        rep.verdict = Stability::UnstableCertified;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Two-layer all-to-all + ring model
// ---------------------------------------------------------------------------

double ring_pair_eigenvalue(double k_gain, double kappa, int l) {
    if (l < 1) throw DomainError("ring_pair_eigenvalue: mode index must be >= 1");
    if (!(kappa > 0.0 && kappa <= 0.5)) throw DomainError("ring_pair_eigenvalue: kappa in (0, 1/2]");
    const double pl = kPi * static_cast<double>(l);
    return 2.0 * k_gain / pl * std::sin(2.0 * pl * kappa) - (1.0 + 4.0 * k_gain * kappa);
}

RingPairBoundary ring_pair_boundary(double kappa, int l) {
    if (l < 1) throw DomainError("ring_pair_boundary: mode index must be >= 1");
    if (!(kappa > 0.0 && kappa <= 0.5)) throw DomainError("ring_pair_boundary: kappa in (0, 1/2]");
    const double plk = kPi * static_cast<double>(l) * kappa;
    RingPairBoundary b;
    b.l = l;
    b.neg_kappa_k = plk / (2.0 * (2.0 * plk - std::sin(2.0 * plk)));
    b.k_critical = -b.neg_kappa_k / kappa;
    return b;
}

RingPairBoundary ring_pair_weakest_boundary(double kappa, int l_max) {
    if (l_max < 1) throw DomainError("ring_pair_weakest_boundary: l_max must be >= 1");
    RingPairBoundary best = ring_pair_boundary(kappa, 1);
    for (int l = 2; l <= l_max; ++l) {
        const RingPairBoundary b = ring_pair_boundary(kappa, l);
        if (b.neg_kappa_k < best.neg_kappa_k) best = b;
    }
    return best;
}

// ---------------------------------------------------------------------------
// Inverse design
// ---------------------------------------------------------------------------

namespace {

double interval_length(const std::vector<std::pair<double, double>>& set) {
    double len = 0.0;
    for (auto [a, b] : set) len += b - a;
    return len;
}

bool in_set(double x, const std::vector<std::pair<double, double>>& set) {
    for (auto [a, b] : set)
        if (x >= a && x <= b) return true;
    return false;
}

double integral_over(const ScalarProfile& f, const std::vector<std::pair<double, double>>& set,
                     bool of_sin) {
    double s = 0.0;
    for (auto [a, b] : set) s += of_sin ? f.integral_sin(a, b) : f.integral_cos(a, b);
    return s;
}

} // namespace

DesignResult inverse_design(const ScalarProfile& u0, const ScalarProfile& omega, double omega0,
                            const std::vector<std::pair<double, double>>& i_plus,
                            const std::vector<std::pair<double, double>>& i_minus) {
    for (auto [a, b] : i_plus)
        if (!(a >= 0.0 && b <= 1.0 && b > a)) throw DomainError("inverse_design: bad I+ interval");
    for (auto [a, b] : i_minus)
        if (!(a >= 0.0 && b <= 1.0 && b > a)) throw DomainError("inverse_design: bad I- interval");
    if (interval_length(i_plus) <= 0.0 || interval_length(i_minus) <= 0.0)
        throw InfeasibleError("inverse_design: condition (i) fails: I+ or I- has zero measure");

    // precondition scan on a 4096-point grid
    const int grid = 4096;
    for (int k = 0; k <= grid; ++k) {
        const double x = static_cast<double>(k) / grid;
        const double s = std::sin(u0(x));
        if (in_set(x, i_plus) && !(s > 1e-12))
            throw InfeasibleError("inverse_design: condition (i) fails: sin U0 <= 0 on I+ at x = " +
                                      std::to_string(x),
                                  x);
        if (in_set(x, i_minus) && !(s < -1e-12))
            throw InfeasibleError("inverse_design: condition (i) fails: sin U0 >= 0 on I- at x = " +
                                      std::to_string(x),
                                  x);
        const double w = omega(x) - omega0;
        if (w * s < -1e-12)
            throw InfeasibleError(
                "inverse_design: condition (ii) fails: (omega - Omega0) sin U0 < 0 at x = " +
                    std::to_string(x),
                x);
        if (std::abs(s) <= 1e-12 && std::abs(w) > 1e-9)
            throw InfeasibleError(
                "inverse_design: condition (iii) fails: omega != Omega0 where sin U0 = 0 at x = " +
                    std::to_string(x),
                x);
    }

    DesignResult res;
    res.cond_sign_sets = res.cond_aligned = res.cond_zero_match = true;
    res.h2_plus = -integral_over(u0, i_minus, true);
    res.h2_minus = integral_over(u0, i_plus, true);
    if (!(res.h2_plus > 0.0) || !(res.h2_minus > 0.0))
        throw InfeasibleError("inverse_design: H2 constants not positive");
    res.c0 = res.h2_minus * integral_over(u0, i_minus, false) +
             res.h2_plus * integral_over(u0, i_plus, false);
    if (!(res.c0 > 0.0))
        throw InfeasibleError("inverse_design: C0 not positive (cos U0 must be positive on I+/I-)");

    // H2: step function, H2+ on I+, H2- on I-, 0 elsewhere
    std::vector<double> h2_breaks{0.0, 1.0};
    for (auto [a, b] : i_plus) {
        h2_breaks.push_back(a);
        h2_breaks.push_back(b);
    }
    for (auto [a, b] : i_minus) {
        h2_breaks.push_back(a);
        h2_breaks.push_back(b);
    }
    std::sort(h2_breaks.begin(), h2_breaks.end());
    h2_breaks.erase(std::unique(h2_breaks.begin(), h2_breaks.end()), h2_breaks.end());
    std::vector<double> h2_vals;
    for (std::size_t k = 0; k + 1 < h2_breaks.size(); ++k) {
        const double mid = 0.5 * (h2_breaks[k] + h2_breaks[k + 1]);
        h2_vals.push_back(in_set(mid, i_plus) ? res.h2_plus : in_set(mid, i_minus) ? res.h2_minus : 0.0);
    }
    res.h2 = ScalarProfile::step_table(h2_breaks, h2_vals);

    // H1 = (omega - Omega0) / (C0 sin U0), 0 where sin U0 = 0. When U0 is
    // piecewise constant and omega piecewise affine, each piece stays affine
    // and the profile is exact; otherwise fall back to a callback.
    std::vector<double> cuts{0.0, 1.0};
    for (double b : u0.breakpoints()) cuts.push_back(b);
    for (double b : omega.breakpoints()) cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    bool piecewise_exact = u0.exact() && omega.exact();
    if (piecewise_exact) {
        for (std::size_t k = 0; piecewise_exact && k + 1 < cuts.size(); ++k) {
            const double a = cuts[k], b = cuts[k + 1];
            // U0 must be constant on the piece for H1 to stay affine
            piecewise_exact = u0(0.5 * (a + b)) == u0(a + 0.25 * (b - a)) &&
                              u0(0.5 * (a + b)) == u0(std::nextafter(b, a));
        }
    }
    if (piecewise_exact) {
        std::vector<ScalarProfile::Segment> segs;
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            const double a = cuts[k], b = cuts[k + 1];
            const double s = std::sin(u0(0.5 * (a + b)));
            ScalarProfile::Segment seg;
            seg.lo = a;
            seg.hi = b;
            if (std::abs(s) <= 1e-12) {
                seg.c0 = seg.c1 = 0.0;
            } else {
                // omega is affine on the piece: recover its coefficients
                const double f0 = omega(a), f1 = omega(std::nextafter(b, a));
                const double slope = (f1 - f0) / (std::nextafter(b, a) - a);
                const double denom = res.c0 * s;
                seg.c1 = slope / denom;
                seg.c0 = (f0 - slope * a - omega0) / denom;
            }
            segs.push_back(seg);
        }
        res.h1 = ScalarProfile::segments(std::move(segs));
    } else {
        const double c0 = res.c0;
        res.h1 = ScalarProfile::callback(
            [u0, omega, omega0, c0](double x) {
                const double s = std::sin(u0(x));
                if (std::abs(s) <= 1e-12) return 0.0;
                return (omega(x) - omega0) / (c0 * s);
            },
            cuts);
    }

    res.kernel = Graphon::rank1(res.h1, res.h2);

    // companion identity ∫ H2 sin U0 = 0 (holds by construction)
    double identity = 0.0;
    for (std::size_t k = 0; k + 1 < h2_breaks.size(); ++k)
        identity += h2_vals[k] * u0.integral_sin(h2_breaks[k], h2_breaks[k + 1]);
    if (std::abs(identity) > 1e-10)
        throw InfeasibleError("inverse_design: ∫ H2 sin U0 = 0 identity violated: " +
                              std::to_string(identity));
    return res;
}

// ---------------------------------------------------------------------------
// Controlled model
// ---------------------------------------------------------------------------

ControlledOrderParameter controlled_order_parameter(double a, double b) {
    if (!(a > 0.0)) throw DomainError("controlled_order_parameter: a must be positive");
    ControlledOrderParameter out;
    out.b_min = (4.0 * a - 2.0 - kPi) / (4.0 * std::sqrt(2.0));
    if (b < out.b_min - 1e-15) return out;
    // psi(eta) = phi(eta) + 2 b eta - a is increasing on (0, 1/sqrt(2)] for
    // b >= 0; at b >= b_min the bracket (0, 1/sqrt(2)] contains the root.
    auto psi = [&](double eta) { return phi_order(eta) + 2.0 * b * eta - a; };
    double lo = 0.0, hi = kInvSqrt2;
    if (psi(hi) < 0.0) return out; // no root despite b >= b_min (b large negative)
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        const double mid = 0.5 * (lo + hi);
        (psi(mid) < 0.0 ? lo : hi) = mid;
    }
    out.exists = true;
    out.eta = 0.5 * (lo + hi);
    out.residual = psi(out.eta);
    return out;
}

// ---------------------------------------------------------------------------
// Convergence metric
// ---------------------------------------------------------------------------

double delta_n(std::span<const double> u_final, std::span<const double> profile_values, bool raw) {
    if (u_final.size() != profile_values.size())
        throw DomainError("delta_n: length mismatch");
    const std::size_t n = u_final.size();
    if (n == 0) return 0.0;
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = u_final[i] - profile_values[i];
    if (!raw) {
        // wrap residuals about their circular mean: exactly shift invariant
        const double mean = circular_mean(r);
        for (double& v : r) v = wrap_angle(v - mean);
    }
    double m1 = 0.0, m2 = 0.0;
    for (double v : r) {
        m1 += v;
        m2 += v * v;
    }
    m1 /= static_cast<double>(n);
    m2 /= static_cast<double>(n);
    return std::sqrt(std::max(0.0, m2 - m1 * m1));
}

double delta_n(std::span<const double> u_final, const std::function<double(double)>& profile,
               bool raw) {
    const std::size_t n = u_final.size();
    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i)
        p[i] = profile((2.0 * static_cast<double>(i) + 1.0) / (2.0 * static_cast<double>(n)));
    return delta_n(u_final, p, raw);
}

int dominant_fourier_mode(std::span<const double> u) {
    const int n = static_cast<int>(u.size());
    if (n < 2) throw DomainError("dominant_fourier_mode: need at least 2 samples");
    std::vector<double> r(u.size());
    const double mean = circular_mean(u);
    for (std::size_t i = 0; i < u.size(); ++i) r[i] = wrap_angle(u[i] - mean);
    int best_l = 1;
    double best_mag = -1.0;
    for (int l = 1; l <= n / 2; ++l) {
        double re = 0.0, im = 0.0;
        for (int j = 0; j < n; ++j) {
            const double ang = 2.0 * kPi * l * j / n;
            re += r[j] * std::cos(ang);
            im -= r[j] * std::sin(ang);
        }
        const double mag = re * re + im * im;
        if (mag > best_mag) {
            best_mag = mag;
            best_l = l;
        }
    }
    return best_l;
}

} // namespace oscnet
