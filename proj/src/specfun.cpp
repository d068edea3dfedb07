#include "gbm/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "gbm/quadrature.hpp"

namespace gbm {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Largest peak log-magnitude the alternating series may reach before the
// accumulated rounding (peak * eps * n_terms) threatens abs_tol.
double cancellation_budget(double abs_tol) { return std::log(abs_tol / (8.0 * kEps)); }

struct SeriesSum {
    double sum = 0.0;
    double comp = 0.0; // Neumaier compensation
    double peak = 0.0; // max |term| seen

    void add(double term) {
        peak = std::max(peak, std::abs(term));
        const double t = sum + term;
        if (std::abs(sum) >= std::abs(term))
            comp += (sum - t) + term;
        else
            comp += (term - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

// Taylor series sum_n x^n / Gamma(beta n + 1). Caller guarantees the
// cancellation budget; throws if the term budget runs out.
double ml_series(double beta, double x, const EvalConfig& cfg, int term_cap) {
    SeriesSum acc;
    acc.add(1.0);
    const double lax = std::log(std::abs(x));
    double prev_mag = 1.0;
    bool past_peak = false;
    for (int n = 1; n <= term_cap; ++n) {
        const double lmag = n * lax - std::lgamma(beta * n + 1.0);
        const double mag = std::exp(lmag);
        const double term = (x < 0.0 && (n & 1)) ? -mag : mag;
        acc.add(term);
        if (mag < prev_mag) past_peak = true;
        if (past_peak && mag < 0.1 * cfg.abs_tol) return acc.value();
        prev_mag = mag;
    }
    throw EvaluationError("mittag_leffler: series did not converge within max_terms (x = " +
                          std::to_string(x) + ", beta = " + std::to_string(beta) + ")");
}

// Spectral representation for E_beta(-xm), xm > 0, 0 < beta < 1:
//   E_beta(-xm) = sin(beta pi)/(beta pi) *
//                 \int_0^inf exp(-(xm s)^{1/beta}) / (s^2 + 2 s cos(beta pi) + 1) ds
// (substitution s = r^beta in the classical completely-monotone density of
// t -> E_beta(-t^beta); the beta = 1/2 case reduces to exp(x^2) erfc(x)).
double ml_spectral_negative(double beta, double xm, const EvalConfig& cfg) {
    const double theta = beta * kPi;
    const double sin_t = std::sin(theta);
    const double cos_t = std::cos(theta);
    const double prefactor = sin_t / (beta * kPi);

    auto integrand = [=](double s) {
        const double e = -std::pow(xm * s, 1.0 / beta);
        if (e < -745.0) return 0.0;
        return std::exp(e) / (s * (s + 2.0 * cos_t) + 1.0);
    };

    // The exponential cuts off at s ~ 1/xm; a geometric chain of split
    // points from there up to 1 keeps the decay region visible to the rule
    // no matter how small the scale is.
    const double scale = 1.0 / xm;
    const double inner_tol = 0.5 * cfg.abs_tol / std::max(prefactor, 1e-3);

    std::vector<double> pts{0.0};
    for (double s = std::min(scale, 0.25); s < 1.0; s *= 4.0) pts.push_back(s);
    pts.push_back(1.0);
    QuadResult head = integrate_split(integrand, pts, 0.5 * inner_tol);
    QuadResult tail = integrate_semi_infinite(integrand, 1.0, 0.5 * inner_tol);
    if (!head.converged || !tail.converged)
        throw EvaluationError("mittag_leffler: spectral integral did not converge (x = " +
                              std::to_string(-xm) + ")");
    return prefactor * (head.value + tail.value);
}

// Exponential asymptotics for large positive x, 0 < beta < 1:
//   E_beta(x) = (1/beta) exp(x^{1/beta}) - sum_{k>=1} x^{-k} / Gamma(1 - beta k).
// The algebraic series is asymptotic; truncate at its smallest term.
double ml_asymptotic_positive(double beta, double x, const EvalConfig& cfg, bool& ok) {
    const double expo = std::log(x) / beta;
    if (expo > std::log(709.0))
        throw EvaluationError("mittag_leffler: result overflows double (x = " +
                              std::to_string(x) + ", beta = " + std::to_string(beta) + ")");
    const double lead = std::exp(std::pow(x, 1.0 / beta)) / beta;
    // For the exponentially large branch an absolute target below the
    // rounding floor of the leading term is unreachable; aim for whichever
    // of the configured tolerance and ~machine relative accuracy is coarser.
    const double tol = std::max(cfg.abs_tol, lead * 8.0 * kEps);

    SeriesSum corr;
    double best_bound = std::numeric_limits<double>::infinity();
    ok = false;
    for (int k = 1; k <= 400; ++k) {
        // 1/Gamma(1 - beta k) = Gamma(beta k) sin(pi beta k) / pi; the
        // sine-free bound drives truncation (the sine has exact zeros).
        const double lbound = -k * std::log(x) + std::lgamma(beta * k) - std::log(kPi);
        const double bound = std::exp(lbound);
        if (bound > best_bound) break; // divergent part of the asymptotic series
        best_bound = bound;
        corr.add(bound * std::sin(kPi * beta * k));
        if (bound < 0.1 * tol) {
            ok = true;
            break;
        }
    }
    return lead - corr.value();
}

} // namespace

double mittag_leffler(double beta, double x, const EvalConfig& cfg) {
    cfg.validate();
    if (!(beta > 0.0 && beta <= 1.0))
        throw std::invalid_argument("mittag_leffler: beta must lie in (0,1]");
    if (!std::isfinite(x)) throw std::invalid_argument("mittag_leffler: x must be finite");

    if (beta == 1.0) return std::exp(x); // E_1 = exp
    if (x == 0.0) return 1.0;

    if (x > 0.0) {
        if (x <= cfg.series_radius) return ml_series(beta, x, cfg, cfg.max_terms);
        bool ok = false;
        const double asym = ml_asymptotic_positive(beta, x, cfg, ok);
        if (ok) return asym;
        // Asymptotic stalled above tolerance: the positive-term series still
        // converges, it just needs a larger budget.
        return ml_series(beta, x, cfg, std::max(cfg.max_terms, 200000));
    }

    // x < 0: the alternating series is used only while its peak term stays
    // inside the rounding budget |x|^{1/beta} <= log(abs_tol / 8 eps).
    const double peak_log = std::pow(-x, 1.0 / beta);
    if (-x <= cfg.series_radius && peak_log <= cancellation_budget(cfg.abs_tol))
        return ml_series(beta, x, cfg, cfg.max_terms);
    return ml_spectral_negative(beta, -x, cfg);
}

namespace {

bool mw_series(double beta, double tau, const EvalConfig& cfg, double& out) {
    if (tau == 0.0) {
        out = 1.0 / std::tgamma(1.0 - beta);
        return true;
    }
    const double ltau = std::log(tau);
    const double budget = cancellation_budget(cfg.abs_tol);
    SeriesSum acc;
    // Termination tracks the sine-free magnitude bound
    // tau^n/n! Gamma(beta(n+1))/pi: the sine factor has exact zeros (e.g.
    // every odd n for beta = 1/2) and cannot drive the stop rule.
    double prev_bound = std::numeric_limits<double>::infinity();
    bool past_peak = false;
    for (int n = 0; n <= cfg.max_terms; ++n) {
        const double lbound =
            n * ltau - std::lgamma(n + 1.0) + std::lgamma(beta * (n + 1)) - std::log(kPi);
        const double bound = std::exp(lbound);
        const double s = std::sin(kPi * beta * (n + 1));
        double term = bound * std::abs(s);
        if ((n & 1) != 0) term = -term;
        if (s < 0.0) term = -term;
        acc.add(term);
        if (std::log(std::max(acc.peak, 1e-300)) > budget) return false; // losing significance
        if (bound < prev_bound) past_peak = (n > 0);
        if (past_peak && bound < 0.1 * cfg.abs_tol && bound < prev_bound) {
            out = std::max(acc.value(), 0.0);
            return true;
        }
        prev_bound = bound;
    }
    return false;
}

// log of the Zolotarev function A(phi) for 0 < phi < pi.
double zolotarev_log_a(double beta, double phi) {
    return (beta * std::log(std::sin(beta * phi)) +
            (1.0 - beta) * std::log(std::sin((1.0 - beta) * phi)) - std::log(std::sin(phi))) /
           (1.0 - beta);
}

double mw_integral(double beta, double tau, const EvalConfig& cfg) {
    const double c = std::pow(tau, 1.0 / (1.0 - beta));
    const double prefactor = std::pow(tau, beta / (1.0 - beta)) / ((1.0 - beta) * kPi);

    auto integrand = [=](double phi) {
        const double la = zolotarev_log_a(beta, phi);
        const double e = la - c * std::exp(la);
        if (e < -745.0) return 0.0;
        return std::exp(e);
    };
    const double tol = 0.5 * cfg.abs_tol / std::max(prefactor, 1.0);
    QuadResult r = integrate(integrand, 0.0, kPi, tol);
    if (!r.converged)
        throw EvaluationError("m_wright_density: integral branch did not converge (tau = " +
                              std::to_string(tau) + ")");
    return std::max(prefactor * r.value, 0.0);
}

} // namespace

double m_wright_density(double beta, double tau, const EvalConfig& cfg) {
    cfg.validate();
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument(
            "m_wright_density: beta must lie in (0,1); beta = 1 is a point mass at tau = 1");
    if (!(tau >= 0.0) || !std::isfinite(tau))
        throw std::invalid_argument("m_wright_density: tau must be finite and >= 0");

    double value = 0.0;
    if (mw_series(beta, tau, cfg, value)) return value;

    // Series lost significance (large tau); the integral branch is valid and
    // accurate once the exponential factor dominates, which it does on the
    // whole region the series cannot reach.
    if (tau >= 1.0) return mw_integral(beta, tau, cfg);
    throw EvaluationError("m_wright_density: evaluation failed at tau = " + std::to_string(tau) +
                          " (beta = " + std::to_string(beta) + ")");
}

double m_wright_series_tau_limit(double beta, const EvalConfig& cfg) {
    cfg.validate();
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("m_wright_series_tau_limit: beta must lie in (0,1)");
    double lo = 0.0, hi = 64.0;
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        double dummy;
        if (mw_series(beta, mid, cfg, dummy))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

double marginal_density(const GreyParams& params, double x, double t, const EvalConfig& cfg) {
    params.validate();
    if (!(t > 0.0)) throw std::invalid_argument("marginal_density: t must be > 0");
    const double scale = std::pow(t, -0.5 * params.alpha);
    const double z = std::numbers::sqrt2 * std::abs(x) * scale;
    return scale / std::numbers::sqrt2 * m_wright_density(0.5 * params.beta, z, cfg);
}

double density_generator(double beta, int n, double x, const EvalConfig& cfg) {
    cfg.validate();
    if (!(beta > 0.0 && beta <= 1.0))
        throw std::invalid_argument("density_generator: beta must lie in (0,1]");
    if (n < 1) throw std::invalid_argument("density_generator: n must be >= 1");
    if (!(x >= 0.0)) throw std::invalid_argument("density_generator: x must be >= 0");

    const double norm = std::pow(2.0 * kPi, -0.5 * n);
    if (beta == 1.0) return norm * std::exp(-x); // M_1 is the point mass at tau = 1

    if (x == 0.0 && n >= 2)
        throw EvaluationError("density_generator: integral diverges at x = 0 for n >= 2");

    EvalConfig inner = cfg;
    inner.abs_tol = 0.1 * cfg.abs_tol;

    QuadResult r;
    if (n == 1) {
        // tau = v^2 removes the tau^{-1/2} endpoint singularity.
        auto integrand = [&](double v) {
            const double tau = v * v;
            const double e = (x > 0.0) ? -x / tau : 0.0;
            if (e < -745.0) return 0.0;
            return 2.0 * std::exp(e) * m_wright_density(beta, tau, inner);
        };
        QuadResult head = integrate(integrand, 0.0, 1.0, 0.5 * cfg.abs_tol / norm);
        QuadResult tail = integrate_semi_infinite(integrand, 1.0, 0.5 * cfg.abs_tol / norm);
        r.value = head.value + tail.value;
        r.converged = head.converged && tail.converged;
    } else {
        auto integrand = [&](double tau) {
            const double e = -x / tau;
            if (e < -745.0) return 0.0;
            return std::pow(tau, -0.5 * n) * std::exp(e) * m_wright_density(beta, tau, inner);
        };
        // e^{-x/tau} turns on past tau ~ x/n; seed a geometric split chain.
        const double scale = std::max(x / n, 1e-3);
        std::vector<double> pts{0.0};
        for (double s = std::min(scale, 0.25); s < 1.0; s *= 4.0) pts.push_back(s);
        pts.push_back(1.0);
        QuadResult head = integrate_split(integrand, pts, 0.5 * cfg.abs_tol / norm);
        QuadResult tail = integrate_semi_infinite(integrand, 1.0, 0.5 * cfg.abs_tol / norm);
        r.value = head.value + tail.value;
        r.converged = head.converged && tail.converged;
    }
    if (!r.converged)
        throw EvaluationError("density_generator: quadrature did not converge (beta = " +
                              std::to_string(beta) + ", n = " + std::to_string(n) +
                              ", x = " + std::to_string(x) + ")");
    return std::max(norm * r.value, 0.0);
}

} // namespace gbm
