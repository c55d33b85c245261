#pragma once

/**
 * @file catalog.hpp
 * @brief Built-in problem data: every source/initial/boundary/coefficient
 *        combination used by the solvers is a named entry constructed
 *        here, so there is no expression parser anywhere.
 *
 * Each manufactured entry documents its exact solution and the source term
 * it induces. Seeded entries ("random_*") generate sign-definite data from
 * nonnegative basis functions with SplitMix64 coefficients; the seed is
 * part of the problem identity.
 */

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hadfrac/closed_form.hpp"
#include "hadfrac/diffusion.hpp"
#include "hadfrac/elliptic.hpp"
#include "hadfrac/generalized.hpp"
#include "hadfrac/rng.hpp"

namespace hadfrac {

class UnknownKeyError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct CatalogParams {
    double alpha = 0.5;
    double nu = 1.0;
    std::size_t nx = 64;
    std::size_t ny = 16;
    std::size_t nt = 64;
    double t_end = std::exp(1.0);
    std::uint64_t seed = 42;
    int dims = 1;
    double delta = 0.01;  // stability perturbation size
};

namespace catalog_detail {

inline double sinpi(double x) { return std::sin(std::numbers::pi * x); }

[[noreturn]] inline void unknown_key(const std::string& key,
                                     const std::vector<std::string>& known,
                                     const char* kind) {
    std::ostringstream os;
    os << "unknown " << kind << " key '" << key << "'; available:";
    for (const auto& k : known) os << ' ' << k;
    throw UnknownKeyError(os.str());
}

}  // namespace catalog_detail

// ---------------------------------------------------------------------------
// Caputo-Hadamard diffusion problems
// ---------------------------------------------------------------------------

inline std::vector<std::string> diffusion_catalog_keys() {
    return {"const5",
            "mms_quadlog",
            "mms_quadlog_linear_sink",
            "mms_quadlog_cubic_sink",
            "mms_quadlog_tanh_sink",
            "mp_sine",
            "random_nonneg",
            "random_nonpos",
            "stability_sine",
            "stability_sine_perturbed"};
}

inline DiffusionProblem make_diffusion_problem(const std::string& key,
                                               const CatalogParams& params) {
    using catalog_detail::sinpi;
    const FracOrder alpha(params.alpha);
    const LogGrid time(1.0, params.t_end, params.nt);
    const double nu = params.nu;

    SpaceDomain space = SpaceInterval{1.0, params.nx};
    if (params.dims == 2) {
        space = SpaceRectangle{1.0, 1.0, params.nx, params.ny};
    }

    // Manufactured solution u = sin(pi x)(log t)^2 (times sin(pi y) in 2D):
    // D*^a u = G(3)/G(3-a) (log t)^(2-a) sin(pi x), Lap u = -pi^2 u (1D).
    const double dfrac = gamma_fn(3.0) / gamma_fn(3.0 - params.alpha);
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const int dims = params.dims;
    auto exact = [dims](double x, double y, double t) {
        const double lt = std::log(t);
        double v = sinpi(x) * lt * lt;
        if (dims == 2) v *= sinpi(y);
        return v;
    };
    auto linear_forcing = [=](double x, double y, double t) {
        const double lt = std::log(t);
        double shape = sinpi(x);
        double lap_factor = pi2;
        if (dims == 2) {
            shape *= sinpi(y);
            lap_factor = 2.0 * pi2;
        }
        return shape *
               (dfrac * std::pow(lt, 2.0 - params.alpha) +
                nu * lap_factor * lt * lt);
    };

    if (key == "const5") {
        return DiffusionProblem{
            alpha,
            nu,
            space,
            time,
            SourceEntry{"zero", [](double, double, double, double) {
                            return 0.0;
                        },
                        false, Monotonicity::none, DataSign::nonnegative},
            InitialEntry{"const5", [](double, double) { return 5.0; }},
            BoundaryEntry{"const5",
                          [](double, double, double) { return 5.0; }}};
    }
    if (key == "mms_quadlog") {
        return DiffusionProblem{
            alpha,
            nu,
            space,
            time,
            SourceEntry{"mms_quadlog_forcing",
                        [=](double x, double y, double t, double) {
                            return linear_forcing(x, y, t);
                        },
                        false, Monotonicity::none, DataSign::nonnegative},
            InitialEntry{"zero", [](double, double) { return 0.0; }},
            BoundaryEntry{"zero", [](double, double, double) { return 0.0; }}};
    }
    if (key == "mms_quadlog_linear_sink" || key == "mms_quadlog_cubic_sink" ||
        key == "mms_quadlog_tanh_sink") {
        // F(x,t,u) = sink(u) + s(x,t) with s chosen so the linear
        // manufactured solution stays exact; every sink is nonincreasing.
        std::function<double(double)> sink;
        if (key == "mms_quadlog_linear_sink") {
            sink = [](double u) { return -u; };
        } else if (key == "mms_quadlog_cubic_sink") {
            sink = [](double u) { return -u * u * u; };
        } else {
            sink = [](double u) { return -2.0 * std::tanh(u); };
        }
        return DiffusionProblem{
            alpha,
            nu,
            space,
            time,
            SourceEntry{key + "_forcing",
                        [=](double x, double y, double t, double u) {
                            return sink(u) - sink(exact(x, y, t)) +
                                   linear_forcing(x, y, t);
                        },
                        true, Monotonicity::nonincreasing_in_u,
                        DataSign::unknown},
            InitialEntry{"zero", [](double, double) { return 0.0; }},
            BoundaryEntry{"zero", [](double, double, double) { return 0.0; }}};
    }
    if (key == "mp_sine") {
        return DiffusionProblem{
            alpha,
            nu,
            space,
            time,
            SourceEntry{"zero", [](double, double, double, double) {
                            return 0.0;
                        },
                        false, Monotonicity::none, DataSign::nonnegative},
            InitialEntry{"sine", [dims](double x, double y) {
                             double v = sinpi(x);
                             if (dims == 2) v *= sinpi(y);
                             return v;
                         }},
            BoundaryEntry{"zero", [](double, double, double) { return 0.0; }}};
    }
    if (key == "random_nonneg" || key == "random_nonpos") {
        const double flip = (key == "random_nonneg") ? 1.0 : -1.0;
        SplitMix64 rng(params.seed);
        const double q0 = rng.uniform(0.0, 1.0);
        const double q1 = rng.uniform(0.0, 1.0);
        const double q2 = rng.uniform(0.0, 1.0);
        const double q3 = rng.uniform(0.0, 0.5);
        const double q4 = rng.uniform(0.0, 1.0);
        const double q5 = rng.uniform(0.0, 2.0);
        const double w = rng.uniform(1.0, 4.0);
        auto bump = [dims](double x, double y) {
            double v = 4.0 * x * (1.0 - x);
            if (dims == 2) v *= 4.0 * y * (1.0 - y);
            return v;
        };
        return DiffusionProblem{
            alpha,
            nu,
            space,
            time,
            SourceEntry{key,
                        [=](double x, double y, double t, double) {
                            const double s = std::sin(w * x + std::log(t));
                            return flip * (q4 + q5 * bump(x, y) * std::log(t) +
                                           q2 * s * s);
                        },
                        false, Monotonicity::none,
                        flip > 0 ? DataSign::nonnegative
                                 : DataSign::nonpositive},
            InitialEntry{key + "_phi",
                         [=](double x, double y) {
                             return flip * (q0 + q1 * bump(x, y));
                         }},
            BoundaryEntry{key + "_psi",
                          [=](double x, double y, double t) {
                              const double base = q0 + q1 * bump(x, y);
                              return flip *
                                     (base + q3 * std::log(t) *
                                                 (1.0 + std::cos(w * x)));
                          }}};
    }
    if (key == "stability_sine" || key == "stability_sine_perturbed") {
        const double eps = (key == "stability_sine") ? 0.0 : params.delta;
        return DiffusionProblem{
            alpha,
            nu,
            space,
            time,
            SourceEntry{"zero", [](double, double, double, double) {
                            return 0.0;
                        },
                        false, Monotonicity::none, DataSign::nonnegative},
            InitialEntry{"sine_eps",
                         [=](double x, double y) {
                             double v = (1.0 + eps) * sinpi(x);
                             if (dims == 2) v *= sinpi(y);
                             return v;
                         }},
            BoundaryEntry{"zero", [](double, double, double) { return 0.0; }}};
    }
    catalog_detail::unknown_key(key, diffusion_catalog_keys(), "diffusion");
}

// ---------------------------------------------------------------------------
// Generalized (Riemann-Hadamard) diffusion problems
// ---------------------------------------------------------------------------

inline std::vector<std::string> generalized_catalog_keys() {
    return {"gen_zero",          "gen_mms_linlog",
            "gen_mms_cubic_sink", "gen_random_nonneg",
            "gen_random_nonpos", "gen_stability_sine",
            "gen_stability_sine_perturbed"};
}

inline GeneralizedProblem make_generalized_problem(const std::string& key,
                                                   const CatalogParams& params) {
    using catalog_detail::sinpi;
    const FracOrder alpha(params.alpha);
    const LogGrid time(1.0, params.t_end, params.nt);
    const double nu = params.nu;
    SpaceDomain space = SpaceInterval{1.0, params.nx};
    const double pi2 = std::numbers::pi * std::numbers::pi;

    // Manufactured u = sin(pi x) log t:
    //   u_t = sin(pi x)/t,
    //   D^(1-a) Lap u = -pi^2 sin(pi x) (log t)^a / G(1+a).
    const double dweight = 1.0 / gamma_fn(1.0 + params.alpha);
    auto exact = [](double x, double t) { return sinpi(x) * std::log(t); };
    auto linear_forcing = [=](double x, double t) {
        return sinpi(x) * (1.0 / t + nu * pi2 * dweight *
                                         std::pow(std::log(t), params.alpha));
    };

    if (key == "gen_zero") {
        return GeneralizedProblem{
            alpha,
            nu,
            space,
            time,
            SourceEntry{"zero", [](double, double, double, double) {
                            return 0.0;
                        },
                        false, Monotonicity::none, DataSign::nonnegative},
            InitialEntry{"zero", [](double, double) { return 0.0; }},
            BoundaryEntry{"zero", [](double, double, double) { return 0.0; }}};
    }
    if (key == "gen_mms_linlog") {
        return GeneralizedProblem{
            alpha,
            nu,
            space,
            time,
            SourceEntry{"gen_mms_linlog_forcing",
                        [=](double x, double, double t, double) {
                            return linear_forcing(x, t);
                        },
                        false, Monotonicity::none, DataSign::nonnegative},
            InitialEntry{"zero", [](double, double) { return 0.0; }},
            BoundaryEntry{"zero", [](double, double, double) { return 0.0; }}};
    }
    if (key == "gen_mms_cubic_sink") {
        return GeneralizedProblem{
            alpha,
            nu,
            space,
            time,
            SourceEntry{"gen_mms_cubic_sink_forcing",
                        [=](double x, double, double t, double u) {
                            const double ue = exact(x, t);
                            return -u * u * u + ue * ue * ue +
                                   linear_forcing(x, t);
                        },
                        true, Monotonicity::nonincreasing_in_u,
                        DataSign::unknown},
            InitialEntry{"zero", [](double, double) { return 0.0; }},
            BoundaryEntry{"zero", [](double, double, double) { return 0.0; }}};
    }
    if (key == "gen_random_nonneg" || key == "gen_random_nonpos") {
        const double flip = (key == "gen_random_nonneg") ? 1.0 : -1.0;
        SplitMix64 rng(params.seed ^ 0x5eedULL);
        const double q0 = rng.uniform(0.0, 1.0);
        const double q1 = rng.uniform(0.0, 1.0);
        const double q2 = rng.uniform(0.0, 1.0);
        const double q3 = rng.uniform(0.0, 0.5);
        const double w = rng.uniform(1.0, 4.0);
        return GeneralizedProblem{
            alpha,
            nu,
            space,
            time,
            SourceEntry{key,
                        [=](double x, double, double t, double) {
                            const double s = std::sin(w * x - std::log(t));
                            return flip * (q2 + q1 * 4.0 * x * (1.0 - x) *
                                                    std::log(t) +
                                           q0 * s * s);
                        },
                        false, Monotonicity::none,
                        flip > 0 ? DataSign::nonnegative
                                 : DataSign::nonpositive},
            InitialEntry{key + "_phi",
                         [=](double x, double) {
                             return flip * (q0 + q1 * 4.0 * x * (1.0 - x));
                         }},
            BoundaryEntry{key + "_psi",
                          [=](double x, double, double t) {
                              return flip * (q0 + q1 * 4.0 * x * (1.0 - x) +
                                             q3 * std::log(t));
                          }}};
    }
    if (key == "gen_stability_sine" || key == "gen_stability_sine_perturbed") {
        const double eps = (key == "gen_stability_sine") ? 0.0 : params.delta;
        return GeneralizedProblem{
            alpha,
            nu,
            space,
            time,
            SourceEntry{"zero", [](double, double, double, double) {
                            return 0.0;
                        },
                        false, Monotonicity::none, DataSign::nonnegative},
            InitialEntry{"sine_eps",
                         [=](double x, double) {
                             return (1.0 + eps) * sinpi(x);
                         }},
            BoundaryEntry{"zero", [](double, double, double) { return 0.0; }}};
    }
    catalog_detail::unknown_key(key, generalized_catalog_keys(),
                                "generalized");
}

// ---------------------------------------------------------------------------
// Elliptic problems
// ---------------------------------------------------------------------------

inline std::vector<std::string> elliptic_catalog_keys() {
    return {"ell_mms_quadlog_1d", "ell_mms_linear_sink", "ell_mms_cubic_sink",
            "ell_mms_exp_sink",   "ell_random_wmp_max",  "ell_random_wmp_min",
            "ell_strong_zero",    "ell_sign_2d_pos",     "ell_sign_2d_neg"};
}

namespace catalog_detail {

inline CoefficientEntry const_coeff(const std::string& name, double v) {
    return CoefficientEntry{name,
                            [v](const EllipticPoint&) { return v; }};
}

/// Shared 1D manufactured problem on (1, e): u = (log x)^2, a = 0, b = -1,
/// c = 0, so F = (2 - 2 log x)/x^2 - G(3)/G(3-a) (log x)^(2-a).
inline EllipticProblem mms_quadlog_1d(const CatalogParams& params) {
    const double a = params.alpha;
    const double dfrac = gamma_fn(3.0) / gamma_fn(3.0 - a);
    EllipticProblem p;
    p.dims = 1;
    p.extents = {std::exp(1.0), 2.0, 2.0};
    p.resolution = {params.nx, 2, 2};
    p.alpha = FracOrder(a);
    p.advection = {const_coeff("zero", 0.0), const_coeff("zero", 0.0),
                   const_coeff("zero", 0.0)};
    p.frac_coeff = {const_coeff("minus_one", -1.0),
                    const_coeff("minus_one", -1.0),
                    const_coeff("minus_one", -1.0)};
    p.reaction = const_coeff("zero", 0.0);
    p.source = EllipticSource{
        "ell_mms_quadlog_forcing",
        [=](double, const EllipticPoint& pt) {
            const double lx = std::log(pt.x);
            return (2.0 - 2.0 * lx) / (pt.x * pt.x) -
                   dfrac * std::pow(lx, 2.0 - a);
        },
        false, Monotonicity::none, DataSign::unknown};
    p.boundary = [](const EllipticPoint& pt) {
        const double lx = std::log(pt.x);
        return lx * lx;
    };
    p.b_sign = BSign::negative;
    p.c_sign = CSign::nonpositive;
    return p;
}

}  // namespace catalog_detail

inline EllipticProblem make_elliptic_problem(const std::string& key,
                                             const CatalogParams& params) {
    using catalog_detail::const_coeff;
    using catalog_detail::mms_quadlog_1d;

    if (key == "ell_mms_quadlog_1d") {
        return mms_quadlog_1d(params);
    }
    if (key == "ell_mms_linear_sink" || key == "ell_mms_cubic_sink" ||
        key == "ell_mms_exp_sink") {
        EllipticProblem p = mms_quadlog_1d(params);
        auto base = p.source.fn;
        std::function<double(double)> sink;
        if (key == "ell_mms_linear_sink") {
            sink = [](double u) { return -u; };
        } else if (key == "ell_mms_cubic_sink") {
            sink = [](double u) { return -u * u * u; };
        } else {
            sink = [](double u) { return -0.5 * std::exp(u); };
        }
        // The elliptic equation has F on the right-hand side, so a
        // nonincreasing reaction enters as F(u, x) = sink(u) + s(x) with
        // s(x) = F_linear(x) - sink(u_exact(x)).
        p.source = EllipticSource{
            key + "_forcing",
            [=](double u, const EllipticPoint& pt) {
                const double lx = std::log(pt.x);
                const double ue = lx * lx;
                return sink(u) - sink(ue) + base(0.0, pt);
            },
            true, Monotonicity::nonincreasing_in_u, DataSign::unknown};
        return p;
    }
    if (key == "ell_random_wmp_max" || key == "ell_random_wmp_min") {
        // Hypotheses of the weak principles: b_j < 0, c <= 0, F >= 0 for
        // the max side; b_j > 0, c <= 0, F <= 0 for the min side.
        const bool max_side = (key == "ell_random_wmp_max");
        const double bflip = max_side ? -1.0 : 1.0;
        const double fflip = max_side ? 1.0 : -1.0;
        SplitMix64 rng(params.seed ^ 0xe11ULL);
        const double q0 = rng.uniform(0.2, 1.2);
        const double q1 = rng.uniform(0.0, 1.0);
        const double q2 = rng.uniform(0.0, 1.0);
        const double q3 = rng.uniform(-1.0, 1.0);
        const double q4 = rng.uniform(0.0, 1.5);
        const double q5 = rng.uniform(-1.0, 1.0);
        const double w = rng.uniform(0.5, 3.0);

        EllipticProblem p;
        p.dims = params.dims;
        p.extents = {std::exp(1.0), std::exp(1.0), std::exp(1.0)};
        p.resolution = {params.nx, params.ny, params.ny};
        p.alpha = FracOrder(params.alpha);
        for (int d = 0; d < 3; ++d) {
            p.advection[d] = CoefficientEntry{
                "adv_rand", [=](const EllipticPoint& pt) {
                    return q3 * std::cos(w * pt.x + 0.7 * pt.y);
                }};
            p.frac_coeff[d] = CoefficientEntry{
                "frac_rand", [=](const EllipticPoint& pt) {
                    return bflip *
                           (q0 + q1 * (pt.x - 1.0) / 2.0 +
                            0.2 * q2 * std::sin(pt.y));
                }};
        }
        p.reaction = CoefficientEntry{"reaction_rand",
                                      [=](const EllipticPoint& pt) {
                                          const double s =
                                              std::sin(w * pt.x + pt.y);
                                          return -q2 * s * s;
                                      }};
        p.source = EllipticSource{
            key,
            [=](double, const EllipticPoint& pt) {
                const double s = std::cos(w * pt.x - pt.y);
                return fflip * (q4 * s * s + 0.1 * q0);
            },
            false, Monotonicity::none,
            max_side ? DataSign::nonnegative : DataSign::nonpositive};
        p.boundary = [=](const EllipticPoint& pt) {
            return q5 * std::sin(w * std::log(pt.x) + pt.y) +
                   0.5 * q1 * std::log(pt.x);
        };
        p.b_sign = max_side ? BSign::negative : BSign::positive;
        p.c_sign = CSign::nonpositive;
        return p;
    }
    if (key == "ell_strong_zero") {
        EllipticProblem p;
        p.dims = params.dims;
        p.extents = {std::exp(1.0), std::exp(1.0), std::exp(1.0)};
        p.resolution = {params.nx, params.ny, params.ny};
        p.alpha = FracOrder(params.alpha);
        p.advection = {const_coeff("zero", 0.0), const_coeff("zero", 0.0),
                       const_coeff("zero", 0.0)};
        p.frac_coeff = {const_coeff("minus_one", -1.0),
                        const_coeff("minus_one", -1.0),
                        const_coeff("minus_one", -1.0)};
        p.reaction = const_coeff("minus_one", -1.0);
        p.source = EllipticSource{"zero",
                                  [](double, const EllipticPoint&) {
                                      return 0.0;
                                  },
                                  false, Monotonicity::none,
                                  DataSign::nonnegative};
        p.boundary = [](const EllipticPoint&) { return 0.0; };
        p.b_sign = BSign::negative;
        p.c_sign = CSign::nonpositive;
        return p;
    }
    if (key == "ell_sign_2d_pos" || key == "ell_sign_2d_neg") {
        const double flip = (key == "ell_sign_2d_pos") ? 1.0 : -1.0;
        EllipticProblem p;
        p.dims = 2;
        p.extents = {std::exp(1.0), std::exp(1.0), 2.0};
        p.resolution = {params.nx, params.ny, 2};
        p.alpha = FracOrder(params.alpha);
        p.advection = {const_coeff("zero", 0.0), const_coeff("zero", 0.0),
                       const_coeff("zero", 0.0)};
        p.frac_coeff = {const_coeff("minus_one", -1.0),
                        const_coeff("minus_one", -1.0),
                        const_coeff("minus_one", -1.0)};
        p.reaction = const_coeff("minus_one", -1.0);
        p.source = EllipticSource{"zero",
                                  [](double, const EllipticPoint&) {
                                      return 0.0;
                                  },
                                  false, Monotonicity::none,
                                  DataSign::nonnegative};
        p.boundary = [flip](const EllipticPoint& pt) {
            const double lx = std::log(pt.x);
            const double ly = std::log(pt.y);
            return flip * (0.5 + lx * (1.0 - lx) + std::sin(1.5 * ly));
        };
        p.b_sign = BSign::negative;
        p.c_sign = CSign::nonpositive;
        return p;
    }
    catalog_detail::unknown_key(key, elliptic_catalog_keys(), "elliptic");
}

// ---------------------------------------------------------------------------
// Operator input functions (frac-op command)
// ---------------------------------------------------------------------------

inline std::vector<std::string> frac_input_keys() {
    return {"log_power:<beta>", "constant:<c>", "log_poly:<c0,c1,...>",
            "log_trig:<freq,amp,phase;...>"};
}

inline ClosedFormTag parse_frac_input(const std::string& key) {
    const auto colon = key.find(':');
    const std::string kind = key.substr(0, colon);
    const std::string args =
        colon == std::string::npos ? "" : key.substr(colon + 1);
    auto parse_list = [](const std::string& s, char sep) {
        std::vector<std::string> out;
        std::string cur;
        for (char ch : s) {
            if (ch == sep) {
                out.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(ch);
            }
        }
        if (!cur.empty()) out.push_back(cur);
        return out;
    };
    try {
        if (kind == "log_power") return ClosedFormTag(LogPower{std::stod(args)});
        if (kind == "constant") return ClosedFormTag(ConstantFn{std::stod(args)});
        if (kind == "log_poly") {
            LogPolynomial p;
            for (const auto& tok : parse_list(args, ',')) {
                p.coeffs.push_back(std::stod(tok));
            }
            return ClosedFormTag(p);
        }
        if (kind == "log_trig") {
            LogTrig t;
            for (const auto& term : parse_list(args, ';')) {
                const auto parts = parse_list(term, ',');
                if (parts.size() != 3) {
                    throw std::invalid_argument(
                        "log_trig term needs freq,amp,phase");
                }
                t.freqs.push_back(std::stod(parts[0]));
                t.amps.push_back(std::stod(parts[1]));
                t.phases.push_back(std::stod(parts[2]));
            }
            return ClosedFormTag(t);
        }
    } catch (const UnknownKeyError&) {
        throw;
    } catch (const std::exception& e) {
        throw UnknownKeyError("malformed input '" + key + "': " + e.what());
    }
    catalog_detail::unknown_key(key, frac_input_keys(), "frac-op input");
}

}  // namespace hadfrac
