#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "systolic/certify/rational.hpp"

namespace systolic::certify {

enum class Relation { less, less_equal, equal, greater_equal, greater };

inline const char* to_string(Relation r) {
    switch (r) {
        case Relation::less: return "<";
        case Relation::less_equal: return "<=";
        case Relation::equal: return "=";
        case Relation::greater_equal: return ">=";
        case Relation::greater: return ">";
    }
    return "?";
}

/// One inequality of the chain. Without lhs it is an assumption and holds by fiat.
struct TraceStep {
    std::string name;
    std::string statement;
    std::optional<Rational> lhs;
    Relation relation = Relation::equal;
    Rational rhs;
    std::string provenance;

    bool assumed() const { return !lhs.has_value(); }
    bool holds() const {
        if (!lhs) return true;
        const Rational& a = *lhs;
        switch (relation) {
            case Relation::less: return a < rhs;
            case Relation::less_equal: return a <= rhs;
            case Relation::equal: return a == rhs;
            case Relation::greater_equal: return a >= rhs;
            case Relation::greater: return a > rhs;
        }
        return false;
    }
};

using Trace = std::vector<TraceStep>;

/// The certificate is refused at the first inequality that fails; the trace ends with it.
struct CertificateRefused : std::runtime_error {
    std::string inequality;
    Trace trace;
    CertificateRefused(std::string name, Trace t)
        : std::runtime_error("certificate refused: " + name + " fails"), inequality(std::move(name)), trace(std::move(t)) {}
};

enum class PlugSource { report, hypothesis };

inline const char* to_string(PlugSource s) { return s == PlugSource::report ? "report" : "hypothesis"; }

/**
 * What the assembly needs to know about one plug. A report carries numbers from
 * verify_a; a hypothesis asserts (a3) and (a4) without evidence and makes the
 * certificate conditional.
 */
struct PlugComponent {
    PlugSource source = PlugSource::hypothesis;
    std::string label;
    double volume = 0.0;        // pi r^2 + CAL
    double volume_error = 0.0;  // quadrature error estimate, added before rounding up
    double observed_tmin = 0.0;
    bool a3 = false;
    bool a4 = false;
};

/// Tolerance the period search allows below 1 before (a3) fails.
inline const Rational& period_slack() {
    static const Rational s = parse_rational("1e-10");
    return s;
}

struct AssemblyInput {
    int ell = 1;                      // boundary circles
    Rational eps;                     // in (0, 1)
    std::vector<Rational> areas;      // dalpha-areas of the collar annuli
    Rational tau_deviation;           // sup |tau - 1| away from the plugs
    std::vector<PlugComponent> plugs;  // one per circle

    void validate() const {
        if (ell < 1) throw std::invalid_argument("assembly: need at least one boundary circle");
        if (areas.size() != static_cast<std::size_t>(ell))
            throw std::invalid_argument("assembly: expected " + std::to_string(ell) + " areas, got " +
                                        std::to_string(areas.size()));
        if (plugs.size() != static_cast<std::size_t>(ell))
            throw std::invalid_argument("assembly: expected " + std::to_string(ell) + " plugs, got " +
                                        std::to_string(plugs.size()));
        if (tau_deviation < 0) throw std::invalid_argument("assembly: tau deviation must be >= 0");
    }
};

/// r_j with pi r_j^2 = (1 - eps) a_j.
inline std::vector<double> plan_radii(const std::vector<double>& areas, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("plan_radii: need 0 < eps < 1");
    std::vector<double> r;
    for (double a : areas) {
        if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("plan_radii: areas must be positive");
        r.push_back(std::sqrt((1.0 - eps) * a / std::numbers::pi));
    }
    return r;
}

/// (1 - eps)^2 / (eps (3 ell + 1)).
inline Rational bound_formula(int ell, const Rational& eps) {
    const Rational one_minus = 1 - eps;
    return one_minus * one_minus / (eps * (3 * ell + 1));
}

namespace detail {

class Chain {
public:
    explicit Chain(Trace& t) : t_(t) {}
    void check(std::string name, std::string statement, Rational lhs, Relation rel, Rational rhs,
               std::string provenance = "exact arithmetic") {
        t_.push_back({std::move(name), std::move(statement), std::move(lhs), rel, std::move(rhs), std::move(provenance)});
        if (!t_.back().holds()) throw CertificateRefused(t_.back().name, t_);
    }
    void assume(std::string name, std::string statement, Relation rel, Rational rhs, std::string provenance) {
        t_.push_back({std::move(name), std::move(statement), std::nullopt, rel, std::move(rhs), std::move(provenance)});
    }

private:
    Trace& t_;
};

inline Rational sum(const std::vector<Rational>& xs) {
    Rational s = 0;
    for (const auto& x : xs) s += x;
    return s;
}

}  // namespace detail

struct VolumeBudget {
    Rational ambient_bound;     // (1 + eps) ell
    Rational complement_bound;  // eps (2 ell + 1)
    Rational total_bound;       // eps (3 ell + 1)
    Trace trace;
};

/// Volume of the ambient form, of the complement of the plugs, and of the assembled form.
inline VolumeBudget volume_budget(const AssemblyInput& in) {
    in.validate();
    VolumeBudget out;
    detail::Chain chain(out.trace);
    const Rational& e = in.eps;
    const Rational L = in.ell;
    chain.check("eps-positive", "eps > 0", e, Relation::greater, 0);
    chain.check("eps-below-one", "eps < 1", e, Relation::less, 1);
    for (std::size_t j = 0; j < in.areas.size(); ++j)
        chain.check("area-positive-" + std::to_string(j + 1), "a_j > 0", in.areas[j], Relation::greater, 0);
    const Rational A = detail::sum(in.areas);
    chain.check("area", "ell < eps + sum a_j", L, Relation::less, e + A);
    chain.check("tau-bound", "sup |tau - 1| < eps", in.tau_deviation, Relation::less, e, "binding-model tau bound");
    out.ambient_bound = (1 + e) * L;
    chain.check("ambient-volume", "int tau dalpha <= (1 + sup|tau - 1|) ell <= (1 + eps) ell",
                (1 + in.tau_deviation) * L, Relation::less_equal, out.ambient_bound);
    chain.assume("removed-volume", "sum pi r_j^2 = (1 - eps) sum a_j", Relation::equal, (1 - e) * A,
                 "definition of the radii");
    const Rational mid = out.ambient_bound - (1 - e) * (L - e);
    chain.check("complement-volume", "(1 + eps) ell - (1 - eps) sum a_j < (1 + eps) ell - (1 - eps)(ell - eps)",
                out.ambient_bound - (1 - e) * A, Relation::less, mid);
    chain.check("complement-identity", "(1 + eps) ell - (1 - eps)(ell - eps) = eps (2 ell + 1) - eps^2", mid,
                Relation::equal, e * (2 * L + 1) - e * e);
    out.complement_bound = e * (2 * L + 1);
    chain.check("complement-bound", "eps (2 ell + 1) - eps^2 < eps (2 ell + 1)", e * (2 * L + 1) - e * e,
                Relation::less, out.complement_bound);
    for (std::size_t j = 0; j < in.plugs.size(); ++j) {
        const auto& p = in.plugs[j];
        const std::string name = "plug-volume-" + std::to_string(j + 1) + " (a4)";
        if (p.source == PlugSource::hypothesis) {
            chain.assume(name, "vol(plug " + std::to_string(j + 1) + ") < eps", Relation::less, e, "hypothesis");
            continue;
        }
        if (!p.a4) {
            out.trace.push_back({name, "verify_a reported (a4) failed", Rational(0), Relation::equal, Rational(1),
                                 "verify_a"});
            throw CertificateRefused(name, out.trace);
        }
        chain.check(name, "vol(plug " + std::to_string(j + 1) + ") + quadrature error < eps",
                    rational_above(p.volume) + rational_above(std::abs(p.volume_error)), Relation::less, e,
                    "verify_a, rounded up");
    }
    out.total_bound = e * (3 * L + 1);
    chain.check("total-volume", "eps (2 ell + 1) + ell eps = eps (3 ell + 1)", out.complement_bound + L * e,
                Relation::equal, out.total_bound);
    return out;
}

struct TminComponent {
    std::string name;
    Rational bound;
    std::string provenance;
};

struct TminLedger {
    Rational bound;  // 1 - eps
    std::vector<TminComponent> components;
    Trace trace;
};

/// Lower bound on the shortest period: plugs >= 1, binding circles = 1, other orbits > 1 - eps.
inline TminLedger tmin_ledger(const AssemblyInput& in) {
    in.validate();
    TminLedger out;
    detail::Chain chain(out.trace);
    const Rational& e = in.eps;
    for (std::size_t j = 0; j < in.plugs.size(); ++j) {
        const auto& p = in.plugs[j];
        const std::string name = "plug-period-" + std::to_string(j + 1) + " (a3)";
        if (p.source == PlugSource::hypothesis) {
            chain.assume(name, "closed orbits in plug " + std::to_string(j + 1) + " have period >= 1",
                         Relation::greater_equal, 1, "hypothesis");
        } else {
            if (!p.a3) {
                out.trace.push_back({name, "verify_a reported (a3) failed", Rational(0), Relation::equal, Rational(1),
                                     "verify_a"});
                throw CertificateRefused(name, out.trace);
            }
            chain.check(name, "observed shortest plug period + search slack >= 1",
                        rational_below(p.observed_tmin) + period_slack(), Relation::greater_equal, 1,
                        "verify_a, rounded down, search-limited");
        }
        out.components.push_back({"plug " + std::to_string(j + 1), 1, to_string(p.source)});
    }
    chain.assume("binding-period", "boundary circles are closed orbits of period 1", Relation::equal, 1,
                 "binding model: core period P_core d(0) = 1");
    out.components.push_back({"binding", 1, "binding model"});
    chain.check("other-orbits", "1 - sup |tau - 1| > 1 - eps", 1 - in.tau_deviation, Relation::greater, 1 - e,
                "binding-model tau bound");
    out.components.push_back({"other", 1 - e, "return time above 1 - eps"});
    out.bound = 1 - e;
    chain.check("tmin", "min(1, 1, 1 - eps) = 1 - eps", std::min<Rational>(Rational(1), 1 - e), Relation::equal,
                out.bound);
    return out;
}

struct Certificate {
    int ell = 1;
    Rational eps;
    std::vector<double> radii;
    Rational ambient_bound;
    Rational complement_bound;
    Rational total_bound;
    Rational tmin_bound;
    Rational ratio_bound;
    bool conditional = false;  // some plug was a hypothesis
    std::vector<TminComponent> tmin_components;
    Trace trace;

    /// Every step re-evaluated exactly, and the headline values recomputed from the inputs.
    bool reverify() const {
        if (!std::all_of(trace.begin(), trace.end(), [](const auto& s) { return s.holds(); })) return false;
        if (total_bound != eps * (3 * ell + 1) || tmin_bound != 1 - eps) return false;
        if (ratio_bound != tmin_bound * tmin_bound / total_bound) return false;
        return ratio_bound == bound_formula(ell, eps);
    }
};

/// T_min^2 / vol > (1 - eps)^2 / (eps (3 ell + 1)), or CertificateRefused naming the first failure.
inline Certificate systolic_bound(const AssemblyInput& in) {
    in.validate();
    Certificate c;
    c.ell = in.ell;
    c.eps = in.eps;
    auto vb = volume_budget(in);
    c.trace = vb.trace;
    TminLedger tl;
    try {
        tl = tmin_ledger(in);
    } catch (CertificateRefused& r) {
        Trace t = c.trace;
        t.insert(t.end(), r.trace.begin(), r.trace.end());
        throw CertificateRefused(r.inequality, std::move(t));
    }
    c.trace.insert(c.trace.end(), tl.trace.begin(), tl.trace.end());
    std::vector<double> a;
    for (const auto& x : in.areas) a.push_back(to_double(x));
    c.radii = plan_radii(a, to_double(in.eps));
    c.ambient_bound = vb.ambient_bound;
    c.complement_bound = vb.complement_bound;
    c.total_bound = vb.total_bound;
    c.tmin_bound = tl.bound;
    c.tmin_components = tl.components;
    c.conditional = std::any_of(in.plugs.begin(), in.plugs.end(),
                                [](const auto& p) { return p.source == PlugSource::hypothesis; });
    c.ratio_bound = c.tmin_bound * c.tmin_bound / c.total_bound;
    detail::Chain chain(c.trace);
    chain.check("ratio", "T_min^2 / vol > (T_min bound)^2 / (volume bound) = (1 - eps)^2 / (eps (3 ell + 1))", c.ratio_bound, Relation::equal,
                bound_formula(c.ell, c.eps));
    return c;
}

/// Inputs with unit areas, tau deviation eps/2 and hypothetical plugs: the formula evaluated through the full chain.
inline AssemblyInput template_input(int ell, const Rational& eps) {
    AssemblyInput in;
    in.ell = ell;
    in.eps = eps;
    in.areas.assign(static_cast<std::size_t>(std::max(ell, 0)), Rational(1));
    in.tau_deviation = eps / 2;
    in.plugs.assign(static_cast<std::size_t>(std::max(ell, 0)), PlugComponent{});
    return in;
}

struct SweepRow {
    Rational eps;
    Certificate certificate;
};

struct Sweep {
    int ell = 1;
    std::vector<SweepRow> rows;
    bool strictly_increasing = true;  // bounds increase as eps decreases along the input order
};

inline Sweep sweep(int ell, const std::vector<Rational>& eps_values) {
    Sweep out;
    out.ell = ell;
    for (const auto& e : eps_values) {
        out.rows.push_back({e, systolic_bound(template_input(ell, e))});
        if (out.rows.size() > 1) {
            const auto& prev = out.rows[out.rows.size() - 2];
            if (!(e < prev.eps && out.rows.back().certificate.ratio_bound > prev.certificate.ratio_bound))
                out.strictly_increasing = false;
        }
    }
    return out;
}

inline std::string decimal(const Rational& r, int digits = 12) {
    std::ostringstream os;
    os.precision(digits);
    os << to_double(r);
    return os.str();
}

inline std::string render_step(const TraceStep& s) {
    std::ostringstream os;
    os << (s.assumed() ? "[assumed] " : s.holds() ? "[ok] " : "[FAILED] ") << s.name << ": " << s.statement;
    if (s.lhs)
        os << "\n    " << to_string(*s.lhs) << " " << to_string(s.relation) << " " << to_string(s.rhs) << "  ("
           << decimal(*s.lhs) << " " << to_string(s.relation) << " " << decimal(s.rhs) << ")";
    else
        os << "\n    " << to_string(s.relation) << " " << to_string(s.rhs);
    os << "  [" << s.provenance << "]";
    return os.str();
}

inline std::string render_text(const Certificate& c) {
    std::ostringstream os;
    os << "systolic ratio certificate" << (c.conditional ? " (conditional on hypothetical plugs)" : "") << "\n";
    os << "ell = " << c.ell << ", eps = " << to_string(c.eps) << "\n";
    for (std::size_t j = 0; j < c.radii.size(); ++j) {
        os.precision(17);
        os << "r_" << j + 1 << " = " << c.radii[j] << "\n";
    }
    for (const auto& s : c.trace) os << render_step(s) << "\n";
    os << "volume < " << to_string(c.total_bound) << " = " << decimal(c.total_bound) << "\n";
    os << "T_min > " << to_string(c.tmin_bound) << " = " << decimal(c.tmin_bound) << "\n";
    os << "ratio > " << to_string(c.ratio_bound) << " = " << decimal(c.ratio_bound) << "\n";
    os << "re-verified exactly: " << (c.reverify() ? "yes" : "NO") << "\n";
    return os.str();
}

inline std::string render_refusal(const CertificateRefused& r) {
    std::ostringstream os;
    os << "certificate refused at " << r.inequality << "\n";
    for (const auto& s : r.trace) os << render_step(s) << "\n";
    return os.str();
}

}  // namespace systolic::certify
