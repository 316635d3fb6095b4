#include "loewner/scenario.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "loewner/certify.hpp"
#include "loewner/chain.hpp"
#include "loewner/coeff.hpp"
#include "loewner/construct.hpp"
#include "loewner/evolve.hpp"
#include "loewner/fields.hpp"

#define TOML_EXCEPTIONS 1
#include "toml.hpp"

namespace loewner::scenario {

namespace {

constexpr const char* kDisclaimer =
    "certificates are sampled on the recorded grid; they are evidence, not proofs";

// ---------------------------------------------------------------- schema --

std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

std::string join(const std::string& path, std::size_t i) {
    return path + "[" + std::to_string(i) + "]";
}

const Json& require(const Json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object()) throw SchemaError(path.empty() ? "<root>" : path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw SchemaError(join(path, key), "required field is missing");
    return *it;
}

bool has(const Json& obj, const std::string& key) {
    return obj.is_object() && obj.contains(key);
}

double as_double(const Json& v, const std::string& path) {
    if (!v.is_number()) throw SchemaError(path, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw SchemaError(path, "expected a finite number");
    return d;
}

double get_double(const Json& obj, const std::string& key, const std::string& path) {
    return as_double(require(obj, key, path), join(path, key));
}

double get_double(const Json& obj, const std::string& key, const std::string& path, double dflt) {
    return has(obj, key) ? get_double(obj, key, path) : dflt;
}

std::uint64_t as_u64(const Json& v, const std::string& path) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
        return static_cast<std::uint64_t>(v.get<std::int64_t>());
    }
    throw SchemaError(path, "expected a nonnegative integer");
}

std::size_t get_size(const Json& obj, const std::string& key, const std::string& path,
                     std::size_t dflt) {
    if (!has(obj, key)) return dflt;
    return static_cast<std::size_t>(as_u64(obj.at(key), join(path, key)));
}

std::string get_string(const Json& obj, const std::string& key, const std::string& path) {
    const Json& v = require(obj, key, path);
    if (!v.is_string()) throw SchemaError(join(path, key), "expected a string");
    return v.get<std::string>();
}

bool get_bool(const Json& obj, const std::string& key, const std::string& path, bool dflt) {
    if (!has(obj, key)) return dflt;
    const Json& v = obj.at(key);
    if (!v.is_boolean()) throw SchemaError(join(path, key), "expected true or false");
    return v.get<bool>();
}

Complex as_complex(const Json& v, const std::string& path) {
    if (v.is_number()) return {as_double(v, path), 0.0};
    if (v.is_array() && v.size() == 2) {
        return {as_double(v[0], join(path, 0)), as_double(v[1], join(path, 1))};
    }
    if (v.is_object()) return {get_double(v, "re", path, 0.0), get_double(v, "im", path, 0.0)};
    throw SchemaError(path, "expected a complex number: x, [re, im] or {re, im}");
}

CPoint as_point(const Json& v, const std::string& path) {
    if (!v.is_array() || v.empty() || v.size() > kMaxDim) {
        throw SchemaError(path, "expected a point: an array of 1 to 8 complex numbers");
    }
    CPoint z(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) z[i] = as_complex(v[i], join(path, i));
    return z;
}

std::size_t get_dim(const Json& obj, const std::string& path, std::size_t dflt) {
    const std::size_t n = get_size(obj, "dim", path, dflt);
    if (n < 1 || n > kMaxDim) throw SchemaError(join(path, "dim"), "dimension must be 1..8");
    return n;
}

Interval as_interval(const Json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2) throw SchemaError(path, "expected [lo, hi]");
    Interval iv{as_double(v[0], join(path, 0)), as_double(v[1], join(path, 1))};
    if (!(iv.lo >= 0.0) || !(iv.hi > iv.lo)) throw SchemaError(path, "need 0 <= lo < hi");
    return iv;
}

Interval get_interval(const Json& cfg) { return as_interval(require(cfg, "interval", ""), "interval"); }

// -------------------------------------------------------------- catalogs --

FieldSpec field_from(const Json& j, const std::string& path) {
    const std::string kind = get_string(j, "kind", path);
    auto carath = [&](std::size_t n_default) {
        std::vector<CaratheodoryFn> p;
        if (!has(j, "p")) {
            for (std::size_t i = 0; i < n_default; ++i) p.push_back(caratheodory::cayley());
            return p;
        }
        const Json& arr = j.at("p");
        const std::string ppath = join(path, "p");
        if (!arr.is_array() || arr.empty() || arr.size() > kMaxDim) {
            throw SchemaError(ppath, "expected a list of Caratheodory function names");
        }
        for (std::size_t i = 0; i < arr.size(); ++i) {
            if (!arr[i].is_string()) throw SchemaError(join(ppath, i), "expected a name");
            try {
                p.push_back(caratheodory::by_name(arr[i].get<std::string>()));
            } catch (const InputError& e) {
                throw SchemaError(join(ppath, i), e.what());
            }
        }
        return p;
    };
    if (kind == "LinearRadial") return FieldSpec::linear_radial(get_dim(j, path, 2));
    if (kind == "Componentwise") return FieldSpec::componentwise(carath(get_dim(j, path, 2)));
    if (kind == "Blended") {
        const Json& on = require(j, "on", path);
        if (!on.is_array() || on.size() != 2) throw SchemaError(join(path, "on"), "expected [T1, T2]");
        Interval iv{as_double(on[0], join(join(path, "on"), 0)),
                    on[1].is_string() && on[1].get<std::string>() == "inf"
                        ? std::numeric_limits<double>::infinity()
                        : as_double(on[1], join(join(path, "on"), 1))};
        return FieldSpec::blended(iv, carath(get_dim(j, path, 2)));
    }
    if (kind == "SlitExample") {
        return FieldSpec::slit_example(get_double(j, "t1", path), get_double(j, "t2", path));
    }
    throw SchemaError(join(path, "kind"),
                      "unknown field kind '" + kind +
                          "' (LinearRadial, Componentwise, Blended, SlitExample)");
}

struct MapInput {
    HoloMap map;
    std::optional<PolyMap> poly;
};

MapInput map_from(const Json& j, const std::string& path, const SamplingPlan& plan);

MapInput poly_input(PolyMap p, const std::string& name) {
    HoloMap m = p.to_map(name);
    return {m, std::move(p)};
}

PolyMap poly_from(const Json& j, const std::string& path) {
    const std::size_t n = get_dim(j, path, 2);
    PolyMap p(n);
    const Json& terms = require(j, "terms", path);
    const std::string tpath = join(path, "terms");
    if (!terms.is_array()) throw SchemaError(tpath, "expected a list of terms");
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const std::string ip = join(tpath, i);
        const Json& t = terms[i];
        const std::size_t comp = get_size(t, "component", ip, 0);
        if (comp >= n) throw SchemaError(join(ip, "component"), "component out of range (0-based)");
        const Json& idx = require(t, "index", ip);
        if (!idx.is_array() || idx.size() != n) {
            throw SchemaError(join(ip, "index"), "expected a multi-index of length dim");
        }
        MultiIndex mi;
        for (std::size_t k = 0; k < n; ++k) {
            mi.push_back(static_cast<int>(as_u64(idx[k], join(join(ip, "index"), k))));
        }
        p.add_term(comp, mi, as_complex(require(t, "coef", ip), join(ip, "coef")));
    }
    return p;
}

// Inverse map: explicit "inverse" entry, or the known inverse of the catalog map.
HoloMap inverse_from(const Json& parent, const Json& mapj, const std::string& path,
                     const SamplingPlan& plan) {
    if (has(parent, "inverse")) return map_from(parent.at("inverse"), join(path, "inverse"), plan).map;
    const std::string kind = get_string(mapj, "kind", join(path, "map"));
    if (kind == "identity") return HoloMap::identity(get_dim(mapj, join(path, "map"), 2));
    if (kind == "phi") return PolyMap::shear(-kPhiCoefficient).to_map("Phi^-1");
    if (kind == "shear") {
        const Complex a = as_complex(require(mapj, "a", join(path, "map")), join(join(path, "map"), "a"));
        return PolyMap::shear(-a).to_map("shear^-1");
    }
    throw SchemaError(join(path, "inverse"), "an explicit inverse map is required for kind '" +
                                                 kind + "'");
}

MapInput map_from(const Json& j, const std::string& path, const SamplingPlan& plan) {
    const std::string kind = get_string(j, "kind", path);
    if (kind == "identity") {
        const std::size_t n = get_dim(j, path, 2);
        return poly_input(PolyMap::identity(n), "identity");
    }
    if (kind == "phi") return poly_input(phi_map(), "Phi");
    if (kind == "shear") {
        return poly_input(PolyMap::shear(as_complex(require(j, "a", path), join(path, "a"))),
                          "shear");
    }
    if (kind == "poly") return poly_input(poly_from(j, path), "poly");
    if (kind == "truncate") {
        const Json& inner = require(j, "map", path);
        const MapInput f = map_from(inner, join(path, "map"), plan);
        const HoloMap finv = inverse_from(j, inner, path, plan);
        return {starlike_truncate(f.map, finv, get_double(j, "N", path), plan), std::nullopt};
    }
    throw SchemaError(join(path, "kind"),
                      "unknown map kind '" + kind + "' (identity, phi, shear, poly, truncate)");
}

struct ChainInput {
    ChainHandle chain;
    std::optional<FieldSpec> ematrix;
};

ChainInput chain_from(const Json& j, const std::string& path, const SamplingPlan& plan,
                      const RunOptions& opt, std::vector<std::string>& warnings, double tol,
                      double max_step) {
    const std::string kind = get_string(j, "kind", path);
    ChainInput out;
    if (kind == "identity") {
        out.chain = identity_chain(get_dim(j, path, 2));
    } else if (kind == "slit") {
        out.chain = slit_chain(get_double(j, "t1", path), get_double(j, "t2", path));
    } else if (kind == "field") {
        out.chain = field_chain(field_from(require(j, "field", path), join(path, "field")), tol,
                                max_step);
    } else if (kind == "starlike") {
        out.chain = starlike_chain(map_from(require(j, "map", path), join(path, "map"), plan).map);
    } else if (kind == "close-to-identity") {
        const MapInput f = map_from(require(j, "map", path), join(path, "map"), plan);
        auto cti = chain_from_close_to_identity(f.map, get_double(j, "c", path), plan, opt.force);
        if (cti.sup_defect > get_double(j, "c", path)) {
            warnings.push_back("sampled |df - id| exceeds c; proceeding because of --force");
        }
        out.chain = cti.chain;
        out.ematrix = cti.field;
    } else if (kind == "to-ball") {
        const Json& mj = require(j, "map", path);
        const MapInput f = map_from(mj, join(path, "map"), plan);
        out.chain = evolution_to_ball_chain(f.map, inverse_from(j, mj, path, plan),
                                            get_double(j, "N", path), plan, opt.force);
    } else if (kind == "dilate") {
        ChainInput base =
            chain_from(require(j, "base", path), join(path, "base"), plan, opt, warnings, tol, max_step);
        out.chain = dilate_chain(base.chain, get_double(j, "r", path));
    } else {
        throw SchemaError(join(path, "kind"),
                          "unknown chain kind '" + kind +
                              "' (identity, slit, field, starlike, close-to-identity, to-ball, "
                              "dilate)");
    }
    out.chain.tol = tol;
    out.chain.max_step = max_step;
    return out;
}

// ----------------------------------------------------------- serializers --

Json to_json(Complex c) { return Json::array({c.real(), c.imag()}); }

Json to_json(const CPoint& z) {
    Json a = Json::array();
    for (std::size_t i = 0; i < z.dim(); ++i) a.push_back(to_json(z[i]));
    return a;
}

Json to_json(const Interval& iv) { return Json::array({iv.lo, iv.hi}); }

Json to_json(const MembershipReport& r) {
    return Json{{"interval", to_json(r.interval)},
                {"grid_size", r.grid_size},
                {"tolerance", r.tolerance},
                {"min_margin", r.min_margin},
                {"worst_point", Json{{"z", to_json(r.worst_z)}, {"t", r.worst_t}}},
                {"verdict", r.pass ? "pass" : "fail"}};
}

Json to_json(const FlowReport& f) {
    return Json{{"a", f.a},
                {"pairs", f.pairs},
                {"samples", f.samples},
                {"worst_ratio", f.worst_ratio},
                {"worst", Json{{"s", f.worst.s},
                               {"t", f.worst.t},
                               {"z", to_json(f.worst.z)},
                               {"phi", to_json(f.worst.phi)}}},
                {"verdict", f.pass ? "pass" : "fail"}};
}

Json to_json(const SqueezeCertificate& c) {
    return Json{{"interval", to_json(c.interval)},
                {"interval_semantics", "half-open [lo, hi)"},
                {"ratio_a", c.ratio_a},
                {"field_min_margin", c.field_min_margin},
                {"field_worst_point", Json{{"z", to_json(c.field_worst_z)}, {"t", c.field_worst_t}}},
                {"a_min_threshold", c.a_min_threshold},
                {"field_verdict", c.field_pass ? "pass" : "fail"},
                {"flow_worst_ratio", c.flow_worst_ratio},
                {"flow", to_json(c.flow)},
                {"grid", c.grid},
                {"note", c.note},
                {"verdict", c.pass ? "pass" : "fail"}};
}

Json to_json(const GeraumigCertificate& c) {
    return Json{{"interval", to_json(c.interval)},
                {"a_jacobian", c.a_jacobian},
                {"jacobian_worst_point",
                 Json{{"z", to_json(c.jacobian_worst_z)}, {"t", c.jacobian_worst_t}}},
                {"b_timederiv", c.b_timederiv},
                {"b_timederiv_semantics", "sup |df_t/dt(z)| / |z| (Schwarz-normalized)"},
                {"b_raw", c.b_raw},
                {"timederiv_worst_point",
                 Json{{"z", to_json(c.timederiv_worst_z)}, {"t", c.timederiv_worst_t}}},
                {"consistency", c.consistency_pass ? "pass" : "fail"},
                {"squeeze", to_json(c.squeeze)},
                {"note", c.note},
                {"verdict", c.pass ? "pass" : "fail"}};
}

Json to_json(const BoundVerdict& v) {
    return Json{{"N", v.N},
                {"coefficient_magnitude", v.coefficient_magnitude},
                {"bound", v.bound},
                {"satisfied", v.satisfied},
                {"margin", v.margin},
                {"sharp", v.sharp}};
}

// Nonzero Taylor coefficients of degree 1..max_degree.
Json coefficients_json(const HoloMap& f, int max_degree) {
    Json out = Json::array();
    const std::size_t n = f.dim();
    for (int d = 1; d <= max_degree; ++d) {
        std::vector<MultiIndex> idx;
        MultiIndex cur(n, 0);
        std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int left) {
            if (pos + 1 == n) {
                cur[pos] = left;
                idx.push_back(cur);
                return;
            }
            for (int k = left; k >= 0; --k) {
                cur[pos] = k;
                rec(pos + 1, left - k);
            }
        };
        rec(0, d);
        for (const auto& a : idx) {
            for (std::size_t c = 0; c < n; ++c) {
                const Complex v = taylor_coefficient(f.fn(), n, a, c);
                if (std::abs(v) > 1e-12) {
                    out.push_back(Json{{"component", c}, {"index", a}, {"value", to_json(v)}});
                }
            }
        }
    }
    return out;
}

void add_margin_rows(Report& rep, const std::vector<MarginSample>& samples, std::size_t n) {
    rep.csv_header.clear();
    for (std::size_t i = 1; i <= n; ++i) {
        rep.csv_header.push_back("z" + std::to_string(i) + "_re");
        rep.csv_header.push_back("z" + std::to_string(i) + "_im");
    }
    rep.csv_header.push_back("t");
    rep.csv_header.push_back("margin");
    for (const auto& s : samples) {
        std::vector<double> row;
        for (std::size_t i = 0; i < n; ++i) {
            row.push_back(s.z[i].real());
            row.push_back(s.z[i].imag());
        }
        row.push_back(s.t);
        row.push_back(s.margin);
        rep.csv_rows.push_back(std::move(row));
    }
}

// ------------------------------------------------------------ operations --

struct Context {
    const Json& cfg;
    const RunOptions& opt;
    SamplingPlan plan;
    Json params;
    double tol = 1e-9;
    double max_step = 0.05;
    std::vector<std::string> warnings;
    Report& rep;

    ChainInput chain() {
        return chain_from(require(cfg, "chain", ""), "chain", plan, opt, warnings, tol, max_step);
    }
    FieldSpec field() { return field_from(require(cfg, "field", ""), "field"); }
    MapInput map(const std::string& key = "map") {
        return map_from(require(params, key, "params"), "params." + key, plan);
    }
};

bool op_evolve(Context& c, Json& res) {
    EvolutionFamily fam;
    fam.spec = c.field();
    fam.tol = c.tol;
    fam.max_step = c.max_step;
    const double s = get_double(c.params, "s", "params", 0.0);
    const double t = get_double(c.params, "t", "params");
    if (!(s >= 0.0) || !(t >= s)) throw SchemaError("params", "need 0 <= s <= t");
    const bool recover = get_bool(c.params, "recover", "params", false);
    std::vector<CPoint> pts;
    if (has(c.params, "points")) {
        const Json& arr = c.params.at("points");
        if (!arr.is_array()) throw SchemaError("params.points", "expected a list of points");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            pts.push_back(as_point(arr[i], join("params.points", i)));
        }
    } else {
        pts = c.plan.points(fam.spec.dim());
    }
    Json samples = Json::array();
    double worst_schwarz = 0.0;
    for (const auto& z : pts) {
        const CPoint phi = integrate_evolution(fam, s, t, z);
        Json row{{"z", to_json(z)}, {"phi", to_json(phi)}};
        if (z.norm() > 0.0) worst_schwarz = std::max(worst_schwarz, phi.norm() / z.norm());
        if (recover) {
            const Recovery r = recover_chain(fam, s, z);
            row["f_s"] = to_json(r.value);
            row["recovery_horizon"] = r.horizon;
            row["recovery_error_estimate"] = r.error_estimate;
        }
        samples.push_back(std::move(row));
    }
    res["field"] = fam.spec.describe();
    res["s"] = s;
    res["t"] = t;
    res["max_norm_ratio"] = worst_schwarz;
    res["samples"] = std::move(samples);
    return true;
}

bool op_check_m(Context& c, Json& res) {
    const FieldSpec f = c.field();
    const auto m = check_class_M(f, get_interval(c.cfg), c.plan, kMembershipTolerance, true);
    res["field"] = f.describe();
    res["membership"] = to_json(m);
    add_margin_rows(c.rep, m.samples, f.dim());
    return m.pass;
}

SqueezeOptions squeeze_options(const Context& c) {
    SqueezeOptions o;
    o.a_min_threshold = get_double(c.params, "a_min_threshold", "params", kDefaultAMinThreshold);
    o.keep_samples = true;
    return o;
}

bool op_certify_squeeze(Context& c, Json& res) {
    const ChainInput ch = c.chain();
    const auto cert = certify_squeezing(ch.chain, get_interval(c.cfg), c.plan, squeeze_options(c));
    res["chain"] = ch.chain.name;
    res["certificate"] = to_json(cert);
    add_margin_rows(c.rep, cert.samples, ch.chain.dim);
    return cert.pass;
}

bool op_certify_geraumig(Context& c, Json& res) {
    const ChainInput ch = c.chain();
    const auto cert = certify_geraumig(ch.chain, get_interval(c.cfg), c.plan, squeeze_options(c));
    res["chain"] = ch.chain.name;
    res["certificate"] = to_json(cert);
    add_margin_rows(c.rep, cert.squeeze.samples, ch.chain.dim);
    return cert.pass;
}

bool op_reparam(Context& c, Json& res) {
    const ChainInput ch = c.chain();
    ReparamPlan rp{get_double(c.params, "t1", "params"), get_double(c.params, "t2", "params"),
                   get_double(c.params, "A", "params")};
    if (!(rp.t2 > rp.t1) || !(rp.t1 >= 0.0)) throw SchemaError("params", "need 0 <= t1 < t2");
    SqueezeCertificate sq = certify_squeezing(ch.chain, {rp.t1, rp.t2}, c.plan);
    res["squeeze_precondition"] = to_json(sq);
    if (!sq.pass) {
        if (!c.opt.force) {
            throw PreconditionError("chain is not certified exponentially squeezing on [t1, t2): " +
                                    sq.note);
        }
        c.warnings.push_back("squeeze certificate failed; proceeding because of --force");
        sq.pass = true;
    }
    const ChainHandle g = reparam_geraumig(ch.chain, rp, sq);
    const double w = rp.t2 - rp.t1;
    Interval check{rp.t1 + 0.1 * w, rp.t2 - 0.1 * w};
    if (has(c.params, "check")) check = as_interval(c.params.at("check"), "params.check");
    const auto cert = certify_geraumig(g, check, c.plan);

    // g agrees with f outside (t1, t2).
    double agreement = 0.0;
    const auto pts = c.plan.points(ch.chain.dim);
    for (double t : {0.0, 0.5 * rp.t1, rp.t1, rp.t2, rp.t2 + 0.5 * w}) {
        for (std::size_t i = 0; i < pts.size(); i += 17) {
            agreement = std::max(agreement, distance(g(t, pts[i]), ch.chain(t, pts[i])));
        }
    }
    res["chain"] = g.name;
    res["alpha_at_midpoint"] = rp.alpha(rp.midpoint());
    res["agreement_outside"] = agreement;
    res["geraumig"] = to_json(cert);
    return cert.pass && agreement == 0.0;
}

double eps_from(const Json& params, double eps0) {
    if (!has(params, "eps")) return eps0;
    const Json& e = params.at("eps");
    if (e.is_string()) {
        const std::string s = e.get<std::string>();
        if (s == "eps0") return eps0;
        if (s == "-eps0") return -eps0;
        throw SchemaError("params.eps", "expected a number, \"eps0\" or \"-eps0\"");
    }
    return as_double(e, "params.eps");
}

bool op_vary(Context& c, Json& res) {
    const ChainInput ch = c.chain();
    const Interval iv = get_interval(c.cfg);
    const MapInput h = c.map("h");
    if (!h.poly) throw SchemaError("params.h", "the perturbation must be a polynomial map");
    const auto cert = certify_geraumig(ch.chain, iv, c.plan);
    res["geraumig_precondition"] = to_json(cert);
    const double a = std::min(cert.a_jacobian, cert.squeeze.ratio_a);
    const double eps0 = variation_epsilon0(a, cert.b_timederiv, iv.hi - iv.lo);
    const double eps = eps_from(c.params, eps0);
    const Variation v = apply_variation(ch.chain, cert, *h.poly, eps, c.plan, c.opt.force);
    for (const auto& w : v.warnings) c.warnings.push_back(w);
    const auto m = check_class_M(v.field, iv, c.plan, kMembershipTolerance, true);

    const ChainHandle g = v.chain;
    const HoloMap g0(g.dim, [g](const CPoint& z) { return g(0.0, z); }, {}, "g_0");
    const auto inj = sampled_injectivity(g0, c.plan);
    const auto times = c.plan.flow_grid(iv);
    const auto norm = check_normalization(g, times);

    res["variation"] = Json{{"T", v.plan.T},
                            {"a", v.plan.a},
                            {"b", v.plan.b},
                            {"eps0", v.plan.eps0},
                            {"eps", v.plan.eps},
                            {"h_sup", v.h_check.sup_h},
                            {"h_sup_derivative", v.h_check.sup_dh}};
    res["g0_coefficients"] = coefficients_json(g0, 2);
    res["membership"] = to_json(m);
    res["injectivity"] = Json{{"pairs", inj.pairs},
                              {"min_ratio", inj.min_ratio},
                              {"verdict", inj.pass ? "pass" : "fail"}};
    res["normalization"] = Json{{"max_value_at_zero", norm.max_value_at_zero},
                                {"max_jacobian_defect", norm.max_jacobian_defect},
                                {"verdict", norm.pass ? "pass" : "fail"}};
    add_margin_rows(c.rep, m.samples, g.dim);
    return m.pass && inj.pass && norm.pass;
}

bool op_dilate(Context& c, Json& res) {
    const ChainInput ch = c.chain();
    const double r = get_double(c.params, "r", "params");
    const ChainHandle d = dilate_chain(ch.chain, r);
    const auto cert = certify_squeezing(d, get_interval(c.cfg), c.plan, squeeze_options(c));
    const double expected = dilation_ratio(r);
    res["chain"] = d.name;
    res["expected_ratio"] = expected;
    res["certificate"] = to_json(cert);
    add_margin_rows(c.rep, cert.samples, d.dim);
    return cert.pass && cert.ratio_a >= expected - 1e-6;
}

bool op_close_chain(Context& c, Json& res) {
    const MapInput f = c.map();
    const double cc = get_double(c.params, "c", "params");
    const auto cti = chain_from_close_to_identity(f.map, cc, c.plan, c.opt.force);
    if (cti.sup_defect > cc) c.warnings.push_back("sampled |df - id| exceeds c (forced)");
    Interval iv{0.0, 2.0};
    if (has(c.cfg, "interval")) iv = get_interval(c.cfg);
    const auto eb = check_ematrix_bounds(cti.field, iv, c.plan);
    const auto cert = certify_squeezing(cti.chain, iv, c.plan, squeeze_options(c));
    res["chain"] = cti.chain.name;
    res["sup_df_minus_id"] = cti.sup_defect;
    res["sup_df_minus_id_at"] = to_json(cti.worst_z);
    res["ematrix"] = Json{{"c", eb.bound_c},
                          {"sup_norm_E", eb.sup_norm_E},
                          {"bound", eb.bound_pass ? "pass" : "fail"},
                          {"inequality_slack", eb.inequality_slack},
                          {"inequality_worst_point", Json{{"z", to_json(eb.worst_z)}, {"t", eb.worst_t}}},
                          {"inequality", eb.inequality_pass ? "pass" : "fail"},
                          {"samples", eb.samples}};
    res["certificate"] = to_json(cert);
    add_margin_rows(c.rep, cert.samples, cti.chain.dim);
    return cti.sup_defect <= cc && eb.bound_pass && eb.inequality_pass && cert.pass;
}

bool op_starlike(Context& c, Json& res) {
    const Json& mj = require(c.params, "map", "params");
    const MapInput f = c.map();
    const HoloMap finv = inverse_from(c.params, mj, "params", c.plan);
    const double N = get_double(c.params, "N", "params");
    const HoloMap t = starlike_truncate(f.map, finv, N, c.plan);
    res["map"] = t.name();
    res["coefficients"] = coefficients_json(t, 2);
    if (t.dim() >= 2) res["functional_L102"] = to_json(functional_L102(t));
    return true;
}

bool op_reach_chain(Context& c, Json& res) {
    const Json& mj = require(c.params, "map", "params");
    const MapInput f = c.map();
    const HoloMap finv = inverse_from(c.params, mj, "params", c.plan);
    const double N = get_double(c.params, "N", "params");
    const ChainHandle ch = evolution_to_ball_chain(f.map, finv, N, c.plan, c.opt.force);
    const double L = std::log(N);
    const Interval iv{0.0, L};
    const auto times = c.plan.flow_grid(iv);
    const auto norm = check_normalization(ch, times);
    const auto sq = certify_squeezing(ch, iv, c.plan, squeeze_options(c));
    double ball = 0.0;
    for (const auto& z : c.plan.points(ch.dim)) ball = std::max(ball, distance(ch(L, z), z * N));
    res["chain"] = ch.name;
    res["log_N"] = L;
    res["f_logN_minus_N_id"] = ball;
    res["normalization"] = Json{{"max_value_at_zero", norm.max_value_at_zero},
                                {"max_jacobian_defect", norm.max_jacobian_defect},
                                {"verdict", norm.pass ? "pass" : "fail"}};
    res["squeeze"] = to_json(sq);
    bool ok = norm.pass && sq.pass && ball <= 1e-12 * N;
    if (sq.pass) {
        const auto b = boundedness_report(ch, iv, c.plan, sq);
        res["boundedness"] = Json{{"sup_norm", b.sup_norm},
                                  {"radial_sup", b.radial_sup},
                                  {"containment", b.containment_pass ? "pass" : "fail"},
                                  {"containment_worst", b.containment_worst}};
        ok = ok && b.containment_pass;
    }
    const HoloMap f0(ch.dim, [ch](const CPoint& z) { return ch(0.0, z); }, {}, "f_0");
    res["f0_coefficients"] = coefficients_json(f0, 2);
    return ok;
}

bool op_coeff(Context& c, Json& res) {
    const MapInput f = c.map();
    if (has(c.params, "functional")) {
        const std::string name = get_string(c.params, "functional", "params");
        if (name != "L102") throw SchemaError("params.functional", "only \"L102\" is supported");
        res["functional_L102"] = to_json(functional_L102(f.map));
        return true;
    }
    const Json& idx = require(c.params, "index", "params");
    if (!idx.is_array() || idx.size() != f.map.dim()) {
        throw SchemaError("params.index", "expected a multi-index of length dim");
    }
    MultiIndex mi;
    for (std::size_t k = 0; k < idx.size(); ++k) {
        mi.push_back(static_cast<int>(as_u64(idx[k], join("params.index", k))));
    }
    const std::size_t comp = get_size(c.params, "component", "params", 0);
    const double radius = get_double(c.params, "radius", "params", kCoefficientRadius);
    const auto r = coefficient_report(f.map.fn(), f.map.dim(), mi, comp, radius);
    res["coefficient"] = Json{{"index", r.index},
                              {"component", r.component},
                              {"value", to_json(r.value)},
                              {"radius", r.radius},
                              {"estimated_error", r.estimated_error}};
    return true;
}

bool op_bound_check(Context& c, Json& res) {
    const MapInput f = c.map();
    const auto v = reachability_bound_check(f.map, get_double(c.params, "N", "params"));
    res["bound_check"] = to_json(v);
    res["meaning"] = v.satisfied
                         ? "necessary condition holds (membership is not asserted)"
                         : "coefficient exceeds the bound: the map is not reachable in time log N";
    return v.satisfied;
}

using OpFn = bool (*)(Context&, Json&);

struct OpEntry {
    const char* name;
    OpFn fn;
};

constexpr OpEntry kOps[] = {
    {"evolve", op_evolve},
    {"check-m", op_check_m},
    {"certify-squeeze", op_certify_squeeze},
    {"certify-geraumig", op_certify_geraumig},
    {"reparam", op_reparam},
    {"vary", op_vary},
    {"dilate", op_dilate},
    {"close-chain", op_close_chain},
    {"starlike", op_starlike},
    {"reach-chain", op_reach_chain},
    {"coeff", op_coeff},
    {"bound-check", op_bound_check},
};

Json toml_to_json(const toml::node& node) {
    if (auto t = node.as_table()) {
        Json o = Json::object();
        for (const auto& [k, v] : *t) o[std::string(k.str())] = toml_to_json(v);
        return o;
    }
    if (auto a = node.as_array()) {
        Json arr = Json::array();
        for (const auto& v : *a) arr.push_back(toml_to_json(v));
        return arr;
    }
    if (auto v = node.as_integer()) return v->get();
    if (auto v = node.as_floating_point()) return v->get();
    if (auto v = node.as_boolean()) return v->get();
    if (auto v = node.as_string()) return v->get();
    throw SchemaError("<toml>", "dates and times are not supported in configs");
}

}  // namespace

const std::vector<std::string>& operations() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& e : kOps) v.emplace_back(e.name);
        return v;
    }();
    return names;
}

Json parse_config(const std::string& text, bool toml) {
    if (toml) {
        try {
            return toml_to_json(toml::parse(text));
        } catch (const toml::parse_error& e) {
            std::ostringstream os;
            os << e.description() << " (line " << e.source().begin.line << ")";
            throw SchemaError("<toml>", os.str());
        }
    }
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw SchemaError("<json>", e.what());
    }
}

Json load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    const bool toml = path.size() >= 5 && path.substr(path.size() - 5) == ".toml";
    return parse_config(ss.str(), toml);
}

SamplingPlan plan_from_config(const Json& config) {
    SamplingPlan plan;
    if (!has(config, "grid")) return plan;
    const Json& g = config.at("grid");
    const std::string path = "grid";
    if (!g.is_object()) throw SchemaError(path, "expected an object");
    if (has(g, "radii")) {
        const Json& r = g.at("radii");
        if (!r.is_array() || r.empty()) throw SchemaError("grid.radii", "expected a nonempty list");
        plan.radii.clear();
        for (std::size_t i = 0; i < r.size(); ++i) {
            const double v = as_double(r[i], join("grid.radii", i));
            if (!(v > 0.0 && v < 1.0)) throw SchemaError(join("grid.radii", i), "radius must lie in (0, 1)");
            plan.radii.push_back(v);
        }
    }
    plan.directions = get_size(g, "directions", path, plan.directions);
    plan.random_points = get_size(g, "random_points", path, plan.random_points);
    if (has(g, "seed")) plan.seed = as_u64(g.at("seed"), "grid.seed");
    plan.times_per_interval = get_size(g, "times_per_interval", path, plan.times_per_interval);
    plan.flow_times = get_size(g, "flow_times", path, plan.flow_times);
    plan.endpoint_probe = get_double(g, "endpoint_probe", path, plan.endpoint_probe);
    if (has(g, "extra_points")) {
        const Json& e = g.at("extra_points");
        if (!e.is_array()) throw SchemaError("grid.extra_points", "expected a list of points");
        for (std::size_t i = 0; i < e.size(); ++i) {
            const CPoint z = as_point(e[i], join("grid.extra_points", i));
            if (!(z.norm() < 1.0)) {
                throw SchemaError(join("grid.extra_points", i), "point is not in the open unit ball");
            }
            plan.extra_points.push_back(z);
        }
    }
    if (plan.directions == 0 && plan.random_points == 0 && plan.extra_points.empty()) {
        throw SchemaError(path, "the grid is empty");
    }
    return plan;
}

Report run_scenario(const Json& config, const RunOptions& opt) {
    if (!config.is_object()) throw SchemaError("<root>", "config must be an object");
    std::string op = opt.operation;
    if (op.empty()) op = get_string(config, "operation", "");
    const OpEntry* entry = nullptr;
    for (const auto& e : kOps) {
        if (op == e.name) entry = &e;
    }
    if (!entry) throw SchemaError("operation", "unknown operation '" + op + "'");

    Report rep;
    Context ctx{config, opt, plan_from_config(config), Json::object(), 1e-9, 0.05, {}, rep};
    if (opt.seed) ctx.plan.seed = *opt.seed;
    if (has(config, "params")) {
        ctx.params = config.at("params");
        if (!ctx.params.is_object()) throw SchemaError("params", "expected an object");
    }
    ctx.tol = get_double(config, "tol", "", 1e-9);
    ctx.max_step = get_double(config, "max_step", "", 0.05);
    if (!(ctx.tol > 0.0) || !(ctx.max_step > 0.0)) {
        throw SchemaError("tol", "tol and max_step must be positive");
    }

    Json& out = rep.json;
    out["tool"] = kToolName;
    out["version"] = kToolVersion;
    out["operation"] = op;
    out["config"] = config;
    out["effective_seed"] = ctx.plan.seed;
    out["force"] = opt.force;

    const auto start = std::chrono::steady_clock::now();
    Json results = Json::object();
    try {
        const bool pass = entry->fn(ctx, results);
        rep.exit_code = pass ? 0 : 1;
        out["verdict"] = pass ? "pass" : "fail";
    } catch (const SchemaError&) {
        throw;
    } catch (const Error& e) {
        rep.exit_code = 2;
        out["verdict"] = "error";
        out["error"] = Json{{"kind", e.kind()}, {"message", e.what()}};
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out["results"] = std::move(results);
    out["warnings"] = ctx.warnings;
    out["grid"] = ctx.plan.describe(0);
    out["disclaimer"] = kDisclaimer;
    out["wall_time_s"] = wall;
    return rep;
}

void emit_report(const Report& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write report '" + path + "'");
    out << report.json.dump(2) << '\n';
    if (!out) throw IoError("failed writing report '" + path + "'");
}

void emit_csv(const Report& report, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw IoError("cannot write CSV '" + path + "'");
    for (std::size_t i = 0; i < report.csv_header.size(); ++i) {
        std::fprintf(f, "%s%s", i ? "," : "", report.csv_header[i].c_str());
    }
    std::fputc('\n', f);
    for (const auto& row : report.csv_rows) {
        for (std::size_t i = 0; i < row.size(); ++i) std::fprintf(f, "%s%.17g", i ? "," : "", row[i]);
        std::fputc('\n', f);
    }
    if (std::fclose(f) != 0) throw IoError("failed writing CSV '" + path + "'");
}

std::string summary(const Report& report) {
    const Json& j = report.json;
    std::ostringstream os;
    os << j.value("tool", "") << ' ' << j.value("operation", "") << ": "
       << j.value("verdict", "") << " (exit " << report.exit_code << ")";
    if (j.contains("error")) os << "\n  error: " << j["error"].value("message", "");
    for (const auto& w : j.value("warnings", Json::array())) os << "\n  warning: " << w.get<std::string>();
    os << "\n  " << j.value("disclaimer", "");
    return os.str();
}

}  // namespace loewner::scenario
