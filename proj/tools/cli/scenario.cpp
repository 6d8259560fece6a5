#include "scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace agmon::cli {

using nlohmann::json;

std::string to_string(Stage s) {
    switch (s) {
        case Stage::Spectrum: return "spectrum";
        case Stage::Fredholm: return "fredholm";
        case Stage::Eig: return "eig";
        case Stage::Decay: return "decay";
        case Stage::Certify: return "certify";
        case Stage::SymbolCheck: return "symbol-check";
    }
    return "unknown";
}

bool Scenario::has(Stage s) const { return std::find(pipeline.begin(), pipeline.end(), s) != pipeline.end(); }

namespace {

[[noreturn]] void invalid(const std::string& path, const std::string& what) { throw ValidationError(path + ": " + what); }

/// Read-only view of a JSON object that rejects keys it was not told about.
class Obj {
public:
    Obj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) invalid(path_, "expected an object");
    }

    void allow(std::initializer_list<const char*> keys) const {
        for (const auto& [k, v] : j_.items()) {
            if (std::none_of(keys.begin(), keys.end(), [&k = k](const char* a) { return k == a; }))
                invalid(path(k), "unknown key");
        }
    }

    bool has(const char* key) const { return j_.contains(key); }
    std::string path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
    const json& at(const char* key) const {
        if (!j_.contains(key)) invalid(path(key), "missing required key");
        return j_.at(key);
    }

    double number(const char* key) const {
        const json& v = at(key);
        if (!v.is_number()) invalid(path(key), "expected a number");
        return v.get<double>();
    }
    double number(const char* key, double fallback) const { return has(key) ? number(key) : fallback; }

    long long integer(const char* key) const {
        const json& v = at(key);
        if (!v.is_number_integer() && !v.is_number_unsigned()) invalid(path(key), "expected an integer");
        return v.get<long long>();
    }
    long long integer(const char* key, long long fallback) const { return has(key) ? integer(key) : fallback; }

    std::string text(const char* key) const {
        const json& v = at(key);
        if (!v.is_string()) invalid(path(key), "expected a string");
        return v.get<std::string>();
    }

    bool flag(const char* key, bool fallback) const {
        if (!has(key)) return fallback;
        const json& v = at(key);
        if (!v.is_boolean()) invalid(path(key), "expected a boolean");
        return v.get<bool>();
    }

private:
    const json& j_;
    std::string path_;
};

RVector vector_of(const json& v, const std::string& path, int size) {
    if (!v.is_array()) invalid(path, "expected an array of numbers");
    if (size >= 0 && static_cast<int>(v.size()) != size) invalid(path, "expected " + std::to_string(size) + " entries");
    RVector out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) invalid(path, "expected an array of numbers");
        out(static_cast<Eigen::Index>(i)) = v[i].get<double>();
    }
    return out;
}

RMatrix matrix_of(const json& v, const std::string& path, int size) {
    if (!v.is_array() || static_cast<int>(v.size()) != size) invalid(path, "expected a " + std::to_string(size) + "x" + std::to_string(size) + " matrix");
    RMatrix m(size, size);
    for (int i = 0; i < size; ++i) m.row(i) = vector_of(v[static_cast<std::size_t>(i)], path, size).transpose();
    return m;
}

int matrix_size(const json& v, const std::string& path) {
    if (!v.is_array() || v.empty()) invalid(path, "expected a non-empty square matrix");
    return static_cast<int>(v.size());
}

// --- parametric families ------------------------------------------------------

FieldSpec scalar_spec(const json& j, const std::string& path) {
    Obj o(j, path);
    const std::string kind = o.text("kind");
    if (kind == "constant") {
        o.allow({"kind", "value"});
        o.number("value");
    } else if (kind == "rational_well") {
        o.allow({"kind", "base", "depth", "width"});
        o.number("base");
        o.number("depth");
        if (!(o.number("width", 1.0) > 0.0)) invalid(o.path("width"), "must be positive");
    } else if (kind == "log_oscillating") {
        o.allow({"kind", "mean", "amplitude"});
        o.number("mean");
        o.number("amplitude");
    } else if (kind == "bump") {
        o.allow({"kind", "amplitude", "radius"});
        o.number("amplitude");
        if (!(o.number("radius") > 0.0)) invalid(o.path("radius"), "must be positive");
    } else {
        invalid(o.path("kind"), "unknown scalar family '" + kind + "'");
    }
    return {kind, j};
}

ScalarField make_scalar(const FieldSpec& f, int dim) {
    const json& p = f.params;
    if (f.kind == "constant") return ScalarField::constant(dim, p.at("value").get<double>());
    if (f.kind == "rational_well") {
        const double base = p.at("base").get<double>(), depth = p.at("depth").get<double>();
        const double w2 = std::pow(p.value("width", 1.0), 2);
        return ScalarField(dim, [=](const Point& x) { return cplx(base - depth / (1.0 + x.squaredNorm() / w2)); }, FieldClass::SO1,
                           LimitRange{base, base});
    }
    if (f.kind == "log_oscillating") {
        const double mean = p.at("mean").get<double>(), amp = p.at("amplitude").get<double>();
        return ScalarField(dim, [=](const Point& x) { return cplx(mean + amp * std::sin(std::log(1.0 + x.norm()))); }, FieldClass::SO1,
                           LimitRange{mean - std::abs(amp), mean + std::abs(amp)});
    }
    const double amp = p.at("amplitude").get<double>(), r2 = std::pow(p.at("radius").get<double>(), 2);
    return ScalarField(dim,
                       [=](const Point& x) {
                           const double s = x.squaredNorm() / r2;
                           return cplx(s < 1.0 ? amp * std::pow(1.0 - s, 3) : 0.0);
                       },
                       FieldClass::SO1, LimitRange{0.0, 0.0});
}

FieldSpec potential_spec(const json& j, const std::string& path, Family fam, int& block) {
    Obj o(j, path);
    const std::string kind = o.text("kind");
    if (fam == Family::Schrodinger && kind == "diagonal") {
        o.allow({"kind", "entries"});
        const json& e = o.at("entries");
        if (!e.is_array() || e.empty()) invalid(o.path("entries"), "expected a non-empty array of scalar fields");
        for (std::size_t i = 0; i < e.size(); ++i) scalar_spec(e[i], o.path("entries") + "[" + std::to_string(i) + "]");
        block = static_cast<int>(e.size());
        return {kind, j};
    }
    if (fam == Family::Schrodinger && kind == "constant_matrix") {
        o.allow({"kind", "real", "imag"});
        const int n = matrix_size(o.at("real"), o.path("real"));
        const RMatrix re = matrix_of(o.at("real"), o.path("real"), n);
        const RMatrix im = o.has("imag") ? matrix_of(o.at("imag"), o.path("imag"), n) : RMatrix::Zero(n, n);
        const CMatrix m = re.cast<cplx>() + kI * im.cast<cplx>();
        if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-14) invalid(path, "matrix potential must be Hermitian");
        block = n;
        return {kind, j};
    }
    block = fam == Family::Schrodinger ? 1 : 4;
    return scalar_spec(j, path);
}

FieldSpec rho_spec(const json& j, const std::string& path, int dim) {
    Obj o(j, path);
    const std::string kind = o.text("kind");
    if (kind == "identity") {
        o.allow({"kind"});
    } else if (kind == "constant") {
        o.allow({"kind", "matrix"});
        const RMatrix m = matrix_of(o.at("matrix"), o.path("matrix"), dim);
        if ((m - m.transpose()).cwiseAbs().maxCoeff() > 0.0) invalid(o.path("matrix"), "must be symmetric");
        Eigen::SelfAdjointEigenSolver<RMatrix> es(m);
        if (!(es.eigenvalues()(0) > 0.0)) invalid(o.path("matrix"), "must be positive definite");
    } else if (kind == "scalar") {
        o.allow({"kind", "entry"});
        scalar_spec(o.at("entry"), o.path("entry"));
    } else {
        invalid(o.path("kind"), "unknown metric family '" + kind + "'");
    }
    return {kind, j};
}

FieldSpec vector_spec(const json& j, const std::string& path, int dim, bool allow_rotational) {
    Obj o(j, path);
    const std::string kind = o.text("kind");
    if (kind == "zero") {
        o.allow({"kind"});
    } else if (kind == "constant") {
        o.allow({"kind", "vector"});
        vector_of(o.at("vector"), o.path("vector"), dim);
    } else if (kind == "rotational" && allow_rotational) {
        o.allow({"kind", "strength"});
        o.number("strength");
        if (dim < 2) invalid(o.path("kind"), "rotational fields need dimension >= 2");
    } else {
        invalid(o.path("kind"), "unknown vector family '" + kind + "'");
    }
    return {kind, j};
}

FieldSpec quaternion_spec(const json& j, const std::string& path) {
    Obj o(j, path);
    const std::string kind = o.text("kind");
    if (kind != "constant") invalid(o.path("kind"), "unknown quaternion family '" + kind + "'");
    o.allow({"kind", "vector"});
    vector_of(o.at("vector"), o.path("vector"), 3);
    return {kind, j};
}

FieldSpec source_spec(const json& j, const std::string& path) {
    Obj o(j, path);
    const std::string kind = o.text("kind");
    if (kind != "bump") invalid(o.path("kind"), "unknown source family '" + kind + "'");
    o.allow({"kind", "radius"});
    if (!(o.number("radius") > 0.0)) invalid(o.path("radius"), "must be positive");
    return {kind, j};
}

WeightSpec weight_spec(const json& j, const std::string& path, int dim) {
    Obj o(j, path);
    const std::string kind = o.text("kind");
    if (kind == "radial") {
        o.allow({"kind", "rate"});
        o.number("rate");
    } else if (kind == "sphere_1d" && dim == 1) {
        o.allow({"kind", "plus", "minus", "smoothing_radius"});
        o.number("plus");
        o.number("minus");
    } else if (kind == "sphere_fourier" && dim == 2) {
        o.allow({"kind", "a0", "cos", "sin", "smoothing_radius"});
        o.number("a0");
        if (o.has("cos")) vector_of(o.at("cos"), o.path("cos"), -1);
        if (o.has("sin")) vector_of(o.at("sin"), o.path("sin"), -1);
    } else if (kind == "sphere_quadratic" && dim == 3) {
        o.allow({"kind", "c", "b", "q", "smoothing_radius"});
        o.number("c");
        if (o.has("b")) vector_of(o.at("b"), o.path("b"), 3);
        if (o.has("q")) matrix_of(o.at("q"), o.path("q"), 3);
    } else {
        invalid(o.path("kind"), "unknown weight family '" + kind + "' for dimension " + std::to_string(dim));
    }
    if (o.has("smoothing_radius") && !(o.number("smoothing_radius") > 0.0)) invalid(o.path("smoothing_radius"), "must be positive");
    return {kind, j};
}

Stage stage_of(const json& v, const std::string& path) {
    if (!v.is_string()) invalid(path, "expected a stage name");
    const std::string s = v.get<std::string>();
    for (Stage st : {Stage::Spectrum, Stage::Fredholm, Stage::Eig, Stage::Decay, Stage::Certify, Stage::SymbolCheck})
        if (to_string(st) == s) return st;
    invalid(path, "unknown stage '" + s + "'");
}

Family family_of(const std::string& s, const std::string& path) {
    if (s == "schrodinger") return Family::Schrodinger;
    if (s == "mt") return Family::MoisilTheodorescu;
    if (s == "dirac") return Family::Dirac;
    invalid(path, "unknown family '" + s + "'");
}

void check_limits(const json& j, const Scenario& s) {
    if (!j.is_array() || j.empty()) invalid("limits", "expected a non-empty array of limit points");
    for (std::size_t i = 0; i < j.size(); ++i) {
        Obj o(j[i], "limits[" + std::to_string(i) + "]");
        o.allow({"label", "rho", "magnetic", "potential", "principal", "quaternion"});
        if (o.has("label")) o.text("label");
        if (o.has("rho")) matrix_of(o.at("rho"), o.path("rho"), s.dimension);
        if (o.has("magnetic")) vector_of(o.at("magnetic"), o.path("magnetic"), s.dimension);
        if (s.family == Family::MoisilTheodorescu) {
            vector_of(o.at("principal"), o.path("principal"), 3);
            vector_of(o.at("quaternion"), o.path("quaternion"), 3);
        } else {
            const json& p = o.at("potential");
            if (p.is_number()) {
                if (s.family == Family::Schrodinger && s.block != 1) invalid(o.path("potential"), "expected a matrix");
            } else {
                if (s.family == Family::Dirac) invalid(o.path("potential"), "expected a number");
                matrix_of(p, o.path("potential"), s.block);
            }
        }
    }
}

void check_pipeline(const Scenario& s) {
    std::set<Stage> seen;
    for (Stage st : s.pipeline) {
        const std::string name = "pipeline." + to_string(st);
        if (!seen.insert(st).second) invalid(name, "stage listed twice");
        const bool mt = s.family == Family::MoisilTheodorescu;
        switch (st) {
            case Stage::Spectrum:
                if (mt) invalid(name, "the mt family has no self-adjoint spectrum stage");
                break;
            case Stage::Eig:
                if (mt) invalid(name, "the mt family is not self-adjoint");
                if (!s.has_window) invalid(name, "requires 'window'");
                break;
            case Stage::Decay:
                if (mt) {
                    if (!s.weight) invalid(name, "requires 'weight'");
                    if (!s.source) invalid(name, "requires fields.source");
                } else if (!seen.count(Stage::Eig)) {
                    invalid(name, "requires an earlier eig stage");
                }
                break;
            case Stage::Certify:
                if (!seen.count(Stage::Decay)) invalid(name, "requires an earlier decay stage");
                break;
            case Stage::SymbolCheck:
                if (!s.weight) invalid(name, "requires 'weight'");
                break;
            case Stage::Fredholm: break;
        }
    }
}

std::string position(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& origin) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        // byte points one past the offending character
        throw ParseError(origin + ": " + position(text, e.byte > 0 ? e.byte - 1 : 0) + ": " + e.what());
    }

    Scenario s;
    try {
        Obj o(root, "");
        o.allow({"schema", "family", "dimension", "fields", "limits", "weight", "constants", "grid", "pipeline", "tolerances",
                 "lambda", "window", "decay_index", "seed", "threads"});
        s.schema = static_cast<int>(o.integer("schema"));
        if (s.schema != kSchemaVersion) invalid("schema", "unsupported version " + std::to_string(s.schema));
        s.family = family_of(o.text("family"), "family");
        s.dimension = static_cast<int>(o.integer("dimension"));
        if (s.dimension < 1 || s.dimension > 3) invalid("dimension", "must be 1, 2 or 3");
        if (s.family == Family::MoisilTheodorescu && s.dimension != 3) invalid("dimension", "the mt family needs dimension 3");
        s.block = s.family == Family::Schrodinger ? 1 : 4;

        Obj f(o.at("fields"), "fields");
        if (s.family == Family::MoisilTheodorescu) {
            f.allow({"principal", "quaternion", "source"});
            s.principal = vector_spec(f.at("principal"), "fields.principal", 3, false);
            s.quaternion = quaternion_spec(f.at("quaternion"), "fields.quaternion");
            if (f.has("source")) s.source = source_spec(f.at("source"), "fields.source");
        } else {
            f.allow({"rho", "magnetic", "potential"});
            if (f.has("rho")) s.rho = rho_spec(f.at("rho"), "fields.rho", s.dimension);
            if (f.has("magnetic")) s.magnetic = vector_spec(f.at("magnetic"), "fields.magnetic", s.dimension, true);
            s.potential = potential_spec(f.at("potential"), "fields.potential", s.family, s.block);
        }

        if (o.has("weight")) s.weight = weight_spec(o.at("weight"), "weight", s.dimension);

        if (o.has("constants")) {
            Obj c(o.at("constants"), "constants");
            c.allow({"h", "c", "m", "e"});
            s.constants = {c.number("h", 1.0), c.number("c", 1.0), c.number("m", 1.0), c.number("e", 1.0)};
            for (const char* k : {"h", "c", "m", "e"})
                if (c.has(k) && !(c.number(k) > 0.0)) invalid(c.path(k), "must be positive");
        }

        Obj g(o.at("grid"), "grid");
        g.allow({"half_width", "points", "periodic"});
        s.grid = Grid{s.dimension, g.number("half_width"), static_cast<int>(g.integer("points")), s.block};
        try {
            s.grid.validate();
        } catch (const InvalidArgument& e) {
            invalid("grid", e.what());
        }
        if (g.flag("periodic", false)) invalid("grid.periodic", "periodic grids are for symbol tests only");

        const json& pipe = o.at("pipeline");
        if (!pipe.is_array() || pipe.empty()) invalid("pipeline", "expected a non-empty array of stages");
        for (std::size_t i = 0; i < pipe.size(); ++i) s.pipeline.push_back(stage_of(pipe[i], "pipeline[" + std::to_string(i) + "]"));

        if (o.has("tolerances")) {
            Obj t(o.at("tolerances"), "tolerances");
            t.allow({"eig", "slack", "scan", "max_pairs", "fit_window", "scan_xi_points", "scan_directions"});
            s.tolerances.eig = t.number("eig", s.tolerances.eig);
            s.tolerances.slack = t.number("slack", s.tolerances.slack);
            s.tolerances.scan = t.number("scan", s.tolerances.scan);
            s.tolerances.max_pairs = static_cast<int>(t.integer("max_pairs", s.tolerances.max_pairs));
            if (!(s.tolerances.eig > 0.0)) invalid("tolerances.eig", "must be positive");
            if (!(s.tolerances.scan > 0.0)) invalid("tolerances.scan", "must be positive");
            if (!(s.tolerances.slack >= 0.0 && s.tolerances.slack < 1.0)) invalid("tolerances.slack", "must lie in [0, 1)");
            if (s.tolerances.max_pairs < 1) invalid("tolerances.max_pairs", "must be at least 1");
            s.tolerances.scan_xi_points = static_cast<int>(t.integer("scan_xi_points", 0));
            s.tolerances.scan_directions = static_cast<int>(t.integer("scan_directions", 0));
            if (s.tolerances.scan_xi_points < 0) invalid("tolerances.scan_xi_points", "must be non-negative");
            if (s.tolerances.scan_directions < 0) invalid("tolerances.scan_directions", "must be non-negative");
            if (t.has("fit_window")) {
                const RVector w = vector_of(t.at("fit_window"), "tolerances.fit_window", 2);
                if (!(w(0) >= 0.0 && w(1) > w(0))) invalid("tolerances.fit_window", "expected 0 <= r_min < r_max");
                s.tolerances.fit_window = FitWindow{w(0), w(1)};
            }
        }

        if (o.has("lambda")) s.lambda = o.number("lambda");
        if (o.has("window")) {
            const RVector w = vector_of(o.at("window"), "window", 2);
            if (!(w(0) < w(1))) invalid("window", "expected lo < hi");
            s.window_lo = w(0);
            s.window_hi = w(1);
            s.has_window = true;
        }
        s.decay_index = static_cast<int>(o.integer("decay_index", 0));
        if (s.decay_index < 0) invalid("decay_index", "must be non-negative");
        const long long seed = o.integer("seed", 0);
        if (seed < 0) invalid("seed", "must be non-negative");
        s.seed = static_cast<std::uint64_t>(seed);
        const long long threads = o.integer("threads", 1);
        if (threads < 1) invalid("threads", "must be at least 1");
        s.threads = static_cast<unsigned>(threads);

        if (o.has("limits")) {
            check_limits(o.at("limits"), s);
            s.limits = o.at("limits");
        }
        check_pipeline(s);
    } catch (const json::exception& e) {
        throw ValidationError(origin + ": " + e.what());
    }

    // Building the fields exercises the library's own argument checks.
    try {
        if (s.weight) build_weight(s);
        if (s.limits) build_limits(s);
        if (s.family == Family::MoisilTheodorescu) {
            build_quaternion(s);
        } else {
            build_potential(s);
        }
    } catch (const ValidationError&) {
        throw;
    } catch (const Error& e) {
        throw ValidationError(std::string("invalid field data: ") + e.what());
    }
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), path);
}

MetricField build_rho(const Scenario& s) {
    if (!s.rho || s.rho->kind == "identity") return MetricField::identity(s.dimension);
    if (s.rho->kind == "constant") return MetricField::constant(matrix_of(s.rho->params.at("matrix"), "fields.rho.matrix", s.dimension));
    return MetricField::scalar(make_scalar(scalar_spec(s.rho->params.at("entry"), "fields.rho.entry"), s.dimension));
}

VectorField build_magnetic(const Scenario& s) {
    const int n = s.dimension;
    if (!s.magnetic || s.magnetic->kind == "zero") return VectorField::zero(n);
    if (s.magnetic->kind == "constant") {
        const RVector v = vector_of(s.magnetic->params.at("vector"), "fields.magnetic.vector", n);
        return VectorField(n, [v](const Point&) { return v; });
    }
    const double k = s.magnetic->params.at("strength").get<double>();
    return VectorField(n, [k, n](const Point& x) {
        RVector a = RVector::Zero(n);
        a(0) = -k * x(1) / japanese_bracket(x);
        a(1) = k * x(0) / japanese_bracket(x);
        return a;
    });
}

MatrixField build_potential(const Scenario& s) {
    const FieldSpec& p = *s.potential;
    if (p.kind == "diagonal") {
        std::vector<ScalarField> entries;
        const json& e = p.params.at("entries");
        for (std::size_t i = 0; i < e.size(); ++i) entries.push_back(make_scalar(scalar_spec(e[i], "fields.potential.entries"), s.dimension));
        return MatrixField::diagonal(std::move(entries));
    }
    if (p.kind == "constant_matrix") {
        const int n = matrix_size(p.params.at("real"), "fields.potential.real");
        const RMatrix re = matrix_of(p.params.at("real"), "fields.potential.real", n);
        const RMatrix im = p.params.contains("imag") ? matrix_of(p.params.at("imag"), "fields.potential.imag", n) : RMatrix::Zero(n, n);
        return MatrixField::constant(s.dimension, re.cast<cplx>() + kI * im.cast<cplx>());
    }
    return MatrixField::scalar_times_identity(make_scalar(p, s.dimension), 1);
}

ScalarField build_scalar_potential(const Scenario& s) { return make_scalar(*s.potential, s.dimension); }

VectorField build_principal(const Scenario& s) {
    if (s.principal->kind == "zero") throw ValidationError("fields.principal: the mt family needs non-zero coefficients");
    const RVector v = vector_of(s.principal->params.at("vector"), "fields.principal.vector", 3);
    return VectorField(3, [v](const Point&) { return v; });
}

std::function<Quaternion(const Point&)> build_quaternion(const Scenario& s) {
    const RVector v = vector_of(s.quaternion->params.at("vector"), "fields.quaternion.vector", 3);
    const Quaternion q = Quaternion::vector(v(0), v(1), v(2));
    return [q](const Point&) { return q; };
}

std::function<Eigen::Vector4cd(const Point&)> build_source(const Scenario& s) {
    return bump_source(s.source->params.at("radius").get<double>());
}

Weight build_weight(const Scenario& s) {
    const WeightSpec& w = *s.weight;
    const json& p = w.params;
    const double smooth = p.value("smoothing_radius", 1.0);
    try {
        if (w.kind == "radial") return make_radial_weight(p.at("rate").get<double>(), s.dimension);
        if (w.kind == "sphere_1d")
            return make_sphere_weight(sphere_function_1d(p.at("plus").get<double>(), p.at("minus").get<double>()), smooth);
        if (w.kind == "sphere_fourier") {
            auto coeffs = [&p](const char* k) {
                std::vector<double> out;
                if (p.contains(k))
                    for (const auto& v : p.at(k)) out.push_back(v.get<double>());
                return out;
            };
            return make_sphere_weight(sphere_function_fourier(p.at("a0").get<double>(), coeffs("cos"), coeffs("sin")), smooth);
        }
        const Eigen::Vector3d b = p.contains("b") ? Eigen::Vector3d(vector_of(p.at("b"), "weight.b", 3)) : Eigen::Vector3d::Zero();
        const Eigen::Matrix3d q = p.contains("q") ? Eigen::Matrix3d(matrix_of(p.at("q"), "weight.q", 3)) : Eigen::Matrix3d::Zero();
        return make_sphere_weight(sphere_function_quadratic(p.at("c").get<double>(), b, q), smooth);
    } catch (const NonPositiveRate& e) {
        throw ValidationError(std::string("weight.rate: ") + e.what());
    } catch (const NonPositiveSphereFunction& e) {
        throw ValidationError(std::string("weight: ") + e.what());
    }
}

LimitSet build_limits(const Scenario& s) {
    const int n = s.dimension;
    if (s.limits) {
        LimitSet set;
        set.provenance = Provenance::Declared;
        for (const json& j : *s.limits) {
            LimitPoint p;
            p.label = j.value("label", std::string{});
            p.rho = j.contains("rho") ? matrix_of(j.at("rho"), "limits.rho", n) : RMatrix(RMatrix::Identity(n, n));
            p.magnetic = j.contains("magnetic") ? vector_of(j.at("magnetic"), "limits.magnetic", n) : RVector(RVector::Zero(n));
            if (s.family == Family::MoisilTheodorescu) {
                p.principal = vector_of(j.at("principal"), "limits.principal", 3);
                const RVector q = vector_of(j.at("quaternion"), "limits.quaternion", 3);
                p.quaternion = Quaternion::vector(q(0), q(1), q(2));
                p.potential = CMatrix::Zero(1, 1);
            } else if (j.at("potential").is_number()) {
                p.potential = CMatrix::Constant(1, 1, j.at("potential").get<double>());
            } else {
                p.potential = matrix_of(j.at("potential"), "limits.potential", s.block).cast<cplx>();
            }
            set.points.push_back(std::move(p));
        }
        try {
            set.validate(s.family != Family::MoisilTheodorescu);
        } catch (const Error& e) {
            throw ValidationError(std::string("limits: ") + e.what());
        }
        return set;
    }

    CoefficientBundle bundle;
    if (s.family == Family::MoisilTheodorescu) {
        bundle.principal = build_principal(s);
        bundle.quaternion = build_quaternion(s);
    } else {
        bundle.rho = build_rho(s);
        bundle.magnetic = build_magnetic(s);
        bundle.potential = s.family == Family::Dirac ? MatrixField::scalar_times_identity(build_scalar_potential(s), 1) : build_potential(s);
    }
    const int count = n == 1 ? 2 : n == 2 ? 16 : 26;
    auto sampled = sample_limits_along_rays(bundle, n, sphere_points(n, count), default_shell_radii());
    // Rays that reach the same limit operator contribute nothing new.
    LimitSet unique;
    unique.provenance = sampled.limits.provenance;
    auto same = [](const LimitPoint& a, const LimitPoint& b) {
        auto close = [](const auto& x, const auto& y) { return x.size() == y.size() && (x.size() == 0 || (x - y).cwiseAbs().maxCoeff() <= 1e-12); };
        const bool q = a.quaternion.has_value() == b.quaternion.has_value() &&
                       (!a.quaternion || (a.quaternion->coefficients() - b.quaternion->coefficients()).cwiseAbs().maxCoeff() <= 1e-12);
        return q && close(a.rho, b.rho) && close(a.magnetic, b.magnetic) && close(a.potential, b.potential) && close(a.principal, b.principal);
    };
    for (auto& p : sampled.limits.points)
        if (std::none_of(unique.points.begin(), unique.points.end(), [&](const LimitPoint& u) { return same(u, p); }))
            unique.points.push_back(std::move(p));
    return unique;
}

}  // namespace agmon::cli
