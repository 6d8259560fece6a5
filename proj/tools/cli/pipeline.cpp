#include "pipeline.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

namespace agmon::cli {

using ojson = nlohmann::ordered_json;

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

ojson spectrum_json(const SpectrumSet& set) {
    ojson out = ojson::array();
    auto end = [](double x) { return std::isfinite(x) ? ojson(x) : ojson(nullptr); };
    for (const Interval& i : set.components()) out.push_back(ojson::array({end(i.lo), end(i.hi)}));
    return out;
}

namespace {

ojson vector_json(const RVector& v) {
    ojson out = ojson::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

void write_json(const std::filesystem::path& file, const ojson& j) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw Error("cannot write " + file.string());
    out << j.dump(2) << '\n';
}

std::ofstream open_csv(const std::filesystem::path& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw Error("cannot write " + file.string());
    return out;
}

class Runner {
public:
    Runner(const Scenario& s, const RunOptions& opt, std::ostream& summary)
        : s_(s), out_(opt.out_dir), summary_(summary), seed_(opt.seed.value_or(s.seed)), threads_(opt.threads.value_or(s.threads)) {}

    int run() {
        std::filesystem::create_directories(out_);
        row("family", to_string(s_.family));
        for (Stage st : s_.pipeline) {
            switch (st) {
                case Stage::Spectrum: spectrum(); break;
                case Stage::Fredholm: fredholm(); break;
                case Stage::Eig: eig(); break;
                case Stage::Decay: decay(); break;
                case Stage::Certify: certify_stage(); break;
                case Stage::SymbolCheck: symbol_check(); break;
            }
        }
        return exit_;
    }

private:
    double lambda() const { return s_.lambda.value_or(0.0); }

    void row(const std::string& key, const std::string& value) {
        summary_ << key;
        for (std::size_t i = key.size(); i < 14; ++i) summary_ << ' ';
        summary_ << value << '\n';
    }

    const LimitSet& limits() {
        if (!limits_) limits_ = build_limits(s_);
        return *limits_;
    }

    std::pair<double, double> phi_range() {
        if (!s_.limits) {
            if (const auto& d = build_scalar_potential(s_).declared_limits()) return {d->lo, d->hi};
        }
        double lo = kInf, hi = -kInf;
        for (const auto& p : limits().points) {
            lo = std::min(lo, p.scalar_potential());
            hi = std::max(hi, p.scalar_potential());
        }
        return {lo, hi};
    }

    SpectrumSet ess_spectrum() {
        if (s_.family == Family::Schrodinger) return schrodinger_ess_spectrum(limits());
        const auto [lo, hi] = phi_range();
        return dirac_ess_spectrum(lo, hi, s_.constants);
    }

    double d_phi_value() {
        if (s_.limits) return ess_spectrum().components().front().lo;
        return d_phi(build_potential(s_)).value;
    }

    void spectrum() {
        const SpectrumSet set = ess_spectrum();
        write_json(out_ / "spectrum.json", spectrum_json(set));
        std::string text;
        for (const Interval& i : set.components())
            text += "[" + format_number(i.lo) + ", " + format_number(i.hi) + "] ";
        row("spectrum", text);
    }

    void fredholm() {
        ojson j;
        if (s_.family == Family::MoisilTheodorescu) {
            const FredholmResult r = mt_fredholm_check(limits(), XiGrid{s_.tolerances.scan_xi_points, 0.0}, s_.tolerances.scan);
            j["fredholm"] = r.fredholm;
            j["min_value"] = r.min_value;
            j["witness"] = {{"point", r.witness.point},
                            {"label", limits().points[r.witness.point].label},
                            {"xi", vector_json(r.witness.xi)},
                            {"value", r.witness.value}};
            row("fredholm", std::string(r.fredholm ? "yes" : "no") + " (min |symbol| " + format_number(r.min_value) + ")");
        } else {
            const double lam = lambda();
            const SpectrumSet set = ess_spectrum();
            double distance = kInf;
            double edge = 0.0;
            for (const Interval& i : set.components()) {
                for (double e : {i.lo, i.hi}) {
                    if (std::isfinite(e) && std::abs(e - lam) < distance) {
                        distance = std::abs(e - lam);
                        edge = e;
                    }
                }
            }
            const bool ok = !set.contains(lam);
            j["lambda"] = lam;
            j["fredholm"] = ok;
            j["witness"] = {{"nearest_edge", std::isfinite(distance) ? ojson(edge) : ojson(nullptr)},
                            {"distance", std::isfinite(distance) ? ojson(ok ? distance : -distance) : ojson(nullptr)}};
            if (s_.family == Family::Dirac) {
                const auto [lo, hi] = phi_range();
                j["gap_exists"] = dirac_fredholm(lo, hi, s_.constants);
            }
            row("fredholm", std::string(ok ? "yes" : "no") + " at lambda " + format_number(lam));
        }
        write_json(out_ / "fredholm.json", j);
    }

    void eig() {
        AssemblyOptions aopt;
        aopt.threads = threads_;
        if (s_.family == Family::Schrodinger) {
            op_ = assemble_schrodinger(build_rho(s_), build_magnetic(s_), build_potential(s_), s_.grid, aopt);
        } else {
            op_ = assemble_dirac(build_rho(s_), build_magnetic(s_), build_scalar_potential(s_), s_.constants, dirac_basis_standard(),
                                 s_.grid, aopt);
        }
        GapQuery q{s_.window_lo, s_.window_hi};
        q.max_pairs = s_.tolerances.max_pairs;
        q.tol = s_.tolerances.eig;
        q.seed = seed_;
        pairs_ = gap_eigenpairs(*op_, q);
        auto csv = open_csv(out_ / "eigs.csv");
        csv << "index,lambda,residual\n";
        for (std::size_t i = 0; i < pairs_.size(); ++i)
            csv << i << ',' << format_number(pairs_[i].lambda) << ',' << format_number(pairs_[i].residual) << '\n';
        std::string text;
        for (const auto& p : pairs_) text += format_number(p.lambda) + " ";
        row("eigenvalues", text);
    }

    void write_profile(const RadialProfile& p) {
        auto csv = open_csv(out_ / "profile.csv");
        csv << "radius,sup_abs,shell_count\n";
        for (std::size_t i = 0; i < p.radii.size(); ++i)
            csv << format_number(p.radii[i]) << ',' << format_number(p.sup_abs[i]) << ',' << p.shell_counts[i] << '\n';
    }

    FitWindow window() const { return s_.tolerances.fit_window.value_or(default_fit_window(s_.grid)); }

    void decay() {
        if (s_.family == Family::MoisilTheodorescu) {
            MtDecayOptions o;
            o.slack = s_.tolerances.slack;
            o.window = window();
            o.threads = threads_;
            const auto out = mt_decay_experiment(build_principal(s_), build_quaternion(s_), build_source(s_), s_.grid, build_weight(s_), o);
            write_profile(out.profile);
            certificate_ = out.certificate;
            bound_kind_ = out.bound.kind;
            row("admissible", std::string(out.admissibility.admissible ? "yes" : "no") + " (margin " +
                                  format_number(out.admissibility.margin) + ")");
            if (out.admissibility.admissible)
                row("decay", "c = " + format_number(out.certificate.c_measured) + ", r2 = " + format_number(out.certificate.fit_r2) +
                                 ", cgnr iterations " + std::to_string(out.solve.iterations));
            return;
        }
        if (static_cast<std::size_t>(s_.decay_index) >= pairs_.size())
            throw ValidationError("decay_index: only " + std::to_string(pairs_.size()) + " eigenpairs in the window");
        const EigenPair p = refine_eigenvector(op_->matrix, pairs_[static_cast<std::size_t>(s_.decay_index)]);
        const RadialProfile prof = radial_profile(p.vector, op_->grid);
        write_profile(prof);
        fit_ = fit_decay_exponent(prof, window());
        row("decay", "lambda = " + format_number(p.lambda) + ", c = " + format_number(fit_->c_measured) + ", r2 = " +
                         format_number(fit_->r2) + (fit_->underflow ? " (window shrunk at underflow)" : ""));
    }

    void certify_stage() {
        if (s_.family != Family::MoisilTheodorescu) {
            const double lam = pairs_[static_cast<std::size_t>(s_.decay_index)].lambda;
            const double rs = rho_sup(build_rho(s_));
            DecayBoundReport report;
            if (s_.family == Family::Schrodinger) {
                report = schrodinger_decay_bound(lam, d_phi_value(), rs);
            } else {
                const auto [lo, hi] = phi_range();
                report = dirac_decay_bound(lam, lo, hi, rs, s_.constants);
            }
            certificate_ = certify(*fit_, report, s_.tolerances.slack);
            bound_kind_ = report.kind;
        }
        const DecayCertificate& c = *certificate_;
        ojson j;
        j["lambda"] = c.lambda;
        j["bound"] = to_string(bound_kind_);
        j["c_predicted"] = c.c_predicted;
        j["c_measured"] = c.c_measured;
        j["fit_window"] = ojson::array({c.fit_window.r_min, c.fit_window.r_max});
        j["fit_r2"] = c.fit_r2;
        j["slack"] = s_.tolerances.slack;
        j["verdict"] = to_string(c.verdict);
        j["reason"] = c.reason;
        write_json(out_ / "certificate.json", j);
        row("certificate", to_string(c.verdict) + " (measured " + format_number(c.c_measured) + ", predicted " +
                               format_number(c.c_predicted) + ")");
        if (c.verdict == Verdict::Violated) exit_ = kExitViolated;
    }

    void symbol_check() {
        FamilyScanConfig cfg;
        cfg.kind = s_.family == Family::Schrodinger ? OperatorKind::SchrodingerMinusLambda
                   : s_.family == Family::Dirac     ? OperatorKind::DiracMinusLambda
                                                    : OperatorKind::MoisilTheodorescu;
        cfg.lambda = lambda();
        cfg.constants = s_.constants;
        cfg.rel_tol = s_.tolerances.scan;
        cfg.threads = threads_;
        cfg.xi.points_per_axis = s_.tolerances.scan_xi_points;
        const LimitSet weighted = attach_weight_limits(limits(), build_weight(s_), s_.tolerances.scan_directions);
        const ScanResult r = family_invertibility_scan(weighted, cfg);
        ojson j;
        j["lambda"] = cfg.lambda;
        j["invertible"] = r.invertible;
        j["evaluations"] = r.evaluations;
        j["worst"] = {{"point", r.worst.point},
                      {"label", weighted.points[r.worst.point].label},
                      {"t", r.worst.t},
                      {"xi", vector_json(r.worst.xi)},
                      {"sigma_min", r.worst.sigma_min},
                      {"ratio", r.worst.ratio}};
        write_json(out_ / "symbols.json", j);
        row("symbol-check", std::string(r.invertible ? "invertible" : "singular") + " (worst ratio " + format_number(r.worst.ratio) +
                                " at t = " + format_number(r.worst.t) + ")");
    }

    const Scenario& s_;
    std::filesystem::path out_;
    std::ostream& summary_;
    std::uint64_t seed_;
    unsigned threads_;
    int exit_ = kExitOk;

    std::optional<LimitSet> limits_;
    std::optional<AssembledOperator> op_;
    std::vector<EigenPair> pairs_;
    std::optional<DecayFit> fit_;
    std::optional<DecayCertificate> certificate_;
    BoundKind bound_kind_ = BoundKind::SchrodingerRate;
};

}  // namespace

int run_scenario(const Scenario& s, const RunOptions& opt, std::ostream& summary) { return Runner(s, opt, summary).run(); }

}  // namespace agmon::cli
