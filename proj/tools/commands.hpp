#pragma once

#include "sequence_file.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace hausdorff::cli {

enum Exit : int { ok = 0, usage = 1, negative = 2 };

struct TolOptions {
    double rank = 1e-10;
    double psd = 1e-10;
    double eq = 1e-8;

    Tol tol() const { return Tol(rank, psd, eq); }
};

namespace detail {

inline HermSequence moments_of(const SequenceFile& f, const std::string& path) {
    if (f.kind != Kind::moments) throw file_error(path + ": expected kind \"moments\"");
    return HermSequence(f.dim, f.data);
}

inline SequenceFile moments_file(const HermSequence& s, const IntervalContext& ctx) {
    return {ctx.alpha(), ctx.beta(), Kind::moments, s.dim(), s.mats()};
}

inline json optional_index(const std::optional<Index>& k) { return k ? json(*k) : json(nullptr); }

inline std::string format_det(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4e", v);
    return buf;
}

}  // namespace detail

inline int cmd_check(const std::string& path, const Tol& tol, std::ostream& out, std::ostream& err) {
    const SequenceFile f = read_sequence(path);
    const HermSequence s = detail::moments_of(f, path);
    const IntervalContext ctx(f.alpha, f.beta, tol);
    const FParams fp = f_parametrization(s, ctx);
    const Index bad = hausdorff::detail::first_F_violation(s, fp, tol);
    const bool fgg = bad < 0;
    const bool fg = fgg && is_Fg(s, ctx);
    json rep = {{"Fgg", fgg}, {"Fg", fg}, {"dim", s.dim()}, {"kappa", s.kappa()}};
    std::string summary = std::string("Fgg: ") + (fgg ? "true" : "false") + ", Fg: " + (fg ? "true" : "false");
    if (fgg) {
        json hankel = json::array();
        for (const auto& id : det_rank_report(s, ctx)) {
            hankel.push_back({{"family", std::string(1, id.family)},
                              {"n", id.n},
                              {"rank", id.rank_hankel},
                              {"rank_sum", id.rank_sum},
                              {"det", id.det_hankel},
                              {"det_product", id.det_product},
                              {"agrees", id.agrees}});
            if (id.family == 'H' && id.n == s.kappa() / 2)
                summary += ", det H_" + std::to_string(id.n) + " = " + detail::format_det(id.det_hankel);
        }
        rep["hankel"] = std::move(hankel);
    } else {
        rep["first_violation"] = "f_" + std::to_string(bad);
    }
    out << rep.dump(2) << '\n';
    err << summary << '\n';
    return fgg ? ok : negative;
}

inline int cmd_canonical(const std::string& path, const Tol& tol, std::ostream& out) {
    const SequenceFile f = read_sequence(path);
    const HermSequence s = detail::moments_of(f, path);
    const IntervalContext ctx(f.alpha, f.beta, tol);
    const CanonicalMoments cm = canonical_moments(s, ctx);
    json j = sequence_to_json({f.alpha, f.beta, Kind::canonical, f.dim, cm.e});
    j["d_rank"] = cm.rank;
    out << j.dump(2) << '\n';
    return ok;
}

inline int cmd_reconstruct(const std::string& path, const Tol& tol, std::ostream& out) {
    const SequenceFile f = read_sequence(path);
    if (f.kind != Kind::canonical) throw file_error(path + ": expected kind \"canonical\"");
    const IntervalContext ctx(f.alpha, f.beta, tol);
    const HermSequence s = from_canonical(f.data, f.dim, ctx);
    out << sequence_to_json(detail::moments_file(s, ctx)).dump(2) << '\n';
    return ok;
}

inline int cmd_extend(const std::string& path, std::optional<double> lambda, const std::string& kpath, int steps,
                      const Tol& tol, std::ostream& out) {
    const SequenceFile f = read_sequence(path);
    HermSequence s = detail::moments_of(f, path);
    const IntervalContext ctx(f.alpha, f.beta, tol);
    CMat K = (lambda ? *lambda : 0.5) * linalg::identity(f.dim);
    if (!kpath.empty()) {
        const json kj = read_json(kpath);
        K = matrix_from_json(hausdorff::cli::detail::field(kj, "matrix", kpath), f.dim, kpath + ".matrix");
    }
    for (int i = 0; i < steps; ++i) s = extend(s, ctx, K);
    out << sequence_to_json(detail::moments_file(s, ctx)).dump(2) << '\n';
    return ok;
}

inline int cmd_transform(const std::string& path, double theta, double eta, const Tol& tol, std::ostream& out) {
    const SequenceFile f = read_sequence(path);
    const HermSequence s = detail::moments_of(f, path);
    const IntervalContext ctx(f.alpha, f.beta, tol);
    const IntervalContext target = transformed_context(ctx, eta, theta);
    const HermSequence w = binomial_transform(s, eta, theta);
    out << sequence_to_json(detail::moments_file(w, target)).dump(2) << '\n';
    return ok;
}

inline int cmd_classify(const std::string& path, const Tol& tol, std::ostream& out) {
    const SequenceFile f = read_sequence(path);
    const HermSequence s = detail::moments_of(f, path);
    const IntervalContext ctx(f.alpha, f.beta, tol);
    const Classification c = classify(s, ctx);
    json rep = {{"degenerate_index", detail::optional_index(c.degenerate_index)},
                {"central_from", detail::optional_index(c.central_from)},
                {"symmetric", c.symmetric},
                {"interior", c.interior}};
    out << rep.dump(2) << '\n';
    return ok;
}

inline int cmd_sample(const SamplerConfig& cfg, double alpha, double beta, const Tol& tol, std::ostream& out) {
    const IntervalContext ctx(alpha, beta, tol);
    const auto [s, cm] = sample_moment_space(cfg, ctx);
    out << sequence_to_json(detail::moments_file(s, ctx)).dump(2) << '\n';
    return ok;
}

inline int cmd_moments(const std::string& path, Index kappa, const Tol& tol, std::ostream& out) {
    const MeasureFile m = read_measure(path);
    const IntervalContext ctx(m.alpha, m.beta, tol);
    const MolecularMeasure mu(m.nodes, m.weights, tol);
    out << sequence_to_json(detail::moments_file(moments(mu, kappa), ctx)).dump(2) << '\n';
    return ok;
}

// Parses the command line and dispatches. JSON results go to `out`,
// diagnostics to `err`.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Matrix Hausdorff moment sequences: membership, canonical moments, extension."};
    app.require_subcommand(1);
    TolOptions topt;
    auto add_tol = [&topt](CLI::App* sub) {
        sub->add_option("--tol-rank", topt.rank, "relative singular-value threshold")->check(CLI::PositiveNumber);
        sub->add_option("--tol-psd", topt.psd, "semidefiniteness slack")->check(CLI::PositiveNumber);
        sub->add_option("--tol-eq", topt.eq, "equality threshold")->check(CLI::PositiveNumber);
    };

    std::string file, kfile;
    std::optional<double> lambda;
    int steps = 1;
    double theta = 1.0, eta = 0.0;
    SamplerConfig cfg;
    double alpha = 0.0, beta = 1.0;
    Index kappa = 0;

    auto* check = app.add_subcommand("check", "test F>= / F> membership and Hankel determinant identities");
    auto* canonical = app.add_subcommand("canonical", "moments -> canonical moments");
    auto* reconstruct = app.add_subcommand("reconstruct", "canonical moments -> moments");
    auto* extend_cmd = app.add_subcommand("extend", "append moments inside the admissible interval");
    auto* transform = app.add_subcommand("transform", "binomial transform under x -> theta x + eta");
    auto* classify_cmd = app.add_subcommand("classify", "degeneracy, centrality, symmetry and interior flags");
    auto* sample = app.add_subcommand("sample", "draw a random point of the moment space");
    auto* moments_cmd = app.add_subcommand("moments", "moments of a molecular measure");

    for (auto* sub : {check, canonical, reconstruct, extend_cmd, transform, classify_cmd})
        sub->add_option("file", file, "sequence file")->required();
    for (auto* sub : {check, canonical, reconstruct, extend_cmd, transform, classify_cmd, sample, moments_cmd})
        add_tol(sub);

    auto* lopt = extend_cmd->add_option("--lambda", lambda, "extend with K = lambda I (default 0.5)");
    auto* mopt = extend_cmd->add_option("--matrix", kfile, "JSON file with the matrix K")->check(CLI::ExistingFile);
    lopt->excludes(mopt);
    extend_cmd->add_option("--steps", steps, "number of moments to append")->check(CLI::PositiveNumber);

    transform->add_option("--theta", theta, "scale")->required();
    transform->add_option("--eta", eta, "shift")->required();

    sample->add_option("--q", cfg.q, "matrix size")->check(CLI::PositiveNumber);
    sample->add_option("--kappa", cfg.kappa, "largest moment index")->check(CLI::NonNegativeNumber);
    sample->add_option("--seed", cfg.seed, "random seed");
    sample->add_option("--boundary-bias", cfg.boundary_bias, "probability of pinning a spectral coordinate")
        ->check(CLI::Range(0.0, 1.0));
    sample->add_option("--s0-scale", cfg.s0_scale, "scale of s_0")->check(CLI::PositiveNumber);
    sample->add_option("--alpha", alpha, "left endpoint");
    sample->add_option("--beta", beta, "right endpoint");

    moments_cmd->add_option("file", file, "measure file")->required();
    moments_cmd->add_option("--kappa", kappa, "largest moment index")->required()->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? ok : usage;
    }

    try {
        const Tol tol = topt.tol();
        if (*check) return cmd_check(file, tol, out, err);
        if (*canonical) return cmd_canonical(file, tol, out);
        if (*reconstruct) return cmd_reconstruct(file, tol, out);
        if (*extend_cmd) return cmd_extend(file, lambda, kfile, steps, tol, out);
        if (*transform) return cmd_transform(file, theta, eta, tol, out);
        if (*classify_cmd) return cmd_classify(file, tol, out);
        if (*sample) return cmd_sample(cfg, alpha, beta, tol, out);
        if (*moments_cmd) return cmd_moments(file, kappa, tol, out);
    } catch (const hausdorff::domain_error& e) {
        err << e.what() << '\n';
        return negative;
    } catch (const std::exception& e) {
        err << e.what() << '\n';
        return usage;
    }
    return usage;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"hausdorff"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace hausdorff::cli
