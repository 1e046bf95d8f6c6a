// chainkit: finite Markov chain mixing / perturbation analysis CLI.
//
// Subcommands:
//   analyze  - distance profile, mixing times, structural properties, spectrum
//   perturb  - apply a restart perturbation, report exact error and bounds
//   sweep    - adversarial restart sweep over a family and an alpha rule
//   couple   - Monte Carlo coupling simulations
//   figure1  - d(t) curves at n=32 and restart error vs n, CSV + SVG
//
// Exit codes: 0 success, 2 usage/validation error, 3 computational failure.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "chainkit/chain.hpp"
#include "chainkit/coupling.hpp"
#include "chainkit/example_chains.hpp"
#include "chainkit/io.hpp"
#include "chainkit/mixing.hpp"
#include "chainkit/perturbation.hpp"

namespace {

using namespace chainkit;

struct ChainSource {
    std::string family;  // wsr | cgb | lazy-walk | "" (use --chain)
    std::string chain_path;
    std::string graph_path;

    StochasticMatrix build(int n) const {
        if (family == "wsr") return winning_streak_reversal(n);
        if (family == "cgb") return complete_graph_bijection(n);
        if (family == "lazy-walk") {
            if (graph_path.empty()) throw ValidationError("lazy-walk needs --graph <file>");
            return lazy_walk(read_edge_list_file(graph_path));
        }
        if (!chain_path.empty()) return read_chain_file(chain_path);
        throw ValidationError("no chain source: pass --family or --chain");
    }
};

AlphaRule parse_alpha_rule(const std::string& text) {
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    if (colon == std::string::npos || colon + 1 >= text.size()) {
        throw ValidationError("alpha rule needs a value, e.g. c-over-tmix:2 or power:0.5");
    }
    double value = 0.0;
    try {
        value = std::stod(text.substr(colon + 1));
    } catch (const std::exception&) {
        throw ValidationError("alpha rule: bad numeric value in '" + text + "'");
    }
    if (kind == "c-over-tmix") return {AlphaRuleKind::COverTmix, value};
    if (kind == "power") return {AlphaRuleKind::Power, value};
    if (kind == "const") return {AlphaRuleKind::Const, value};
    throw ValidationError("alpha rule: unknown kind '" + kind + "'");
}

std::filesystem::path ensure_out_dir(const std::string& out) {
    std::filesystem::path dir = out.empty() ? "." : out;
    std::filesystem::create_directories(dir);
    return dir;
}

std::string json_kv(const std::string& key, const std::string& raw) {
    return "\"" + key + "\": " + raw;
}

std::string json_str(const std::string& v) { return "\"" + v + "\""; }

int run_analyze(const ChainSource& src, int n, const std::vector<double>& eps_list, int t_max,
                int threads, const std::string& out) {
    const StochasticMatrix P = src.build(n);
    const Distribution pi = stationary(P);
    const ChainProperties props = classify(P, pi);
    const int horizon = t_max > 0 ? t_max : 4 * P.n() + 4;
    const MixingProfile prof = distance_profile(P, pi, horizon, threads);

    const auto dir = ensure_out_dir(out);

    std::string profile_csv = csv_row({"t", "d_t"});
    for (int t = 0; t <= prof.t_max(); ++t) {
        profile_csv += csv_row({std::to_string(t), format_double(prof.at(t))});
    }
    write_text_file((dir / "profile.csv").string(), profile_csv);

    std::ostringstream props_json;
    props_json << "{\n  " << json_kv("n", std::to_string(P.n())) << ",\n  "
               << json_kv("irreducible", props.irreducible ? "true" : "false") << ",\n  "
               << json_kv("aperiodic", props.aperiodic ? "true" : "false") << ",\n  "
               << json_kv("lazy", props.lazy ? "true" : "false") << ",\n  "
               << json_kv("reversible", props.reversible ? "true" : "false") << ",\n  "
               << json_kv("reversibility_residual", format_double(props.reversibility_residual))
               << ",\n  " << json_kv("stationary", [&] {
                      std::string s = "[";
                      for (int i = 0; i < pi.n(); ++i) {
                          if (i) s += ", ";
                          s += format_double(pi[i]);
                      }
                      return s + "]";
                  }());
    if (props.reversible) {
        const SpectrumSummary spec = spectrum(P, pi);
        props_json << ",\n  " << json_kv("lambda_star", format_double(spec.lambda_star))
                   << ",\n  " << json_kv("t_rel", format_double(spec.t_rel));
    }
    props_json << "\n}\n";
    write_text_file((dir / "properties.json").string(), props_json.str());

    std::string mix_csv = csv_row({"eps", "t_mix"});
    std::cout << "n = " << P.n() << "\n";
    for (double eps : eps_list) {
        const int tm = mixing_time(prof, eps);
        mix_csv += csv_row({format_double(eps), std::to_string(tm)});
        std::cout << "eps = " << format_double(eps) << "  t_mix = " << tm << "\n";
    }
    write_text_file((dir / "mixing_times.csv").string(), mix_csv);
    return 0;
}

int run_perturb(const ChainSource& src, int n, double alpha, const std::string& sigma_path,
                int t_max, const std::string& out) {
    const StochasticMatrix P = src.build(n);
    const Distribution pi = stationary(P);
    const Distribution sigma =
        sigma_path.empty() ? Distribution::uniform(P.n()) : read_distribution_file(sigma_path);
    const RestartPerturbation pert{alpha, sigma};
    const StochasticMatrix Pt = restart_matrix(P, pert);
    const double err = total_variation(pi, stationary(Pt));
    const double rad = radius(P, Pt);
    const int horizon = t_max > 0 ? t_max : 4 * P.n() + 4;
    const ErrorUpperBound ub = upper_bound(P, pi, alpha, horizon);

    std::ostringstream js;
    js << "{\n  " << json_kv("n", std::to_string(P.n())) << ",\n  "
       << json_kv("alpha", format_double(alpha)) << ",\n  "
       << json_kv("radius", format_double(rad)) << ",\n  "
       << json_kv("error", format_double(err)) << ",\n  "
       << json_kv("upper_bound", format_double(ub.bound)) << ",\n  "
       << json_kv("upper_bound_argmin_t", std::to_string(ub.argmin_t)) << "\n}\n";
    const auto dir = ensure_out_dir(out);
    write_text_file((dir / "perturb.json").string(), js.str());
    std::cout << js.str();
    return 0;
}

int run_sweep(const ChainSource& src, const std::vector<int>& n_list,
              const std::string& alpha_rule_text, double eps, double delta,
              const std::string& out) {
    if (n_list.empty()) throw ValidationError("sweep: --n-list must be nonempty");
    if (src.family != "wsr" && src.family != "cgb") {
        throw ValidationError("sweep: --family must be wsr or cgb");
    }
    const AlphaRule rule = parse_alpha_rule(alpha_rule_text);
    auto family = [&](int n) {
        return src.family == "wsr" ? winning_streak_reversal(n) : complete_graph_bijection(n);
    };
    THitOptions opts;
    opts.exact_n_limit = *std::max_element(n_list.begin(), n_list.end());
    const auto rows = trichotomy_sweep(family, n_list, rule, eps, delta, opts);

    std::string csv = csv_row({"n", "alpha", "alpha_tmix", "error", "upper_bound", "lower_bound",
                               "t_hit", "witness_x"});
    PlotSeries err_series{src.family + " error", {}, {}};
    for (const auto& r : rows) {
        csv += csv_row({std::to_string(r.n), format_double(r.alpha),
                        format_double(r.alpha_tmix), format_double(r.error),
                        format_double(r.upper_bound),
                        r.lower_bound ? format_double(*r.lower_bound) : "",
                        r.t_hit ? std::to_string(*r.t_hit) : "",
                        r.witness_x ? std::to_string(*r.witness_x + 1) : ""});
        err_series.x.push_back(r.n);
        err_series.y.push_back(r.error);
    }
    const auto dir = ensure_out_dir(out);
    write_text_file((dir / "sweep.csv").string(), csv);
    write_text_file((dir / "sweep.svg").string(),
                    svg_line_chart({err_series}, "restart perturbation error", "n",
                                   "||pi - pi~||"));
    std::cout << csv;
    return 0;
}

int run_couple(const std::string& kind, int n, int i, int j, double alpha, int t_max,
               long trials, uint64_t seed, int threads, const std::string& out) {
    std::string csv = csv_row({"t", "estimate", "std_err", "trials", "seed"});
    const int horizon = t_max > 0 ? t_max : 2 * n;
    for (int t = 0; t <= horizon; ++t) {
        CouplingTrace tr;
        if (kind == "cgb-even") {
            tr = cgb_even_coupling(n, i - 1, j - 1, t, trials, seed, threads);
        } else if (kind == "cgb-odd") {
            tr = cgb_odd_coupling(n, i - 1, j - 1, t, trials, seed, threads);
        } else if (kind == "lemma71") {
            const StochasticMatrix P = winning_streak_reversal(n);
            const RestartPerturbation pert{alpha, Distribution::uniform(n)};
            tr = lemma71_coupling(P, restart_matrix(P, pert), t, trials, seed, threads);
        } else {
            throw ValidationError("couple: kind must be cgb-even, cgb-odd, or lemma71");
        }
        csv += csv_row({std::to_string(t), format_double(tr.estimate),
                        format_double(tr.std_err), std::to_string(tr.trials),
                        std::to_string(tr.seed)});
    }
    const auto dir = ensure_out_dir(out);
    write_text_file((dir / "trace.csv").string(), csv);
    std::cout << csv;
    return 0;
}

int run_figure1(double eps, double delta, const std::vector<int>& n_list, int threads,
                const std::string& out) {
    const auto dir = ensure_out_dir(out);

    // Left: distance-to-stationarity curves at n = 32.
    {
        const int n = 32;
        const StochasticMatrix W = winning_streak_reversal(n);
        const StochasticMatrix C = complete_graph_bijection(n);
        const MixingProfile dW = distance_profile(W, winning_streak_stationary(n), 2 * n, threads);
        const MixingProfile dC =
            distance_profile(C, complete_graph_bijection_stationary(n), 2 * n, threads);
        std::string csv = csv_row({"t", "d_wsr", "d_cgb"});
        PlotSeries sw{"winning streak reversal", {}, {}}, sc{"complete graph bijection", {}, {}};
        for (int t = 0; t <= 2 * n; ++t) {
            csv += csv_row({std::to_string(t), format_double(dW.at(t)), format_double(dC.at(t))});
            sw.x.push_back(t);
            sw.y.push_back(dW.at(t));
            sc.x.push_back(t);
            sc.y.push_back(dC.at(t));
        }
        write_text_file((dir / "figure1_left.csv").string(), csv);
        write_text_file((dir / "figure1_left.svg").string(),
                        svg_line_chart({sw, sc}, "convergence at n = 32", "t", "d_n(t)"));
    }

    // Right: perturbation error vs n at alpha = 1/sqrt(t_mix(eps)).
    // WSR uses the adversarial hitting-time restart; CGB uses uniform restart
    // (recorded in the metadata file).
    {
        std::string csv = csv_row({"n", "alpha_wsr", "error_wsr", "alpha_cgb", "error_cgb"});
        PlotSeries sw{"winning streak reversal", {}, {}}, sc{"complete graph bijection", {}, {}};
        for (int n : n_list) {
            const StochasticMatrix W = winning_streak_reversal(n);
            const Distribution piW = winning_streak_stationary(n);
            const MixingProfile dW = distance_profile(W, piW, n, threads);
            const double aW = 1.0 / std::sqrt(static_cast<double>(mixing_time(dW, eps)));
            THitOptions opts;
            opts.exact_n_limit = n;
            const AdversarialRestart adv = adversarial_restart(W, piW, delta, aW, eps, opts);

            const StochasticMatrix C = complete_graph_bijection(n);
            const Distribution piC = complete_graph_bijection_stationary(n);
            int t_max = 4 * n + 4;
            MixingProfile dC = distance_profile(C, piC, t_max, threads);
            while (dC.d.back() > eps) {
                t_max *= 2;
                dC = distance_profile(C, piC, t_max, threads);
            }
            const double aC = 1.0 / std::sqrt(static_cast<double>(mixing_time(dC, eps)));
            const StochasticMatrix Ct =
                restart_matrix(C, RestartPerturbation{aC, Distribution::uniform(n)});
            const double errC = total_variation(piC, stationary(Ct));

            csv += csv_row({std::to_string(n), format_double(aW), format_double(adv.report.error),
                            format_double(aC), format_double(errC)});
            sw.x.push_back(n);
            sw.y.push_back(adv.report.error);
            sc.x.push_back(n);
            sc.y.push_back(errC);
        }
        write_text_file((dir / "figure1_right.csv").string(), csv);
        write_text_file((dir / "figure1_right.svg").string(),
                        svg_line_chart({sw, sc}, "restart perturbation error", "n",
                                       "||pi - pi~||"));
        std::ostringstream meta;
        meta << "{\n  " << json_kv("eps", format_double(eps)) << ",\n  "
             << json_kv("delta", format_double(delta)) << ",\n  "
             << json_kv("alpha", json_str("1/sqrt(t_mix(eps))")) << ",\n  "
             << json_kv("wsr_sigma", json_str("point mass at the exact hitting-time witness"))
             << ",\n  " << json_kv("cgb_sigma", json_str("uniform")) << "\n}\n";
        write_text_file((dir / "figure1_meta.json").string(), meta.str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite Markov chain mixing and restart-perturbation analysis"};
    app.require_subcommand(1);

    ChainSource src;
    int n = 8;
    std::vector<int> n_list;
    std::vector<double> eps_list{0.25};
    double eps = 0.25, delta = 0.1, alpha = 0.1;
    int t_max = 0, threads = 0;
    long trials = 100000;
    uint64_t seed = 1;
    std::string out = "out", alpha_rule = "power:0.5", sigma_path, couple_kind = "lemma71";
    int start_i = 1, start_j = 2;

    auto add_source = [&](CLI::App* cmd, bool with_chain) {
        cmd->add_option("--family", src.family, "wsr | cgb | lazy-walk");
        if (with_chain) cmd->add_option("--chain", src.chain_path, "chain text file");
        cmd->add_option("--graph", src.graph_path, "edge-list file for lazy-walk");
    };

    auto* analyze = app.add_subcommand("analyze", "profile, mixing times, properties");
    add_source(analyze, true);
    analyze->add_option("--n", n, "state count for a built-in family");
    analyze->add_option("--eps", eps_list, "epsilon list for the mixing-time table");
    analyze->add_option("--t-max", t_max, "profile horizon (default 4n+4)");
    analyze->add_option("--threads", threads, "worker threads (0 = auto)");
    analyze->add_option("--out", out, "output directory");

    auto* perturb = app.add_subcommand("perturb", "restart perturbation report");
    add_source(perturb, true);
    perturb->add_option("--n", n, "state count for a built-in family");
    perturb->add_option("--alpha", alpha, "restart probability");
    perturb->add_option("--sigma", sigma_path, "restart distribution file (default uniform)");
    perturb->add_option("--t-max", t_max, "upper-bound horizon");
    perturb->add_option("--out", out, "output directory");

    auto* sweep = app.add_subcommand("sweep", "adversarial trichotomy sweep");
    add_source(sweep, false);
    sweep->add_option("--n-list", n_list, "state counts")->delimiter(',');
    sweep->add_option("--alpha-rule", alpha_rule, "c-over-tmix:<c> | power:<g> | const:<a>");
    sweep->add_option("--eps", eps, "epsilon for t_mix");
    sweep->add_option("--delta", delta, "delta for the hitting-time certificate");
    sweep->add_option("--out", out, "output directory");

    auto* couple = app.add_subcommand("couple", "coupling simulation");
    couple->add_option("--kind", couple_kind, "lemma71 | cgb-even | cgb-odd");
    couple->add_option("--n", n, "state count");
    couple->add_option("--i", start_i, "first start state (1-indexed)");
    couple->add_option("--j", start_j, "second start state (1-indexed)");
    couple->add_option("--alpha", alpha, "restart probability (lemma71)");
    couple->add_option("--t-max", t_max, "trace horizon (default 2n)");
    couple->add_option("--trials", trials, "Monte Carlo trials");
    couple->add_option("--seed", seed, "RNG seed");
    couple->add_option("--threads", threads, "worker threads (0 = auto)");
    couple->add_option("--out", out, "output directory");

    auto* fig1 = app.add_subcommand("figure1", "example-chain reproduction");
    fig1->add_option("--eps", eps, "epsilon for t_mix");
    fig1->add_option("--delta", delta, "delta for the adversarial restart");
    fig1->add_option("--n-list", n_list, "state counts for the right panel")->delimiter(',');
    fig1->add_option("--threads", threads, "worker threads (0 = auto)");
    fig1->add_option("--out", out, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed()) return run_analyze(src, n, eps_list, t_max, threads, out);
        if (perturb->parsed()) return run_perturb(src, n, alpha, sigma_path, t_max, out);
        if (sweep->parsed()) return run_sweep(src, n_list, alpha_rule, eps, delta, out);
        if (couple->parsed())
            return run_couple(couple_kind, n, start_i, start_j, alpha, t_max, trials, seed,
                              threads, out);
        if (fig1->parsed()) {
            if (n_list.empty()) n_list = {8, 16, 32, 64, 128};
            return run_figure1(eps, delta, n_list, threads, out);
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ComputeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
