#include <string>

#include <CLI11.hpp>

#include "mafd/cli.hpp"

namespace {

void add_selection_flags(CLI::App* app, mafd::SelectionConfig* cfg, std::string* grid) {
    app->add_option("--rank", cfg->rank_schedule,
                    "per-step projection ranks (last value repeats)");
    app->add_option("--max-terms", cfg->max_terms, "term budget");
    app->add_option("--tol", cfg->stop_rel_energy, "relative residual-energy stop");
    app->add_option("--rmax", cfg->r_max, "search disk radius");
    app->add_option("--grid", *grid, "coarse grid as RxA, e.g. 24x64");
    app->add_option("--refine", cfg->refine_iters, "local refinement rounds");
    app->add_option("--shrink", cfg->refine_shrink, "per-round spacing shrink");
    app->add_option("--min-gain", cfg->min_gain, "relative gain floor");
    app->add_option("--threads", cfg->threads, "grid evaluation threads (results unchanged)");
}

void parse_grid(const std::string& grid, mafd::SelectionConfig* cfg) {
    if (grid.empty()) return;
    const size_t x = grid.find('x');
    if (x == std::string::npos)
        throw CLI::ValidationError("--grid", "expected RxA, e.g. 24x64");
    cfg->n_radii = std::stoi(grid.substr(0, x));
    cfg->n_angles = std::stoi(grid.substr(x + 1));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"adaptive matrix Blaschke decomposition toolkit"};
    app.require_subcommand(1);

    mafd::cli::SynthOptions synth;
    CLI::App* synth_cmd = app.add_subcommand("synth", "generate test signals");
    synth_cmd->add_option("--kind", synth.kind,
                          "atom | atom-sum | random-poly | real-trig | constant")
        ->required();
    synth_cmd->add_option("--out", synth.out, "output file")->required();
    synth_cmd->add_option("--p", synth.p, "output rows");
    synth_cmd->add_option("--q", synth.q, "output columns");
    synth_cmd->add_option("--n", synth.n, "coefficient length / sample count");
    synth_cmd->add_option("--degree", synth.degree, "polynomial or trig degree");
    synth_cmd->add_option("--count", synth.count, "atoms in an atom-sum");
    synth_cmd->add_option("--w-re", synth.w_re, "atom point, real part");
    synth_cmd->add_option("--w-im", synth.w_im, "atom point, imaginary part");
    synth_cmd->add_option("--amp", synth.amplitude, "amplitude scale");
    synth_cmd->add_option("--seed", synth.seed, "random seed");

    mafd::cli::DecomposeOptions dec;
    std::string dec_grid;
    CLI::App* dec_cmd = app.add_subcommand("decompose", "run the adaptive decomposition");
    dec_cmd->add_option("--in", dec.in, "input signal file")->required();
    dec_cmd->add_option("--out", dec.out, "output result file")->required();
    dec_cmd->add_flag("-v,--verbose", dec.verbose, "print per-term progress");
    add_selection_flags(dec_cmd, &dec.config, &dec_grid);

    mafd::cli::ReconstructOptions rec;
    CLI::App* rec_cmd = app.add_subcommand("reconstruct", "rebuild a signal from a result");
    rec_cmd->add_option("--result", rec.result, "result file")->required();
    rec_cmd->add_option("--out", rec.out, "output signal file")->required();
    rec_cmd->add_option("--n", rec.n, "output length (default: the result's N)");
    rec_cmd->add_flag("--real", rec.real_out, "emit a real signal");

    mafd::cli::VerifyOptions ver;
    std::string ver_grid;
    CLI::App* ver_cmd = app.add_subcommand("verify", "run the invariant checks");
    ver_cmd->add_option("--in", ver.in, "result or signal file (optional)");
    ver_cmd->add_option("--report", ver.report, "append JSON-lines/CSV report here");
    ver_cmd->add_option("--format", ver.format, "json | csv");
    ver_cmd->add_option("--seed", ver.seed, "seed for the randomized suites");
    add_selection_flags(ver_cmd, &ver.config, &ver_grid);

    try {
        app.parse(argc, argv);
        parse_grid(dec_grid, &dec.config);
        parse_grid(ver_grid, &ver.config);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : mafd::cli::kExitParse;
    }

    if (synth_cmd->parsed()) return mafd::cli::cmd_synth(synth);
    if (dec_cmd->parsed()) return mafd::cli::cmd_decompose(dec);
    if (rec_cmd->parsed()) return mafd::cli::cmd_reconstruct(rec);
    if (ver_cmd->parsed()) return mafd::cli::cmd_verify(ver);
    return mafd::cli::kExitParse;
}
