// orthobase - extend integer orthogonal systems to orthogonal bases and run
// exhaustive verification sweeps. One subcommand per library operation; all
// I/O is JSON (CSV for flat verify tables), all runs are reproducible from
// the flags alone.

#include <CLI11.hpp>

#include "orthobase/cli.hpp"

using orthobase::RunConfig;

namespace {

void add_io_flags(CLI::App* cmd, RunConfig& cfg, bool with_input) {
    if (with_input)
        cmd->add_option("--in", cfg.input,
                        "input: a file path, inline JSON, or '-' for stdin (default stdin)");
    cmd->add_option("--out", cfg.output, "output file (default stdout)");
    cmd->add_flag_callback("-q,--quiet", [&cfg]() { cfg.verbosity = 0; },
                           "suppress the diagnostic summary");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"integer orthogonal system toolkit"};
    app.require_subcommand(1);

    RunConfig cfg;

    auto* validate = app.add_subcommand("validate", "check a system against its declared kind");
    add_io_flags(validate, cfg, true);

    auto* snf = app.add_subcommand("snf", "Smith normal form of an integer matrix");
    add_io_flags(snf, cfg, true);

    auto* complement = app.add_subcommand("complement",
                                          "integer basis of the orthogonal complement lattice");
    add_io_flags(complement, cfg, true);

    auto* extend = app.add_subcommand("extend", "complete a p-orthonormal system to a base");
    add_io_flags(extend, cfg, true);

    auto* enumerate = app.add_subcommand("enumerate", "list all vectors of a given norm");
    enumerate->add_option("--n", cfg.n, "dimension")->required();
    enumerate->add_option("--p", cfg.p, "norm")->required();
    enumerate->add_flag("--count-only", cfg.count_only, "emit only the count");
    add_io_flags(enumerate, cfg, false);

    auto* check = app.add_subcommand("check-identities",
                                     "run the algebraic identity suites on random systems");
    check->add_option("--samples", cfg.samples, "samples per suite (default 1000)");
    check->add_option("--seed", cfg.seed, "random seed (default 0)");
    add_io_flags(check, cfg, false);

    auto* verify = app.add_subcommand("verify",
                                      "try to extend every system for each p in a range");
    verify->add_option("--n", cfg.n, "dimension (default 4)");
    verify->add_option("--p-lo", cfg.p_lo, "lower end of the p range")->required();
    verify->add_option("--p-hi", cfg.p_hi, "upper end of the p range")->required();
    verify->add_option("--mode", cfg.mode, "exhaustive | random (default exhaustive)");
    verify->add_option("--seed", cfg.seed, "random seed (default 0)");
    verify->add_option("--jobs", cfg.jobs, "worker threads (default 1)");
    verify->add_option("--budget", cfg.budget,
                       "systems per p (exhaustive) or samples per p (random); 0 = default");
    verify->add_option("--kmax", cfg.k_max, "largest system size to enumerate (default n-1)");
    verify->add_flag("--squares-only", cfg.squares_only, "restrict to perfect-square norms");
    verify->add_option("--resume", cfg.resume, "reuse complete per-p records from a report");
    verify->add_option("--format", cfg.format, "json | csv (default json)");
    add_io_flags(verify, cfg, false);

    auto* counterexample = app.add_subcommand("counterexample",
                                              "build a non-extensible system");
    counterexample->add_option("--kind", cfg.kind, "c1 | c2 | c3 | all-ones")->required();
    counterexample->add_option("--n", cfg.n, "ambient dimension (c1/c2/c3)");
    counterexample->add_option("--p", cfg.p, "norm (c1/c2/c3)");
    counterexample->add_option("--x", cfg.x, "four integers with p = x1^2+x2^2+x3^2+x4^2")
        ->delimiter(',');
    counterexample->add_option("--y", cfg.y, "two integers with p = y1^2+y2^2 (c3)")
        ->delimiter(',');
    counterexample->add_option("--nbar", cfg.nbar, "all-ones: n = nbar^2");
    counterexample->add_option("--pbar", cfg.pbar, "all-ones: p = n*pbar^2");
    add_io_flags(counterexample, cfg, false);

    auto* confirm = app.add_subcommand("confirm",
                                       "prove a system non-extendable by exhaustive search");
    confirm->add_option("--budget", cfg.budget, "search node budget (0 = default)");
    add_io_flags(confirm, cfg, true);

    auto* orthext = app.add_subcommand("orthext",
                                       "extend an orthogonal system to an orthogonal base");
    add_io_flags(orthext, cfg, true);

    auto* minext = app.add_subcommand("minext",
                                      "search for the minimum-norm orthogonal completion");
    minext->add_option("--budget", cfg.budget, "search node budget (0 = default)");
    add_io_flags(minext, cfg, true);

    CLI11_PARSE(app, argc, argv);

    for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
    return orthobase::run(cfg);
}
