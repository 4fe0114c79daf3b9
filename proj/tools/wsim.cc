// Command-line front end: weighted-automaton language inclusion via
// simulation matrices, partial execution, counterexample scans, and the
// tree-automaton variants.
//
// Exit codes: 0 = yes/ok/included, 1 = no/not-included/check-failed,
// 2 = unknown, 3 = usage or input error.

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "wsim/driver.hh"
#include "wsim/maxplus.hh"
#include "wsim/tree.hh"

namespace {

constexpr int kExitYes = 0;
constexpr int kExitNo = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitError = 3;

void write_to(const std::string& path, const std::function<void(std::ostream&)>& fn) {
    if (path.empty()) {
        fn(std::cout);
    } else {
        std::ofstream os(path);
        if (!os) throw wsim::InputError("cannot write '" + path + "'");
        fn(os);
    }
}

wsim::Matrix load_matrix_file(wsim::SemiringKind kind, const std::string& path) {
    std::ifstream is(path);
    if (!is) throw wsim::InputError("cannot open '" + path + "'");
    return wsim::load_matrix(kind, is);
}

int report_outcome(const wsim::SearchOutcome& outcome, const std::string& out_path) {
    switch (outcome.tag) {
        case wsim::SearchOutcome::Tag::Found:
            std::cout << "Found\n";
            write_to(out_path, [&](std::ostream& os) { wsim::save_matrix(*outcome.witness, os); });
            return kExitYes;
        case wsim::SearchOutcome::Tag::NoSimulation:
            std::cout << "NoSimulation"
                      << (outcome.detail.empty() ? "" : " (" + outcome.detail + ")") << "\n";
            return kExitNo;
        case wsim::SearchOutcome::Tag::Unknown:
            std::cout << "Unknown" << (outcome.detail.empty() ? "" : " (" + outcome.detail + ")")
                      << "\n";
            return kExitUnknown;
    }
    return kExitError;
}

std::vector<wsim::Weight> parse_pool(wsim::SemiringKind kind, const std::string& text) {
    std::vector<wsim::Weight> pool;
    std::string token;
    std::istringstream is(text);
    while (std::getline(is, token, ',')) {
        if (!token.empty()) pool.push_back(wsim::parse_weight(kind, token));
    }
    return pool;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weighted-automaton language inclusion via simulation matrices"};
    app.require_subcommand(1);
    int exit_code = kExitYes;

    // -- weight ------------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("weight", "Weight of a word in an automaton");
        auto aut = std::make_shared<std::string>();
        auto symbols = std::make_shared<std::vector<std::string>>();
        cmd->add_option("automaton", *aut, "automaton file")->required();
        cmd->add_option("word", *symbols, "word symbols (omit for the empty word)");
        cmd->callback([&exit_code, aut, symbols] {
            auto a = wsim::load_automaton_file(*aut);
            std::cout << wsim::format_weight(wsim::word_weight(a, wsim::parse_word(a, *symbols)))
                      << "\n";
            exit_code = kExitYes;
        });
    }

    // -- simsearch ----------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("simsearch", "Search for a simulation matrix");
        auto a_path = std::make_shared<std::string>();
        auto b_path = std::make_shared<std::string>();
        auto dir = std::make_shared<std::string>("fwd");
        auto out = std::make_shared<std::string>();
        cmd->add_option("A", *a_path, "left automaton file")->required();
        cmd->add_option("B", *b_path, "right automaton file")->required();
        cmd->add_option("--dir", *dir, "fwd|bwd (default fwd)");
        cmd->add_option("-o,--output", *out, "write the witness matrix to a file");
        cmd->callback([&exit_code, a_path, b_path, dir, out] {
            auto a = wsim::load_automaton_file(*a_path);
            auto b = wsim::load_automaton_file(*b_path);
            exit_code = report_outcome(
                wsim::find_simulation(a, b, wsim::direction_from_name(*dir)), *out);
        });
    }

    // -- simcheck -----------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("simcheck", "Verify a candidate simulation matrix");
        auto a_path = std::make_shared<std::string>();
        auto b_path = std::make_shared<std::string>();
        auto dir = std::make_shared<std::string>("fwd");
        auto matrix = std::make_shared<std::string>();
        cmd->add_option("A", *a_path, "left automaton file")->required();
        cmd->add_option("B", *b_path, "right automaton file")->required();
        cmd->add_option("--dir", *dir, "fwd|bwd (default fwd)");
        cmd->add_option("--matrix", *matrix, "candidate matrix file")->required();
        cmd->callback([&exit_code, a_path, b_path, dir, matrix] {
            auto a = wsim::load_automaton_file(*a_path);
            auto b = wsim::load_automaton_file(*b_path);
            auto x = load_matrix_file(a.kind, *matrix);
            auto report = wsim::verify_sim_matrix(a, b, wsim::direction_from_name(*dir), x);
            if (report.ok) {
                std::cout << "OK (" << report.checked << " constraints)\n";
                exit_code = kExitYes;
            } else {
                std::cout << "FAIL " << report.first_violation << "\n";
                exit_code = kExitNo;
            }
        });
    }

    // -- langincl -----------------------------------------------------------
    {
        auto* cmd = app.add_subcommand(
            "langincl", "Decide or witness language inclusion L(A) <= L(B)");
        auto a_path = std::make_shared<std::string>();
        auto b_path = std::make_shared<std::string>();
        auto dir = std::make_shared<std::string>("fwd");
        auto out = std::make_shared<std::string>();
        auto opts = std::make_shared<wsim::LangInclOptions>();
        cmd->add_option("A", *a_path, "left automaton file")->required();
        cmd->add_option("B", *b_path, "right automaton file")->required();
        cmd->add_option("--dir", *dir, "fwd|bwd (default fwd)");
        cmd->add_option("--max-depth", opts->max_depth, "transformation ladder depth (default 3)");
        cmd->add_option("--max-len", opts->max_len, "counterexample length bound (default 8)");
        cmd->add_option("--budget", opts->budget_seconds, "wall-clock budget in seconds (default 60)");
        cmd->add_option("-o,--output", *out, "write the witness matrix to a file");
        cmd->callback([&exit_code, a_path, b_path, dir, out, opts] {
            auto a = wsim::load_automaton_file(*a_path);
            auto b = wsim::load_automaton_file(*b_path);
            opts->dir = wsim::direction_from_name(*dir);
            wsim::Verdict verdict = wsim::language_inclusion(a, b, *opts);
            switch (verdict.kind) {
                case wsim::Verdict::Kind::Included:
                    std::cout << "Included (depth " << verdict.pe_depth << ", dir "
                              << wsim::direction_name(verdict.dir) << ")\n";
                    write_to(*out,
                             [&](std::ostream& os) { wsim::save_matrix(*verdict.witness, os); });
                    exit_code = kExitYes;
                    break;
                case wsim::Verdict::Kind::NotIncluded:
                    std::cout << "NotIncluded word '" << wsim::format_word(a, *verdict.counterexample)
                              << "' weights " << wsim::format_weight(verdict.weights->first)
                              << " > " << wsim::format_weight(verdict.weights->second) << "\n";
                    exit_code = kExitNo;
                    break;
                case wsim::Verdict::Kind::Unknown:
                    std::cout << "Unknown (" << verdict.detail << ")\n";
                    exit_code = kExitUnknown;
                    break;
            }
        });
    }

    // -- counterexample -------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("counterexample",
                                       "Shortest word violating the pointwise order, if any");
        auto a_path = std::make_shared<std::string>();
        auto b_path = std::make_shared<std::string>();
        auto max_len = std::make_shared<int>(8);
        cmd->add_option("A", *a_path, "left automaton file")->required();
        cmd->add_option("B", *b_path, "right automaton file")->required();
        cmd->add_option("--max-len", *max_len, "word length bound (default 8)");
        cmd->callback([&exit_code, a_path, b_path, max_len] {
            auto a = wsim::load_automaton_file(*a_path);
            auto b = wsim::load_automaton_file(*b_path);
            auto w = wsim::find_counterexample(a, b, *max_len);
            if (w) {
                std::vector<std::string> names;
                for (int s : *w) names.push_back(a.alphabet[static_cast<std::size_t>(s)]);
                std::cout << "Counterexample '" << wsim::format_word(a, *w) << "' weights "
                          << wsim::format_weight(wsim::word_weight(a, *w)) << " > "
                          << wsim::format_weight(wsim::word_weight(b, wsim::parse_word(b, names)))
                          << "\n";
                exit_code = kExitNo;
            } else {
                std::cout << "None up to length " << *max_len << "\n";
                exit_code = kExitYes;
            }
        });
    }

    // -- oracle ---------------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("oracle", "Tabulate weights of all words up to a bound");
        auto a_path = std::make_shared<std::string>();
        auto b_path = std::make_shared<std::string>();
        auto max_len = std::make_shared<int>(4);
        cmd->add_option("A", *a_path, "left automaton file")->required();
        cmd->add_option("B", *b_path, "right automaton file")->required();
        cmd->add_option("--max-len", *max_len, "word length bound (default 4)");
        cmd->callback([&exit_code, a_path, b_path, max_len] {
            auto a = wsim::load_automaton_file(*a_path);
            auto b = wsim::load_automaton_file(*b_path);
            bool all_leq = true;
            for (const auto& row : wsim::oracle_compare(a, b, *max_len)) {
                std::cout << (row.leq ? "ok " : "VIOLATION ") << "'"
                          << wsim::format_word(a, row.word) << "' "
                          << wsim::format_weight(row.weight_a) << " "
                          << wsim::format_weight(row.weight_b) << "\n";
                all_leq = all_leq && row.leq;
            }
            exit_code = all_leq ? kExitYes : kExitNo;
        });
    }

    // -- pe ---------------------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("pe", "Apply forward/backward partial execution");
        auto aut = std::make_shared<std::string>();
        auto mode = std::make_shared<std::string>("fpe");
        auto out = std::make_shared<std::string>();
        auto depth = std::make_shared<int>(-1);
        auto states = std::make_shared<std::vector<int>>();
        cmd->add_option("automaton", *aut, "automaton file")->required();
        cmd->add_option("--mode", *mode, "fpe|bpe (default fpe)");
        cmd->add_option("--param-depth", *depth,
                        "choose the parameter set heuristically from this depth");
        cmd->add_option("--states", *states, "explicit parameter states");
        cmd->add_option("-o,--output", *out, "output automaton file");
        cmd->callback([&exit_code, aut, mode, out, depth, states] {
            auto a = wsim::load_automaton_file(*aut);
            if (*mode != "fpe" && *mode != "bpe")
                throw wsim::UsageError("--mode must be fpe or bpe");
            std::vector<int> p = *states;
            if (*depth >= 0) {
                if (!states->empty())
                    throw wsim::UsageError("--param-depth and --states are exclusive");
                p = *mode == "fpe" ? wsim::fpe_param(a, *depth) : wsim::bpe_param(a, *depth);
            }
            auto result = *mode == "fpe" ? wsim::fpe(a, p) : wsim::bpe(a, p);
            write_to(*out, [&](std::ostream& os) { wsim::save_automaton(result, os); });
            exit_code = kExitYes;
        });
    }

    // -- random -------------------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("random", "Generate a random automaton");
        auto kind = std::make_shared<std::string>("plus-times");
        auto out = std::make_shared<std::string>();
        auto params = std::make_shared<wsim::RandomAutomatonParams>();
        auto density = std::make_shared<std::string>("1/2");
        auto pool = std::make_shared<std::string>("1");
        cmd->add_option("--kind", *kind, "plus-times|max-plus|boolean");
        cmd->add_option("--states", params->states, "state count")->required();
        cmd->add_option("--alphabet", params->alphabet_size, "alphabet size (default 1)");
        cmd->add_option("--density", *density, "transition probability (rational, default 1/2)");
        cmd->add_option("--pool", *pool, "comma-separated weight pool (default '1')");
        cmd->add_option("--seed", params->seed, "generator seed (default 0)");
        cmd->add_option("-o,--output", *out, "output automaton file");
        cmd->callback([&exit_code, kind, out, params, density, pool] {
            params->kind = wsim::kind_from_name(*kind);
            params->density = wsim::parse_weight(wsim::SemiringKind::PlusTimes, *density).value();
            params->pool = parse_pool(params->kind, *pool);
            auto a = wsim::random_automaton(*params);
            write_to(*out, [&](std::ostream& os) { wsim::save_automaton(a, os); });
            exit_code = kExitYes;
        });
    }

    // -- remove-traps -----------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("remove-traps",
                                       "Drop states that cannot reach acceptance");
        auto aut = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        cmd->add_option("automaton", *aut, "automaton file")->required();
        cmd->add_option("-o,--output", *out, "output automaton file");
        cmd->callback([&exit_code, aut, out] {
            auto a = wsim::load_automaton_file(*aut);
            auto result = wsim::remove_trap_states(a);
            write_to(*out, [&](std::ostream& os) { wsim::save_automaton(result, os); });
            exit_code = kExitYes;
        });
    }

    // -- game -----------------------------------------------------------------
    {
        auto* cmd = app.add_subcommand(
            "game", "Mean-payoff decision for a forward max-plus simulation");
        auto a_path = std::make_shared<std::string>();
        auto b_path = std::make_shared<std::string>();
        auto dump = std::make_shared<bool>(false);
        cmd->add_option("A", *a_path, "left automaton file")->required();
        cmd->add_option("B", *b_path, "right automaton file")->required();
        cmd->add_flag("--dump", *dump, "print the game graph instead of solving it");
        cmd->callback([&exit_code, a_path, b_path, dump] {
            auto a = wsim::load_automaton_file(*a_path);
            auto b = wsim::load_automaton_file(*b_path);
            auto game = wsim::build_sim_game(a, b);
            if (*dump) {
                wsim::dump_game(game, std::cout);
                exit_code = kExitYes;
                return;
            }
            auto winner = wsim::mpg_winner(game);
            std::cout << (winner == wsim::GameWinner::MaxWins ? "MaxWins" : "MinWins") << "\n";
            exit_code = winner == wsim::GameWinner::MaxWins ? kExitYes : kExitNo;
        });
    }

    // -- tree-weight -------------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("tree-weight", "Weight of a tree term");
        auto aut = std::make_shared<std::string>();
        auto term = std::make_shared<std::string>();
        cmd->add_option("automaton", *aut, "tree automaton file")->required();
        cmd->add_option("term", *term, "tree term, e.g. f(c,c)")->required();
        cmd->callback([&exit_code, aut, term] {
            auto a = wsim::load_tree_automaton_file(*aut);
            auto t = wsim::parse_tree(a.alphabet, *term);
            std::cout << wsim::format_weight(wsim::tree_weight(a, t)) << "\n";
            exit_code = kExitYes;
        });
    }

    // -- tree-simsearch -----------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("tree-simsearch",
                                       "Search for a tree simulation matrix");
        auto a_path = std::make_shared<std::string>();
        auto b_path = std::make_shared<std::string>();
        auto dir = std::make_shared<std::string>("fwd");
        auto out = std::make_shared<std::string>();
        auto seed = std::make_shared<std::uint64_t>(1);
        cmd->add_option("A", *a_path, "left tree automaton file")->required();
        cmd->add_option("B", *b_path, "right tree automaton file")->required();
        cmd->add_option("--dir", *dir, "fwd|bwd (default fwd)");
        cmd->add_option("--seed", *seed, "search seed (default 1)");
        cmd->add_option("-o,--output", *out, "write the witness matrix to a file");
        cmd->callback([&exit_code, a_path, b_path, dir, out, seed] {
            auto a = wsim::load_tree_automaton_file(*a_path);
            auto b = wsim::load_tree_automaton_file(*b_path);
            wsim::TreeSearchConfig config;
            config.seed = *seed;
            exit_code = report_outcome(
                wsim::find_tree_sim(a, b, wsim::direction_from_name(*dir), config), *out);
        });
    }

    // -- tree-simcheck ---------------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("tree-simcheck",
                                       "Verify a candidate tree simulation matrix");
        auto a_path = std::make_shared<std::string>();
        auto b_path = std::make_shared<std::string>();
        auto dir = std::make_shared<std::string>("fwd");
        auto matrix = std::make_shared<std::string>();
        cmd->add_option("A", *a_path, "left tree automaton file")->required();
        cmd->add_option("B", *b_path, "right tree automaton file")->required();
        cmd->add_option("--dir", *dir, "fwd|bwd (default fwd)");
        cmd->add_option("--matrix", *matrix, "candidate matrix file")->required();
        cmd->callback([&exit_code, a_path, b_path, dir, matrix] {
            auto a = wsim::load_tree_automaton_file(*a_path);
            auto b = wsim::load_tree_automaton_file(*b_path);
            auto x = load_matrix_file(a.kind, *matrix);
            auto report = wsim::verify_tree_sim(a, b, wsim::direction_from_name(*dir), x);
            if (report.ok) {
                std::cout << "OK (" << report.checked << " constraints)\n";
                exit_code = kExitYes;
            } else {
                std::cout << "FAIL " << report.first_violation << "\n";
                exit_code = kExitNo;
            }
        });
    }

    // -- tree-fpe ------------------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("tree-fpe",
                                       "Apply forward partial execution to a tree automaton");
        auto aut = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        auto states = std::make_shared<std::vector<int>>();
        cmd->add_option("automaton", *aut, "tree automaton file")->required();
        cmd->add_option("--states", *states, "parameter states");
        cmd->add_option("-o,--output", *out, "output tree automaton file");
        cmd->callback([&exit_code, aut, out, states] {
            auto a = wsim::load_tree_automaton_file(*aut);
            auto result = wsim::tree_fpe(a, *states);
            write_to(*out, [&](std::ostream& os) { wsim::save_tree_automaton(result, os); });
            exit_code = kExitYes;
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return 0;  // --help
        std::cerr << e.what() << "\n";
        return kExitError;
    } catch (const wsim::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return exit_code;
}
