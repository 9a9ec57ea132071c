#include <atomic>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "menumech/convert.hpp"
#include "menumech/core.hpp"
#include "menumech/direct.hpp"
#include "menumech/errors.hpp"
#include "menumech/io.hpp"
#include "menumech/learner.hpp"
#include "menumech/lowerbound.hpp"

namespace {

using namespace menumech;

// 0 success/compliant, 1 check failure, 2 config error,
// 3 runtime inconsistency, 4 precondition failure
constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;
constexpr int kPrecondition = 4;

std::filesystem::path resolve_output(const std::string& name) {
    std::filesystem::path p(name);
    if (p.is_absolute()) return p;
    if (const char* dir = std::getenv("MENUMECH_OUT_DIR")) return std::filesystem::path(dir) / p;
    return p;
}

std::ofstream open_output(const std::string& name) {
    auto path = resolve_output(name);
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

struct GammaSpec {
    double ratio{0.5};
    std::vector<double> explicit_gamma;
    int rounds{0};

    DiscountSequence build() const {
        if (!explicit_gamma.empty()) return DiscountSequence(explicit_gamma);
        if (rounds <= 0) throw CLI::ValidationError("--rounds", "need a positive round count");
        return DiscountSequence::geometric(ratio, rounds);
    }
};

void add_gamma_options(CLI::App* cmd, GammaSpec& g) {
    cmd->add_option("--ratio", g.ratio, "geometric discount ratio")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--gamma", g.explicit_gamma, "explicit discount weights (overrides --ratio)");
    cmd->add_option("-T,--rounds", g.rounds, "horizon length");
}

BuyerStrategy parse_buyer(const std::string& name, int grid) {
    if (name == "myopic") return BuyerStrategy::myopic();
    if (name == "phasedp" || name == "phase_dp") return BuyerStrategy::phase_dp(grid);
    throw CLI::ValidationError("--buyer", "expected 'myopic' or 'phasedp'");
}

int report_transcript_issues(const std::vector<std::string>& issues) {
    for (const auto& s : issues) std::cerr << "invariant breach: " << s << "\n";
    return issues.empty() ? kOk : kRuntimeError;
}

// ---------------------------------------------------------------- simulate

struct SimulateCfg {
    GammaSpec gamma;
    double value{0.5};
    std::string buyer{"myopic"};
    int grid{41};
    std::string output{"simulate.csv"};
};

int cmd_simulate(const SimulateCfg& cfg) {
    DiscountSequence seq = cfg.gamma.build();
    RunTranscript tr = run_menu_pricing(seq, parse_buyer(cfg.buyer, cfg.grid), cfg.value);

    // phase lookup per round; rounds past a quit keep the quitting phase
    const int T = seq.rounds();
    std::vector<int> phase_of(static_cast<std::size_t>(T), -1);
    for (std::size_t e = 0; e < tr.phases.size(); ++e) {
        const PhaseRecord& ph = tr.phases[e];
        for (int t = ph.first_round; t < ph.first_round + ph.rounds_used && t < T; ++t)
            phase_of[static_cast<std::size_t>(t)] = static_cast<int>(e);
    }
    for (int t = 1; t < T; ++t)
        if (phase_of[static_cast<std::size_t>(t)] < 0)
            phase_of[static_cast<std::size_t>(t)] = phase_of[static_cast<std::size_t>(t) - 1];

    auto out = open_output(cfg.output);
    out << "round,phase,lo_v,hi_v,delta,epsilon,delay,chosen_a,price,instant_regret,cum_regret\n";
    double cum = 0.0;
    for (int t = 0; t < T; ++t) {
        const PhaseRecord& ph = tr.phases[static_cast<std::size_t>(phase_of[static_cast<std::size_t>(t)])];
        const Contract& c = tr.trajectory.contracts[static_cast<std::size_t>(t)];
        cum += tr.instant_regret[static_cast<std::size_t>(t)];
        out << t + 1 << ',' << phase_of[static_cast<std::size_t>(t)] + 1 << ','
            << fmt17(ph.lo_v) << ',' << fmt17(ph.hi_v) << ',' << fmt17(ph.params.delta) << ','
            << fmt17(ph.params.epsilon) << ',' << ph.params.delay << ',' << fmt17(c.allocation)
            << ',' << fmt17(c.payment) << ',' << fmt17(tr.instant_regret[static_cast<std::size_t>(t)])
            << ',' << fmt17(cum) << '\n';
    }
    return report_transcript_issues(verify_transcript(tr, cfg.value));
}

// ------------------------------------------------------------------- sweep

struct SweepCfg {
    double ratio{0.5};
    std::vector<int> rounds;
    double v_min{0.0}, v_max{1.0};
    int v_count{21};
    std::string buyer{"myopic"};
    int grid{41};
    int threads{1};
    std::string output{"sweep.csv"};
};

int cmd_sweep(const SweepCfg& cfg) {
    if (cfg.rounds.empty()) throw CLI::ValidationError("--rounds", "need at least one horizon");
    if (cfg.v_count < 1) throw CLI::ValidationError("--v-count", "need at least one value");

    struct Cell {
        double v;
        int T;
    };
    std::vector<Cell> cells;
    for (int T : cfg.rounds)
        for (int i = 0; i < cfg.v_count; ++i) {
            double v = cfg.v_count == 1
                           ? cfg.v_min
                           : cfg.v_min + (cfg.v_max - cfg.v_min) * i / (cfg.v_count - 1);
            cells.push_back(Cell{v, T});
        }

    BuyerStrategy buyer = parse_buyer(cfg.buyer, cfg.grid);
    struct CellResult {
        double total_regret{0.0};
        double bound{0.0};
        std::vector<std::string> issues;
    };
    std::vector<CellResult> results(cells.size());

    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < cells.size();) {
            try {
                DiscountSequence seq = DiscountSequence::geometric(cfg.ratio, cells[i].T);
                RunTranscript tr = run_menu_pricing(seq, buyer, cells[i].v);
                results[i] = CellResult{tr.summary.regret, tr.phase_regret_bound(),
                                        verify_transcript(tr, cells[i].v)};
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    int n_threads = std::clamp(cfg.threads, 1, 64);
    std::vector<std::thread> pool;
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);

    auto out = open_output(cfg.output);
    out << "v,T,total_regret,analytic_phase_bound\n";
    std::vector<std::string> all_issues;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        out << fmt17(cells[i].v) << ',' << cells[i].T << ',' << fmt17(results[i].total_regret)
            << ',' << fmt17(results[i].bound) << '\n';
        for (auto& s : results[i].issues)
            all_issues.push_back("(v=" + fmt17(cells[i].v) + ", T=" + std::to_string(cells[i].T) +
                                 ") " + s);
    }
    return report_transcript_issues(all_issues);
}

// ----------------------------------------------------------------- convert

struct ConvertCfg {
    std::string input;
    std::string tree_out{"tree.json"};
    std::string adjusted_out{"adjusted.json"};
    std::string report_out{"roundtrip.json"};
    bool audit{false};
    double tolerance{1e-9};
};

int cmd_convert(const ConvertCfg& cfg) {
    auto [mech, seq] = direct_from_json(load_json_file(cfg.input));
    ComplianceReport rep = check_ic_pir(mech, seq, cfg.tolerance);
    if (!rep.compliant()) {
        std::cerr << "input mechanism is not compliant; min slack " << fmt17(rep.min_slack)
                  << " over " << rep.violations.size() << " violation(s)\n";
        for (const SlackEntry& e : rep.violations)
            std::cerr << "  (v=" << fmt17(mech.types[static_cast<std::size_t>(e.true_type)])
                      << ", v_hat=" << fmt17(mech.types[static_cast<std::size_t>(e.report)])
                      << ", t=" << e.upto << ") slack " << fmt17(e.slack) << "\n";
        return kPrecondition;
    }

    ConversionResult conv = direct_to_indirect(mech, seq, cfg.audit, cfg.tolerance);
    RoundTripReport rt = roundtrip_audit(mech, seq, cfg.tolerance);

    save_json_file(resolve_output(cfg.tree_out).string(), tree_to_json(conv.tree));
    save_json_file(resolve_output(cfg.adjusted_out).string(), direct_to_json(conv.adjusted, seq));

    nlohmann::json jrep;
    jrep["types"] = rt.types;
    jrep["rev_original"] = rt.rev_original;
    jrep["rev_adjusted"] = rt.rev_adjusted;
    jrep["rev_roundtrip"] = rt.rev_roundtrip;
    jrep["chain_ok"] = rt.chain_ok;
    jrep["max_violation"] = rt.max_violation;
    jrep["adjustment_steps"] = conv.adjustment_steps;
    save_json_file(resolve_output(cfg.report_out).string(), jrep);

    std::cout << "adjustment steps: " << conv.adjustment_steps << "\n";
    for (std::size_t i = 0; i < rt.types.size(); ++i)
        std::cout << "v=" << fmt17(rt.types[i]) << "  Rev " << fmt17(rt.rev_original[i]) << " -> "
                  << fmt17(rt.rev_adjusted[i]) << " (roundtrip " << fmt17(rt.rev_roundtrip[i])
                  << ")\n";
    if (!rt.chain_ok) {
        std::cerr << "revenue chain violated by " << fmt17(rt.max_violation) << "\n";
        return kRuntimeError;
    }
    return kOk;
}

// ------------------------------------------------------------------- check

struct CheckCfg {
    std::string input;
    double tolerance{1e-9};
};

int cmd_check(const CheckCfg& cfg) {
    auto [mech, seq] = direct_from_json(load_json_file(cfg.input));
    ComplianceReport rep = check_ic_pir(mech, seq, cfg.tolerance);
    std::cout << "min_slack " << fmt17(rep.min_slack) << "\n";
    for (const SlackEntry& e : rep.violations)
        std::cout << "violation (v=" << fmt17(mech.types[static_cast<std::size_t>(e.true_type)])
                  << ", v_hat=" << fmt17(mech.types[static_cast<std::size_t>(e.report)])
                  << ", t=" << e.upto << ") slack " << fmt17(e.slack) << "\n";
    return rep.compliant() ? kOk : kCheckFailed;
}

// -------------------------------------------------------------- lowerbound

struct LowerboundCfg {
    double tolerance{1e-6};
    std::optional<double> v_lo, v_hi;
    GammaSpec gamma;
};

int cmd_lowerbound(const LowerboundCfg& cfg) {
    struct Row {
        TwoTypeInstance inst;
        std::string gamma_desc;
    };
    std::vector<Row> rows;
    if (cfg.v_lo && cfg.v_hi) {
        rows.push_back(Row{TwoTypeInstance{*cfg.v_lo, *cfg.v_hi, cfg.gamma.build()}, "custom"});
    } else {
        const std::vector<std::pair<double, double>> pairs{{0.25, 0.5}, {0.5, 1.0}, {0.3, 0.9}};
        for (auto [lo, hi] : pairs) {
            rows.push_back(Row{TwoTypeInstance{lo, hi, DiscountSequence({1.0, 1.0})}, "(1,1)"});
            rows.push_back(Row{TwoTypeInstance{lo, hi, DiscountSequence({1.0, 0.5})}, "(1,0.5)"});
            rows.push_back(
                Row{TwoTypeInstance{lo, hi, DiscountSequence::geometric(0.8, 5)}, "geom0.8"});
            rows.push_back(
                Row{TwoTypeInstance{lo, hi, DiscountSequence::geometric(0.8, 8)}, "geom0.8"});
        }
    }

    std::cout << "v_lo,v_hi,T,gamma,t_gamma,lp_regret,closed_form,slack\n";
    bool ok = true;
    for (const Row& row : rows) {
        TwoTypeOptimum opt = optimal_two_type_regret(row.inst);
        double bound =
            closed_form_regret_bound(row.inst.v_lo, row.inst.v_hi, row.inst.seq.total());
        double slack = opt.regret - bound;
        if (slack < -cfg.tolerance) ok = false;
        std::cout << fmt17(row.inst.v_lo) << ',' << fmt17(row.inst.v_hi) << ','
                  << row.inst.seq.rounds() << ',' << row.gamma_desc << ','
                  << fmt17(row.inst.seq.total()) << ',' << fmt17(opt.regret) << ','
                  << fmt17(bound) << ',' << fmt17(slack) << '\n';
    }
    return ok ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"menu-based dynamic pricing against a discounted strategic buyer"};
    app.require_subcommand(1);
    app.set_config("--config", "", "config file with [subcommand] sections");
    app.allow_config_extras(CLI::config_extras_mode::error);

    SimulateCfg sim;
    auto* simulate = app.add_subcommand("simulate", "run the phase mechanism once, emit a CSV");
    add_gamma_options(simulate, sim.gamma);
    simulate->add_option("-v,--value", sim.value, "buyer type")->check(CLI::Range(0.0, 1.0));
    simulate->add_option("--buyer", sim.buyer, "myopic or phasedp");
    simulate->add_option("--grid", sim.grid, "phasedp first-round grid size")
        ->check(CLI::Range(2, 100000));
    simulate->add_option("-o,--output", sim.output, "CSV path");

    SweepCfg sweep;
    auto* sw = app.add_subcommand("sweep", "regret over a (v, T) grid");
    sw->add_option("--ratio", sweep.ratio, "geometric ratio")->check(CLI::Range(0.0, 1.0));
    sw->add_option("-T,--rounds", sweep.rounds, "horizon list");
    sw->add_option("--v-min", sweep.v_min)->check(CLI::Range(0.0, 1.0));
    sw->add_option("--v-max", sweep.v_max)->check(CLI::Range(0.0, 1.0));
    sw->add_option("--v-count", sweep.v_count, "grid points between v-min and v-max");
    sw->add_option("--buyer", sweep.buyer, "myopic or phasedp");
    sw->add_option("--grid", sweep.grid)->check(CLI::Range(2, 100000));
    sw->add_option("--threads", sweep.threads)->check(CLI::Range(1, 64));
    sw->add_option("-o,--output", sweep.output, "CSV path");

    ConvertCfg conv;
    auto* cv = app.add_subcommand("convert", "price-equalize a direct mechanism into a menu tree");
    cv->add_option("-i,--input", conv.input, "direct mechanism JSON")->required();
    cv->add_option("--tree-out", conv.tree_out);
    cv->add_option("--adjusted-out", conv.adjusted_out);
    cv->add_option("--report-out", conv.report_out);
    cv->add_flag("--audit", conv.audit, "re-check compliance after every adjustment");
    cv->add_option("--tolerance", conv.tolerance);

    CheckCfg check;
    auto* ck = app.add_subcommand("check", "truth-telling / participation audit");
    ck->add_option("-i,--input", check.input, "direct mechanism JSON")->required();
    ck->add_option("--tolerance", check.tolerance);

    LowerboundCfg lb;
    auto* lbc = app.add_subcommand("lowerbound", "two-type regret LP vs closed form");
    lbc->add_option("--tolerance", lb.tolerance);
    lbc->add_option("--v-lo", lb.v_lo)->check(CLI::Range(0.0, 1.0));
    lbc->add_option("--v-hi", lb.v_hi)->check(CLI::Range(0.0, 1.0));
    add_gamma_options(lbc, lb.gamma);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(sim);
        if (sw->parsed()) return cmd_sweep(sweep);
        if (cv->parsed()) return cmd_convert(conv);
        if (ck->parsed()) return cmd_check(check);
        if (lbc->parsed()) return cmd_lowerbound(lb);
    } catch (const inconsistent_buyer_error& e) {
        std::cerr << "inconsistent buyer: " << e.what() << "\n";
        return kRuntimeError;
    } catch (const capacity_error& e) {
        std::cerr << "capacity: " << e.what() << "\n";
        return kRuntimeError;
    } catch (const equalization_error& e) {
        std::cerr << "equalization: " << e.what() << "\n";
        return kRuntimeError;
    } catch (const lp_failure& e) {
        std::cerr << "lp: " << e.what() << "\n";
        return kRuntimeError;
    } catch (const CLI::ParseError& e) {
        std::cerr << "config: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::domain_error& e) {
        std::cerr << "config: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntimeError;
    }
    return kOk;
}
