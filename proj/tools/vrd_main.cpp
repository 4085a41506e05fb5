#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "vrd/bench.hpp"
#include "vrd/construct.hpp"
#include "vrd/feasibility.hpp"
#include "vrd/neighborhoods.hpp"
#include "vrd/pipeline.hpp"
#include "vrd/schedule.hpp"

using namespace vrd;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

std::string with_newline(std::string s) {
    if (s.empty() || s.back() != '\n') s += '\n';
    return s;
}

struct SolverOptions {
    std::string config;
    double scale = 1.0;
    std::uint64_t seed = 1;

    PhaseConfigs load() const {
        const PhaseConfigs c = config.empty() ? default_phase_configs() : parse_phase_configs(read_file(config));
        return scaled(c, scale);
    }
};

void add_solver_options(CLI::App* cmd, SolverOptions& o) {
    cmd->add_option("--config", o.config, "search settings (JSON)");
    cmd->add_option("--scale", o.scale, "multiplier for every stop bound")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", o.seed, "random seed");
}

std::string fixed6(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(6) << v;
    return os.str();
}

int debug_move(const Instance& inst, const Solution& s, int type, std::uint64_t seed, const std::string& out) {
    const RoutePlan plan = plan_from_solution(s);
    Rng rng(seed);
    const auto areas = find_speedup_areas(plan, inst);
    std::vector<std::pair<SpeedUpArea, std::pair<int, int>>> sites;
    for (const auto& area : areas)
        for (const auto& anchor : area_anchors(plan, inst, area)) {
            const auto types = applicable_moves(plan, inst, area, anchor.first, anchor.second);
            if (std::find(types.begin(), types.end(), type) != types.end()) sites.push_back({area, anchor});
        }
    if (sites.empty()) {
        std::cerr << "no anchor admits move type " << type << "\n";
        return 1;
    }
    const auto& [area, anchor] = sites[uniform_index(rng, sites.size())];
    const auto r = apply_small_move(plan, inst, area, SmallMove{type, anchor.first, anchor.second}, rng);
    std::cerr << "drone " << area.drone << " leg " << anchor.first << " offset " << anchor.second << ": "
              << rejection_name(r.reason) << "\n";
    if (!r.plan) return 1;
    const auto sol = materialize(*r.plan, inst.n_p);
    const auto f = sol ? evaluate(*sol, inst) : std::nullopt;
    if (!f) {
        std::cerr << "result is infeasible\n";
        return 1;
    }
    std::cerr << "objective " << fixed6(*f) << "\n";
    write_output(out, with_newline(serialize_solution(*sol)));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Vehicle routing with drones: solver, checker and experiment runner"};
    app.require_subcommand(1);

    std::string instance_path, solution_path, out_path;

    // gen
    int n_p = 50, n_t = 2, n_d = 2, package_range = 200;
    double drone_range = 10000;
    std::uint64_t gen_seed = 1;
    auto* gen = app.add_subcommand("gen", "generate a random instance");
    gen->add_option("--packages", n_p)->check(CLI::PositiveNumber);
    gen->add_option("--trucks", n_t)->check(CLI::PositiveNumber);
    gen->add_option("--drones", n_d)->check(CLI::NonNegativeNumber);
    gen->add_option("--package-range", package_range)->check(CLI::PositiveNumber);
    gen->add_option("--drone-range", drone_range)->check(CLI::NonNegativeNumber);
    gen->add_option("--seed", gen_seed);
    gen->add_option("-o,--out", out_path);

    SolverOptions solver;
    std::string stages_path;
    auto* solve_cmd = app.add_subcommand("solve", "run mTSP, SpeedUp and OuterSearch");
    solve_cmd->add_option("--instance", instance_path)->required();
    add_solver_options(solve_cmd, solver);
    solve_cmd->add_option("-o,--out", out_path, "final solution");
    solve_cmd->add_option("--stages", stages_path, "write every stage with its objective and time (JSON)");

    auto* greedy = app.add_subcommand("greedy", "greedy drone dispatch over the mTSP tours");
    greedy->add_option("--instance", instance_path)->required();
    add_solver_options(greedy, solver);
    greedy->add_option("-o,--out", out_path);

    auto* mtsp = app.add_subcommand("mtsp", "truck tours only, drones idle");
    mtsp->add_option("--instance", instance_path)->required();
    add_solver_options(mtsp, solver);
    mtsp->add_option("-o,--out", out_path);

    auto* eval = app.add_subcommand("eval", "objective and delivery table of a solution");
    eval->add_option("--instance", instance_path)->required();
    eval->add_option("--solution", solution_path)->required();

    auto* check = app.add_subcommand("check", "feasibility report; exit 0 feasible, 1 inconsistent, 2 infeasible");
    check->add_option("--instance", instance_path)->required();
    check->add_option("--solution", solution_path)->required();

    std::string spec_path, format;
    double bench_scale = 0.0;
    auto* bench = app.add_subcommand("bench", "run an experiment spec");
    bench->add_option("--spec", spec_path)->required();
    bench->add_option("--out", out_path);
    bench->add_option("--scale", bench_scale, "overrides the spec's scale")->check(CLI::PositiveNumber);
    bench->add_option("--format", format, "csv or json; defaults by the output extension")->check(CLI::IsMember({"csv", "json"}));

    bool per_vehicle = false;
    auto* plot = app.add_subcommand("plot", "draw a solution as SVG");
    plot->add_option("--instance", instance_path)->required();
    plot->add_option("--solution", solution_path)->required();
    plot->add_option("--out", out_path);
    plot->add_flag("--per-vehicle", per_vehicle);

    int move_type = 1;
    std::uint64_t move_seed = 1;
    auto* dbg = app.add_subcommand("debug-move", "apply one small move");
    dbg->group("");
    dbg->add_option("--instance", instance_path)->required();
    dbg->add_option("--solution", solution_path)->required();
    dbg->add_option("--type", move_type)->check(CLI::Range(1, 9));
    dbg->add_option("--seed", move_seed);
    dbg->add_option("-o,--out", out_path);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            write_output(out_path, with_newline(serialize_instance(gen_instance(n_p, n_t, n_d, package_range, drone_range, gen_seed))));
            return 0;
        }
        if (*bench) {
            auto spec = parse_experiment_spec(read_file(spec_path));
            if (bench_scale > 0) spec.scale = bench_scale;
            const bool json = format == "json" || (format.empty() && out_path.size() >= 5 &&
                                                   out_path.compare(out_path.size() - 5, 5, ".json") == 0);
            const auto report = run_experiment(spec, workers_from_env());
            write_output(out_path, emit_report(report, json ? ReportFormat::Json : ReportFormat::Csv));
            for (const auto& row : report.rows)
                if (row.partial()) std::cerr << "row " << row.row.id << " is partial\n";
            return 0;
        }

        const Instance inst = parse_instance(read_file(instance_path));
        if (*solve_cmd) {
            const auto r = solve(inst, solver.load(), solver.seed);
            std::cerr << "pre-initial " << fixed6(r.pre_initial.objective) << "\ninitial " << fixed6(r.initial.objective)
                      << "\nfinal " << fixed6(r.final.objective) << "\n";
            if (!stages_path.empty()) {
                std::ostringstream os;
                os << "{\n";
                const std::pair<const char*, const StageResult*> stages[] = {
                    {"pre_initial", &r.pre_initial}, {"initial", &r.initial}, {"final", &r.final}};
                for (std::size_t i = 0; i < 3; ++i)
                    os << "  \"" << stages[i].first << "\": {\"objective\": " << std::setprecision(17) << stages[i].second->objective
                       << ", \"seconds\": " << stages[i].second->seconds
                       << ", \"solution\": " << serialize_solution(stages[i].second->solution) << "}" << (i < 2 ? "," : "") << "\n";
                os << "}\n";
                write_output(stages_path, os.str());
            }
            write_output(out_path, with_newline(serialize_solution(r.final.solution)));
            return 0;
        }
        if (*greedy || *mtsp) {
            const auto pre = solve_pre_initial(inst, solver.load(), solver.seed);
            const auto s = *greedy ? greedy_drones(inst, pre) : pre;
            std::cerr << "objective " << fixed6(objective(s, inst)) << "\n";
            write_output(out_path, with_newline(serialize_solution(s)));
            return 0;
        }

        const Solution s = parse_solution(read_file(solution_path), inst);
        if (*check) {
            const auto report = check_feasible(s, inst);
            std::cout << report.render();
            return report.verdict == Verdict::Feasible ? 0 : report.verdict == Verdict::Inconsistent ? 1 : 2;
        }
        if (*eval) {
            const auto report = check_feasible(s, inst);
            if (!report.feasible()) {
                std::cerr << report.render();
                return report.verdict == Verdict::Inconsistent ? 1 : 2;
            }
            const auto sched = compute_schedule(s, inst);
            std::cout << "objective," << fixed6(objective(s, inst)) << "\n";
            std::cout << "package,vehicle,time\n";
            for (int v = 1; v <= inst.n_p; ++v) {
                const auto& d = sched.deliveries[static_cast<std::size_t>(v)];
                std::cout << v << ',' << d.vehicle.to_string() << ',' << fixed6(d.time) << "\n";
            }
            return 0;
        }
        if (*plot) {
            write_output(out_path, render_tours_svg(s, inst, SvgStyle{per_vehicle, 600}));
            return 0;
        }
        if (*dbg) return debug_move(inst, s, move_type, move_seed, out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
