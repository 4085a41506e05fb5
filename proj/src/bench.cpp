#include "vrd/bench.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <json.hpp>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "vrd/construct.hpp"
#include "vrd/pipeline.hpp"
#include "vrd/schedule.hpp"

namespace vrd {

using nlohmann::json;

namespace {

constexpr std::pair<Pipeline, std::string_view> kPipelines[] = {
    {Pipeline::Final, "final"},
    {Pipeline::Initial, "initial"},
    {Pipeline::NoDrones, "no-drones"},
    {Pipeline::Greedy, "greedy"},
};

// Column names use underscores so that they survive spreadsheet tools.
std::string column(Pipeline p) {
    std::string s(pipeline_name(p));
    for (auto& c : s)
        if (c == '-') c = '_';
    return s;
}

bool has(const std::vector<Pipeline>& ps, Pipeline p) { return std::find(ps.begin(), ps.end(), p) != ps.end(); }

// Pipelines in the fixed column order.
std::vector<Pipeline> ordered(const std::vector<Pipeline>& ps) {
    std::vector<Pipeline> out;
    for (const auto& [p, name] : kPipelines)
        if (has(ps, p)) out.push_back(p);
    return out;
}

std::string number(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

Instance gen_instance(int n_p, int n_t, int n_d, int package_range, double drone_range, std::uint64_t seed) {
    Rng rng(derive_seed(seed, 0));
    const std::int64_t half = package_range / 2;
    std::uniform_int_distribution<std::int64_t> u(-half, half);
    Instance inst;
    inst.n_p = n_p;
    inst.n_t = n_t;
    inst.n_d = n_d;
    inst.drone_range = drone_range;
    while (static_cast<int>(inst.positions.size()) < n_p) {
        const Point p{u(rng), u(rng)};
        if (p == Point{}) continue;
        inst.positions.push_back(p);
    }
    inst.validate();
    return inst;
}

std::string_view pipeline_name(Pipeline p) {
    for (const auto& [k, name] : kPipelines)
        if (k == p) return name;
    return "unknown";
}

Pipeline parse_pipeline(std::string_view name) {
    for (const auto& [k, n] : kPipelines)
        if (n == name) return k;
    throw std::invalid_argument("unknown pipeline: " + std::string(name));
}

ExperimentSpec parse_experiment_spec(std::string_view text) {
    ExperimentSpec spec;
    try {
        const json j = json::parse(text.begin(), text.end());
        if (j.contains("config")) spec.configs = parse_phase_configs(j.at("config").dump());
        spec.scale = j.value("scale", 1.0);
        spec.package_range = j.value("package_range", 200);
        spec.drone_range = j.value("drone_range", 10000.0);
        if (j.contains("pipelines")) {
            spec.pipelines.clear();
            for (const auto& p : j.at("pipelines")) spec.pipelines.push_back(parse_pipeline(p.get<std::string>()));
        }
        for (const auto& r : j.at("rows")) {
            ExperimentRow row;
            row.n_p = r.at("n_p").get<int>();
            row.n_t = r.at("n_t").get<int>();
            row.n_d = r.at("n_d").get<int>();
            row.id = r.value("id", std::to_string(spec.rows.size() + 1));
            if (r.contains("seeds")) {
                row.seeds = r.at("seeds").get<std::vector<std::uint64_t>>();
            } else {
                const int n = r.value("samples", 10);
                for (int k = 1; k <= n; ++k) row.seeds.push_back(static_cast<std::uint64_t>(k));
            }
            spec.rows.push_back(std::move(row));
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("bad experiment spec: ") + e.what());
    }
    if (!(spec.scale > 0.0)) throw std::invalid_argument("scale must be positive");
    if (spec.pipelines.empty()) throw std::invalid_argument("no pipeline requested");
    return spec;
}

bool RowReport::partial() const {
    for (const auto& s : samples)
        if (!s.error.empty()) return true;
    return false;
}

std::optional<double> RowReport::mean(Pipeline p) const {
    double sum = 0.0;
    int n = 0;
    for (const auto& s : samples) {
        const auto it = s.objective.find(p);
        if (it == s.objective.end()) continue;
        sum += it->second;
        ++n;
    }
    if (n == 0) return std::nullopt;
    return sum / n;
}

std::uint64_t solver_seed(std::uint64_t sample_seed) { return derive_seed(sample_seed, 1); }

std::map<Pipeline, double> run_pipelines(const Instance& inst, const PhaseConfigs& cfg, std::uint64_t seed,
                                         const std::vector<Pipeline>& pipelines) {
    Stage up_to = Stage::PreInitial;
    if (has(pipelines, Pipeline::Initial)) up_to = Stage::Initial;
    if (has(pipelines, Pipeline::Final)) up_to = Stage::Final;
    const auto r = solve(inst, cfg, seed, up_to);
    std::map<Pipeline, double> out;
    if (has(pipelines, Pipeline::NoDrones)) out[Pipeline::NoDrones] = r.pre_initial.objective;
    if (has(pipelines, Pipeline::Greedy)) out[Pipeline::Greedy] = objective(greedy_drones(inst, r.pre_initial.solution), inst);
    if (has(pipelines, Pipeline::Initial)) out[Pipeline::Initial] = r.initial.objective;
    if (has(pipelines, Pipeline::Final)) out[Pipeline::Final] = r.final.objective;
    return out;
}

Report run_experiment(const ExperimentSpec& spec, int workers) {
    Report report;
    report.pipelines = ordered(spec.pipelines);
    const PhaseConfigs cfg = scaled(spec.configs, spec.scale);
    struct Job {
        std::size_t row, sample;
    };
    std::vector<Job> jobs;
    for (std::size_t r = 0; r < spec.rows.size(); ++r) {
        report.rows.push_back({spec.rows[r], std::vector<SampleResult>(spec.rows[r].seeds.size())});
        for (std::size_t k = 0; k < spec.rows[r].seeds.size(); ++k) jobs.push_back({r, k});
    }
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            const auto& row = spec.rows[jobs[i].row];
            SampleResult& out = report.rows[jobs[i].row].samples[jobs[i].sample];
            out.seed = row.seeds[jobs[i].sample];
            const auto t0 = std::chrono::steady_clock::now();
            try {
                const auto inst = gen_instance(row.n_p, row.n_t, row.n_d, spec.package_range, spec.drone_range, out.seed);
                out.objective = run_pipelines(inst, cfg, solver_seed(out.seed), report.pipelines);
            } catch (const std::exception& e) {
                out.objective.clear();
                out.error = e.what();
            }
            out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        }
    };
    const std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, workers)), std::max<std::size_t>(1, jobs.size()));
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < n; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    return report;
}

int workers_from_env() {
    if (const char* v = std::getenv("VRD_WORKERS")) {
        char* end = nullptr;
        const long n = std::strtol(v, &end, 10);
        if (end != v && *end == '\0' && n > 0) return static_cast<int>(n);
    }
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

std::string emit_report(const Report& r, ReportFormat format) {
    const auto ps = ordered(r.pipelines);
    const bool ratios_g = has(ps, Pipeline::Final) && has(ps, Pipeline::Greedy);
    const bool ratios_n = has(ps, Pipeline::Final) && has(ps, Pipeline::NoDrones);
    if (format == ReportFormat::Json) {
        json j;
        j["pipelines"] = json::array();
        for (auto p : ps) j["pipelines"].push_back(std::string(pipeline_name(p)));
        j["rows"] = json::array();
        for (const auto& row : r.rows) {
            json jr;
            jr["id"] = row.row.id;
            jr["n_p"] = row.row.n_p;
            jr["n_t"] = row.row.n_t;
            jr["n_d"] = row.row.n_d;
            jr["partial"] = row.partial();
            jr["means"] = json::object();
            for (auto p : ps)
                if (auto m = row.mean(p)) jr["means"][std::string(pipeline_name(p))] = *m;
            jr["samples"] = json::array();
            for (const auto& s : row.samples) {
                json js;
                js["seed"] = s.seed;
                js["objectives"] = json::object();
                for (const auto& [p, v] : s.objective) js["objectives"][std::string(pipeline_name(p))] = v;
                js["seconds"] = std::llround(s.seconds);
                if (!s.error.empty()) js["error"] = s.error;
                jr["samples"].push_back(js);
            }
            j["rows"].push_back(jr);
        }
        return j.dump(2) + "\n";
    }

    std::size_t max_samples = 0;
    for (const auto& row : r.rows) max_samples = std::max(max_samples, row.samples.size());
    std::ostringstream os;
    os << "row_id,n_p,n_t,n_d";
    for (auto p : ps) os << ',' << column(p);
    if (ratios_g) os << ",greedy_over_final";
    if (ratios_n) os << ",no_drones_over_final";
    for (std::size_t k = 1; k <= max_samples; ++k) {
        os << ",sample" << k << "_seed";
        for (auto p : ps) os << ",sample" << k << '_' << column(p);
        os << ",sample" << k << "_seconds";
    }
    os << '\n';
    auto cell = [&](std::optional<double> v) {
        os << ',';
        if (v) os << number(*v);
    };
    for (const auto& row : r.rows) {
        os << row.row.id << ',' << row.row.n_p << ',' << row.row.n_t << ',' << row.row.n_d;
        for (auto p : ps) cell(row.mean(p));
        const auto fin = row.mean(Pipeline::Final);
        auto ratio = [&](Pipeline p) -> std::optional<double> {
            const auto m = row.mean(p);
            if (!m || !fin) return std::nullopt;
            return *m / *fin;
        };
        if (ratios_g) cell(ratio(Pipeline::Greedy));
        if (ratios_n) cell(ratio(Pipeline::NoDrones));
        for (std::size_t k = 0; k < max_samples; ++k) {
            if (k >= row.samples.size()) {
                for (std::size_t c = 0; c < ps.size() + 2; ++c) os << ',';
                continue;
            }
            const auto& s = row.samples[k];
            os << ',' << s.seed;
            for (auto p : ps) {
                const auto it = s.objective.find(p);
                cell(it == s.objective.end() ? std::nullopt : std::optional<double>(it->second));
            }
            os << ',' << std::llround(s.seconds);
        }
        os << '\n';
    }
    return os.str();
}

Report parse_report_json(std::string_view text) {
    Report r;
    try {
        const json j = json::parse(text.begin(), text.end());
        for (const auto& p : j.at("pipelines")) r.pipelines.push_back(parse_pipeline(p.get<std::string>()));
        for (const auto& jr : j.at("rows")) {
            RowReport row;
            row.row.id = jr.at("id").get<std::string>();
            row.row.n_p = jr.at("n_p").get<int>();
            row.row.n_t = jr.at("n_t").get<int>();
            row.row.n_d = jr.at("n_d").get<int>();
            for (const auto& js : jr.at("samples")) {
                SampleResult s;
                s.seed = js.at("seed").get<std::uint64_t>();
                for (const auto& [name, v] : js.at("objectives").items()) s.objective[parse_pipeline(name)] = v.get<double>();
                s.seconds = js.at("seconds").get<double>();
                s.error = js.value("error", std::string());
                row.row.seeds.push_back(s.seed);
                row.samples.push_back(std::move(s));
            }
            r.rows.push_back(std::move(row));
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("bad report: ") + e.what());
    }
    return r;
}

}  // namespace vrd
