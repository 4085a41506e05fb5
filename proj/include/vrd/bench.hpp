#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vrd/model.hpp"
#include "vrd/search.hpp"

namespace vrd {

/// Packages i.i.d. uniform on the integer grid [-R/2, R/2]^2 without the depot, R = package_range.
Instance gen_instance(int n_p, int n_t, int n_d, int package_range, double drone_range, std::uint64_t seed);

enum class Pipeline { Final, Initial, NoDrones, Greedy };
std::string_view pipeline_name(Pipeline p);
Pipeline parse_pipeline(std::string_view name);

struct ExperimentRow {
    std::string id;
    int n_p = 0;
    int n_t = 1;
    int n_d = 0;
    std::vector<std::uint64_t> seeds;  // one sample per seed, shared by all pipelines
};

struct ExperimentSpec {
    std::vector<ExperimentRow> rows;
    double scale = 1.0;  // multiplies every stop bound of `configs`
    std::vector<Pipeline> pipelines{Pipeline::Final, Pipeline::Initial, Pipeline::NoDrones, Pipeline::Greedy};
    PhaseConfigs configs = default_phase_configs();
    int package_range = 200;
    double drone_range = 10000.0;
};

/// JSON: {"rows": [{"id", "n_p", "n_t", "n_d", "samples" | "seeds"}], "scale", "pipelines",
/// "package_range", "drone_range", "config"}. With "samples" the seeds are 1..samples.
ExperimentSpec parse_experiment_spec(std::string_view text);

struct SampleResult {
    std::uint64_t seed = 0;
    std::map<Pipeline, double> objective;
    double seconds = 0.0;
    std::string error;  // empty unless the sample failed
};

struct RowReport {
    ExperimentRow row;
    std::vector<SampleResult> samples;

    bool partial() const;
    /// Mean over the samples that produced this pipeline; nullopt when none did.
    std::optional<double> mean(Pipeline p) const;
};

struct Report {
    std::vector<Pipeline> pipelines;
    std::vector<RowReport> rows;
};

/// Solver seed of a sample; the instance uses the sample seed itself.
std::uint64_t solver_seed(std::uint64_t sample_seed);

/// Objectives of the requested pipelines on one instance.
std::map<Pipeline, double> run_pipelines(const Instance& inst, const PhaseConfigs& cfg, std::uint64_t seed,
                                         const std::vector<Pipeline>& pipelines);

/// Runs every sample of every row on up to `workers` threads. Results do not depend on `workers`.
Report run_experiment(const ExperimentSpec& spec, int workers = 1);

/// VRD_WORKERS when set to a positive integer, otherwise the hardware concurrency.
int workers_from_env();

enum class ReportFormat { Csv, Json };
std::string emit_report(const Report& r, ReportFormat format);
/// Inverse of emit_report(r, Json). Throws std::invalid_argument on malformed input.
Report parse_report_json(std::string_view text);

struct SvgStyle {
    bool per_vehicle = false;  // add one panel per vehicle next to the combined view
    double size = 600.0;       // panel edge in pixels
};

/// Trucks carrying a drone and riding drones are black, empty trucks blue, flying drones green.
std::string render_tours_svg(const Solution& s, const Instance& inst, const SvgStyle& style = {});

}  // namespace vrd
