#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sobolev/capacity.hpp"
#include "sobolev/convergence.hpp"
#include "sobolev/grid.hpp"
#include "sobolev/representative.hpp"

namespace sobolev {

enum class StudyKind { LpPoint, RefinedGradient, Capacity, Hausdorff, DiffQuot, ApproxDiff, Taylor };
std::string_view to_string(StudyKind k);

struct ScheduleSpec {
    double first = 0.0;
    double ratio = 0.5;
    int count = 0;
    std::vector<double> values() const;
};

/// One batch study parsed from a flat key = value file with bracketed
/// section headers. Field meaning per kind is documented in the README.
struct StudyConfig {
    StudyKind kind = StudyKind::LpPoint;
    std::string corpus_id;
    std::string out_name;

    int dim = 0;
    Point grid_lower, grid_upper;
    std::vector<int> grid_nodes;

    double p = 0.0;
    int k = 1;
    std::vector<Point> points;
    std::string target = "gradient";  // lp-point: classify gradient or function
    double eps = 0.1;

    ScheduleSpec radius_schedule{0.0, 0.5, 6};
    ScheduleSpec t_schedule{0.4, 0.5, 6};
    ScheduleSpec h_schedule{0.4, 0.5, 6};

    ClassifyOptions classify;
    ConvergenceOptions convergence;
    int lattice_nodes = 65;
    std::optional<Region> study_region;  // U or V

    // capacity studies
    std::optional<Region> k_region;
    std::optional<Region> omega_region;
    int capacity_levels = 1;
    int capacity_base_nodes = 0;
    CapacityOptions capacity_opts;

    // hausdorff studies
    std::string shape_spec;
    double hausdorff_s = 0.0;
    double hausdorff_delta0 = 0.5;
    int hausdorff_levels = 5;
    std::optional<double> frostman_p;

    int jobs = 1;
    std::filesystem::path out_dir = ".";
    unsigned long seed = 0;  // reserved for stochastic subsampling
};

StudyConfig parse_config(const std::filesystem::path& path);
void validate_config(const StudyConfig& cfg);

struct StudyOutcome {
    std::filesystem::path csv_path;
    std::filesystem::path summary_path;
};

/// Runs the configured study and writes <out>.csv and <out>.summary.txt.
/// Both files are assembled in memory and written whole, so a failed run
/// leaves nothing behind. Identical configs produce byte-identical files:
/// floats are printed with 17 significant digits in a fixed order.
StudyOutcome run_study(const StudyConfig& cfg);

/// 17-significant-digit float formatting used by every output writer.
std::string format_double(double v);

}  // namespace sobolev
