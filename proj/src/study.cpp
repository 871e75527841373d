#include "sobolev/study.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "sobolev/corpus.hpp"
#include "sobolev/differentiability.hpp"
#include "sobolev/hausdorff.hpp"
#include "sobolev/parallel.hpp"
#include "sobolev/taylor.hpp"

namespace sobolev {

std::string_view to_string(StudyKind k) {
    switch (k) {
        case StudyKind::LpPoint: return "lp-point";
        case StudyKind::RefinedGradient: return "refined-gradient";
        case StudyKind::Capacity: return "capacity";
        case StudyKind::Hausdorff: return "hausdorff";
        case StudyKind::DiffQuot: return "diffquot";
        case StudyKind::ApproxDiff: return "approxdiff";
        case StudyKind::Taylor: return "taylor";
    }
    return "lp-point";
}

std::vector<double> ScheduleSpec::values() const {
    return geometric_schedule(first, ratio, count);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

double parse_number(const std::string& s, const std::string& field) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw validation_error("field " + field + ": cannot parse number from '" + s + "'");
    }
}

long parse_integer(const std::string& s, const std::string& field) {
    try {
        std::size_t pos = 0;
        const long v = std::stol(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw validation_error("field " + field + ": cannot parse integer from '" + s + "'");
    }
}

Point parse_point(const std::string& s, const std::string& field) {
    Point p;
    for (const auto& tok : split(s, ','))
        p.push_back(parse_number(tok, field));
    return p;
}

Region parse_region(const std::string& s, const std::string& field) {
    std::istringstream in(s);
    std::string shape;
    in >> shape;
    std::vector<std::string> args;
    std::string tok;
    while (in >> tok) args.push_back(tok);
    if (shape == "ball") {
        if (args.size() != 2)
            throw validation_error("field " + field + ": ball wants 'ball <center> <radius>'");
        return Ball{parse_point(args[0], field), parse_number(args[1], field)};
    }
    if (shape == "box") {
        if (args.size() != 2)
            throw validation_error("field " + field + ": box wants 'box <lo> <hi>'");
        return Box{parse_point(args[0], field), parse_point(args[1], field)};
    }
    throw validation_error("field " + field + ": unknown region shape '" + shape + "'");
}

struct RawConfig {
    std::map<std::string, std::string> kv;
    mutable std::set<std::string> used;

    std::optional<std::string> get(const std::string& key) const {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        used.insert(key);
        return it->second;
    }
    std::string require(const std::string& key) const {
        auto v = get(key);
        if (!v) throw validation_error("missing required field: " + key);
        return *v;
    }
    double get_number(const std::string& key, double fallback) const {
        auto v = get(key);
        return v ? parse_number(*v, key) : fallback;
    }
    long get_integer(const std::string& key, long fallback) const {
        auto v = get(key);
        return v ? parse_integer(*v, key) : fallback;
    }
};

RawConfig read_raw(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open config file: " + path.string());
    RawConfig raw;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw validation_error("config line " + std::to_string(lineno) +
                                       ": malformed section header");
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw validation_error("config line " + std::to_string(lineno) +
                                   ": expected key = value");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty()) throw validation_error("config line " + std::to_string(lineno) +
                                                ": empty key");
        const std::string full = section.empty() ? key : section + "." + key;
        if (!raw.kv.emplace(full, value).second)
            throw validation_error("duplicate config key: " + full);
    }
    return raw;
}

StudyKind parse_kind(const std::string& s) {
    for (StudyKind k : {StudyKind::LpPoint, StudyKind::RefinedGradient, StudyKind::Capacity,
                        StudyKind::Hausdorff, StudyKind::DiffQuot, StudyKind::ApproxDiff,
                        StudyKind::Taylor})
        if (s == to_string(k)) return k;
    throw validation_error("field study.kind: unknown study kind '" + s + "'");
}

bool needs_corpus(StudyKind k) {
    return k != StudyKind::Capacity && k != StudyKind::Hausdorff;
}

bool needs_grid(StudyKind k) { return k != StudyKind::Hausdorff; }

}  // namespace

StudyConfig parse_config(const std::filesystem::path& path) {
    const RawConfig raw = read_raw(path);
    StudyConfig cfg;
    cfg.kind = parse_kind(raw.require("study.kind"));
    if (auto v = raw.get("study.corpus")) cfg.corpus_id = *v;
    std::string default_out(to_string(cfg.kind));
    std::replace(default_out.begin(), default_out.end(), '-', '_');
    cfg.out_name = raw.get("study.out").value_or(default_out);

    if (auto v = raw.get("grid.dim")) cfg.dim = static_cast<int>(parse_integer(*v, "grid.dim"));
    auto broadcast = [&](const std::string& key, auto parse_one) {
        using T = decltype(parse_one(std::string{}, key));
        std::vector<T> out;
        const auto v = raw.get(key);
        if (!v) return out;
        for (const auto& tok : split(*v, ',')) out.push_back(parse_one(tok, key));
        if (static_cast<int>(out.size()) == 1 && cfg.dim > 1) out.resize(cfg.dim, out[0]);
        return out;
    };
    cfg.grid_lower = broadcast("grid.lower", parse_number);
    cfg.grid_upper = broadcast("grid.upper", parse_number);
    for (long v : broadcast("grid.nodes", parse_integer))
        cfg.grid_nodes.push_back(static_cast<int>(v));

    cfg.p = raw.get_number("params.p", 0.0);
    cfg.k = static_cast<int>(raw.get_integer("params.k", 1));
    cfg.eps = raw.get_number("params.eps", 0.1);
    if (auto v = raw.get("params.target")) cfg.target = *v;
    if (auto v = raw.get("params.points")) {
        for (const auto& tok : split(*v, ';'))
            if (!tok.empty()) cfg.points.push_back(parse_point(tok, "params.points"));
    }
    cfg.lattice_nodes = static_cast<int>(raw.get_integer("params.lattice_nodes", 65));
    if (auto v = raw.get("params.region")) cfg.study_region = parse_region(*v, "params.region");

    cfg.radius_schedule.first = raw.get_number("schedule.r0", 0.0);
    cfg.radius_schedule.ratio = raw.get_number("schedule.ratio", 0.5);
    cfg.radius_schedule.count = static_cast<int>(raw.get_integer("schedule.count", 6));
    cfg.t_schedule.first = raw.get_number("tschedule.first", 0.4);
    cfg.t_schedule.ratio = raw.get_number("tschedule.ratio", 0.5);
    cfg.t_schedule.count = static_cast<int>(raw.get_integer("tschedule.count", 6));
    cfg.h_schedule.first = raw.get_number("hschedule.first", 0.4);
    cfg.h_schedule.ratio = raw.get_number("hschedule.ratio", 0.5);
    cfg.h_schedule.count = static_cast<int>(raw.get_integer("hschedule.count", 6));

    cfg.classify.lp_tol = raw.get_number("tolerances.lp_tol", cfg.classify.lp_tol);
    cfg.classify.not_tol = raw.get_number("tolerances.not_tol", cfg.classify.not_tol);
    cfg.classify.rep.rep_tol = raw.get_number("tolerances.rep_tol", cfg.classify.rep.rep_tol);
    cfg.convergence.conv_tol = raw.get_number("tolerances.conv_tol", cfg.convergence.conv_tol);
    cfg.convergence.slope_min = raw.get_number("tolerances.slope_min", cfg.convergence.slope_min);
    cfg.convergence.stall_slope =
        raw.get_number("tolerances.stall_slope", cfg.convergence.stall_slope);
    cfg.convergence.error_floor =
        raw.get_number("tolerances.error_floor", cfg.convergence.error_floor);

    if (auto v = raw.get("capacity.k_region")) cfg.k_region = parse_region(*v, "capacity.k_region");
    if (auto v = raw.get("capacity.omega")) cfg.omega_region = parse_region(*v, "capacity.omega");
    cfg.capacity_levels = static_cast<int>(raw.get_integer("capacity.levels", 1));
    cfg.capacity_base_nodes = static_cast<int>(raw.get_integer("capacity.base_nodes", 0));
    cfg.capacity_opts.tol = raw.get_number("capacity.tol", cfg.capacity_opts.tol);
    cfg.capacity_opts.max_iter =
        static_cast<int>(raw.get_integer("capacity.max_iter", cfg.capacity_opts.max_iter));

    if (auto v = raw.get("hausdorff.shape")) cfg.shape_spec = *v;
    cfg.hausdorff_s = raw.get_number("hausdorff.s", 0.0);
    cfg.hausdorff_delta0 = raw.get_number("hausdorff.delta0", 0.5);
    cfg.hausdorff_levels = static_cast<int>(raw.get_integer("hausdorff.levels", 5));
    if (auto v = raw.get("hausdorff.frostman_p"))
        cfg.frostman_p = parse_number(*v, "hausdorff.frostman_p");

    for (const auto& [key, value] : raw.kv)
        if (!raw.used.count(key)) throw validation_error("unknown config key: " + key);

    if (const char* env = std::getenv("SOBOLEV_LAB_SEED"))
        cfg.seed = std::strtoul(env, nullptr, 10);
    return cfg;
}

void validate_config(const StudyConfig& cfg) {
    if (needs_corpus(cfg.kind)) {
        if (cfg.corpus_id.empty()) throw validation_error("missing required field: study.corpus");
        const CorpusEntry& entry = corpus_get(cfg.corpus_id);  // lookup failure -> exit 2
        if (cfg.dim > 0 && !entry.supports_dim(cfg.dim))
            throw validation_error("corpus function " + cfg.corpus_id +
                                   " does not support grid.dim");
    }
    if (needs_grid(cfg.kind)) {
        if (cfg.dim <= 0) throw validation_error("missing required field: grid.dim");
        if (cfg.grid_lower.empty()) throw validation_error("missing required field: grid.lower");
        if (cfg.grid_upper.empty()) throw validation_error("missing required field: grid.upper");
        if (cfg.grid_nodes.empty()) throw validation_error("missing required field: grid.nodes");
        if (static_cast<int>(cfg.grid_lower.size()) != cfg.dim ||
            static_cast<int>(cfg.grid_upper.size()) != cfg.dim ||
            static_cast<int>(cfg.grid_nodes.size()) != cfg.dim)
            throw validation_error("grid corner/node lists do not match grid.dim");
    }
    switch (cfg.kind) {
        case StudyKind::LpPoint:
        case StudyKind::RefinedGradient:
        case StudyKind::ApproxDiff:
            if (!(cfg.p >= 1.0)) throw validation_error("missing required field: params.p");
            if (cfg.points.empty()) throw validation_error("missing required field: params.points");
            if (!(cfg.radius_schedule.first > 0.0))
                throw validation_error("missing required field: schedule.r0");
            break;
        case StudyKind::DiffQuot:
        case StudyKind::Taylor:
            if (!(cfg.p >= 1.0)) throw validation_error("missing required field: params.p");
            if (cfg.points.empty()) throw validation_error("missing required field: params.points");
            if (!(cfg.radius_schedule.first > 0.0))
                throw validation_error("missing required field: schedule.r0");
            if (!cfg.study_region) throw validation_error("missing required field: params.region");
            break;
        case StudyKind::Capacity:
            if (!(cfg.p >= 1.0)) throw validation_error("missing required field: params.p");
            if (!cfg.k_region) throw validation_error("missing required field: capacity.k_region");
            if (!cfg.omega_region) throw validation_error("missing required field: capacity.omega");
            break;
        case StudyKind::Hausdorff:
            if (cfg.shape_spec.empty())
                throw validation_error("missing required field: hausdorff.shape");
            if (cfg.frostman_p) {
                if (cfg.dim <= 0 || cfg.grid_lower.empty() || cfg.grid_upper.empty())
                    throw validation_error("frostman check needs the [grid] box");
                if (!cfg.omega_region)
                    throw validation_error("missing required field: capacity.omega");
            }
            break;
    }
    if (cfg.kind == StudyKind::LpPoint && cfg.target != "gradient" && cfg.target != "function")
        throw validation_error("field params.target: expected 'gradient' or 'function'");
    for (const Point& pt : cfg.points)
        if (static_cast<int>(pt.size()) != cfg.dim)
            throw validation_error("params.points entries must match grid.dim");
    if (!(cfg.radius_schedule.ratio > 0.0 && cfg.radius_schedule.ratio < 1.0) ||
        !(cfg.t_schedule.ratio > 0.0 && cfg.t_schedule.ratio < 1.0) ||
        !(cfg.h_schedule.ratio > 0.0 && cfg.h_schedule.ratio < 1.0))
        throw validation_error("schedule ratios must lie in (0,1)");
}

namespace {

Grid make_grid(const StudyConfig& cfg) {
    return Grid(cfg.grid_lower, cfg.grid_upper, cfg.grid_nodes);
}

RadiusSchedule make_radius_schedule(const StudyConfig& cfg) {
    return {cfg.radius_schedule.first, cfg.radius_schedule.ratio, cfg.radius_schedule.count};
}

std::string point_str(const Point& x) {
    std::string s = "(";
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i) s += ",";
        s += format_double(x[i]);
    }
    return s + ")";
}

std::string orders_str(const std::vector<int>& o) {
    std::string s;
    for (std::size_t i = 0; i < o.size(); ++i) {
        if (i) s += "_";
        s += std::to_string(o[i]);
    }
    return s;
}

PointCloud parse_cloud(const std::string& spec) {
    std::istringstream in(spec);
    std::string shape;
    in >> shape;
    std::vector<std::string> args;
    std::string tok;
    while (in >> tok) args.push_back(tok);
    if (shape == "point") {
        if (args.size() != 1)
            throw validation_error("hausdorff.shape: point wants 'point <coords>'");
        return PointCloud{{parse_point(args[0], "hausdorff.shape")}, 0.0};
    }
    if (shape == "segment") {
        if (args.size() != 3)
            throw validation_error("hausdorff.shape: segment wants 'segment <a> <b> <samples>'");
        return segment_cloud(parse_point(args[0], "hausdorff.shape"),
                             parse_point(args[1], "hausdorff.shape"),
                             static_cast<int>(parse_integer(args[2], "hausdorff.shape")));
    }
    if (shape == "disc") {
        if (args.size() != 3)
            throw validation_error("hausdorff.shape: disc wants 'disc <center> <r> <per_axis>'");
        return disc_cloud(parse_point(args[0], "hausdorff.shape"),
                          parse_number(args[1], "hausdorff.shape"),
                          static_cast<int>(parse_integer(args[2], "hausdorff.shape")));
    }
    throw validation_error("hausdorff.shape: unknown shape '" + shape + "'");
}

struct StudyOutput {
    std::string csv;
    std::string summary;
};

void header(std::string& summary, const StudyConfig& cfg) {
    summary += "study: ";
    summary += to_string(cfg.kind);
    summary += "\n";
    if (!cfg.corpus_id.empty()) summary += "corpus: " + cfg.corpus_id + "\n";
    if (cfg.p > 0.0) summary += "p: " + format_double(cfg.p) + "\n";
    summary += "seed: " + std::to_string(cfg.seed) + "\n";
}

StudyOutput run_lp_point(const StudyConfig& cfg) {
    const Grid g = make_grid(cfg);
    const GridFunction f = sample(cfg.corpus_id, g);
    const RadiusSchedule sched = make_radius_schedule(cfg);

    StudyOutput out;
    out.csv = "point_index,r,deviation\n";
    header(out.summary, cfg);
    out.summary += "target: " + cfg.target + "\n";

    std::vector<PointClassification> rows(cfg.points.size());
    if (cfg.target == "gradient") {
        const VectorField grad = gradient_fd(f);
        parallel_for(cfg.points.size(), cfg.jobs, [&](std::size_t i) {
            rows[i] = classify_lp_point(grad, cfg.points[i], cfg.p, sched, cfg.classify);
        });
    } else {
        parallel_for(cfg.points.size(), cfg.jobs, [&](std::size_t i) {
            rows[i] = classify_lp_point(f, cfg.points[i], cfg.p, sched, cfg.classify);
        });
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& cls = rows[i];
        for (std::size_t j = 0; j < cls.radii.size(); ++j)
            out.csv += std::to_string(i) + "," + format_double(cls.radii[j]) + "," +
                       format_double(cls.deviations[j]) + "\n";
        out.summary += "point " + std::to_string(i) + ": x=" + point_str(cfg.points[i]) +
                       " verdict=" + std::string(to_string(cls.verdict)) +
                       " estimate=" + point_str(cls.representative) +
                       " |estimate|=" + format_double(euclidean_norm(cls.representative)) +
                       " converged=" + (cls.rep_converged ? "yes" : "no") +
                       " slope=" + format_double(cls.slope) + "\n";
    }
    return out;
}

StudyOutput run_refined_gradient(const StudyConfig& cfg) {
    const Grid g = make_grid(cfg);
    const GridFunction f = sample(cfg.corpus_id, g);
    const RadiusSchedule sched = make_radius_schedule(cfg);
    const RefinedGradientReport report = classify_refined_gradient(
        f, cfg.p, cfg.points, cfg.k, sched, cfg.classify, false, cfg.jobs);

    StudyOutput out;
    out.csv = "point_index,alpha,r,deviation\n";
    header(out.summary, cfg);
    out.summary += "k: " + std::to_string(cfg.k) + "\n";
    const std::size_t per_point = report.rows.size() / cfg.points.size();
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const auto& row = report.rows[i];
        const std::size_t pi = i / per_point;
        for (std::size_t j = 0; j < row.cls.radii.size(); ++j)
            out.csv += std::to_string(pi) + "," + orders_str(row.orders) + "," +
                       format_double(row.cls.radii[j]) + "," +
                       format_double(row.cls.deviations[j]) + "\n";
    }
    for (std::size_t i = 0; i < report.points.size(); ++i) {
        const auto& ps = report.points[i];
        out.summary += "point " + std::to_string(i) + ": x=" + point_str(ps.x) +
                       " verdict=" + std::string(to_string(ps.verdict)) +
                       " gradient=" + point_str(ps.gradient_estimate) + "\n";
    }
    out.summary += "failing_fraction: " + format_double(report.failing_fraction) + "\n";
    out.summary += "exceptional_count: " + std::to_string(report.exceptional.size()) + "\n";
    for (std::size_t idx : report.exceptional)
        out.summary += "exceptional: point " + std::to_string(idx) + " x=" +
                       point_str(cfg.points[idx]) + "\n";
    return out;
}

StudyOutput run_capacity(const StudyConfig& cfg) {
    StudyOutput out;
    out.csv = "level,h,energy,iterations,pg_norm\n";
    header(out.summary, cfg);

    const int base = cfg.capacity_base_nodes > 0 ? cfg.capacity_base_nodes : cfg.grid_nodes[0];
    std::vector<double> spacings, energies;
    for (int level = 0; level < cfg.capacity_levels; ++level) {
        const int nodes = (base - 1) * (1 << level) + 1;
        Grid g(cfg.grid_lower, cfg.grid_upper, std::vector<int>(cfg.dim, nodes));
        CondenserProblem prob{g, region_node_mask(g, *cfg.k_region, MaskKind::Closed, true),
                              region_node_mask(g, *cfg.omega_region, MaskKind::Open), cfg.p, -1.0};
        const CapacityEstimate est = p_capacity(prob, cfg.capacity_opts);
        spacings.push_back(g.max_spacing());
        energies.push_back(est.energy);
        out.csv += std::to_string(level) + "," + format_double(g.max_spacing()) + "," +
                   format_double(est.energy) + "," + std::to_string(est.iterations) + "," +
                   format_double(est.projected_gradient_norm) + "\n";
        out.summary += "level " + std::to_string(level) + ": h=" +
                       format_double(g.max_spacing()) + " energy=" + format_double(est.energy) +
                       " iterations=" + std::to_string(est.iterations) + "\n";
    }
    if (cfg.capacity_levels >= 2) {
        const NullClassification cls = classify_refinement(spacings, energies);
        out.summary += "verdict: " + std::string(to_string(cls.verdict)) + "\n";
        out.summary += "slope: " + format_double(cls.slope) + "\n";
        out.summary += std::string("stabilized: ") + (cls.stabilized ? "yes" : "no") + "\n";
    }
    return out;
}

StudyOutput run_hausdorff(const StudyConfig& cfg) {
    const PointCloud cloud = parse_cloud(cfg.shape_spec);
    const auto history =
        hausdorff_history(cloud, cfg.hausdorff_s, cfg.hausdorff_delta0, cfg.hausdorff_levels);

    StudyOutput out;
    out.csv = "level,delta,boxes,raw_value,value\n";
    header(out.summary, cfg);
    out.summary += "s: " + format_double(cfg.hausdorff_s) + "\n";
    for (std::size_t i = 0; i < history.size(); ++i) {
        const auto& est = history[i];
        out.csv += std::to_string(i) + "," + format_double(est.delta) + "," +
                   std::to_string(est.boxes.size()) + "," + format_double(est.raw_value) + "," +
                   format_double(est.value) + "\n";
        out.summary += "level " + std::to_string(i) + ": delta=" + format_double(est.delta) +
                       " value=" + format_double(est.value) + "\n";
    }
    out.summary += std::string("tends_to_zero: ") +
                   (history.back().value < 1e-6 ? "yes" : "no") + "\n";

    if (cfg.frostman_p) {
        FrostmanGrid fgrid{cfg.grid_lower, cfg.grid_upper, *cfg.omega_region,
                           cfg.capacity_base_nodes > 0 ? cfg.capacity_base_nodes : 17,
                           cfg.capacity_levels >= 2 ? cfg.capacity_levels : 4};
        const FrostmanReport rep =
            frostman_consistency(cloud, *cfg.frostman_p, cfg.dim, fgrid, cfg.hausdorff_delta0,
                                 cfg.hausdorff_levels, cfg.capacity_opts);
        out.summary +=
            "capacity_verdict: " + std::string(to_string(rep.capacity.verdict)) + "\n";
        out.summary += std::string("assertion_made: ") + (rep.assertion_made ? "yes" : "no") + "\n";
        out.summary +=
            std::string("assertion_holds: ") + (rep.assertion_holds ? "yes" : "no") + "\n";
    }
    return out;
}

StudyOutput run_diffquot(const StudyConfig& cfg) {
    const Grid g = make_grid(cfg);
    const GridFunction f = sample(cfg.corpus_id, g);
    const RadiusSchedule sched = make_radius_schedule(cfg);
    const auto ts = cfg.t_schedule.values();
    const QuotientOptions qopts{cfg.lattice_nodes, 2};

    StudyOutput out;
    out.csv = "point_index,t,total_error,value_part,grad_part\n";
    header(out.summary, cfg);

    std::vector<DiffQuotStudy> studies(cfg.points.size());
    parallel_for(cfg.points.size(), cfg.jobs, [&](std::size_t i) {
        studies[i] = diffquot_study(f, cfg.points[i], cfg.p, *cfg.study_region, ts, sched, qopts,
                                    cfg.convergence, cfg.classify.rep);
    });
    for (std::size_t i = 0; i < studies.size(); ++i) {
        const auto& st = studies[i];
        for (std::size_t j = 0; j < ts.size(); ++j)
            out.csv += std::to_string(i) + "," + format_double(ts[j]) + "," +
                       format_double(st.parts[j].total) + "," +
                       format_double(st.parts[j].value_part) + "," +
                       format_double(st.parts[j].grad_part) + "\n";
        out.summary += "point " + std::to_string(i) + ": x=" + point_str(cfg.points[i]) +
                       " verdict=" + std::string(to_string(st.report.verdict)) +
                       " slope=" + format_double(st.report.slope) +
                       " differential=" + point_str(st.differential.a) + "\n";
    }
    return out;
}

StudyOutput run_approxdiff(const StudyConfig& cfg) {
    const Grid g = make_grid(cfg);
    const GridFunction f = sample(cfg.corpus_id, g);
    const RadiusSchedule sched = make_radius_schedule(cfg);
    ApproxDiffOptions opts;
    opts.conv = cfg.convergence;
    opts.rep = cfg.classify.rep;

    StudyOutput out;
    out.csv = "point_index,r,residual\n";
    header(out.summary, cfg);

    std::vector<ApproxDifferential> fits(cfg.points.size());
    parallel_for(cfg.points.size(), cfg.jobs, [&](std::size_t i) {
        fits[i] = lp_approx_differential(f, cfg.points[i], cfg.p, sched, opts);
    });
    for (std::size_t i = 0; i < fits.size(); ++i) {
        const auto& fit = fits[i];
        for (std::size_t j = 0; j < fit.residuals.parameters.size(); ++j)
            out.csv += std::to_string(i) + "," + format_double(fit.residuals.parameters[j]) + "," +
                       format_double(fit.residuals.errors[j]) + "\n";
        out.summary += "point " + std::to_string(i) + ": x=" + point_str(cfg.points[i]) +
                       " verdict=" + std::string(to_string(fit.residuals.verdict)) +
                       " a_fit=" + point_str(fit.a_fit);
        if (fit.identity_checked)
            out.summary += " gradient_rep=" + point_str(fit.gradient_rep) +
                           " identity_gap=" + format_double(fit.identity_gap) +
                           std::string(" identity_holds=") + (fit.identity_holds ? "yes" : "no");
        out.summary += "\n";
    }
    return out;
}

StudyOutput run_taylor(const StudyConfig& cfg) {
    const Grid g = make_grid(cfg);
    const GridFunction f = sample(cfg.corpus_id, g);
    const RadiusSchedule sched = make_radius_schedule(cfg);
    const auto hs = cfg.h_schedule.values();
    const QuotientOptions qopts{cfg.lattice_nodes, std::max(2, cfg.k)};

    StudyOutput out;
    out.csv = "point_index,h,error\n";
    header(out.summary, cfg);
    out.summary += "k: " + std::to_string(cfg.k) + "\n";

    std::vector<RemainderStudy> studies(cfg.points.size());
    parallel_for(cfg.points.size(), cfg.jobs, [&](std::size_t i) {
        studies[i] = remainder_study(f, cfg.points[i], cfg.k, cfg.p, *cfg.study_region, hs, sched,
                                     qopts, cfg.convergence, cfg.classify.rep);
    });
    for (std::size_t i = 0; i < studies.size(); ++i) {
        const auto& st = studies[i];
        for (std::size_t j = 0; j < hs.size(); ++j)
            out.csv += std::to_string(i) + "," + format_double(hs[j]) + "," +
                       format_double(st.report.errors[j]) + "\n";
        out.summary += "point " + std::to_string(i) + ": x=" + point_str(cfg.points[i]) +
                       " verdict=" + std::string(to_string(st.report.verdict)) +
                       " slope=" + format_double(st.report.slope) + "\n";
        for (std::size_t c = 0; c < st.data.alphas.size(); ++c)
            out.summary += "  coeff alpha=" + orders_str(st.data.alphas[c].orders) + " value=" +
                           format_double(st.data.coefficients[c]) + " converged=" +
                           (st.data.converged[c] ? "yes" : "no") + "\n";
    }
    return out;
}

}  // namespace

StudyOutcome run_study(const StudyConfig& cfg) {
    validate_config(cfg);
    StudyOutput output;
    switch (cfg.kind) {
        case StudyKind::LpPoint: output = run_lp_point(cfg); break;
        case StudyKind::RefinedGradient: output = run_refined_gradient(cfg); break;
        case StudyKind::Capacity: output = run_capacity(cfg); break;
        case StudyKind::Hausdorff: output = run_hausdorff(cfg); break;
        case StudyKind::DiffQuot: output = run_diffquot(cfg); break;
        case StudyKind::ApproxDiff: output = run_approxdiff(cfg); break;
        case StudyKind::Taylor: output = run_taylor(cfg); break;
    }

    std::filesystem::create_directories(cfg.out_dir);
    StudyOutcome outcome;
    outcome.csv_path = cfg.out_dir / (cfg.out_name + ".csv");
    outcome.summary_path = cfg.out_dir / (cfg.out_name + ".summary.txt");
    // outputs were assembled in memory; write them whole so failures leave
    // no partial files
    {
        std::ofstream csv(outcome.csv_path, std::ios::binary | std::ios::trunc);
        csv << output.csv;
        if (!csv) {
            std::error_code ec;
            std::filesystem::remove(outcome.csv_path, ec);
            throw numeric_error("failed writing " + outcome.csv_path.string());
        }
    }
    {
        std::ofstream sum(outcome.summary_path, std::ios::binary | std::ios::trunc);
        sum << output.summary;
        if (!sum) {
            std::error_code ec;
            std::filesystem::remove(outcome.csv_path, ec);
            std::filesystem::remove(outcome.summary_path, ec);
            throw numeric_error("failed writing " + outcome.summary_path.string());
        }
    }
    return outcome;
}

}  // namespace sobolev
