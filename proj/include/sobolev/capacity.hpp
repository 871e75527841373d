#pragma once

#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "sobolev/grid.hpp"

namespace sobolev {

/// Condenser (K, Omega) on a grid: u is forced to 1 on K, to 0 off Omega,
/// and the p-Dirichlet energy of u is minimized over 0 <= u <= 1. delta
/// smooths the integrand to (|grad u|^2 + delta^2)^{p/2} during descent;
/// the reported energy always re-evaluates at delta = 0.
struct CondenserProblem {
    Grid grid;
    std::vector<std::uint8_t> in_k;
    std::vector<std::uint8_t> in_omega;
    double p = 2.0;
    double delta = -1.0;  // negative = default policy: h for p < 2, else 0

    double smoothing() const;
    /// K strictly inside Omega: no K node on the grid edge or adjacent to
    /// a node outside Omega. Omega must be nonempty; K may be empty.
    void validate() const;
};

struct CapacityOptions {
    double tol = 1e-7;      // sup-norm of the projected gradient density
    int max_iter = 50000;
    int jobs = 1;           // reserved; descent runs sequentially
};

struct CapacityEstimate {
    double energy = 0.0;  // delta = 0 energy at the minimizer
    GridFunction minimizer;
    int iterations = 0;
    double projected_gradient_norm = 0.0;
    std::vector<std::pair<double, double>> refinement_history;  // (h, energy)
};

/// Thrown when descent hits max_iter; carries the best iterate.
struct capacity_not_converged : numeric_error {
    capacity_not_converged(const std::string& msg, CapacityEstimate best_so_far)
        : numeric_error(msg), best(std::move(best_so_far)) {}
    CapacityEstimate best;
};

CapacityEstimate p_capacity(const CondenserProblem& prob, const CapacityOptions& opts = {});

/// Closed membership picks up nodes on the region boundary (compact K);
/// open membership drops them (open Omega, so boundary nodes carry the
/// zero constraint). With at_least_nearest, an empty result is replaced
/// by the node closest to the region's center (point-like sets).
enum class MaskKind { Closed, Open };
std::vector<std::uint8_t> region_node_mask(const Grid& g, const Region& region, MaskKind kind,
                                           bool at_least_nearest = false);

enum class NullVerdict { NullSuggested, PositiveSuggested };
std::string_view to_string(NullVerdict v);

struct NullClassification {
    NullVerdict verdict = NullVerdict::PositiveSuggested;
    std::vector<double> spacings;
    std::vector<double> energies;
    double slope = 0.0;      // d log(energy) / d log(1/h)
    bool stabilized = false; // last two energies within 10%
};

/// Verdict from a (spacing, energy) refinement trajectory: NullSuggested
/// when the energies decay with fitted slope below -0.2 in log(energy)
/// vs log(1/h); stabilized records agreement within 10% over the last
/// two levels.
NullClassification classify_refinement(std::vector<double> spacings,
                                       std::vector<double> energies);

/// Runs p_capacity for E against a fixed continuum Omega on grids refined
/// by factor 2 per level. NullSuggested when the energies decay with
/// fitted slope below -0.2 in log(energy) vs log(1/h).
NullClassification cap_null_classify(const Region& e_set, double p, const Point& box_lo,
                                     const Point& box_hi, const Region& omega, int base_nodes,
                                     int levels, const CapacityOptions& opts = {});

/// Same refinement study with a caller-supplied K mask per level.
using MaskBuilder = std::function<std::vector<std::uint8_t>(const Grid&)>;
NullClassification cap_null_classify(const MaskBuilder& k_builder, double p, const Point& box_lo,
                                     const Point& box_hi, const Region& omega, int base_nodes,
                                     int levels, const CapacityOptions& opts = {});

}  // namespace sobolev
