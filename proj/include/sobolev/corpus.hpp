#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sobolev/grid.hpp"

namespace sobolev {

/// Function-space membership tags used for corpus annotations.
enum class Space { W1, W2, RW1, RW2 };
std::string_view to_string(Space s);

struct MembershipClaim {
    Space space;
    double p;
    bool belongs;
};

/// An analytic test function with known smoothness, membership claims per
/// (space, p), and the points where the fine properties fail. Claims are
/// inputs under test, not trusted facts: the suites assert classifier
/// output against them, so a wrong annotation fails loudly.
struct CorpusEntry {
    std::string id;
    std::vector<int> dims;  // supported dimensions
    std::string smoothness;
    std::function<double(const Point&)> value;
    std::function<Point(const Point&)> gradient;  // empty when no analytic gradient
    std::vector<MembershipClaim> memberships;
    std::function<std::vector<Point>(int dim)> exceptional_points;

    bool supports_dim(int dim) const;
    std::optional<bool> membership(Space s, double p) const;
    std::vector<Point> exceptional(int dim) const;
};

const CorpusEntry& corpus_get(const std::string& id);
std::vector<std::string> corpus_ids();

/// Claims must be mutually consistent (e.g. belonging to W2 forces
/// belonging to RW1 at the same p).
bool annotations_consistent(const CorpusEntry& entry, std::string* why = nullptr);

/// Exact analytic samples of the corpus function on the grid nodes.
GridFunction sample(const std::string& id, const Grid& g);
/// Analytic gradient samples; lookup_error when the entry has none.
VectorField sample_gradient(const std::string& id, const Grid& g);

}  // namespace sobolev
