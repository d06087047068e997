#pragma once
#include "drinfeld/canonical.hpp"
#include "drinfeld/rational.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace drinfeld {

enum class Region { DegZero, Middle, OrdinaryNbhd };
const char* region_name(Region r);

struct CorrNode {
    std::string id;
    Rat deg;
    Rat f_val;  // valuation of the given section at the node; used on the good region
};

// y -> x for x in U(y)
struct CorrEdge {
    std::size_t from = 0, to = 0;
    std::string label;  // "good" / "bad" at the base threshold
};

struct CorrGraph {
    std::vector<CorrNode> nodes;
    std::vector<CorrEdge> edges;
    Rat eps;  // bad region: deg <= eps

    std::size_t index(const std::string& id) const;
    Region region(std::size_t i) const;
    bool bad(std::size_t i, const Rat& threshold) const { return nodes[i].deg <= threshold; }
};

// errors: degrees outside [0, 1], unknown or duplicate ids, an edge with deg decreasing,
// a label that disagrees with the threshold, eps outside [0, 1)
void validate_graph(const CorrGraph& g);

// {nodes: [{id, deg: "a/b", f?: "a/b"}], edges: [{from, to, label?}]}
CorrGraph parse_graph_json(const std::string& text, const Rat& eps = Rat(0));
std::string graph_to_json(const CorrGraph& g);

// One node per module (degree of its line H), plus its U-targets one step up.
struct GraphSeed {
    SplitRank2 y;
    std::size_t H = 0;
};
CorrGraph build_graph(const std::vector<GraphSeed>& seeds, const Rat& eps = Rat(0), unsigned jobs = 1);

// len nodes of degree 0 in a row, the last one looping to itself; optional good exits
// of degree 1 from every chain node
CorrGraph bad_chain(int len, int good_exits = 0);

struct Certificate {
    bool converges = false;
    Rat margin;  // k - r + 1 - v_a
};
Certificate convergence_certificate(int k, int r, const Rat& v_a);

struct SeriesTerm {
    int N = 0;
    Rat threshold;        // eps_N used for the bad region at step N
    RatInf term_bound;    // valuation bound for the N-th summand; inf when there are no good paths
    RatInf tail_bound;    // valuation bound for the part still carried by bad paths
    std::uint64_t good_paths = 0, bad_paths = 0;  // saturating
};
struct SeriesState {
    int k = 0, r = 2;
    Rat v_a;
    std::vector<SeriesTerm> terms;
    RatInf partial_bound;   // valuation bound for f_j
    bool terminated = false;  // no bad paths remain
    std::optional<Rat> ratio;  // tail-bound increment once it is constant over the last steps
    bool decay_certified = false;
};
// Partial sums f_j(y) = sum_{N <= j} (a pi^{r-1})^{-N} sum_{x in U^{N,good}(y)} f(x), tracked by valuation.
// Each step costs r - 1 + v_a; each landing in the bad region gains k.
// shrink: halve the bad threshold at each step (eps_N = eps / 2^{N-1}).
// errors: j < 1, r < 1, negative f valuations, unknown start
SeriesState kassaei_sum(const CorrGraph& g, const std::string& start, int k, const Rat& v_a, int j, int r = 2, bool shrink = false);

// lowest degree reachable in exactly N steps from start (nullopt if no such path)
RatInf min_degree_after(const CorrGraph& g, std::size_t start, int N);
// smallest deg increment along edges whose source lies in [t, 1)
RatInf min_increment(const CorrGraph& g, const Rat& t);

}  // namespace drinfeld
