#include "drinfeld/kassaei.hpp"

#include "drinfeld/errors.hpp"

#include <json.hpp>

#include <limits>
#include <set>

namespace drinfeld {

namespace {

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
    return a > std::numeric_limits<std::uint64_t>::max() - b ? std::numeric_limits<std::uint64_t>::max() : a + b;
}

std::string label_for(const CorrGraph& g, std::size_t to) { return g.bad(to, g.eps) ? "bad" : "good"; }

Rat field_rat(const nlohmann::json& n, const char* key, const std::string& where) {
    const auto& v = n.at(key);
    if (v.is_number_integer()) return Rat(v.get<std::int64_t>());
    if (!v.is_string()) throw PreconditionError(where + ": \"" + key + "\" must be a rational string");
    return parse_rat(v.get<std::string>());
}

}  // namespace

const char* region_name(Region r) {
    switch (r) {
        case Region::DegZero: return "deg-zero";
        case Region::Middle: return "middle";
        case Region::OrdinaryNbhd: return "ordinary-nbhd";
    }
    return "?";
}

std::size_t CorrGraph::index(const std::string& id) const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].id == id) return i;
    throw PreconditionError("unknown node \"" + id + "\"");
}

Region CorrGraph::region(std::size_t i) const {
    if (bad(i, eps)) return Region::DegZero;
    return nodes[i].deg == Rat(1) ? Region::OrdinaryNbhd : Region::Middle;
}

void validate_graph(const CorrGraph& g) {
    if (g.eps < Rat(0) || g.eps >= Rat(1)) throw PreconditionError("eps must lie in [0, 1)");
    std::set<std::string> ids;
    for (auto& n : g.nodes) {
        if (!ids.insert(n.id).second) throw PreconditionError("duplicate node \"" + n.id + "\"");
        if (n.deg < Rat(0) || n.deg > Rat(1)) throw PreconditionError("node " + n.id + ": degree " + to_string(n.deg) + " outside [0,1]");
        if (n.f_val < Rat(0)) throw PreconditionError("node " + n.id + ": section valuation must be >= 0");
    }
    for (auto& e : g.edges) {
        if (e.from >= g.nodes.size() || e.to >= g.nodes.size()) throw PreconditionError("edge endpoint out of range");
        const auto& a = g.nodes[e.from];
        const auto& b = g.nodes[e.to];
        if (b.deg < a.deg)
            throw PreconditionError("edge " + a.id + " -> " + b.id + " lowers the degree (" + to_string(a.deg) + " -> " + to_string(b.deg) + ")");
        if (!e.label.empty() && e.label != label_for(g, e.to))
            throw PreconditionError("edge " + a.id + " -> " + b.id + " labeled " + e.label + " but the target is " + label_for(g, e.to));
    }
}

CorrGraph parse_graph_json(const std::string& text, const Rat& eps) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what(), 0, e.byte);
    }
    if (!j.is_object() || !j.contains("nodes") || !j.at("nodes").is_array()) throw PreconditionError("graph needs a \"nodes\" array");
    CorrGraph g;
    g.eps = eps;
    for (auto& n : j.at("nodes")) {
        if (!n.is_object() || !n.contains("id") || !n.contains("deg")) throw PreconditionError("each node needs \"id\" and \"deg\"");
        CorrNode c;
        c.id = n.at("id").is_string() ? n.at("id").get<std::string>() : n.at("id").dump();
        c.deg = field_rat(n, "deg", "node " + c.id);
        c.f_val = n.contains("f") ? field_rat(n, "f", "node " + c.id) : Rat(0);
        g.nodes.push_back(std::move(c));
    }
    if (j.contains("edges")) {
        if (!j.at("edges").is_array()) throw PreconditionError("\"edges\" must be an array");
        for (auto& e : j.at("edges")) {
            if (!e.is_object() || !e.contains("from") || !e.contains("to")) throw PreconditionError("each edge needs \"from\" and \"to\"");
            auto id = [](const nlohmann::json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
            CorrEdge c;
            c.from = g.index(id(e.at("from")));
            c.to = g.index(id(e.at("to")));
            if (e.contains("label")) {
                if (!e.at("label").is_string()) throw PreconditionError("edge label must be a string");
                c.label = e.at("label").get<std::string>();
                if (c.label != "good" && c.label != "bad") throw PreconditionError("edge label must be good or bad, not " + c.label);
            }
            g.edges.push_back(std::move(c));
        }
    }
    validate_graph(g);
    for (auto& e : g.edges) e.label = label_for(g, e.to);
    return g;
}

std::string graph_to_json(const CorrGraph& g) {
    nlohmann::json j;
    j["nodes"] = nlohmann::json::array();
    for (auto& n : g.nodes) j["nodes"].push_back({{"id", n.id}, {"deg", to_string(n.deg)}, {"f", to_string(n.f_val)}});
    j["edges"] = nlohmann::json::array();
    for (auto& e : g.edges)
        j["edges"].push_back({{"from", g.nodes[e.from].id}, {"to", g.nodes[e.to].id}, {"label", e.label.empty() ? label_for(g, e.to) : e.label}});
    return j.dump();
}

CorrGraph build_graph(const std::vector<GraphSeed>& seeds, const Rat& eps, unsigned jobs) {
    CorrGraph g;
    g.eps = eps;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        const auto& s = seeds[i];
        const std::size_t y = g.nodes.size();
        g.nodes.push_back({"y" + std::to_string(i), deg_pi(line_piece(s.y.lines.at(s.H), s.y.phi.Q)), Rat(0)});
        for (auto& e : up_correspondence(s.y, s.H, jobs)) {
            g.nodes.push_back({"y" + std::to_string(i) + ".L" + std::to_string(e.L), e.deg, Rat(0)});
            g.edges.push_back({y, g.nodes.size() - 1, ""});
        }
    }
    validate_graph(g);
    for (auto& e : g.edges) e.label = label_for(g, e.to);
    return g;
}

CorrGraph bad_chain(int len, int good_exits) {
    if (len < 1) throw PreconditionError("chain length must be >= 1");
    if (good_exits < 0) throw PreconditionError("number of good exits must be >= 0");
    CorrGraph g;
    for (int i = 0; i < len; ++i) g.nodes.push_back({"b" + std::to_string(i), Rat(0), Rat(0)});
    for (int i = 0; i + 1 < len; ++i) g.edges.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(i + 1), "bad"});
    g.edges.push_back({static_cast<std::size_t>(len - 1), static_cast<std::size_t>(len - 1), "bad"});
    for (int i = 0; i < len; ++i)
        for (int x = 0; x < good_exits; ++x) {
            g.nodes.push_back({"g" + std::to_string(i) + "." + std::to_string(x), Rat(1), Rat(0)});
            g.edges.push_back({static_cast<std::size_t>(i), g.nodes.size() - 1, "good"});
        }
    validate_graph(g);
    return g;
}

Certificate convergence_certificate(int k, int r, const Rat& v_a) {
    Certificate c;
    c.margin = Rat(k - r + 1) - v_a;
    c.converges = c.margin > Rat(0);
    return c;
}

SeriesState kassaei_sum(const CorrGraph& g, const std::string& start, int k, const Rat& v_a, int j, int r, bool shrink) {
    if (j < 1) throw PreconditionError("number of terms must be >= 1");
    if (r < 1) throw PreconditionError("rank must be >= 1");
    validate_graph(g);
    const std::size_t y = g.index(start);
    const Rat step = Rat(r - 1) + v_a;
    SeriesState st;
    st.k = k;
    st.r = r;
    st.v_a = v_a;
    std::vector<std::vector<std::size_t>> out(g.nodes.size());
    for (auto& e : g.edges) out[e.from].push_back(e.to);
    // frontier: node -> (best valuation offset, path count) over all-bad paths so far
    std::map<std::size_t, std::pair<Rat, std::uint64_t>> front{{y, {Rat(0), 1}}};
    Rat eps = g.eps;
    for (int N = 1; N <= j; ++N) {
        SeriesTerm t;
        t.N = N;
        t.threshold = eps;
        std::map<std::size_t, std::pair<Rat, std::uint64_t>> next;
        for (auto& [u, vc] : front)
            for (auto x : out[u]) {
                const Rat base = vc.first - step;
                if (g.bad(x, eps)) {
                    const Rat v = base + Rat(k);
                    auto it = next.find(x);
                    if (it == next.end())
                        next.emplace(x, std::make_pair(v, vc.second));
                    else
                        it->second = {std::min(it->second.first, v), sat_add(it->second.second, vc.second)};
                    t.bad_paths = sat_add(t.bad_paths, vc.second);
                    t.tail_bound = inf_min(t.tail_bound, RatInf(v));
                } else {
                    t.term_bound = inf_min(t.term_bound, RatInf(base + g.nodes[x].f_val));
                    t.good_paths = sat_add(t.good_paths, vc.second);
                }
            }
        st.partial_bound = inf_min(st.partial_bound, t.term_bound);
        st.terms.push_back(t);
        front = std::move(next);
        if (front.empty()) {
            st.terminated = true;
            break;
        }
        if (shrink) eps = eps / Rat(2);
    }
    // ratio: constant increment of the tail bound over the last three steps
    const auto& T = st.terms;
    if (T.size() >= 3) {
        const auto& a = T[T.size() - 3].tail_bound;
        const auto& b = T[T.size() - 2].tail_bound;
        const auto& c = T[T.size() - 1].tail_bound;
        if (a && b && c && *c - *b == *b - *a) st.ratio = *c - *b;
    }
    st.decay_certified = st.terminated || (st.ratio && *st.ratio > Rat(0));
    return st;
}

RatInf min_degree_after(const CorrGraph& g, std::size_t start, int N) {
    if (start >= g.nodes.size()) throw PreconditionError("start node out of range");
    if (N < 0) throw PreconditionError("step count must be >= 0");
    std::set<std::size_t> cur{start};
    for (int s = 0; s < N; ++s) {
        std::set<std::size_t> nx;
        for (auto& e : g.edges)
            if (cur.count(e.from)) nx.insert(e.to);
        cur = std::move(nx);
    }
    RatInf best;
    for (auto i : cur) best = inf_min(best, RatInf(g.nodes[i].deg));
    return best;
}

RatInf min_increment(const CorrGraph& g, const Rat& t) {
    RatInf best;
    for (auto& e : g.edges) {
        const auto& a = g.nodes[e.from].deg;
        if (a >= t && a < Rat(1)) best = inf_min(best, RatInf(g.nodes[e.to].deg - a));
    }
    return best;
}

}  // namespace drinfeld
