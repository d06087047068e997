#include "drinfeld/canonical.hpp"
#include "drinfeld/errors.hpp"
#include "drinfeld/kassaei.hpp"
#include "drinfeld/slopes.hpp"
#include "drinfeld/strata.hpp"
#include "drinfeld/version.hpp"
#include "drinfeld/weights.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <random>
#include <sstream>

using namespace drinfeld;
using nlohmann::json;

namespace {

// selftest failures
constexpr int kSelftestFailed = 4;

struct Table {
    std::vector<std::string> cols;
    std::vector<std::vector<json>> rows;
};

std::string cell(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

void emit(const Table& t, const std::string& format, const json& extra = json::object()) {
    if (format == "json") {
        json out = extra;
        json rows = json::array();
        for (auto& r : t.rows) {
            json o;
            for (std::size_t i = 0; i < t.cols.size(); ++i) o[t.cols[i]] = r[i];
            rows.push_back(o);
        }
        out["rows"] = rows;
        std::cout << out.dump(2) << "\n";
        return;
    }
    for (std::size_t i = 0; i < t.cols.size(); ++i) std::cout << (i ? "\t" : "") << t.cols[i];
    std::cout << "\n";
    for (auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) std::cout << (i ? "\t" : "") << cell(r[i]);
        std::cout << "\n";
    }
}

void emit_object(const json& o, const std::string& format) {
    if (format == "json") {
        std::cout << o.dump(2) << "\n";
        return;
    }
    std::cout << "key\tvalue\n";
    for (auto& [k, v] : o.items()) std::cout << k << "\t" << cell(v) << "\n";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PreconditionError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json rat_json(const RatInf& r) { return to_string(r); }

UMatrix operator_matrix(const std::string& op, int k, std::uint64_t q) {
    return op == "T" ? t_matrix_level_one(k, q) : u_matrix(k, q);
}

void add_format(CLI::App* sub, std::string& format) {
    sub->add_option("--format", format, "tsv or json")->check(CLI::IsMember({"tsv", "json"}))->capture_default_str();
}

struct Check {
    std::string name;
    std::function<bool()> run;
};

int selftest(std::uint64_t seed) {
    std::vector<Check> checks;
    checks.push_back({"census q=2 r=2 e=3", [] {
                          auto c = strata_census(2, 2, "T", 3);
                          return c.rows.size() == 2 && c.rows[0].count == 49 && c.rows[1].count == 7 && c.hasse_mismatch == 0;
                      }});
    checks.push_back({"T = U mod pi, k <= 30", [] {
                          for (std::uint64_t q : {2u, 3u})
                              for (int k = 2; k <= 30; ++k) {
                                  auto U = u_matrix(k, q);
                                  auto T = t_matrix_level_one(k, q);
                                  for (int i = 0; i < U.dim(); ++i)
                                      for (int j = 0; j < U.dim(); ++j) {
                                          auto d = T.M[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
                                                   U.M[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                                          if (d.is_zero()) continue;
                                          // a monomial in T of positive degree
                                          if (d.den().deg() != 0 || d.num().coeff(0) != 0) return false;
                                      }
                              }
                          return true;
                      }});
    checks.push_back({"characteristic series a_0 = 1", [] {
                          for (int k = 2; k <= 20; ++k) {
                              auto U = u_matrix(k, 3);
                              auto cs = char_series(localize_matrix(U, APoly::T(U.F.get()), 20));
                              if (!(cs.a[0] - LocalElem::one(cs.a[0].ring())).is_zero()) return false;
                          }
                          return true;
                      }});
    checks.push_back({"Weierstrass split of (1 - uX)(1 - pi X)", [] {
                          auto R = make_local_ring(FieldCtx::make(3, 1), 1, 24);
                          const LocalRing* r = R.get();
                          auto pi = LocalElem::pi_pow(r, 1);
                          auto u = LocalElem::constant(r, 2) + pi;
                          auto F = poly_mul({LocalElem::one(r), -u}, {LocalElem::one(r), -pi});
                          for (auto& x : F) x = x.truncate(24);
                          auto w = weierstrass_factor(CharSeries{F, 2, R}, Rat(1, 2));
                          return w.Q.size() == 2 && (w.Q[1] + u).is_zero() && w.residual >= Rat(22);
                      }});
    checks.push_back({"Kassaei ratio on a bad chain", [] {
                          auto s = kassaei_sum(bad_chain(2), "b0", 5, Rat(1), 8);
                          return s.ratio && *s.ratio == Rat(3) && s.decay_certified;
                      }});
    checks.push_back({"Mahler embedding of 1 + pi", [] {
                          auto R = make_local_ring(FieldCtx::make(3, 1), 1, 40);
                          const LocalRing* r = R.get();
                          auto g = LocalElem::one(r) + LocalElem::pi_pow(r, 1);
                          IwasawaElem x;
                          x.terms.push_back({{1}, LocalElem::one(r)});
                          auto f = mahler_embed(x, {LocalElem::pi_pow(r, 1)}, 24);
                          for (std::uint64_t k = 0; k <= 20; ++k)
                              if (!(eval_weight(f, k) - g.pow(static_cast<long long>(k))).is_zero()) return false;
                          return true;
                      }});
    checks.push_back({"ordinary canonical line has degree 1", [seed] {
                          const int E = 24, N = 12 * E;
                          auto R = make_local_ring(FieldCtx::make(3, 1), E, N);
                          std::mt19937_64 rng(seed);
                          auto elem = [&](int v) {
                              std::vector<std::uint32_t> c(static_cast<std::size_t>(N - v));
                              for (auto& x : c) x = static_cast<std::uint32_t>(rng() % 3);
                              c[0] = 1 + static_cast<std::uint32_t>(rng() % 2);
                              return LocalElem(R.get(), v, c, N);
                          };
                          auto y = make_split_rank2(3, 1, R, elem(E / 2), elem(0));
                          auto rep = deg_dynamics_check(y, canonical_line(y));
                          return rep.deg_y == Rat(1) && rep.monotone && rep.classification_ok;
                      }});
    bool ok = true;
    for (auto& c : checks) {
        bool pass = false;
        std::string why;
        try {
            pass = c.run();
        } catch (const std::exception& e) {
            why = std::string(" (") + e.what() + ")";
        }
        std::cout << (pass ? "PASS" : "FAIL") << "\t" << c.name << why << "\n";
        ok = ok && pass;
    }
    return ok ? 0 : kSelftestFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Drinfeld module toolkit: strata, canonical subgroups, weights, U slopes, Kassaei bounds"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    std::string manifest_path;
    app.add_option("--manifest", manifest_path, "write a JSON run manifest to this file");

    std::string format = "tsv";
    std::string obj_format = "json";  // for commands whose natural output is one object
    unsigned jobs = 1;
    int prec = 20;
    std::uint64_t seed = 1;
    std::function<int()> action;

    // strata-census
    std::uint32_t c_q = 2, c_r = 2, c_e = 1;
    std::string c_prime = "T";
    auto* census = app.add_subcommand("strata-census", "count modules per height stratum over F_{q^e}");
    census->add_option("--q", c_q)->required();
    census->add_option("--r", c_r)->required();
    census->add_option("--prime", c_prime)->capture_default_str();
    census->add_option("--ext", c_e)->required();
    census->add_option("--jobs", jobs)->capture_default_str();
    add_format(census, format);
    census->callback([&] {
        action = [&] {
            auto c = strata_census(c_q, c_r, c_prime, c_e, jobs);
            Table t{{"h", "count", "exponent_estimate", "l_w"}, {}};
            for (auto& row : c.rows) {
                t.rows.push_back({row.h, row.count, std::round(row.exponent_estimate * 1e6) / 1e6, row.l_w});
            }
            emit(t, format, {{"q", c.q}, {"r", c.r}, {"ext", c.e}, {"total", c.total}, {"hasse_mismatch", c.hasse_mismatch}});
            return 0;
        };
    });

    // slopes
    std::uint64_t s_q = 3;
    int s_k = 2;
    std::string s_op = "U", s_matrix;
    auto* slopes = app.add_subcommand("slopes", "Newton slopes of the characteristic series of U (or T)");
    slopes->add_option("--q", s_q);
    slopes->add_option("--k", s_k);
    slopes->add_option("--prec", prec)->capture_default_str();
    slopes->add_option("--operator", s_op)->check(CLI::IsMember({"U", "T"}))->capture_default_str();
    slopes->add_option("--matrix", s_matrix, "matrix file (header q= k= dim=) instead of the built-in model");
    add_format(slopes, format);
    slopes->callback([&] {
        action = [&] {
            UMatrix M;
            if (!s_matrix.empty()) {
                M = ingest_matrix(read_file(s_matrix));
            } else {
                if (slopes->count("--q") == 0 || slopes->count("--k") == 0) throw PreconditionError("--q and --k are required without --matrix");
                M = operator_matrix(s_op, s_k, s_q);
            }
            auto st = slope_table(char_series(localize_matrix(M, APoly::T(M.F.get()), prec)), M.k);
            Table t{{"slope", "multiplicity", "classical"}, {}};
            for (auto& r : st.rows) t.rows.push_back({rat_json(r.slope), r.multiplicity, r.classical ? 1 : 0});
            emit(t, format, {{"q", M.q}, {"k", M.k}, {"dim", M.dim()}, {"prec", prec}});
            return 0;
        };
    });

    // gm
    std::uint64_t g_q = 3;
    int g_k = 2, g_kp = 2, g_terms = -1;
    std::string g_op = "U";
    auto* gm = app.add_subcommand("gm", "valuations of a_n(k) - a_n(k') for congruent weights");
    gm->add_option("--q", g_q)->required();
    gm->add_option("--k", g_k)->required();
    gm->add_option("--kprime", g_kp)->required();
    gm->add_option("--prec", prec)->capture_default_str();
    gm->add_option("--terms", g_terms, "number of coefficients (default: the larger dimension)");
    gm->add_option("--operator", g_op)->check(CLI::IsMember({"U", "T"}))->capture_default_str();
    add_format(gm, format);
    gm->callback([&] {
        action = [&] {
            const int N = g_terms >= 0 ? g_terms : std::max(g_k, g_kp) - 1;
            auto scan = gm_scan(g_k, g_kp, g_q, N, prec, g_op == "T");
            Table t{{"n", "valuation", "lower_bound"}, {}};
            for (auto& e : scan) t.rows.push_back({e.n, rat_json(e.val), e.lower_bound ? 1 : 0});
            emit(t, format, {{"q", g_q}, {"k", g_k}, {"kprime", g_kp}, {"prec", prec}});
            return 0;
        };
    });

    // vn
    std::uint64_t v_q = 3;
    int v_kmin = 2, v_kmax = 2, v_step = 1;
    std::string v_cut, v_op = "U";
    auto* vn = app.add_subcommand("vn", "n-distinguished index of the characteristic series at a cut, per weight");
    vn->add_option("--q", v_q)->required();
    vn->add_option("--kmin", v_kmin)->required();
    vn->add_option("--kmax", v_kmax)->required();
    vn->add_option("--step", v_step)->capture_default_str();
    vn->add_option("--cut", v_cut)->required();
    vn->add_option("--prec", prec)->capture_default_str();
    vn->add_option("--operator", v_op)->check(CLI::IsMember({"U", "T"}))->capture_default_str();
    vn->add_option("--jobs", jobs)->capture_default_str();
    add_format(vn, format);
    vn->callback([&] {
        action = [&] {
            if (v_kmin < 2 || v_kmax < v_kmin || v_step < 1) throw PreconditionError("need 2 <= kmin <= kmax and step >= 1");
            const Rat cut = parse_rat(v_cut);
            std::vector<int> ks;
            for (int k = v_kmin; k <= v_kmax; k += v_step) ks.push_back(k);
            std::map<int, CharSeries> samples;
            auto series = [&](int k) {
                auto M = operator_matrix(v_op, k, v_q);
                return char_series(localize_matrix(M, APoly::T(M.F.get()), prec));
            };
            for (std::size_t i = 0; i < ks.size(); i += std::max(1u, jobs)) {
                std::vector<std::future<CharSeries>> fs;
                for (std::size_t j = i; j < std::min(ks.size(), i + std::max(1u, jobs)); ++j)
                    fs.push_back(std::async(std::launch::async, series, ks[j]));
                for (std::size_t j = 0; j < fs.size(); ++j) samples.emplace(ks[i + j], fs[j].get());
            }
            Table t{{"k", "n", "tie", "region"}, {}};
            for (auto& r : vn_regions(samples, cut)) t.rows.push_back({r.k, r.n, r.tie ? 1 : 0, r.region});
            emit(t, format, {{"q", v_q}, {"cut", to_string(cut)}, {"prec", prec}});
            return 0;
        };
    });

    // canonical
    std::string m_path;
    int echelon = 1;
    auto* canon = app.add_subcommand("canonical", "canonical subgroup test, kernel, degree and HTT exponent");
    canon->add_option("--module", m_path)->required();
    canon->add_option("--prec", prec)->capture_default_str();
    canon->add_option("--echelon", echelon)->capture_default_str();
    canon->add_option("--format", obj_format)->check(CLI::IsMember({"tsv", "json"}))->capture_default_str();
    canon->callback([&] {
        action = [&] {
            if (echelon < 1) throw PreconditionError("echelon must be >= 1");
            auto in = parse_local_module_json(read_file(m_path), prec);
            auto rep = can_sub_exists(in.phi, echelon);
            json o;
            o["exists"] = rep.exists;
            o["sufficient"] = rep.sufficient;
            o["v_hasse"] = rat_json(rep.hasse_chain.empty() ? v_hasse(in.phi) : rep.hasse_chain.front());
            json chain = json::array();
            for (auto& v : rep.hasse_chain) chain.push_back(rat_json(v));
            o["hasse_chain"] = chain;
            if (rep.exists) {
                KernelCertificate cert;
                auto K = can_sub_kernel(in.phi, &cert);
                json coeffs = json::array();
                for (auto& c : K.ell.coeffs()) coeffs.push_back(local_to_string(c));
                o["kernel_coeffs"] = coeffs;
                o["deg"] = to_string(deg_pi(K));
                o["htt_w"] = to_string(htt_exponent(in.phi));
                o["residual"] = to_string(cert.residual);
            } else {
                o["kernel_coeffs"] = nullptr;
                o["deg"] = nullptr;
                o["htt_w"] = nullptr;
            }
            emit_object(o, obj_format);
            return 0;
        };
    });

    // degree-dynamics
    std::string d_H = "auto";
    auto* dyn = app.add_subcommand("degree-dynamics", "degrees of the U-targets of a split rank-2 module");
    dyn->add_option("--module", m_path)->required();
    dyn->add_option("--H", d_H, "line index or auto (the canonical line)")->capture_default_str();
    dyn->add_option("--prec", prec)->capture_default_str();
    dyn->add_option("--jobs", jobs)->capture_default_str();
    add_format(dyn, format);
    dyn->callback([&] {
        action = [&] {
            auto in = parse_local_module_json(read_file(m_path), prec);
            if (!in.split) throw PreconditionError("degree dynamics needs a module given by a torsion basis");
            std::size_t H = 0;
            if (d_H == "auto") {
                H = canonical_line(*in.split);
            } else {
                try {
                    H = static_cast<std::size_t>(std::stoul(d_H));
                } catch (const std::exception&) {
                    throw PreconditionError("--H must be a line index or auto");
                }
                if (H >= in.split->lines.size()) throw PreconditionError("--H out of range");
            }
            auto rep = deg_dynamics_check(*in.split, H, jobs);
            Table t{{"x", "deg"}, {}};
            for (auto& [L, d] : rep.degs) t.rows.push_back({L, to_string(d)});
            emit(t, format,
                 {{"H", H},
                  {"deg_y", to_string(rep.deg_y)},
                  {"monotone", rep.monotone},
                  {"classification_ok", rep.classification_ok},
                  {"equalities", rep.equalities},
                  {"min_increment", rat_json(rep.min_increment)}});
            return 0;
        };
    });

    // weights
    std::string w_expr;
    int w_terms = 16, w_div = 0;
    auto* weights = app.add_subcommand("weights", "Mahler expansions on weight space");
    weights->require_subcommand(1);
    auto* mahler = weights->add_subcommand("mahler", "Mahler coefficients of an Iwasawa algebra element");
    mahler->add_option("--expr", w_expr)->required();
    mahler->add_option("--prec", prec)->capture_default_str();
    mahler->add_option("--terms", w_terms, "highest Mahler index J")->capture_default_str();
    add_format(mahler, format);
    mahler->callback([&] {
        action = [&] {
            auto ex = parse_weight_expr(read_file(w_expr), prec);
            auto f = mahler_embed(ex.x, ex.gens, w_terms);
            Table t{{"j", "coeff", "valuation"}, {}};
            for (std::size_t j = 0; j < f.a.size(); ++j)
                t.rows.push_back({j, f.a[j].to_string(), f.a[j].val_known() ? rat_json(f.a[j].vpi()) : json(">=" + to_string(f.a[j].vpi_lb()))});
            emit(t, format, {{"tail", rat_json(f.tail)}, {"gauss_valuation", rat_json(gauss_valuation(f))}});
            return 0;
        };
    });
    auto* lplus = weights->add_subcommand("lambda-plus", "membership of x / pi^k in the integral model");
    lplus->add_option("--expr", w_expr)->required();
    lplus->add_option("--div", w_div, "k in pi^k")->capture_default_str();
    lplus->add_option("--prec", prec)->capture_default_str();
    lplus->add_option("--terms", w_terms)->capture_default_str();
    lplus->add_option("--format", obj_format)->check(CLI::IsMember({"tsv", "json"}))->capture_default_str();
    lplus->callback([&] {
        action = [&] {
            if (w_div < 0) throw PreconditionError("--div must be >= 0");
            auto ex = parse_weight_expr(read_file(w_expr), prec);
            auto f = div_pi_pow(mahler_embed(ex.x, ex.gens, w_terms), w_div);
            emit_object({{"member", lambda_plus_member(f)}, {"valuation", rat_json(gauss_valuation(f))}, {"div", w_div}}, obj_format);
            return 0;
        };
    });

    // kassaei
    std::string k_graph, k_slope = "0", k_start, k_eps = "0";
    int k_k = 2, k_r = 2, k_terms = 10;
    bool k_shrink = false;
    auto* kas = app.add_subcommand("kassaei", "valuation bounds for the Kassaei series on a correspondence graph");
    kas->add_option("--graph", k_graph)->required();
    kas->add_option("--k", k_k)->required();
    kas->add_option("--slope", k_slope, "v(a_pi)")->capture_default_str();
    kas->add_option("--terms", k_terms)->capture_default_str();
    kas->add_option("--r", k_r)->capture_default_str();
    kas->add_option("--start", k_start, "start node (default: the first)");
    kas->add_option("--eps", k_eps, "bad region deg <= eps")->capture_default_str();
    kas->add_flag("--shrink", k_shrink, "halve eps at each step");
    add_format(kas, format);
    kas->callback([&] {
        action = [&] {
            auto g = parse_graph_json(read_file(k_graph), parse_rat(k_eps));
            if (g.nodes.empty()) throw PreconditionError("graph has no nodes");
            const Rat va = parse_rat(k_slope);
            auto s = kassaei_sum(g, k_start.empty() ? g.nodes.front().id : k_start, k_k, va, k_terms, k_r, k_shrink);
            auto cert = convergence_certificate(k_k, k_r, va);
            Table t{{"N", "eps", "term_bound", "tail_bound", "good_paths", "bad_paths"}, {}};
            for (auto& x : s.terms)
                t.rows.push_back({x.N, to_string(x.threshold), rat_json(x.term_bound), rat_json(x.tail_bound), x.good_paths, x.bad_paths});
            emit(t, format,
                 {{"k", k_k},
                  {"r", k_r},
                  {"slope", to_string(va)},
                  {"certified", cert.converges},
                  {"margin", to_string(cert.margin)},
                  {"terminated", s.terminated},
                  {"measured_ratio", s.ratio ? json(to_string(*s.ratio)) : json(nullptr)},
                  {"decay_certified", s.decay_certified},
                  {"partial_bound", rat_json(s.partial_bound)}});
            return 0;
        };
    });

    auto* self = app.add_subcommand("selftest", "run the built-in invariant checks");
    self->add_option("--seed", seed)->capture_default_str();
    self->callback([&] { action = [&] { return selftest(seed); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    const auto t0 = std::chrono::steady_clock::now();
    int code = 0;
    try {
        code = action();
    } catch (const PrecisionError& e) {
        std::cerr << "precision error: " << e.what() << "\n";
        code = 3;
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        code = 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        code = 2;
    }
    if (!manifest_path.empty()) {
        json m;
        std::string command;
        json params = json::object();
        for (CLI::App* sub = &app; sub;) {
            auto subs = sub->get_subcommands();
            if (subs.empty()) break;
            sub = subs.front();
            command += (command.empty() ? "" : " ") + sub->get_name();
            for (auto* opt : sub->get_options())
                if (opt->count() && !opt->get_lnames().empty()) {
                    auto res = opt->results();
                    params[opt->get_lnames().front()] = res.size() == 1 ? json(res.front()) : json(res);
                }
        }
        m["command"] = command;
        m["params"] = params;
        m["version"] = kVersion;
        m["prec"] = prec;
        m["seed"] = seed;
        m["exit_code"] = code;
        m["elapsed_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        std::ofstream out(manifest_path);
        if (!out) {
            std::cerr << "error: cannot write manifest " << manifest_path << "\n";
            return code ? code : 2;
        }
        out << m.dump(2) << "\n";
    }
    return code;
}
