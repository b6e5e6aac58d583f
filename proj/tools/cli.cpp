#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <functional>
#include <memory>
#include <new>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "quasitile.hpp"
#include "quasitile/io.hpp"
#include "quasitile/report.hpp"
#include "quasitile/verify.hpp"

namespace quasitile::cli {
namespace {

using io::json;

// ---------------------------------------------------------------------------
// Argument parsing helpers
// ---------------------------------------------------------------------------

struct Common {
  std::string group = "z2";
  std::string out;
  std::uint64_t seed = 1;
  CLI::Option* group_opt = nullptr;
  CLI::Option* seed_opt = nullptr;

  bool group_given() const { return group_opt && group_opt->count() > 0; }
  GroupSpec resolve_group() const { return GroupSpec::parse(group); }
};

struct Action {
  CLI::App* app;
  std::function<void(std::ostream&)> fn;
};

bool is_count(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char ch) { return ch >= '0' && ch <= '9'; });
}

std::int64_t parse_count(const std::string& s, const std::string& what) {
  if (!is_count(s) || s.size() > 12) throw DomainError(what + " must be a positive integer");
  const std::int64_t n = std::stoll(s);
  if (n < 1) throw DomainError(what + " must be a positive integer");
  return n;
}

/// Inline JSON, or "@path" to read it from a file.
json load_arg(const std::string& s, const std::string& what) {
  if (!s.empty() && s[0] == '@') return io::load_json(s.substr(1));
  return io::parse_json(s, what);
}

/// JSON files may be named with or without a leading '@'.
json load_file_arg(const std::string& s) { return io::load_json(!s.empty() && s[0] == '@' ? s.substr(1) : s); }

/// "cross" (e and the generators with their inverses), "e", N (the cube [0,N)^d),
/// inline JSON or @file.
FiniteSubset parse_subset(const GroupSpec& G, const std::string& s, const std::string& what) {
  if (s == "cross") return verify::generator_cross(G);
  if (s == "e") return FiniteSubset::singleton(G, identity(G));
  if (is_count(s)) return FiniteSubset::cube(G, parse_count(s, what));
  return io::subset_from_json(G, load_arg(s, what));
}

GroupElement parse_element(const GroupSpec& G, const std::string& s, const std::string& what) {
  return io::element_from_json(G, load_arg(s, what));
}

Rational parse_rational(const std::string& s, const std::string& what) {
  try {
    return Rational::parse(s);
  } catch (const DomainError& e) {
    throw DomainError(what + ": " + e.what());
  }
}

/// N (the cube [0,N)^d in G), or a window/subset as JSON. A window object that names its
/// own group fixes G unless --group says otherwise.
std::shared_ptr<const Window> parse_window(GroupSpec& G, const Common& c, const std::string& s) {
  if (is_count(s)) return std::make_shared<const Window>(Window::cube(G, parse_count(s, "--window")));
  const json j = load_arg(s, "--window");
  if (j.is_object() && j.contains("group")) {
    auto W = io::window_from_json(j);
    if (c.group_given() && !(W->group() == G))
      throw DomainError("window group " + W->group().name() + " differs from --group " + G.name());
    G = W->group();
    return W;
  }
  return std::make_shared<const Window>(io::subset_from_json(G, j));
}

/// Comma-separated cube sides ("4,8") or a JSON array of subsets.
std::vector<FiniteSubset> parse_shapes(const GroupSpec& G, const std::string& s) {
  std::vector<FiniteSubset> shapes;
  if (!s.empty() && s.find_first_not_of("0123456789,") == std::string::npos) {
    std::stringstream ss(s);
    for (std::string part; std::getline(ss, part, ',');) shapes.push_back(FiniteSubset::cube(G, parse_count(part, "--shapes")));
    return shapes;
  }
  const json j = load_arg(s, "--shapes");
  if (!j.is_array()) throw DomainError("--shapes must be a list of sides or a JSON array of subsets");
  for (const auto& e : j) shapes.push_back(e.is_number_integer() ? FiniteSubset::cube(G, e.get<std::int64_t>()) : io::subset_from_json(G, e));
  return shapes;
}

json config(const std::string& command, const GroupSpec& G) { return {{"command", command}, {"group", G.name()}}; }

void emit(const Common& c, json report, std::ostream& out) {
  const std::string text = report.dump(2) + "\n";
  if (c.out.empty())
    out << text;
  else
    io::write_file(c.out, text);
}

void emit_text(const Common& c, const std::string& text, std::ostream& out) {
  if (c.out.empty())
    out << text;
  else
    io::write_file(c.out, text);
}

json with_config(json report, json cfg) {
  report["config"] = std::move(cfg);
  return report;
}

// ---------------------------------------------------------------------------
// group
// ---------------------------------------------------------------------------

void add_group(CLI::App& app, Common& c, std::vector<Action>& actions) {
  struct Args {
    std::string op, a, b, left, right, set, by, side = "right";
  };
  auto x = std::make_shared<Args>();
  auto* sub = app.add_subcommand("group", "Group arithmetic and finite-subset products");
  sub->add_option("--op", x->op, "mul | inv | identity | product | translate")
      ->required()
      ->check(CLI::IsMember({"mul", "inv", "identity", "product", "translate"}));
  sub->add_option("--a", x->a, "first element (JSON array)");
  sub->add_option("--b", x->b, "second element (JSON array)");
  sub->add_option("--left", x->left, "left factor of a set product");
  sub->add_option("--right", x->right, "right factor of a set product");
  sub->add_option("--set", x->set, "set to translate");
  sub->add_option("--by", x->by, "translating element");
  sub->add_option("--side", x->side, "left | right")->check(CLI::IsMember({"left", "right"}))->capture_default_str();
  actions.push_back({sub, [x, &c](std::ostream& out) {
                       const GroupSpec G = c.resolve_group();
                       json cfg = config("group", G);
                       cfg["op"] = x->op;
                       json rep;
                       auto need = [](const std::string& v, const char* name) {
                         if (v.empty()) throw DomainError(std::string("--op needs ") + name);
                         return v;
                       };
                       if (x->op == "mul") {
                         const GroupElement a = parse_element(G, need(x->a, "--a"), "--a");
                         const GroupElement b = parse_element(G, need(x->b, "--b"), "--b");
                         cfg["a"] = io::to_json(a);
                         cfg["b"] = io::to_json(b);
                         rep["result"] = io::to_json(multiply(G, a, b));
                       } else if (x->op == "inv") {
                         const GroupElement a = parse_element(G, need(x->a, "--a"), "--a");
                         cfg["a"] = io::to_json(a);
                         rep["result"] = io::to_json(inverse(G, a));
                       } else if (x->op == "identity") {
                         rep["result"] = io::to_json(identity(G));
                       } else if (x->op == "product") {
                         const FiniteSubset L = parse_subset(G, need(x->left, "--left"), "--left");
                         const FiniteSubset R = parse_subset(G, need(x->right, "--right"), "--right");
                         cfg["left"] = io::to_json(L);
                         cfg["right"] = io::to_json(R);
                         const FiniteSubset P = set_product(L, R);
                         rep["result"] = io::to_json(P);
                         rep["size"] = P.ssize();
                       } else {
                         const FiniteSubset S = parse_subset(G, need(x->set, "--set"), "--set");
                         const GroupElement g = parse_element(G, need(x->by, "--by"), "--by");
                         cfg["set"] = io::to_json(S);
                         cfg["by"] = io::to_json(g);
                         cfg["side"] = x->side;
                         const FiniteSubset T = translate(S, g, x->side == "left" ? Side::Left : Side::Right);
                         rep["result"] = io::to_json(T);
                         rep["size"] = T.ssize();
                       }
                       emit(c, with_config(rep, cfg), out);
                     }});
}

// ---------------------------------------------------------------------------
// folner
// ---------------------------------------------------------------------------

void add_folner(CLI::App& app, Common& c, std::vector<Action>& actions) {
  auto* sub = app.add_subcommand("folner", "Følner sets F_n and their invariance defects");
  sub->require_subcommand(1);

  struct Scan {
    std::string E = "cross", format = "json";
    std::int64_t n_min = 1, n_max = 32;
  };
  auto s = std::make_shared<Scan>();
  auto* scan = sub->add_subcommand("scan", "defect |F_n Δ E F_n| / |F_n| for a range of n");
  scan->add_option("--E", s->E, "the set E (cross, e, N, JSON or @file)")->capture_default_str();
  scan->add_option("--n-min", s->n_min, "first index")->check(CLI::PositiveNumber)->capture_default_str();
  scan->add_option("--n-max", s->n_max, "last index")->check(CLI::PositiveNumber)->capture_default_str();
  scan->add_option("--format", s->format, "json | csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  actions.push_back({scan, [s, &c](std::ostream& out) {
                       const GroupSpec G = c.resolve_group();
                       if (s->n_max < s->n_min) throw DomainError("--n-max must be at least --n-min");
                       const FolnerFamily fam(G);
                       const FiniteSubset E = parse_subset(G, s->E, "--E");
                       json rows = json::array();
                       std::ostringstream csv;
                       csv << "n,size,defect_num,defect_den,defect\n";
                       for (std::int64_t n = s->n_min; n <= s->n_max; ++n) {
                         const Rational d = invariance_defect(fam.set(n), E);
                         json row{{"n", n}, {"size", fam.size(n)}};
                         io::put_rational(row, "defect", d);
                         rows.push_back(row);
                         csv << n << ',' << fam.size(n) << ',' << d.num() << ',' << d.den() << ',' << row["defect"].dump() << '\n';
                       }
                       if (s->format == "csv") return emit_text(c, csv.str(), out);
                       json cfg = config("folner scan", G);
                       cfg["E"] = io::to_json(E);
                       cfg["n_min"] = s->n_min;
                       cfg["n_max"] = s->n_max;
                       emit(c, with_config({{"rows", rows}}, cfg), out);
                     }});

  struct Find {
    std::string E = "cross", delta;
    std::int64_t n_max = 1000;
  };
  auto f = std::make_shared<Find>();
  auto* find = sub->add_subcommand("find", "least n ≤ n-max with F_n (E, δ)-invariant");
  find->add_option("--E", f->E, "the set E")->capture_default_str();
  find->add_option("--delta", f->delta, "δ > 0 (decimal or p/q)")->required();
  find->add_option("--n-max", f->n_max, "search limit")->check(CLI::PositiveNumber)->capture_default_str();
  actions.push_back({find, [f, &c](std::ostream& out) {
                       const GroupSpec G = c.resolve_group();
                       const FolnerFamily fam(G);
                       const FiniteSubset E = parse_subset(G, f->E, "--E");
                       const Rational delta = parse_rational(f->delta, "--delta");
                       const auto n = find_invariant_index(fam, E, delta, f->n_max);
                       json cfg = config("folner find", G);
                       cfg["E"] = io::to_json(E);
                       io::put_rational(cfg, "delta", delta);
                       cfg["n_max"] = f->n_max;
                       json rep{{"found", n.has_value()}};
                       rep["index"] = n ? json(*n) : json(nullptr);
                       if (n) io::put_rational(rep, "defect", invariance_defect(fam.set(*n), E));
                       emit(c, with_config(rep, cfg), out);
                     }});
}

// ---------------------------------------------------------------------------
// density
// ---------------------------------------------------------------------------

void add_density(CLI::App& app, Common& c, std::vector<Action>& actions) {
  auto* sub = app.add_subcommand("density", "Windowed lower density, E-cores and the density lemmas");
  sub->require_subcommand(1);

  struct Scan {
    std::string H, F, window;
  };
  auto s = std::make_shared<Scan>();
  auto* scan = sub->add_subcommand("scan", "min over Fg ⊆ W of |H ∩ Fg| / |F|");
  scan->add_option("--H", s->H, "the set H")->required();
  scan->add_option("--F", s->F, "the shape F")->required();
  scan->add_option("--window", s->window, "window: N or JSON")->required();
  actions.push_back({scan, [s, &c](std::ostream& out) {
                       GroupSpec G = c.resolve_group();
                       const auto W = parse_window(G, c, s->window);
                       const FiniteSubset H = parse_subset(G, s->H, "--H"), F = parse_subset(G, s->F, "--F");
                       json cfg = config("density scan", G);
                       cfg["window"] = io::to_json(*W);
                       cfg["H"] = io::to_json(H);
                       cfg["F"] = io::to_json(F);
                       emit(c, with_config(io::to_json(lower_density_over_window(H, F, *W)), cfg), out);
                     }});

  struct Core {
    std::string E, F, eps;
  };
  auto k = std::make_shared<Core>();
  auto* core = sub->add_subcommand("core", "check the invariance lemma: defect ≤ ε/|E| ⟹ |F_E| ≥ (1-ε)|F|");
  core->add_option("--E", k->E, "the set E (must contain e)")->required();
  core->add_option("--F", k->F, "the set F")->required();
  core->add_option("--eps", k->eps, "ε in (0,1)")->required();
  actions.push_back({core, [k, &c](std::ostream& out) {
                       const GroupSpec G = c.resolve_group();
                       const FiniteSubset E = parse_subset(G, k->E, "--E"), F = parse_subset(G, k->F, "--F");
                       const Rational eps = parse_rational(k->eps, "--eps");
                       json cfg = config("density core", G);
                       cfg["E"] = io::to_json(E);
                       cfg["F"] = io::to_json(F);
                       io::put_rational(cfg, "eps", eps);
                       emit(c, with_config(io::to_json(check_core_lemma(E, eps, F)), cfg), out);
                     }});

  struct ECore {
    std::string E, F;
  };
  auto e = std::make_shared<ECore>();
  auto* ecore = sub->add_subcommand("ecore", "the E-core {f ∈ F : Ef ⊆ F}");
  ecore->add_option("--E", e->E, "the set E")->required();
  ecore->add_option("--F", e->F, "the set F")->required();
  actions.push_back({ecore, [e, &c](std::ostream& out) {
                       const GroupSpec G = c.resolve_group();
                       const FiniteSubset E = parse_subset(G, e->E, "--E"), F = parse_subset(G, e->F, "--F");
                       const FiniteSubset core = e_core(F, E);
                       json cfg = config("density ecore", G);
                       cfg["E"] = io::to_json(E);
                       cfg["F"] = io::to_json(F);
                       emit(c, with_config({{"core", io::to_json(core)}, {"size", core.ssize()}}, cfg), out);
                     }});

  struct Boundary {
    std::string tiling, F, eps;
  };
  auto b = std::make_shared<Boundary>();
  auto* boundary = sub->add_subcommand("boundary", "mass of the tiles lying on the boundary of F");
  boundary->add_option("--tiling", b->tiling, "quasitiling JSON file")->required();
  boundary->add_option("--F", b->F, "the set F")->required();
  boundary->add_option("--eps", b->eps, "ε > 0")->required();
  actions.push_back({boundary, [b, &c](std::ostream& out) {
                       const Quasitiling q = io::quasitiling_from_json(load_file_arg(b->tiling));
                       const FiniteSubset F = parse_subset(q.group(), b->F, "--F");
                       const Rational eps = parse_rational(b->eps, "--eps");
                       json cfg = config("density boundary", q.group());
                       cfg["tiling"] = io::to_json(q);
                       cfg["F"] = io::to_json(F);
                       io::put_rational(cfg, "eps", eps);
                       emit(c, with_config(io::to_json(check_boundary_lemma(q, F, eps)), cfg), out);
                     }});

  auto input = std::make_shared<std::string>();
  auto* large = sub->add_subcommand("large-core", "D_E - D_E' < γ for cores of a disjoint tiling");
  large->add_option("--input", *input,
                    "JSON (inline or @file): {window, shapes, cores, centers, gamma, F_test}")
      ->required();
  actions.push_back({large, [input, &c](std::ostream& out) {
                       const json j = load_arg(*input, "--input");
                       const auto W = io::window_from_json(j.at("window"));
                       const GroupSpec& G = W->group();
                       std::vector<FiniteSubset> shapes, cores, centers;
                       for (const auto& x : j.at("shapes")) shapes.push_back(io::subset_from_json(G, x));
                       for (const auto& x : j.at("cores")) cores.push_back(io::subset_from_json(G, x));
                       for (const auto& x : j.at("centers")) centers.push_back(io::subset_from_json(G, x));
                       const Rational gamma = io::get_rational(j, "gamma");
                       const FiniteSubset F = io::subset_from_json(G, j.at("F_test"));
                       json cfg = config("density large-core", G);
                       cfg["window"] = io::to_json(*W);
                       cfg["shapes"] = json::array();
                       cfg["cores"] = json::array();
                       cfg["centers"] = json::array();
                       for (std::size_t i = 0; i < shapes.size(); ++i) cfg["shapes"].push_back(io::to_json(shapes[i]));
                       for (std::size_t i = 0; i < cores.size(); ++i) cfg["cores"].push_back(io::to_json(cores[i]));
                       for (std::size_t i = 0; i < centers.size(); ++i) cfg["centers"].push_back(io::to_json(centers[i]));
                       io::put_rational(cfg, "gamma", gamma);
                       cfg["F_test"] = io::to_json(F);
                       emit(c, with_config(io::to_json(check_large_core(shapes, cores, centers, gamma, F, *W)), cfg), out);
                     }});
}

// ---------------------------------------------------------------------------
// quasitile / marker
// ---------------------------------------------------------------------------

void marker_action(CLI::App* sub, Common& c, std::vector<Action>& actions, const std::string& command) {
  struct Args {
    std::string window, F;
    bool list = true;
  };
  auto a = std::make_shared<Args>();
  sub->add_option("--window", a->window, "window: N or JSON")->required();
  sub->add_option("--F", a->F, "the shape F")->required();
  actions.push_back({sub, [a, &c, command](std::ostream& out) {
                       GroupSpec G = c.resolve_group();
                       const auto W = parse_window(G, c, a->window);
                       const FiniteSubset F = parse_subset(G, a->F, "--F");
                       const MarkerResult m = maximal_marker_set(*W, F);
                       const MarkerCheck chk = check_marker_set(*W, F, m);
                       json cfg = config(command, G);
                       cfg["window"] = io::to_json(*W);
                       cfg["F"] = io::to_json(F);
                       json rep{{"markers", io::to_json(m.markers)},
                                {"marker_count", m.markers.ssize()},
                                {"covering", io::to_json(m.covering)},
                                {"interior_size", interior(*W, F).ssize()},
                                {"pairwise_disjoint", chk.disjoint},
                                {"covers_interior", chk.covers_interior}};
                       emit(c, with_config(rep, cfg), out);
                     }});
}

void build_action(CLI::App* sub, Common& c, std::vector<Action>& actions, const std::string& command) {
  struct Build {
    std::string window, shapes, eps;
  };
  auto b = std::make_shared<Build>();
  sub->add_option("--window", b->window, "window: N or JSON")->required();
  sub->add_option("--shapes", b->shapes, "cube sides '4,8' or JSON array of nested shapes")->required();
  sub->add_option("--eps", b->eps, "ε in (0, 1/2)")->required();
  actions.push_back({sub, [b, &c, command](std::ostream& out) {
                       GroupSpec G = c.resolve_group();
                       const auto W = parse_window(G, c, b->window);
                       const std::vector<FiniteSubset> shapes = parse_shapes(G, b->shapes);
                       const Rational eps = parse_rational(b->eps, "--eps");
                       const Quasitiling q = greedy_construct(W, shapes, eps);
                       json cfg = config(command, G);
                       cfg["window"] = io::to_json(*W);
                       cfg["shapes"] = json::array();
                       for (const auto& s : shapes) cfg["shapes"].push_back(io::to_json(s));
                       io::put_rational(cfg, "eps", eps);
                       json rep = io::to_json(q);
                       json summary{{"tiles", q.tile_count()}};
                       summary["tiles_per_level"] = json::array();
                       for (std::size_t i = 0; i < q.levels(); ++i) summary["tiles_per_level"].push_back(q.center_set(i).ssize());
                       io::put_rational(summary, "covering_bound", covering_bound(eps, shapes.size()));
                       rep["report"] = summary;
                       emit(c, with_config(rep, cfg), out);
                     }});

}

void add_quasitile(CLI::App& app, Common& c, std::vector<Action>& actions) {
  auto* sub = app.add_subcommand("quasitile", "Build, check, disjointify and absorb quasitilings");
  sub->require_subcommand(1);

  build_action(sub->add_subcommand("build", "greedy ε-disjoint quasitiling with nested shapes"), c, actions,
               "quasitile build");

  struct Check {
    std::string tiling, eps;
    bool assignment = false;
  };
  auto k = std::make_shared<Check>();
  auto* check = sub->add_subcommand("check", "exact ε-disjointness decision (max-flow)");
  check->add_option("--tiling", k->tiling, "quasitiling JSON file")->required();
  check->add_option("--eps", k->eps, "ε in (0,1]")->required();
  check->add_flag("--assignment", k->assignment, "include the element-to-tile assignment");
  actions.push_back({check, [k, &c](std::ostream& out) {
                       const Quasitiling q = io::quasitiling_from_json(load_file_arg(k->tiling));
                       const Rational eps = parse_rational(k->eps, "--eps");
                       json rep = io::to_json(eps_disjoint_check(q, eps), k->assignment);
                       rep["tiles"] = q.tile_count();
                       rep["insertion_order_certificate_valid"] = certificate_valid(q, insertion_order_certificate(q), eps);
                       if (q.levels() > 0 && q.nested() && eps < Rational(1, 2)) {
                         const auto addable = find_addable_centers(q, eps);
                         rep["addable_centers"] = addable.size();
                         rep["maximal"] = addable.empty();
                         io::put_rational(rep, "covering", covering_fraction(q));
                         io::put_rational(rep, "covering_bound", covering_bound(eps, q.levels()));
                       }
                       json cfg = config("quasitile check", q.group());
                       cfg["tiling"] = io::to_json(q);
                       io::put_rational(cfg, "eps", eps);
                       emit(c, with_config(rep, cfg), out);
                     }});

  auto d = std::make_shared<std::string>();
  auto* disj = sub->add_subcommand("disjointify", "exactly disjoint tiles by element numbering");
  disj->add_option("--tiling", *d, "quasitiling JSON file")->required();
  actions.push_back({disj, [d, &c](std::ostream& out) {
                       const Quasitiling q = io::quasitiling_from_json(load_file_arg(*d));
                       const DisjointifyResult r = disjointify(q);
                       json rep = io::to_json(r.tiling);
                       json cert = io::to_json(r.certificate);
                       cert.erase("assignment");
                       Rational min_frac(1);
                       for (const auto& f : r.certificate.retained_fraction) min_frac = std::min(min_frac, f);
                       io::put_rational(cert, "min_retained_fraction", min_frac);
                       std::int64_t cells = 0;
                       for (const auto& t : r.tiling.tiles()) cells += static_cast<std::int64_t>(t.cells.size());
                       cert["pairwise_disjoint"] = cells == r.tiling.union_set().ssize();
                       cert["centers_retained"] = r.tiling.tile_count() == q.tile_count();
                       rep["certificate"] = cert;
                       json cfg = config("quasitile disjointify", q.group());
                       cfg["tiling"] = io::to_json(q);
                       emit(c, with_config(rep, cfg), out);
                     }});

  struct Absorb {
    std::string tiling, S;
  };
  auto a = std::make_shared<Absorb>();
  auto* absorb = sub->add_subcommand("absorb", "grow S by the lower-level tiles meeting it, top level first");
  absorb->add_option("--tiling", a->tiling, "quasitiling JSON file holding the lower levels")->required();
  absorb->add_option("--S", a->S, "the starting set S~")->required();
  actions.push_back({absorb, [a, &c](std::ostream& out) {
                       const Quasitiling q = io::quasitiling_from_json(load_file_arg(a->tiling));
                       const FiniteSubset S = parse_subset(q.group(), a->S, "--S");
                       json cfg = config("quasitile absorb", q.group());
                       cfg["tiling"] = io::to_json(q);
                       cfg["S"] = io::to_json(S);
                       emit(c, with_config(io::to_json(absorb_lower_tiles(S, q)), cfg), out);
                     }});

  marker_action(sub->add_subcommand("marker", "maximal disjoint packing of translates of F"), c, actions, "quasitile marker");
}

void add_marker(CLI::App& app, Common& c, std::vector<Action>& actions) {
  marker_action(app.add_subcommand("marker", "maximal disjoint packing of translates of F"), c, actions, "marker");
  build_action(app.add_subcommand("build", "shorthand for 'quasitile build'"), c, actions, "build");
}

// ---------------------------------------------------------------------------
// freq
// ---------------------------------------------------------------------------

void add_freq(CLI::App& app, Common& c, std::vector<Action>& actions) {
  auto* sub = app.add_subcommand("freq", "Pattern frequencies and the frequency lemma");
  sub->require_subcommand(1);

  struct Count {
    std::string config, Q, F;
    std::size_t row = 0;
  };
  auto k = std::make_shared<Count>();
  auto* count = sub->add_subcommand("count", "fr_{y(F)}(Q), normalized by |F|");
  count->add_option("--config", k->config, "configuration file (JSON or binary)")->required();
  count->add_option("--Q", k->Q, "pattern {domain, alphabet, values} (JSON or @file)")->required();
  count->add_option("--F", k->F, "block domain (default: the whole window)");
  count->add_option("--row", k->row, "configuration row")->capture_default_str();
  actions.push_back({count, [k, &c](std::ostream& out) {
                       const Configuration y = io::load_configuration(k->config);
                       const GroupSpec& G = y.window().group();
                       if (k->row >= y.rows()) throw DomainError("--row out of range");
                       const Pattern Q = io::pattern_from_json(G, load_arg(k->Q, "--Q"));
                       const FiniteSubset F = k->F.empty() ? y.window().region() : parse_subset(G, k->F, "--F");
                       const Pattern P = y.restrict(k->row, F);
                       json rep;
                       io::put_rational(rep, "frequency", pattern_frequency(P, Q));
                       rep["occurrences"] = count_occurrences(P, Q);
                       rep["admissible_positions"] = admissible_positions(F, Q.domain());
                       rep["domain_size"] = F.ssize();
                       json cfg = config("freq count", G);
                       cfg["configuration"] = k->config;
                       cfg["Q"] = io::to_json(Q);
                       cfg["F"] = io::to_json(F);
                       cfg["row"] = k->row;
                       emit(c, with_config(rep, cfg), out);
                     }});

  struct Lemma {
    std::string config, tiling, Q, F, eps;
    std::size_t row = 0;
  };
  auto l = std::make_shared<Lemma>();
  auto* lemma = sub->add_subcommand("lemma", "frequency over F against the tile average");
  lemma->add_option("--config", l->config, "configuration file (JSON or binary)")->required();
  lemma->add_option("--tiling", l->tiling, "disjoint quasitiling JSON file")->required();
  lemma->add_option("--Q", l->Q, "pattern (JSON or @file)")->required();
  lemma->add_option("--F", l->F, "block domain (default: the whole window)");
  lemma->add_option("--eps", l->eps, "ε > 0")->required();
  lemma->add_option("--row", l->row, "configuration row")->capture_default_str();
  actions.push_back({lemma, [l, &c](std::ostream& out) {
                       const Configuration y = io::load_configuration(l->config);
                       const Quasitiling q = io::quasitiling_from_json(load_file_arg(l->tiling));
                       const GroupSpec& G = y.window().group();
                       const Pattern Q = io::pattern_from_json(G, load_arg(l->Q, "--Q"));
                       const FiniteSubset F = l->F.empty() ? y.window().region() : parse_subset(G, l->F, "--F");
                       const Rational eps = parse_rational(l->eps, "--eps");
                       json cfg = config("freq lemma", G);
                       cfg["configuration"] = l->config;
                       cfg["tiling"] = io::to_json(q);
                       cfg["Q"] = io::to_json(Q);
                       cfg["F"] = io::to_json(F);
                       io::put_rational(cfg, "eps", eps);
                       cfg["row"] = l->row;
                       emit(c, with_config(io::to_json(verify_frequency_lemma(y, q, Q, F, eps, l->row)), cfg), out);
                     }});
}

// ---------------------------------------------------------------------------
// entropy
// ---------------------------------------------------------------------------

Distribution parse_distribution(const std::vector<double>& p) {
  if (p.empty()) throw DomainError("--p needs at least one weight");
  return Distribution(p);
}

FiniteSubset folner_or_subset(const GroupSpec& G, std::int64_t n, const std::string& F) {
  if (!F.empty()) return parse_subset(G, F, "--F");
  if (n < 1) throw DomainError("give --n or --F");
  return FolnerFamily(G).set(n);
}

void add_entropy(CLI::App& app, Common& c, std::vector<Action>& actions) {
  auto* sub = app.add_subcommand("entropy", "Shannon, conditional and per-site entropies (natural log)");
  sub->require_subcommand(1);

  auto p = std::make_shared<std::vector<double>>();
  auto* shannon = sub->add_subcommand("shannon", "H(p) = -Σ p ln p");
  shannon->add_option("--p", *p, "weights, comma separated")->required()->delimiter(',');
  actions.push_back({shannon, [p, &c](std::ostream& out) {
                       const Distribution d = parse_distribution(*p);
                       json cfg{{"command", "entropy shannon"}, {"p", *p}};
                       emit(c, with_config({{"entropy", shannon_entropy(d)}}, cfg), out);
                     }});

  auto joint = std::make_shared<std::string>();
  auto* cond = sub->add_subcommand("conditional", "H(A|B) = Σ_b μ(b) H(μ(·|b))");
  cond->add_option("--joint", *joint, "JSON [[a, b, p], ...] (inline or @file)")->required();
  actions.push_back({cond, [joint, &c](std::ostream& out) {
                       const json j = load_arg(*joint, "--joint");
                       if (!j.is_array()) throw DomainError("--joint must be a JSON array of [a, b, p] triples");
                       std::vector<std::pair<std::pair<std::int64_t, std::int64_t>, double>> e;
                       for (const auto& t : j) {
                         if (!t.is_array() || t.size() != 3) throw DomainError("--joint entries must be [a, b, p]");
                         e.push_back({{t[0].get<std::int64_t>(), t[1].get<std::int64_t>()}, t[2].get<double>()});
                       }
                       const JointDistribution jd(e);
                       std::vector<double> mb;
                       for (const auto& [b, w] : jd.marginal_b()) mb.push_back(w);
                       json rep{{"conditional_entropy", conditional_entropy(jd)},
                                {"joint_entropy", shannon_entropy(jd.flattened())},
                                {"marginal_b_entropy", shannon_entropy(Distribution(mb))}};
                       json cfg{{"command", "entropy conditional"}, {"joint", j}};
                       emit(c, with_config(rep, cfg), out);
                     }});

  struct Bern {
    std::vector<double> p;
    std::int64_t n = 0;
    std::string F;
  };
  auto b = std::make_shared<Bern>();
  auto* bern = sub->add_subcommand("bernoulli", "exact H_n of a product measure from all |Λ|^|F_n| patterns");
  bern->add_option("--p", b->p, "weights, comma separated")->required()->delimiter(',');
  bern->add_option("--n", b->n, "Følner index n (F_n in --group)");
  bern->add_option("--F", b->F, "explicit F_n instead of --n");
  actions.push_back({bern, [b, &c](std::ostream& out) {
                       const GroupSpec G = c.resolve_group();
                       const Distribution d = parse_distribution(b->p);
                       const FiniteSubset F = folner_or_subset(G, b->n, b->F);
                       const double hn = bernoulli_entropy_exact(d, F), hp = shannon_entropy(d);
                       json cfg = config("entropy bernoulli", G);
                       cfg["p"] = b->p;
                       cfg["F_n"] = io::to_json(F);
                       emit(c, with_config({{"H_n", hn}, {"H_p", hp}, {"abs_error", std::fabs(hn - hp)}}, cfg), out);
                     }});

  struct Emp {
    std::string config, window, F;
    std::vector<double> p;
    std::int64_t n = 0;
  };
  auto e = std::make_shared<Emp>();
  auto* emp = sub->add_subcommand("empirical", "plug-in entropy of F_n-patterns per site");
  emp->add_option("--config", e->config, "configuration file (JSON or binary)");
  emp->add_option("--window", e->window, "sample a Bernoulli configuration on this window instead");
  emp->add_option("--p", e->p, "Bernoulli weights for --window")->delimiter(',');
  emp->add_option("--n", e->n, "Følner index n");
  emp->add_option("--F", e->F, "explicit F_n instead of --n");
  actions.push_back({emp, [e, &c](std::ostream& out) {
                       GroupSpec G = c.resolve_group();
                       json cfg;
                       std::optional<Configuration> y;
                       if (!e->config.empty()) {
                         y.emplace(io::load_configuration(e->config));
                         G = y->window().group();
                         cfg = config("entropy empirical", G);
                         cfg["configuration"] = e->config;
                       } else {
                         if (e->window.empty() || e->p.empty()) throw DomainError("give --config, or --window with --p");
                         const auto W = parse_window(G, c, e->window);
                         y.emplace(verify::sample_bernoulli(W, parse_distribution(e->p), c.seed));
                         cfg = config("entropy empirical", G);
                         cfg["window"] = io::to_json(*W);
                         cfg["p"] = e->p;
                         cfg["seed"] = c.seed;
                       }
                       const FiniteSubset F = folner_or_subset(G, e->n, e->F);
                       cfg["F_n"] = io::to_json(F);
                       emit(c, with_config(io::to_json(empirical_entropy_rate(*y, F)), cfg), out);
                     }});

  struct Sample {
    std::string window, format = "json";
    std::vector<double> p;
  };
  auto s = std::make_shared<Sample>();
  auto* sample = sub->add_subcommand("sample", "write a seeded Bernoulli configuration");
  sample->add_option("--window", s->window, "window: N or JSON")->required();
  sample->add_option("--p", s->p, "weights, comma separated")->required()->delimiter(',');
  sample->add_option("--format", s->format, "json | binary")->check(CLI::IsMember({"json", "binary"}))->capture_default_str();
  actions.push_back({sample, [s, &c](std::ostream& out) {
                       GroupSpec G = c.resolve_group();
                       const auto W = parse_window(G, c, s->window);
                       const Configuration y = verify::sample_bernoulli(W, parse_distribution(s->p), c.seed);
                       if (s->format == "binary") {
                         if (c.out.empty()) throw DomainError("--format binary needs --out");
                         std::ostringstream os;
                         io::write_binary(os, y);
                         return io::write_file(c.out, os.str());
                       }
                       json cfg = config("entropy sample", G);
                       cfg["window"] = io::to_json(*W);
                       cfg["p"] = s->p;
                       cfg["seed"] = c.seed;
                       emit(c, with_config(io::to_json(y), cfg), out);
                     }});
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

void add_verify(CLI::App& app, Common& c, std::vector<Action>& actions) {
  struct Args {
    std::string suite, eps;
    std::int64_t trials = 0;
  };
  auto a = std::make_shared<Args>();
  auto* sub = app.add_subcommand("verify", "Run a seeded randomized verification suite");
  sub->add_option("suite", a->suite, "suite name")->required()->check(CLI::IsMember(verify::suite_names()));
  sub->add_option("--trials", a->trials, "hypothesis-satisfying trials (0 = suite default)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sub->add_option("--eps", a->eps, "fix ε (γ for large-core) instead of drawing it per trial");
  actions.push_back({sub, [a, &c](std::ostream& out) {
                       verify::SuiteOptions o;
                       o.trials = a->trials;
                       o.seed = c.seed;
                       if (!a->eps.empty()) o.eps = parse_rational(a->eps, "--eps");
                       if (c.group_given()) o.group = c.resolve_group();
                       json cfg{{"command", "verify " + a->suite}, {"suite", a->suite}, {"trials", a->trials}, {"seed", c.seed}};
                       cfg["group"] = o.group ? o.group->name() : std::string("default");
                       if (o.eps)
                         io::put_rational(cfg, "eps", *o.eps);
                       else
                         cfg["eps"] = "random";
                       emit(c, with_config(io::to_json(verify::run_suite(a->suite, o)), cfg), out);
                     }});
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quasitilings, lower densities, pattern frequencies and entropy on finite windows of Z^d and the "
               "integer Heisenberg group.",
               "quasitile"};
  app.fallthrough();
  app.require_subcommand(1);
  app.footer(
      "Exit codes: 0 success, 2 usage or domain error, 3 capacity limit exceeded.\n"
      "Sets: 'cross', 'e', N (the cube [0,N)^d), inline JSON, or @file.\n"
      "Randomness: mt19937_64 seeded per trial via splitmix64(seed, trial index).\n"
      "QUASITILE_THREADS caps worker threads (0 or unset = all cores).");
  Common c;
  c.group_opt = app.add_option("--group", c.group, "group: z1, z2, ..., z8 or h3 (Heisenberg)")->capture_default_str();
  app.add_option("--out", c.out, "write the report to this file instead of stdout");
  c.seed_opt = app.add_option("--seed", c.seed, "seed for randomized commands")->capture_default_str();

  std::vector<Action> actions;
  add_group(app, c, actions);
  add_folner(app, c, actions);
  add_density(app, c, actions);
  add_quasitile(app, c, actions);
  add_marker(app, c, actions);
  add_freq(app, c, actions);
  add_entropy(app, c, actions);
  add_verify(app, c, actions);

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  for (const auto& a : args) argv.push_back(a.c_str());
  if (argv.empty()) argv.push_back("quasitile");
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "error: " << e.what() << "\nRun with --help for usage.\n";
    return kExitUsage;
  }

  try {
    for (const auto& a : actions)
      if (a.app->parsed()) {
        a.fn(out);
        return kExitOk;
      }
    err << "error: no command given\n";
    return kExitUsage;
  } catch (const CapacityError& e) {
    err << "capacity error [" << e.cap() << "]: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const std::bad_alloc&) {
    err << "capacity error [memory]: allocation failed\n";
    return kExitCapacity;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const OverflowError& e) {
    err << "overflow error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed JSON input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace quasitile::cli
