#include "regulus/cli.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "regulus/error.hpp"
#include "regulus/roth.hpp"

namespace regulus::cli {

namespace {

std::mt19937_64 substream(std::uint64_t seed, std::uint32_t tag) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), tag};
  return std::mt19937_64(seq);
}

bool bernoulli(std::mt19937_64& rng, double p) { return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p; }

void check_density(double density) {
  if (!(density >= 0 && density <= 1)) throw InvalidArgument("density must lie in [0, 1]");
}

struct Common {
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;
  std::string growth = "exp(2)";
  std::string oracle = "exact";
  std::uint64_t cap = 0;
  CLI::Option* cap_opt = nullptr;
  std::string out = "-";
  bool exact_rational = false;

  const std::uint64_t* seed_ptr() const { return seed_opt->count() ? &seed : nullptr; }
  std::uint64_t cell_cap() const { return cap_opt->count() ? cap : cell_cap_from_env(); }
  Oracle make_oracle() const { return parse_oracle(oracle, seed_ptr()); }
};

void add_common(CLI::App* sub, Common& c) {
  c.seed_opt = sub->add_option("--seed", c.seed, "64-bit seed for randomized steps");
  sub->add_option("--growth", c.growth, "growth function descriptor")->capture_default_str();
  sub->add_option("--oracle", c.oracle, "exact or heuristic:N")->capture_default_str();
  c.cap_opt = sub->add_option("--cap", c.cap, "enumeration guardrail in cells (overrides REGULUS_CAP)");
  sub->add_option("--out", c.out, "output path, - for stdout")->capture_default_str();
  sub->add_flag("--exact-rational", c.exact_rational, "also report exact rational energies");
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot write " + path);
  f << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

AlgebraMap generated_top(const Instance& inst) {
  AlgebraMap top;
  for (const auto& [e, E] : inst.sets) {
    std::vector<CylinderSet> gen{E};
    top.emplace(e, generate(inst.system, e, gen));
  }
  return top;
}

std::string rational_text(const Rational& r) {
  std::ostringstream s;
  s << r;
  return s.str();
}

// Coarse-to-fine energy gaps in exact arithmetic, one per top-side atom.
Json exact_gaps(const HypergraphSystem& sys, const RegularityDecomposition& dec, bool& ok) {
  Json rows = Json::array();
  for (int j = 1; j <= sys.order(); ++j) {
    Rational bound = Rational(dec.bound(j));
    bound = 1 / (bound * bound);
    for (Edge e : sys.layer(j)) {
      JoinAlgebra cj = dec.coarse_join(e), fj = dec.fine_join(e);
      auto atoms = dec.algebra(e).atoms();
      for (Index a = 0; a < atoms.size(); ++a) {
        Rational gap = refinement_gap<Rational>(sys, atoms[a], cj, fj);
        Rational split = energy<Rational>(sys, atoms[a], fj) - energy<Rational>(sys, atoms[a], cj);
        bool pyth = gap == split;
        bool within = gap <= bound;
        ok = ok && pyth && within;
        rows.push_back({{"layer", j},
                        {"e", sys.edge_labels(e)},
                        {"atom", a},
                        {"gap", rational_text(gap)},
                        {"pythagoras", pyth},
                        {"within_bound", within}});
      }
    }
  }
  return rows;
}

int cmd_gen_random(const Common& c, const std::vector<Index>& sizes,
                   std::vector<std::string> labels, const std::vector<std::vector<std::string>>& edges,
                   int d, double density, std::ostream& out) {
  if (!c.seed_opt->count()) throw ConfigError("gen-random needs --seed");
  check_density(density);
  if (labels.empty())
    for (std::size_t i = 0; i < sizes.size(); ++i) labels.push_back(std::to_string(i + 1));
  if (d <= 0) {
    if (edges.empty()) throw InvalidArgument("give --d or at least one --edge");
    d = static_cast<int>(edges.front().size());
  }
  auto sys = HypergraphSystem::make(labels, sizes, d, edges, c.cell_cap());
  emit(c.out, dump(instance_to_json(random_instance(sys, density, c.seed))), out);
  return kExitOk;
}

int cmd_regularize(const Common& c, const std::string& in, double Md, const std::string& audit_log,
                   std::ostream& out) {
  Instance inst = instance_from_json(read_json_file(in), c.cell_cap());
  Oracle oracle = c.make_oracle();
  GrowthFunction F = GrowthFunction::parse(c.growth);
  auto dec = full_regularity(inst.system, generated_top(inst), Md, F, oracle);
  auto rep = audit_decomposition(inst.system, dec, oracle);
  bool ok = rep.passed();

  Json j;
  j["decomposition"] = decomposition_to_json(inst.system, dec);
  j["iterations"] = dec.audit.size();
  j["audit"] = audit_report_to_json(inst.system, rep);
  if (c.exact_rational) j["exact_gaps"] = exact_gaps(inst.system, dec, ok);
  j["ok"] = ok;
  emit(c.out, dump(j), out);
  if (!audit_log.empty()) {
    std::string lines;
    for (const auto& r : dec.audit) lines += audit_record_to_json(inst.system, r).dump() + "\n";
    emit(audit_log, lines, out);
  }
  return ok ? kExitOk : kExitFailed;
}

int cmd_count_check(const Common& c, const std::string& in, double Md, const std::string& csv,
                    std::ostream& out) {
  Instance inst = instance_from_json(read_json_file(in), c.cell_cap());
  Oracle oracle = c.make_oracle();
  GrowthFunction F = GrowthFunction::parse(c.growth);
  const auto& sys = inst.system;
  auto dec = full_regularity(sys, generated_top(inst), Md, F, oracle);
  check_counting_config(sys, dec);
  auto profiles = classify_all(sys, dec);

  std::string lines, table = "tuple,good,joint_density,p_product,ratio\n";
  std::uint64_t good = 0, good_empty = 0;
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    const auto& p = profiles[i];
    CountingResult r = counting_check(sys, dec, p);
    Json row = profile_to_json(sys, p, r);
    if (c.exact_rational) {
      // Joint density as a fraction of |V_J|.
      Rational q(static_cast<long long>(std::llround(p.joint_density * double(sys.total_cells()))),
                 static_cast<long long>(sys.total_cells()));
      row["joint_density_exact"] = rational_text(q);
    }
    lines += row.dump() + "\n";
    if (p.good()) {
      ++good;
      if (!(p.joint_density > 0)) ++good_empty;
    }
    std::ostringstream t;
    t.precision(17);
    t << i << ',' << (p.good() ? 1 : 0) << ',' << p.joint_density << ',' << p.p_product() << ',';
    if (std::isfinite(r.ratio)) t << r.ratio;
    t << '\n';
    table += t.str();
  }
  Json summary{{"tuples", profiles.size()},
               {"good", good},
               {"good_but_empty", good_empty},
               {"oracle", oracle.describe()},
               {"hard_claim", oracle.kind == Oracle::Kind::exact}};
  lines += Json{{"summary", summary}}.dump() + "\n";
  emit(c.out, lines, out);
  if (!csv.empty()) emit(csv, table, out);
  // The non-emptiness claim only binds when the decomposition came from the exact oracle.
  if (oracle.kind == Oracle::Kind::exact && good_empty > 0) return kExitFailed;
  return kExitOk;
}

int cmd_remove(const Common& c, const std::string& in, double Md, bool subgraph, bool audit,
               const std::string& sets_out, std::ostream& out) {
  Instance inst = instance_from_json(read_json_file(in), c.cell_cap());
  RemovalOptions opt;
  opt.Md = Md;
  opt.growth = GrowthFunction::parse(c.growth);
  opt.oracle = c.make_oracle();
  opt.subgraph = subgraph;
  opt.audit = audit;
  RemovalResult r = remove(inst.system, inst.sets, opt);
  bool ok = r.report.copies_after == 0 && r.report.measurable &&
            (!r.report.audit || r.report.audit->passed());
  Json j = removal_report_to_json(inst.system, r.report);
  j["ok"] = ok;
  emit(c.out, dump(j), out);
  if (!sets_out.empty()) emit(sets_out, dump(instance_to_json({inst.system, r.sets})), out);
  return ok ? kExitOk : kExitFailed;
}

int cmd_triangles(const Common& c, const std::string& in, std::ostream& out) {
  Instance inst = instance_from_json(read_json_file(in), c.cell_cap());
  std::uint64_t n = count_copies(inst.system, inst.sets);
  Json j{{"copies", n},
         {"cells", inst.system.total_cells()},
         {"density", double(n) / double(inst.system.total_cells())}};
  emit(c.out, dump(j), out);
  return kExitOk;
}

int cmd_demo_roth(const Common& c, Index N, const std::vector<Index>& S, bool have_S, double density,
                  double Md, std::ostream& out) {
  std::vector<Index> set = S;
  if (!have_S) {
    if (!c.seed_opt->count()) throw ConfigError("demo-roth needs --S or --seed");
    check_density(density);
    set = random_residues(N, density, c.seed);
  }
  RothInstance r = roth_instance(N, set);
  std::uint64_t formula = roth_formula_count(N, r.S);
  std::uint64_t copies = count_copies(r.system, r.sets);

  RemovalOptions opt;
  opt.Md = Md;
  opt.growth = GrowthFunction::parse(c.growth);
  opt.oracle = c.make_oracle();
  RemovalResult rem = remove(r.system, r.sets, opt);
  bool ok = formula == copies && rem.report.copies_after == 0 && rem.report.measurable;

  Json j;
  j["N"] = N;
  j["S"] = r.S;
  j["formula_count"] = formula;
  j["copies"] = copies;
  j["agree"] = formula == copies;
  j["removal"] = removal_report_to_json(r.system, rem.report);
  j["ok"] = ok;
  emit(c.out, dump(j), out);
  return ok ? kExitOk : kExitFailed;
}

}  // namespace

Instance random_instance(const HypergraphSystem& sys, double density, std::uint64_t seed) {
  check_density(density);
  Instance inst{sys, {}};
  for (Edge e : sys.top_layer()) {
    auto rng = substream(seed, e.bits());
    CylinderSet s = CylinderSet::empty(sys, e);
    for (Index x = 0; x < s.size(); ++x)
      if (bernoulli(rng, density)) s.set(x);
    inst.sets.emplace(e, std::move(s));
  }
  return inst;
}

std::vector<Index> random_residues(Index N, double density, std::uint64_t seed) {
  check_density(density);
  // Edge masks are nonzero, so tag 0 never collides with an edge stream.
  auto rng = substream(seed, 0);
  std::vector<Index> S;
  for (Index a = 0; a < N; ++a)
    if (bernoulli(rng, density)) S.push_back(a);
  return S;
}

Oracle parse_oracle(const std::string& text, const std::uint64_t* seed) {
  if (text == "exact") return Oracle::exact_oracle();
  const std::string prefix = "heuristic:";
  if (text.rfind(prefix, 0) == 0) {
    std::size_t used = 0;
    int restarts = 0;
    try {
      restarts = std::stoi(text.substr(prefix.size()), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != text.size() - prefix.size() || restarts < 1)
      throw ConfigError("bad restart count in oracle '" + text + "'");
    if (!seed) throw ConfigError("the heuristic oracle needs --seed");
    return Oracle::heuristic_oracle(restarts, *seed);
  }
  throw ConfigError("unknown oracle '" + text + "' (use exact or heuristic:N)");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hypergraph regularity, counting and removal on explicit finite systems", "regulus"};
  app.require_subcommand(1);
  Common c_gen, c_reg, c_cnt, c_rem, c_tri, c_roth;

  std::vector<Index> sizes;
  std::vector<std::string> labels;
  std::vector<std::vector<std::string>> edges;
  int d = 0;
  double density = 0.5;
  std::string in, audit_log, csv, sets_out;
  double Md = 1;
  bool subgraph = false, audit = false;
  Index N = 0;
  std::vector<Index> S;

  auto* gen = app.add_subcommand("gen-random", "sample a random instance");
  add_common(gen, c_gen);
  gen->add_option("--sizes", sizes, "class sizes")->delimiter(',')->required();
  gen->add_option("--labels", labels, "class labels (default 1..n)")->delimiter(',');
  gen->add_option("--edge", edges, "an edge of H_d as comma-separated labels (repeatable)")
      ->delimiter(',')
      ->allow_extra_args(false);
  gen->add_option("--d", d, "order (default: arity of the first edge)");
  gen->add_option("--density", density, "membership probability")->required();

  auto* reg = app.add_subcommand("regularize", "run the full regularity lemma and audit it");
  auto* cnt = app.add_subcommand("count-check", "classify atom tuples and compare counts");
  auto* rem = app.add_subcommand("remove", "remove every copy of H_d");
  auto* tri = app.add_subcommand("triangles", "count copies of H_d");
  add_common(reg, c_reg);
  add_common(cnt, c_cnt);
  add_common(rem, c_rem);
  add_common(tri, c_tri);
  for (auto* sub : {reg, cnt, rem, tri}) sub->add_option("--in", in, "instance file")->required();
  for (auto* sub : {reg, cnt, rem}) sub->add_option("--Md", Md, "complexity bound on the top algebras");
  reg->add_option("--audit-log", audit_log, "JSON lines of dichotomy steps");
  cnt->add_option("--csv", csv, "ratio table as CSV");
  rem->add_flag("--subgraph", subgraph, "intersect each output with its input");
  rem->add_flag("--audit", audit, "recheck the decomposition after the run");
  rem->add_option("--sets-out", sets_out, "write the modified instance here");

  auto* roth = app.add_subcommand("demo-roth", "arithmetic triangle instance on Z_N");
  add_common(roth, c_roth);
  roth->add_option("--N", N, "odd modulus")->required();
  auto* s_opt = roth->add_option("--S", S, "residues in S")->delimiter(',');
  roth->add_option("--density", density, "membership probability for a random S");
  roth->add_option("--Md", Md, "complexity bound on the top algebras");

  std::vector<const char*> argv{"regulus"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << error_to_json("usage", e.what()).dump() << "\n";
    return kExitError;
  }

  try {
    if (gen->parsed()) return cmd_gen_random(c_gen, sizes, labels, edges, d, density, out);
    if (reg->parsed()) return cmd_regularize(c_reg, in, Md, audit_log, out);
    if (cnt->parsed()) return cmd_count_check(c_cnt, in, Md, csv, out);
    if (rem->parsed()) return cmd_remove(c_rem, in, Md, subgraph, audit, sets_out, out);
    if (tri->parsed()) return cmd_triangles(c_tri, in, out);
    if (roth->parsed()) return cmd_demo_roth(c_roth, N, S, s_opt->count() > 0, density, Md, out);
  } catch (const Error& e) {
    err << error_to_json(e.kind(), e.what()).dump() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << error_to_json("internal", e.what()).dump() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace regulus::cli
