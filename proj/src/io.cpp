#include "regulus/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "regulus/error.hpp"

namespace regulus {

namespace {

void require_fields(const Json& j, const char* what, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw InvalidArgument(std::string(what) + " must be a JSON object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : j.items())
    if (!ok.count(k)) throw InvalidArgument(std::string("unknown field '") + k + "' in " + what);
  for (const char* k : allowed)
    if (!j.contains(k)) throw InvalidArgument(std::string("missing field '") + k + "' in " + what);
}

std::string label_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw InvalidArgument("labels must be strings or integers");
}

std::vector<std::string> label_list(const Json& v, const char* what) {
  if (!v.is_array()) throw InvalidArgument(std::string(what) + " must be an array");
  std::vector<std::string> out;
  for (const auto& x : v) out.push_back(label_text(x));
  return out;
}

Index nonneg_index(const Json& v) {
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw InvalidArgument("coordinates and sizes must be non-negative integers");
  return static_cast<Index>(v.get<long long>());
}

Json edge_json(const HypergraphSystem& sys, Edge e) { return Json(sys.edge_labels(e)); }

// Finite doubles only; infinities and NaN become null.
Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

}  // namespace

Json system_to_json(const HypergraphSystem& sys) {
  Json j;
  j["labels"] = sys.labels();
  j["sizes"] = sys.sizes();
  j["d"] = sys.order();
  Json top = Json::array();
  for (Edge e : sys.top_layer()) top.push_back(edge_json(sys, e));
  j["H_d"] = top;
  return j;
}

HypergraphSystem system_from_json(const Json& j, std::uint64_t cell_cap) {
  require_fields(j, "system", {"labels", "sizes", "d", "H_d"});
  auto labels = label_list(j["labels"], "labels");
  if (!j["sizes"].is_array()) throw InvalidArgument("sizes must be an array");
  std::vector<Index> sizes;
  for (const auto& s : j["sizes"]) sizes.push_back(nonneg_index(s));
  if (!j["d"].is_number_integer()) throw InvalidArgument("d must be an integer");
  if (!j["H_d"].is_array()) throw InvalidArgument("H_d must be an array");
  std::vector<std::vector<std::string>> top;
  for (const auto& e : j["H_d"]) top.push_back(label_list(e, "edge"));
  return HypergraphSystem::make(std::move(labels), std::move(sizes), j["d"].get<int>(), top,
                                cell_cap);
}

Json set_to_json(const HypergraphSystem& sys, const CylinderSet& set) {
  Json j;
  j["base"] = edge_json(sys, set.base());
  Json pts = Json::array();
  for (Index x : set.members()) pts.push_back(sys.coordinates(set.base(), x));
  j["points"] = pts;
  return j;
}

CylinderSet set_from_json(const HypergraphSystem& sys, const Json& j) {
  require_fields(j, "set", {"base", "points"});
  auto key = label_list(j["base"], "base");
  Edge base = sys.edge_from_labels(key);
  if (static_cast<std::size_t>(base.size()) != key.size())
    throw InvalidArgument("repeated label in set base");
  // Coordinates arrive in the listed order; storage follows label position.
  std::vector<std::pair<int, std::size_t>> pos;
  for (std::size_t i = 0; i < key.size(); ++i) pos.emplace_back(sys.label_position(key[i]), i);
  std::sort(pos.begin(), pos.end());

  CylinderSet s = CylinderSet::empty(sys, base);
  if (!j["points"].is_array()) throw InvalidArgument("points must be an array");
  for (const auto& p : j["points"]) {
    if (!p.is_array() || p.size() != key.size())
      throw InvalidArgument("point arity does not match its base");
    std::vector<Index> c;
    for (auto [where, i] : pos) {
      Index v = nonneg_index(p[i]);
      if (v >= sys.size(where)) throw InvalidArgument("coordinate out of range");
      c.push_back(v);
    }
    s.set(sys.index_of(base, c));
  }
  return s;
}

Json instance_to_json(const Instance& inst) {
  Json j;
  j["system"] = system_to_json(inst.system);
  Json sets = Json::array();
  for (const auto& [e, s] : inst.sets) sets.push_back(set_to_json(inst.system, s));
  j["sets"] = sets;
  return j;
}

Instance instance_from_json(const Json& j, std::uint64_t cell_cap) {
  require_fields(j, "instance", {"system", "sets"});
  Instance inst;
  inst.system = system_from_json(j["system"], cell_cap);
  if (!j["sets"].is_array()) throw InvalidArgument("sets must be an array");
  for (const auto& s : j["sets"]) {
    CylinderSet set = set_from_json(inst.system, s);
    Edge e = set.base();
    if (std::find(inst.system.top_layer().begin(), inst.system.top_layer().end(), e) ==
        inst.system.top_layer().end())
      throw InvalidArgument("set base " + inst.system.edge_name(e) + " is not an edge of H_d");
    if (!inst.sets.emplace(e, std::move(set)).second)
      throw InvalidArgument("two sets for " + inst.system.edge_name(e));
  }
  for (Edge e : inst.system.top_layer())
    if (!inst.sets.count(e)) throw InvalidArgument("no set for " + inst.system.edge_name(e));
  return inst;
}

Json algebra_to_json(const HypergraphSystem& sys, const FactorAlgebra& alg) {
  Json j;
  j["base"] = edge_json(sys, alg.base());
  j["complexity"] = alg.complexity();
  j["atoms"] = alg.atom_count();
  j["labels"] = alg.labels();
  return j;
}

Json audit_record_to_json(const HypergraphSystem& sys, const AuditRecord& rec) {
  Json j;
  j["layer"] = rec.layer;
  j["e"] = edge_json(sys, rec.edge);
  j["atom"] = rec.atom;
  j["oracle"] = rec.oracle;
  j["value"] = number(rec.value);
  j["action"] = rec.action;
  return j;
}

Json audit_report_to_json(const HypergraphSystem& sys, const AuditReport& rep) {
  Json j;
  j["passed"] = rep.passed();
  j["growth_cond"] = rep.growth_cond;
  j["coarse_complex"] = rep.coarse_complex;
  j["coarse_fine"] = rep.coarse_fine;
  j["fine_accurate"] = rep.fine_accurate;
  j["oracle"] = rep.oracle;
  Json checks = Json::array();
  for (const auto& c : rep.checks) {
    Json r;
    r["condition"] = c.condition;
    r["layer"] = c.layer;
    r["e"] = edge_json(sys, c.edge);
    r["atom"] = c.atom;
    r["value"] = number(c.value);
    r["bound"] = number(c.bound);
    r["ok"] = c.ok;
    checks.push_back(r);
  }
  j["checks"] = checks;
  return j;
}

Json decomposition_to_json(const HypergraphSystem& sys, const RegularityDecomposition& dec) {
  Json j;
  Json th = Json::array();
  for (double m : dec.thresholds) th.push_back(number(m));
  j["thresholds"] = th;
  Json bounds = Json::array();
  for (int l = 0; l < static_cast<int>(dec.thresholds.size()); ++l) bounds.push_back(number(dec.bound(l)));
  j["bounds"] = bounds;
  j["growth"] = dec.growth.descriptor();
  j["oracle"] = dec.oracle.describe();
  j["fast_retries"] = dec.fast_retries;
  Json top = Json::array(), coarse = Json::array(), fine = Json::array();
  for (const auto& [e, a] : dec.top) top.push_back(algebra_to_json(sys, a));
  for (const auto& [e, a] : dec.coarse) coarse.push_back(algebra_to_json(sys, a));
  for (const auto& [e, a] : dec.fine) fine.push_back(algebra_to_json(sys, a));
  j["top"] = top;
  j["coarse"] = coarse;
  j["fine"] = fine;
  return j;
}

Json removal_report_to_json(const HypergraphSystem& sys, const RemovalReport& rep) {
  Json j;
  j["copies_before"] = rep.copies_before;
  j["inputs_density"] = rep.inputs_density;
  j["short_circuit"] = rep.short_circuit;
  Json removed = Json::array(), added = Json::array();
  for (const auto& [e, m] : rep.removed_mass) removed.push_back({{"e", edge_json(sys, e)}, {"mass", m}});
  for (const auto& [e, m] : rep.added_mass) added.push_back({{"e", edge_json(sys, e)}, {"mass", m}});
  j["removed_mass"] = removed;
  j["added_mass"] = added;
  j["cleanup_atoms_removed"] = rep.cleanup_atoms_removed;
  j["cleanup_mass"] = rep.cleanup_mass;
  j["copies_after"] = rep.copies_after;
  j["measurable"] = rep.measurable;
  Json th = Json::array();
  for (double m : rep.thresholds) th.push_back(number(m));
  j["thresholds"] = th;
  j["fast_retries"] = rep.fast_retries;
  j["oracle"] = rep.oracle;
  j["growth"] = rep.growth;
  if (rep.audit) j["audit"] = audit_report_to_json(sys, *rep.audit);
  return j;
}

Json profile_to_json(const HypergraphSystem& sys, const AtomProfile& profile,
                     const CountingResult& count) {
  Json j;
  Json labels = Json::array();
  for (const auto& [e, a] : profile.atoms) labels.push_back({{"e", edge_json(sys, e)}, {"atom", a}});
  j["labels"] = labels;
  j["joint_density"] = profile.joint_density;
  Json p = Json::array(), flags = Json::array();
  for (const auto& c : profile.checks) {
    p.push_back(c.p);
    flags.push_back({{"e", edge_json(sys, c.edge)},
                     {"large", c.large_ok},
                     {"regular", c.regular_ok},
                     {"vacuous", c.vacuous}});
  }
  j["p_values"] = p;
  j["flags"] = flags;
  j["good"] = profile.good();
  j["lhs"] = count.lhs;
  j["rhs"] = count.rhs;
  j["ratio"] = number(count.ratio);
  return j;
}

Json error_to_json(const std::string& kind, const std::string& message) {
  return Json{{"error", {{"kind", kind}, {"message", message}}}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
}

}  // namespace regulus
