#include "ftop/io.hpp"

#include <fstream>
#include <map>

#include "ftop/errors.hpp"

namespace ftop {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw InputError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

int nat_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw InputError(std::string("field \"") + key + "\" must be a natural number");
  return v.get<int>();
}

bool bool_field(const Json& j, const char* key, bool dflt) {
  if (!j.contains(key)) return dflt;
  if (!j.at(key).is_boolean()) throw InputError(std::string("field \"") + key + "\" must be boolean");
  return j.at(key).get<bool>();
}

SpaceKind kind_field(const Json& j) {
  const Json& k = field(j, "kind");
  if (k == "cantor") return SpaceKind::Cantor;
  if (k == "baire") return SpaceKind::Baire;
  throw InputError("kind must be \"cantor\" or \"baire\"");
}

std::string element_name(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw InputError("element names must be strings or integers");
}

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << dump_json(j);
}

FinSeq seq_from_json(const Json& j) {
  if (!j.is_array()) throw InputError("a sequence must be an array of naturals");
  FinSeq u;
  for (const Json& x : j) {
    if (!x.is_number_integer() || x.get<long long>() < 0)
      throw InputError("a sequence must be an array of naturals");
    u.push_back(x.get<int>());
  }
  return u;
}

CoveringSystem covering_system_from_json(const Json& j) {
  const Json& elems = field(j, "elements");
  if (!elems.is_array() || elems.empty()) throw InputError("\"elements\" must be a non-empty array");
  std::vector<std::string> names;
  std::map<std::string, int> index;
  for (const Json& e : elems) {
    names.push_back(element_name(e));
    if (!index.emplace(names.back(), static_cast<int>(names.size()) - 1).second)
      throw InputError("repeated element " + names.back());
  }
  auto lookup = [&](const Json& v) {
    const std::string n = element_name(v);
    auto it = index.find(n);
    if (it == index.end()) throw UnknownElement("unknown element " + n);
    return it->second;
  };
  std::vector<std::pair<int, int>> pairs;
  if (j.contains("leq")) {
    for (const Json& p : j.at("leq")) {
      if (!p.is_array() || p.size() != 2) throw InputError("\"leq\" entries are pairs [a, b]");
      pairs.emplace_back(lookup(p[0]), lookup(p[1]));
    }
  }
  CoveringSystem sys;
  sys.basis = std::make_shared<const Basis>(Basis::from_pairs(names, pairs));
  sys.families.assign(names.size(), {});
  if (j.contains("C")) {
    const Json& c = j.at("C");
    if (!c.is_object()) throw InputError("\"C\" must map element names to lists of families");
    for (auto it = c.begin(); it != c.end(); ++it) {
      const int a = lookup(Json(it.key()));
      for (const Json& fam : it.value()) {
        if (!fam.is_array()) throw InputError("a covering family must be an array");
        std::vector<int> alpha;
        for (const Json& x : fam) {
          const int q = lookup(x);
          if (!sys.basis->leq(q, a))
            throw InvalidSieve("family member " + names[q] + " is not below " + names[a]);
          alpha.push_back(q);
        }
        sys.families[a].push_back(std::move(alpha));
      }
    }
  }
  return sys;
}

Json to_json(const CoveringSystem& c) {
  const Basis& b = *c.basis;
  Json j;
  j["elements"] = Json::array();
  for (int a = 0; a < b.size(); ++a) j["elements"].push_back(b.name(a));
  j["leq"] = Json::array();
  for (int a = 0; a < b.size(); ++a)
    for (int x = 0; x < b.size(); ++x)
      if (a != x && b.leq(a, x)) j["leq"].push_back({b.name(a), b.name(x)});
  j["C"] = Json::object();
  for (int a = 0; a < b.size(); ++a) {
    Json fams = Json::array();
    for (const auto& alpha : c.families[a]) {
      Json f = Json::array();
      for (int q : alpha) f.push_back(b.name(q));
      fams.push_back(f);
    }
    j["C"][b.name(a)] = fams;
  }
  return j;
}

SpacePtr truncated_space_from_json(const Json& j) {
  const SpaceKind kind = kind_field(j);
  const int branch = j.contains("branch") ? nat_field(j, "branch") : 2;
  const int depth = nat_field(j, "depth");
  if (branch < 1) throw InputError("branch must be positive");
  if (kind == SpaceKind::Cantor && branch != 2) throw InputError("cantor space has branch 2");
  return TruncatedSpace::make(kind, branch, depth);
}

Json to_json(const TruncatedSpace& s) {
  Json j;
  j["kind"] = s.kind_name();
  j["branch"] = s.branch();
  j["depth"] = s.depth();
  return j;
}

Point point_from_json(const Json& j) {
  Point p;
  p.prefix = seq_from_json(field(j, "prefix"));
  p.tail = j.contains("tail") ? nat_field(j, "tail") : 0;
  return p;
}

Json to_json(const Point& p) {
  Json j;
  j["prefix"] = p.prefix;
  j["tail"] = p.tail;
  return j;
}

SpaceDoc space_from_json(const Json& j, int fuel) {
  SpaceDoc d;
  if (j.contains("double")) {
    SpacePtr inner = truncated_space_from_json(j.at("double"));
    std::vector<Point> pts;
    if (j.contains("points"))
      for (const Json& p : j.at("points")) pts.push_back(point_from_json(p));
    else
      pts = leaf_points(*inner);
    d.db = DoubleSpace::make(inner, std::move(pts));
    d.topology = d.db->topology();
  } else if (j.contains("elements")) {
    auto sys = std::make_shared<const CoveringSystem>(covering_system_from_json(j));
    d.topology = generate_topology(*sys, fuel >= 0 ? fuel : sys->basis->size() + 1);
    d.system = std::move(sys);
  } else if (j.contains("kind")) {
    d.space = truncated_space_from_json(j);
    d.topology = d.space->topology();
  } else {
    throw InputError("space document needs \"elements\", \"kind\" or \"double\"");
  }
  return d;
}

Json space_config(const SpaceDoc& s) {
  if (s.db) {
    Json j;
    j["double"] = to_json(*s.db->inner());
    j["points"] = Json::array();
    for (const Point& p : s.db->points()) j["points"].push_back(to_json(p));
    return j;
  }
  if (s.space) return to_json(*s.space);
  return to_json(*s.system);
}

Bar bar_from_json(const Json& j, int depth) {
  const SpaceKind kind = kind_field(j);
  const int branch = j.contains("branch") ? nat_field(j, "branch") : 2;
  const int d = depth >= 0 ? depth : nat_field(j, "depth");
  if (kind == SpaceKind::Cantor && branch != 2) throw InputError("cantor space has branch 2");
  if (branch < 1) throw InputError("branch must be positive");
  SpacePtr sp = TruncatedSpace::make(kind, branch, d);
  std::vector<FinSeq> gens;
  for (const Json& u : field(j, "bar")) {
    FinSeq s = seq_from_json(u);
    for (int x : s)
      if (x >= branch) throw InputError("sequence " + seq_name(s) + " leaves the branching");
    if (static_cast<int>(s.size()) > d)
      throw DepthExceeded("generator " + seq_name(s) + " is longer than depth " +
                          std::to_string(d));
    gens.push_back(std::move(s));
  }
  if (bool_field(j, "closure", false)) return Bar::inductive_closure_of(sp, gens);
  return Bar::from_generators(sp, gens, bool_field(j, "monotone", true),
                              bool_field(j, "inductive", false));
}

Json to_json(const Bar& b) {
  Json j = to_json(*b.space());
  j["bar"] = Json::array();
  for (const FinSeq& u : b.generators()) j["bar"].push_back(u);
  j["monotone"] = b.monotone();
  j["inductive"] = b.inductive();
  return j;
}

Json to_json(const ContinuousMap& f) {
  const Basis& s = *f.source()->basis();
  const Basis& t = *f.target()->basis();
  Json j = Json::array();
  for (auto [p, q] : f.pairs()) j.push_back({s.name(p), t.name(q)});
  return j;
}

ContinuousMap map_from_json(TopologyPtr source, TopologyPtr target, const Json& j) {
  if (!j.is_array()) throw InputError("a map is an array of [source, target] pairs");
  std::vector<std::pair<int, int>> pairs;
  for (const Json& p : j) {
    if (!p.is_array() || p.size() != 2) throw InputError("map entries are pairs [p, q]");
    pairs.emplace_back(source->basis()->index(element_name(p[0])),
                       target->basis()->index(element_name(p[1])));
  }
  return ContinuousMap::from_generators(std::move(source), std::move(target), pairs);
}

Json to_json(const Verdict& v) {
  Json j;
  j["holds"] = v.holds;
  j["condition"] = v.condition;
  j["witness"] = v.witness;
  return j;
}

Json to_json(const ForcingDerivation& d, const Basis& b) {
  Json j;
  j["clause"] = d.clause;
  j["stage"] = b.name(d.stage);
  j["formula"] = d.formula;
  if (!d.cover.empty() || d.clause == "bot" || d.clause == "atom" || d.clause == "or" ||
      d.clause == "exists") {
    j["cover"] = Json::array();
    for (int q : d.cover) j["cover"].push_back(b.name(q));
  }
  if (d.choice >= 0) j["choice"] = d.choice;
  if (!d.note.empty()) j["note"] = d.note;
  j["premises"] = Json::array();
  for (const auto& p : d.premises) j["premises"].push_back(to_json(p, b));
  return j;
}

Json to_json(const Transcript& t) {
  Json j = Json::array();
  for (const auto& s : t) {
    Json e;
    e["stage"] = s.name;
    e["ok"] = s.ok;
    e["lines"] = s.lines;
    j.push_back(e);
  }
  return j;
}

Json to_json(const InductionTranscript& t, const Basis& b) {
  Json j;
  j["target"] = b.name(t.target);
  j["steps"] = Json::array();
  for (const auto& s : t.steps) {
    Json e;
    e["element"] = b.name(s.element);
    e["rule"] = s.rule;
    e["premises"] = Json::array();
    for (int p : s.premises) e["premises"].push_back(b.name(p));
    j["steps"].push_back(e);
  }
  return j;
}

Json make_report(const std::string& command, Json config) {
  Json j;
  j["command"] = command;
  j["config"] = std::move(config);
  j["verdicts"] = Json::array();
  j["witnesses"] = Json::array();
  return j;
}

}  // namespace ftop
