// ftop: forcing evaluation, derived-rule pipelines and invariant suites.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "ftop/errors.hpp"
#include "ftop/forcing.hpp"
#include "ftop/formula.hpp"
#include "ftop/io.hpp"
#include "ftop/rules.hpp"
#include "ftop/suites.hpp"

using namespace ftop;

namespace {

struct Options {
  std::string space, bar, formula, at, relation = "identity", suite, out, kind = "baire";
  int depth = -1, branch = -1, fuel = -1, nmax = 8, samples = 200, inner_depth = 0;
  std::uint64_t seed = 1;
};

enum Exit { kOk = 0, kCheckFailed = 1, kError = 2 };

bool is_file(const std::string& s) {
  std::error_code ec;
  return !s.empty() && std::filesystem::is_regular_file(s, ec);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

Json verdict(const std::string& name, bool pass, const std::string& detail = {}) {
  Json v;
  v["name"] = name;
  v["pass"] = pass;
  if (!detail.empty()) v["detail"] = detail;
  return v;
}

void print_transcript(const Transcript& t) {
  for (const auto& s : t) {
    std::cout << (s.ok ? "[ok]   " : "[FAIL] ") << s.name << "\n";
    for (const auto& l : s.lines) std::cout << "         " << l << "\n";
  }
}

void print_derivation(const ForcingDerivation& d, const Basis& b, int indent) {
  std::cout << std::string(indent, ' ') << d.clause << " @ " << b.name(d.stage) << ": "
            << d.formula;
  if (!d.cover.empty()) {
    std::cout << "  cover {";
    for (std::size_t i = 0; i < d.cover.size(); ++i)
      std::cout << (i ? ", " : "") << b.name(d.cover[i]);
    std::cout << "}";
  }
  if (!d.note.empty()) std::cout << "  [" << d.note << "]";
  std::cout << "\n";
  for (const auto& p : d.premises) print_derivation(p, b, indent + 2);
}

SpaceDoc resolve_space(const Options& o) {
  if (is_file(o.space)) return space_from_json(read_json_file(o.space), o.fuel);
  const int depth = o.depth >= 0 ? o.depth : 3;
  const int branch = o.branch > 0 ? o.branch : 2;
  Json j;
  std::string kind = o.space;
  const bool dbl = kind.rfind("double-", 0) == 0;
  if (dbl) kind = kind.substr(7);
  if (kind != "cantor" && kind != "baire")
    throw InputError("--space must be a JSON file or one of cantor, baire, double-cantor, "
                     "double-baire");
  j["kind"] = kind;
  j["branch"] = kind == "cantor" ? 2 : branch;
  j["depth"] = depth;
  if (dbl) {
    Json d;
    d["double"] = j;
    return space_from_json(d, o.fuel);
  }
  return space_from_json(j, o.fuel);
}

Bar resolve_bar(const Options& o, Json* doc) {
  if (!is_file(o.bar)) throw InputError("--bar must name a JSON file");
  *doc = read_json_file(o.bar);
  return bar_from_json(*doc, o.depth);
}

int run_force(const Options& o, Json& report) {
  const SpaceDoc s = resolve_space(o);
  report["config"]["space"] = space_config(s);
  std::shared_ptr<ForcingModel> m;
  const ModelOptions mo{o.nmax, -1};
  if (s.db)
    m = ForcingModel::on_double(s.db, mo);
  else if (s.space)
    m = ForcingModel::on_space(s.space, mo);
  else
    throw InputError("forcing needs a truncated space or a double, not a bare covering system");
  if (!o.bar.empty()) {
    Json bdoc = read_json_file(o.bar);
    const Bar bar = bar_from_json(bdoc, m->inner().depth());
    if (bar.space()->kind() != m->inner().kind() || bar.space()->branch() != m->inner().branch())
      throw InputError("bar and space disagree on kind or branching");
    m->add_bar("InBar", bar);
    report["config"]["bar"] = to_json(bar);
  }
  const std::string text = trim(is_file(o.formula) ? slurp(o.formula) : o.formula);
  const Formula f = parse_formula(text, m->signature());
  report["config"]["formula"] = to_string(f);

  int p = m->top();
  if (!o.at.empty()) {
    if (s.db)
      p = s.db->parse_element(o.at);
    else if (auto named = m->topology()->basis()->find(o.at))
      p = *named;
    else
      p = s.space->index(parse_seq(o.at));
  }
  const Basis& b = *m->topology()->basis();
  report["config"]["at"] = b.name(p);

  const ForceResult r = force(*m, p, f, {}, o.fuel);
  const std::string status = r.holds() ? "Holds" : "FailsWithinFuel";
  std::cout << b.name(p) << " |- " << to_string(f) << "\n" << status;
  if (!r.holds() && r.exhausted) std::cout << " (fuel exhausted)";
  std::cout << "\n";
  Json v = verdict("force", r.holds());
  v["status"] = status;
  v["exhausted"] = r.exhausted;
  report["verdicts"].push_back(v);
  if (!r.holds()) return kOk;

  const auto d = explain(*m, p, f, {}, o.fuel);
  if (!d) throw InputError("forced but no derivation found");
  std::string why;
  const bool ok = check_forcing_derivation(*m, f, {}, *d, &why, o.fuel);
  print_derivation(*d, b, 2);
  std::cout << "derivation " << (ok ? "rechecks" : "FAILS recheck: " + why) << "\n";
  report["verdicts"].push_back(verdict("derivation rechecks", ok, why));
  report["witnesses"].push_back(to_json(*d, b));
  return ok ? kOk : kCheckFailed;
}

int run_fan(const Options& o, Json& report) {
  Json doc;
  const Bar bar = resolve_bar(o, &doc);
  report["config"]["bar"] = to_json(bar);
  const FanResult r = fan_rule(bar);
  const bool ok = transcript_ok(r.transcript);
  const bool re = transcript_ok(recheck_fan(bar, r));
  std::cout << "n=" << r.n << "\n";
  print_transcript(r.transcript);
  std::cout << "recheck " << (re ? "ok" : "FAILED") << "\n";
  report["verdicts"].push_back(verdict("transcript", ok));
  report["verdicts"].push_back(verdict("recheck", re));
  Json w;
  w["n"] = r.n;
  w["cover_depth"] = r.cover_depth;
  w["uniform_depth"] = r.uniform_depth;
  w["cover"] = Json::array();
  const DoublePtr db = DoubleSpace::make(bar.space(), leaf_points(*bar.space()));
  const Basis& b = *db->basis();
  for (const auto& c : r.witnesses) w["cover"].push_back({{"element", b.name(c.element)}, {"u", c.u}});
  w["conclusions"] = Json::array();
  for (const auto& c : r.conclusions)
    w["conclusions"].push_back({{"v", c.v}, {"u", c.u}, {"point_witness", c.point_witness}});
  w["instance"] = to_json(r.instance, b);
  w["transcript"] = to_json(r.transcript);
  report["witnesses"].push_back(w);
  return ok && re ? kOk : kCheckFailed;
}

int run_bar(const Options& o, Json& report) {
  Json doc;
  const Bar bar = resolve_bar(o, &doc);
  report["config"]["bar"] = to_json(bar);
  const BarResult r = bar_rule(bar);
  const bool ok = transcript_ok(r.transcript);
  const bool re = transcript_ok(recheck_bar(bar, r));
  const bool oracle = inductive_closure_contains_root(bar);
  std::cout << "phi(<>) " << (r.holds_at_root ? "holds" : "not concluded") << "\n";
  print_transcript(r.transcript);
  std::cout << "recheck " << (re ? "ok" : "FAILED") << ", closure oracle "
            << (oracle ? "agrees" : "DISAGREES") << "\n";
  report["verdicts"].push_back(verdict("conclusion", r.holds_at_root));
  report["verdicts"].push_back(verdict("transcript", ok));
  report["verdicts"].push_back(verdict("recheck", re));
  report["verdicts"].push_back(verdict("closure oracle", oracle == r.holds_at_root));
  Json w;
  w["cover"] = r.cover;
  const DoublePtr db = DoubleSpace::make(bar.space(), leaf_points(*bar.space()));
  const Basis& b = *db->basis();
  w["instance"] = to_json(r.instance, b);
  w["induction"] = to_json(r.induction, *bar.space()->basis());
  w["transcript"] = to_json(r.transcript);
  report["witnesses"].push_back(w);
  return ok && re && r.holds_at_root && oracle ? kOk : kCheckFailed;
}

RelationTable resolve_relation(const Options& o, Json& config) {
  const int branch = o.branch > 0 ? o.branch : 2;
  const int len = o.depth >= 0 ? o.depth : 2;
  config["relation"] = o.relation;
  if (o.relation == "identity" || o.relation == "shift") {
    const int off = o.relation == "shift";
    config["branch"] = branch;
    config["length"] = len;
    return {branch, len,
            [len, off](const Point& a, const FinSeq& b) {
              for (int n = 0; n < len; ++n)
                if (b[n] != a.at(n + off)) return false;
              return true;
            },
            o.relation};
  }
  if (o.relation == "tail") {
    config["branch"] = branch;
    config["length"] = len;
    return {branch, len,
            [len](const Point& a, const FinSeq& b) {
              for (int n = 0; n < len; ++n)
                if (b[n] != a.tail) return false;
              return true;
            },
            "tail"};
  }
  if (!is_file(o.relation))
    throw InputError("--relation must be identity, shift, tail or a JSON file");
  // {"branch": B, "length": L, "table": [{"prefix": [...], "output": [...]}, ...]}:
  // φ(α, β) iff some entry's prefix is an initial segment of α with output β.
  const Json j = read_json_file(o.relation);
  config["table"] = j;
  std::vector<std::pair<FinSeq, FinSeq>> rows;
  for (const Json& e : j.at("table")) rows.emplace_back(seq_from_json(e.at("prefix")), seq_from_json(e.at("output")));
  const int b = j.value("branch", branch);
  const int l = j.value("length", len);
  return {b, l,
          [rows](const Point& a, const FinSeq& out) {
            for (const auto& [u, v] : rows)
              if (a.contains(u) && v == out) return true;
            return false;
          },
          o.relation};
}

int run_continuity(const Options& o, Json& report) {
  const RelationTable rel = resolve_relation(o, report["config"]);
  ContinuityOptions co;
  if (o.kind == "cantor")
    co.kind = SpaceKind::Cantor;
  else if (o.kind != "baire")
    throw InputError("--kind must be cantor or baire");
  co.inner_depth = o.inner_depth;
  report["config"]["kind"] = o.kind;
  report["config"]["inner_depth"] = o.inner_depth;
  const ContinuityResult r = continuity_rule(rel, co);
  const bool ok = transcript_ok(r.transcript);
  const bool re = transcript_ok(recheck_continuity(rel, co, r));
  print_transcript(r.transcript);
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    std::cout << "  " << r.points[i].name() << " -> " << seq_name(r.f[i]) << "  modulus";
    for (int m : r.modulus[i]) std::cout << " " << m;
    std::cout << "\n";
  }
  std::cout << "recheck " << (re ? "ok" : "FAILED") << "\n";
  report["verdicts"].push_back(verdict("transcript", ok));
  report["verdicts"].push_back(verdict("recheck", re));
  Json w;
  w["inner_depth"] = r.inner_depth;
  w["values"] = Json::array();
  for (std::size_t i = 0; i < r.points.size(); ++i)
    w["values"].push_back({{"point", to_json(r.points[i])}, {"f", r.f[i]}, {"modulus", r.modulus[i]}});
  w["transcript"] = to_json(r.transcript);
  report["witnesses"].push_back(w);
  return ok && re ? kOk : kCheckFailed;
}

int run_check(const Options& o, Json& report) {
  SuiteOptions so;
  so.seed = o.seed;
  so.samples = o.samples;
  so.nat_max = o.nmax;
  if (o.depth >= 0) so.depth = o.depth;
  so.branch = o.branch > 0 ? o.branch : (o.suite == "alt-baire" ? 3 : 2);
  Json& c = report["config"];
  c["suite"] = o.suite;
  c["seed"] = so.seed;
  c["samples"] = so.samples;
  c["depth"] = so.depth;
  c["branch"] = so.branch;
  c["nmax"] = so.nat_max;

  SuiteReport r;
  if (o.suite == "topology")
    r = topology_suite(so);
  else if (o.suite == "forcing")
    r = forcing_suite(so);
  else if (o.suite == "sheaves")
    r = sheaf_suite(so);
  else if (o.suite == "brouwer")
    r = brouwer_suite(so);
  else
    r = alt_baire_suite(so);

  for (const auto& ch : r.checks) {
    std::cout << (ch.pass ? "PASS " : "FAIL ") << ch.name << " (" << ch.instances << ")";
    if (!ch.detail.empty()) std::cout << ": " << ch.detail;
    std::cout << "\n";
    Json v = verdict(ch.name, ch.pass, ch.detail);
    v["instances"] = ch.instances;
    report["verdicts"].push_back(v);
  }
  for (const auto& w : r.witnesses) {
    std::cout << "  " << w << "\n";
    report["witnesses"].push_back(w);
  }
  std::cout << (r.ok() ? "all checks pass" : "some checks FAILED") << "\n";
  return r.ok() ? kOk : kCheckFailed;
}

void fail(Json& report, const std::string& kind, const std::string& message) {
  Json err;
  err["kind"] = kind;
  err["message"] = message;
  report["error"] = err;
  report["partial"] = true;
  report["verdicts"].push_back(verdict("error", false, kind + ": " + message));
  std::cerr << "error: " << kind << ": " << message << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Formal topology toolkit: forcing, derived rules and invariant suites"};
  app.require_subcommand(1);
  Options o;

  auto add_out = [&](CLI::App* c) {
    c->add_option("--out", o.out, "Write the JSON report here ('-' for stdout)");
  };
  auto* force_cmd = app.add_subcommand("force", "Evaluate a formula at a basic open");
  force_cmd->add_option("--space", o.space, "Space JSON or cantor|baire|double-cantor|double-baire")
      ->required();
  force_cmd->add_option("--formula", o.formula, "Formula file or inline text")->required();
  force_cmd->add_option("--at", o.at, "Element, e.g. \"D()\" or \"<0,1>\" (default: top)");
  force_cmd->add_option("--bar", o.bar, "Bar JSON providing InBar");
  force_cmd->add_option("--depth", o.depth, "Truncation depth for named spaces");
  force_cmd->add_option("--branch", o.branch, "Branching for named Baire spaces");
  force_cmd->add_option("--fuel", o.fuel, "Cover derivation fuel");
  force_cmd->add_option("--nmax", o.nmax, "Nat quantifiers range below this");
  add_out(force_cmd);

  auto* fan_cmd = app.add_subcommand("fan", "Fan rule pipeline");
  auto* bar_cmd = app.add_subcommand("bar", "Bar induction rule pipeline");
  for (auto* c : {fan_cmd, bar_cmd}) {
    c->add_option("--bar", o.bar, "Bar JSON")->required();
    c->add_option("--depth", o.depth, "Override the truncation depth");
    add_out(c);
  }

  auto* cont_cmd = app.add_subcommand("continuity", "Continuity rule pipeline");
  cont_cmd->add_option("--relation", o.relation, "identity, shift, tail or a table JSON");
  cont_cmd->add_option("--branch", o.branch, "Branching of inputs and outputs");
  cont_cmd->add_option("--depth", o.depth, "Output length");
  cont_cmd->add_option("--inner-depth", o.inner_depth, "Depth of the inner space (0: length+1)");
  cont_cmd->add_option("--kind", o.kind, "cantor or baire");
  add_out(cont_cmd);

  auto* check_cmd = app.add_subcommand("check", "Invariant suites");
  check_cmd->add_option("suite", o.suite, "topology|forcing|sheaves|brouwer|alt-baire")
      ->required()
      ->check(CLI::IsMember({"topology", "forcing", "sheaves", "brouwer", "alt-baire"}));
  check_cmd->add_option("--seed", o.seed, "Random seed");
  check_cmd->add_option("--samples", o.samples, "Random instances");
  check_cmd->add_option("--depth", o.depth, "Truncation depth");
  check_cmd->add_option("--branch", o.branch, "Branching");
  check_cmd->add_option("--nmax", o.nmax, "Nat quantifiers range below this");
  add_out(check_cmd);

  CLI11_PARSE(app, argc, argv);

  const std::string command = app.get_subcommands().front()->get_name();
  Json report = make_report(command, Json::object());
  if (!o.out.empty()) report["config"]["out"] = o.out;

  // With --out - the report owns stdout.
  std::stringstream text;
  std::streambuf* saved = nullptr;
  if (o.out == "-") saved = std::cout.rdbuf(text.rdbuf());

  int code = kOk;
  try {
    if (command == "force")
      code = run_force(o, report);
    else if (command == "fan")
      code = run_fan(o, report);
    else if (command == "bar")
      code = run_bar(o, report);
    else if (command == "continuity")
      code = run_continuity(o, report);
    else
      code = run_check(o, report);
  } catch (const Error& e) {
    fail(report, e.kind(), e.what());
    code = kError;
  } catch (const nlohmann::json::exception& e) {
    fail(report, "InputError", e.what());
    code = kError;
  }

  if (saved) std::cout.rdbuf(saved);
  if (o.out == "-")
    std::cout << dump_json(report);
  else if (!o.out.empty())
    write_json_file(o.out, report);
  return code;
}
