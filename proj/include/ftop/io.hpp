// JSON documents for spaces, bars, points and reports.
//
//   covering system  {"elements": [...], "leq": [[a, b], ...], "C": {"a": [[...], ...]}}
//   truncated space  {"kind": "cantor" | "baire", "branch": B, "depth": L}
//   double           {"double": <truncated space>, "points": [<point>, ...]}
//   point            {"prefix": [...], "tail": k}
//   map              [[p, q], ...]
//   bar              {"kind", "branch", "depth", "bar": [<sequence>, ...],
//                     "monotone": bool, "inductive": bool, "closure": bool}
//
// Sequences are arrays of naturals.  With "closure": true the bar is the
// least inductive bar containing the listed generators.

#ifndef FTOP_IO_HPP
#define FTOP_IO_HPP

#include <string>
#include <vector>

#include "json.hpp"

#include "ftop/double.hpp"
#include "ftop/forcing.hpp"
#include "ftop/maps.hpp"
#include "ftop/points.hpp"
#include "ftop/rules.hpp"
#include "ftop/spaces.hpp"
#include "ftop/topology.hpp"

namespace ftop {

using Json = nlohmann::ordered_json;

Json read_json_file(const std::string& path);  // throws InputError
void write_json_file(const std::string& path, const Json& j);
std::string dump_json(const Json& j);  // two-space indent, trailing newline

CoveringSystem covering_system_from_json(const Json& j);
Json to_json(const CoveringSystem& c);

/// A space document resolved to what it describes; exactly one of the
/// three kinds is set.
struct SpaceDoc {
  SpacePtr space;                 // truncated space
  DoublePtr db;                   // double
  std::shared_ptr<const CoveringSystem> system;  // generic covering system
  TopologyPtr topology;           // always set
};
SpaceDoc space_from_json(const Json& j, int fuel = -1);
Json space_config(const SpaceDoc& s);

SpacePtr truncated_space_from_json(const Json& j);
Json to_json(const TruncatedSpace& s);

Point point_from_json(const Json& j);
Json to_json(const Point& p);

// depth >= 0 overrides the document's truncation depth.
Bar bar_from_json(const Json& j, int depth = -1);
Json to_json(const Bar& b);

FinSeq seq_from_json(const Json& j);

// Maps as lists of [source, target] generator pairs, by element name.
Json to_json(const ContinuousMap& f);
ContinuousMap map_from_json(TopologyPtr source, TopologyPtr target, const Json& j);

Json to_json(const Verdict& v);
Json to_json(const ForcingDerivation& d, const Basis& b);
Json to_json(const Transcript& t);
Json to_json(const InductionTranscript& t, const Basis& b);

// {command, config, verdicts, witnesses}
Json make_report(const std::string& command, Json config);

}  // namespace ftop

#endif  // FTOP_IO_HPP
