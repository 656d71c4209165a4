#include <gtest/gtest.h>

#include "ftop/errors.hpp"
#include "ftop/io.hpp"

using namespace ftop;

TEST(SpaceJson, CoveringSystemRoundTrip) {
  const Json j = Json::parse(R"({
    "elements": ["top", "a", "b", "c"],
    "leq": [["a", "top"], ["b", "top"], ["c", "a"], ["c", "b"]],
    "C": {"top": [["a", "b"]], "a": [["c"]], "b": [["c"]], "c": [["c"]]}
  })");
  const CoveringSystem sys = covering_system_from_json(j);
  EXPECT_EQ(sys.basis->size(), 4);
  EXPECT_TRUE(sys.basis->leq(3, 0));
  ASSERT_EQ(sys.families[0].size(), 1u);
  EXPECT_EQ(sys.families[0][0], (std::vector<int>{1, 2}));
  const CoveringSystem again = covering_system_from_json(to_json(sys));
  EXPECT_EQ(again.families, sys.families);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) EXPECT_EQ(again.basis->leq(a, b), sys.basis->leq(a, b));

  const SpaceDoc d = space_from_json(j);
  ASSERT_TRUE(d.system);
  EXPECT_TRUE(d.topology->covers(0, Sieve(d.topology->basis(), 0, {1, 2})));
  // c lies below a, so ↓a already covers b and hence top.
  EXPECT_TRUE(d.topology->covers(0, Sieve(d.topology->basis(), 0, {1})));
  EXPECT_FALSE(d.topology->covers(0, Sieve::empty(d.topology->basis(), 0)));
}

TEST(SpaceJson, RejectsMalformedSystems) {
  EXPECT_THROW(covering_system_from_json(Json::parse(R"({"elements": []})")), InputError);
  EXPECT_THROW(covering_system_from_json(Json::parse(R"({"elements": ["a", "a"]})")), InputError);
  EXPECT_THROW(covering_system_from_json(Json::parse(R"({"elements": ["a"], "leq": [["a", "z"]]})")),
               UnknownElement);
  EXPECT_THROW(
      covering_system_from_json(Json::parse(R"({"elements": ["a", "b"], "C": {"a": [["b"]]}})")),
      InvalidSieve);
  // C(c) is empty, so {a, b} restricted to c has no basic cover inside it.
  const Json bad = Json::parse(R"({
    "elements": ["top", "a", "b", "c"],
    "leq": [["a", "top"], ["b", "top"], ["c", "a"], ["c", "b"]],
    "C": {"top": [["a", "b"]]}
  })");
  EXPECT_THROW(space_from_json(bad), CoveringAxiomViolation);
  EXPECT_THROW(space_from_json(Json::parse(R"({"foo": 1})")), InputError);
}

TEST(SpaceJson, TruncatedAndDouble) {
  const SpaceDoc c = space_from_json(Json::parse(R"({"kind": "cantor", "depth": 2})"));
  ASSERT_TRUE(c.space);
  EXPECT_EQ(c.space->size(), 7);
  EXPECT_THROW(space_from_json(Json::parse(R"({"kind": "cantor", "branch": 3, "depth": 2})")),
               InputError);
  EXPECT_THROW(space_from_json(Json::parse(R"({"kind": "hilbert", "depth": 2})")), InputError);

  const SpaceDoc d = space_from_json(Json::parse(
      R"({"double": {"kind": "baire", "branch": 3, "depth": 1},
          "points": [{"prefix": [2], "tail": 1}, {"prefix": []}]})"));
  ASSERT_TRUE(d.db);
  EXPECT_EQ(d.db->points().size(), 2u);
  EXPECT_EQ(d.db->points()[0].at(5), 1);
  EXPECT_EQ(space_from_json(space_config(d)).db->points().size(), 2u);

  const SpaceDoc leaves = space_from_json(Json::parse(R"({"double": {"kind": "cantor", "depth": 2}})"));
  EXPECT_EQ(leaves.db->points().size(), 4u);
  EXPECT_THROW(space_from_json(Json::parse(
                   R"({"double": {"kind": "cantor", "depth": 1}, "points": [{"prefix": [0]}, {"prefix": [0, 0]}]})")),
               InputError);
}

TEST(BarJson, GeneratorsFlagsAndDepthOverride) {
  const Json j = Json::parse(
      R"({"kind": "cantor", "branch": 2, "depth": 3, "bar": [[0], [1, 1]], "monotone": true, "inductive": false})");
  const Bar b = bar_from_json(j);
  EXPECT_EQ(b.space()->depth(), 3);
  EXPECT_TRUE(b({0, 1}));
  EXPECT_FALSE(b({1, 0}));
  EXPECT_EQ(bar_from_json(j, 5).space()->depth(), 5);
  EXPECT_EQ(bar_from_json(to_json(b)).mask(), b.mask());
  EXPECT_THROW(bar_from_json(j, 1), DepthExceeded);
  EXPECT_THROW(bar_from_json(Json::parse(R"({"kind": "cantor", "depth": 2, "bar": [[2]]})")),
               InputError);

  // Not inductive as given; the closure flag asks for the least inductive bar.
  const Json ind = Json::parse(R"({"kind": "baire", "branch": 2, "depth": 2, "bar": [[0], [1, 0], [1, 1]], "inductive": true})");
  EXPECT_THROW(bar_from_json(ind), NotInductive);
  Json closed = ind;
  closed["closure"] = true;
  const Bar c = bar_from_json(closed);
  EXPECT_TRUE(c.inductive());
  EXPECT_TRUE(c({}));
}

TEST(PointJson, RoundTrip) {
  const Point p = point_from_json(Json::parse(R"({"prefix": [1, 0], "tail": 1})"));
  EXPECT_EQ(p.name(), "<1,0>;1");
  EXPECT_EQ(point_from_json(to_json(p)), p);
  EXPECT_THROW(point_from_json(Json::parse(R"({"prefix": [-1]})")), InputError);
  EXPECT_THROW(point_from_json(Json::parse(R"({"tail": 0})")), InputError);
}

TEST(MapJson, GeneratorPairs) {
  auto sp = TruncatedSpace::cantor(1);
  const TopologyPtr t = sp->topology();
  const ContinuousMap id = identity_map(t);
  const ContinuousMap back = map_from_json(t, t, to_json(id));
  EXPECT_EQ(back, id);
  EXPECT_THROW(map_from_json(t, t, Json::parse(R"([["<>", "<7>"]])")), UnknownElement);
}

TEST(ReportJson, DerivationsNest) {
  auto sp = TruncatedSpace::cantor(2);
  auto db = DoubleSpace::make(sp, leaf_points(*sp));
  auto m = ForcingModel::on_double(db);
  m->add_bar("InBar", Bar(sp, [](const FinSeq& u) { return u.size() >= 1; }, true, false));
  const Formula f = parse_formula("exists u:FinSeq. Prefix(pi,u) & InBar(u)", m->signature());
  const auto d = explain(*m, db->d({}), f);
  ASSERT_TRUE(d);
  const Json j = to_json(*d, *db->basis());
  EXPECT_EQ(j["clause"], "exists");
  EXPECT_EQ(j["stage"], "D<>");
  EXPECT_EQ(j["premises"].size(), d->premises.size());
  EXPECT_TRUE(j["premises"][0]["premises"].is_array());

  Json r = make_report("force", Json::object());
  EXPECT_EQ(dump_json(r), "{\n  \"command\": \"force\",\n  \"config\": {},\n  \"verdicts\": [],\n  \"witnesses\": []\n}\n");
  EXPECT_EQ(to_json(Verdict::fail(2, "x"))["condition"], 2);
}
