#include "mtm/core/csv.hpp"
#include "mtm/core/error.hpp"
#include "mtm/core/records.hpp"
#include "mtm/core/schema.hpp"
#include "mtm/core/synthetic.hpp"

#include <catch_amalgamated.hpp>

#include <sstream>

using namespace mtm;

namespace {

const char* kHeader =
    "match_id,player1,player2,elapsed_time,p_sets_p1,p_sets_p2,p_games_p1,p_games_p2,server,point_victor,"
    "p_ace_p1,p_ace_p2,p_double_fault_p1,p_double_fault_p2,p_break_pt_missed_p1,p_break_pt_missed_p2,"
    "p_break_pt_won_p1,p_break_pt_won_p2,p_distance_run_p1,p_distance_run_p2,psychological_factor_p1,"
    "psychological_factor_p2\n";

std::string three_rows() {
    std::string s = kHeader;
    s += "M1,Ann,Bea,0:00:00,0,0,0,0,1,1,1,0,0,0,0,0,0,0,5.5,6.25,3.5,4\n";
    s += "M1,Ann,Bea,0:00:40,0,0,0,0,1,2,0,0,0,0,0,0,0,0,10,12.5,3.25,4.5\n";
    s += "M1,Ann,Bea,0:01:30,0,0,0,0,1,1,0,0,1,0,0,0,0,0,2,3,3,5\n";
    return s;
}

std::vector<MatchPointRecord> parse(const std::string& text) {
    std::istringstream in(text);
    return ingest_csv(in, FeatureSchema::standard());
}

} // namespace

TEST_CASE("ingest keeps rows in file order", "[core]") {
    const auto recs = parse(three_rows());
    REQUIRE(recs.size() == 3);
    CHECK(recs[0].point_victor == Side::P1);
    CHECK(recs[1].point_victor == Side::P2);
    CHECK(recs[1].of(Side::P2).distance_run == 12.5);
    CHECK(recs[2].of(Side::P1).double_fault == 1.0);
}

TEST_CASE("H:MM:SS elapsed time converts to seconds", "[core]") {
    const auto recs = parse(three_rows());
    CHECK(recs[2].elapsed_time == 90.0);
    CHECK(parse_elapsed("0:01:30") == 90.0);
    CHECK(parse_elapsed("1:00:05") == 3605.0);
}

TEST_CASE("missing distance column names the column", "[core]") {
    std::string text = three_rows();
    const auto pos = text.find("p_distance_run_p1");
    text.replace(pos, std::string("p_distance_run_p1").size(), "something_else");
    try {
        parse(text);
        FAIL("expected a schema error");
    } catch (const SchemaError& e) {
        CHECK(e.column().find("p_distance_run") != std::string::npos);
    }
}

TEST_CASE("non-numeric cell reports its row", "[core]") {
    std::string text = kHeader;
    text += "M1,Ann,Bea,0:00:00,0,0,0,0,1,1,0,0,0,0,0,0,0,0,5,6,3,4\n";
    text += "M1,Ann,Bea,0:00:30,0,0,0,0,1,1,x,0,0,0,0,0,0,0,5,6,3,4\n";
    try {
        parse(text);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.row() == 2);
    }
}

TEST_CASE("psychological factor defaults to zero when absent", "[core]") {
    std::string text =
        "match_id,player1,player2,elapsed_time,p_sets_p1,p_sets_p2,p_games_p1,p_games_p2,server,point_victor,"
        "p_ace_p1,p_ace_p2,p_double_fault_p1,p_double_fault_p2,p_break_pt_missed_p1,p_break_pt_missed_p2,"
        "p_break_pt_won_p1,p_break_pt_won_p2,p_distance_run_p1,p_distance_run_p2\n"
        "M1,Ann,Bea,0:00:00,0,0,0,0,1,1,0,0,0,0,0,0,0,0,5,6\n";
    const auto recs = parse(text);
    CHECK(recs[0].of(Side::P1).psychological_factor == 0.0);
}

TEST_CASE("to_series shape and indicator encoding", "[core]") {
    const auto recs = parse(three_rows());
    const auto schema = FeatureSchema::standard();
    const auto s1 = to_series(recs, Side::P1, schema);
    const auto s2 = to_series(recs, Side::P2, schema);
    CHECK(s1.rows() == 3);
    CHECK(s1.cols() == schema.size());
    CHECK(s1.time_index() == s2.time_index());
    const auto ace = schema.find("p_ace");
    CHECK(s1(0, ace) == 1.0);
    CHECK(s1(1, ace) == 0.0);
    CHECK(s1(2, ace) == 0.0);
    const auto pv = schema.find("point_victor");
    CHECK(s1(1, pv) == 0.0);
    CHECK(s2(1, pv) == 1.0);

    const std::vector<MatchPointRecord> two(recs.begin(), recs.begin() + 2);
    const FeatureSchema small({{"p_ace"}, {"server", FeatureKind::SharedFlag}, {"p_distance_run"}});
    const auto s = to_series(two, Side::P1, small);
    CHECK(s.rows() == 2);
    CHECK(s.cols() == 3);
}

TEST_CASE("standard schema has ten momentum features over 18 columns", "[core]") {
    const auto schema = FeatureSchema::standard();
    CHECK(schema.momentum_feature_count() == 10);
    CHECK(schema.csv_columns().size() == 18);
    CHECK_THROWS_AS(FeatureSchema({{"not_a_field"}}), SchemaError);
}

TEST_CASE("invariant violations are rejected", "[core]") {
    auto recs = parse(three_rows());
    recs[2].elapsed_time = 10.0;
    CHECK_THROWS_AS(validate_match(recs), InvariantError);
    CHECK_THROWS_AS(to_series(recs, Side::P1, FeatureSchema::standard()), InvariantError);
    CHECK_THROWS_AS(to_series(std::vector<MatchPointRecord>{}, Side::P1, FeatureSchema::standard()),
                    EmptyInputError);

    recs = parse(three_rows());
    recs[1].stats[0].distance_run = -1.0;
    CHECK_THROWS_AS(validate_match(recs), InvariantError);

    recs = parse(three_rows());
    recs[1].stats[0].sets = 1;
    recs[2].stats[0].sets = 0;
    CHECK_THROWS_AS(validate_match(recs), InvariantError);

    // games reset after a set is won
    recs = parse(three_rows());
    recs[0].stats[0].games = 5;
    recs[1].stats[0].games = 0;
    recs[1].stats[0].sets = 1;
    recs[2].stats[0].sets = 1;
    CHECK_NOTHROW(validate_match(recs));
}

TEST_CASE("csv round trip preserves series exactly", "[core][property]") {
    const auto schema = FeatureSchema::standard();
    const auto corpus = generate_corpus({.seed = 3, .matches = 3, .points = 150, .min_gap = 30});
    const auto records = flatten(corpus.matches);
    std::ostringstream out;
    write_csv(out, records, schema);
    std::istringstream in(out.str());
    const auto back = ingest_csv(in, schema);
    REQUIRE(back.size() == records.size());
    const auto a = group_matches(records);
    const auto b = group_matches(back);
    REQUIRE(a.size() == b.size());
    for (std::size_t m = 0; m < a.size(); ++m) {
        for (Side s : {Side::P1, Side::P2}) {
            CHECK(to_series(a[m].points, s, schema) == to_series(b[m].points, s, schema));
        }
    }
}

TEST_CASE("group_matches keeps file order per match", "[core]") {
    auto recs = parse(three_rows());
    auto other = recs;
    for (auto& r : other) r.match_id = "M2";
    std::vector<MatchPointRecord> mixed{recs[0], other[0], recs[1], other[1], recs[2]};
    const auto matches = group_matches(mixed);
    REQUIRE(matches.size() == 2);
    CHECK(matches[0].id == "M1");
    CHECK(matches[0].points.size() == 3);
    CHECK(matches[1].points.size() == 2);
    CHECK(matches[0].points[2].elapsed_time == 90.0);
}

TEST_CASE("synthetic generator is a pure function of its inputs", "[core][property]") {
    const std::vector<PlannedJump> jumps{{100, 3.0}};
    const auto a = generate_synthetic_match(7, 300, jumps);
    const auto b = generate_synthetic_match(7, 300, jumps);
    CHECK(a == b);
    const auto c = generate_synthetic_match(8, 300, jumps);
    CHECK_FALSE(a == c);
    CHECK_THROWS_AS(generate_synthetic_match(7, 50, jumps), ConfigError);
}

TEST_CASE("planted jump shifts the latent signal by its magnitude", "[core]") {
    const std::vector<PlannedJump> jumps{{100, 3.0}};
    const auto m = simulate_synthetic_match(11, 300, jumps);
    for (std::size_t t = 0; t < 300; ++t) CHECK(m.latent_p1[t] == (t >= 100 ? 3.0 : 0.0));
    const auto flat = simulate_synthetic_match(11, 300, {});
    for (double v : flat.latent_p1) CHECK(v == 0.0);
    validate_match(m.records);
}

TEST_CASE("synthetic corpus uses the shared CSV layout", "[core]") {
    const auto corpus = generate_corpus({.seed = 5, .matches = 4, .points = 500});
    std::ostringstream out;
    write_csv(out, flatten(corpus.matches), FeatureSchema::standard());
    std::istringstream in(out.str());
    const auto back = group_matches(ingest_csv(in, FeatureSchema::standard()));
    REQUIRE(back.size() == 4);
    for (const auto& m : back) {
        CHECK(m.points.size() == 500);
        validate_match(m.points);
    }
    for (const auto& planted : corpus.planted) {
        CHECK(planted.size() >= 2);
        CHECK(planted.size() <= 4);
    }
}

TEST_CASE("csv field escaping", "[core]") {
    CHECK(csv_escape("plain") == "plain");
    CHECK(csv_escape("a,b") == "\"a,b\"");
    CHECK(split_csv_line("\"a,b\",c") == std::vector<std::string>{"a,b", "c"});
    CHECK(format_elapsed(3605.0) == "1:00:05");
}
