#include "doctest.h"

#include <set>

#include "fairaudit/csv_io.hpp"
#include "fairaudit/generators.hpp"
#include "fairaudit/pabulib.hpp"
#include "fairaudit/report.hpp"
#include "fairaudit/review_prep.hpp"

using namespace fairaudit;

namespace {

const char* kMinimalElection =
    "META\n"
    "description;toy election\n"
    "budget;1000\n"
    "PROJECTS\n"
    "project_id;cost\n"
    "a;600\n"
    "b;500\n"
    "VOTES\n"
    "voter_id;vote\n"
    "1;a\n"
    "2;a,b\n";

}  // namespace

TEST_CASE("minimal pabulib file parses and echoes its content") {
    PBInstance inst = parse_pabulib(kMinimalElection);
    CHECK(inst.budget == doctest::Approx(1000.0));
    REQUIRE(inst.num_projects() == 2);
    CHECK(inst.projects[0].id == "a");
    CHECK(inst.projects[0].cost == doctest::Approx(600.0));
    REQUIRE(inst.num_voters() == 2);
    CHECK(inst.ballots[0] == std::vector<int>{0});
    CHECK(inst.ballots[1] == std::vector<int>{0, 1});
}

TEST_CASE("round trip is the identity on canonical files") {
    PabulibFile file = parse_pabulib_file(kMinimalElection);
    CHECK(serialize_pabulib(file) == kMinimalElection);
    // and a second parse of the serialization still agrees
    PabulibFile again = parse_pabulib_file(serialize_pabulib(file));
    CHECK(serialize_pabulib(again) == kMinimalElection);
}

TEST_CASE("pabulib errors carry location or cause") {
    CHECK_THROWS_AS(parse_pabulib("META\nbudget;10\nPROJECTS\nproject_id;cost\np;1\n"),
                    ParseError);  // missing VOTES
    CHECK_THROWS_AS(parse_pabulib("META\nbudget;zzz\nPROJECTS\nproject_id;cost\np;1\n"
                                  "VOTES\nvoter_id;vote\n1;p\n"),
                    ParseError);  // non-numeric budget
    CHECK_THROWS_AS(parse_pabulib("META\nbudget;10\nPROJECTS\nproject_id;cost\np;1\n"
                                  "VOTES\nvoter_id;vote\n1;zzz\n"),
                    ParseError);  // unknown project reference
    // empty VOTES section: no voters at all
    CHECK_THROWS(parse_pabulib("META\nbudget;10\nPROJECTS\nproject_id;cost\np;1\n"
                               "VOTES\nvoter_id;vote\n"));
    // malformed line numbers are reported
    try {
        parse_pabulib("META\nbudget\nPROJECTS\nproject_id;cost\np;1\nVOTES\nvoter_id;vote\n1;p\n");
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
    }
}

TEST_CASE("extra pabulib columns survive a round trip untouched") {
    std::string text =
        "META\n"
        "budget;50\n"
        "unknown_key;whatever\n"
        "PROJECTS\n"
        "project_id;cost;category\n"
        "x;20;roads\n"
        "y;40;parks\n"
        "VOTES\n"
        "voter_id;age;vote\n"
        "7;33;x,y\n";
    PabulibFile file = parse_pabulib_file(text);
    CHECK(serialize_pabulib(file) == text);
    PBInstance inst = to_pb_instance(file);
    CHECK(inst.num_projects() == 2);
    CHECK(inst.ballots[0].size() == 2);
    CHECK(inst.fundable(1));
}

TEST_CASE("goods CSV parses a 2x2 matrix") {
    GoodsCsv csv = parse_goods_csv("g1,g2\n3,1\n1,3\n");
    CHECK(csv.instance.n == 2);
    CHECK(csv.instance.m == 2);
    CHECK(csv.instance.value[0][0] == doctest::Approx(3.0));
    CHECK(csv.instance.value[1][1] == doctest::Approx(3.0));
    CHECK(csv.good_labels == std::vector<std::string>{"g1", "g2"});
}

TEST_CASE("goods CSV rejects ragged rows and negatives") {
    CHECK_THROWS_AS(parse_goods_csv("g1,g2\n1,2\n3\n"), ParseError);
    CHECK_THROWS_AS(parse_goods_csv("g1,g2\n1,-2\n3,4\n"), ParseError);
}

TEST_CASE("goods CSV round-trips through the serializer") {
    GoodsCsv csv = parse_goods_csv("g1,g2\n3,1\n1,3\n");
    std::string text = serialize_goods_csv(csv.instance, csv.good_labels);
    GoodsCsv again = parse_goods_csv(text);
    CHECK(again.instance.value == csv.instance.value);
}

TEST_CASE("multinomial rows always divide exactly 200 points") {
    for (std::uint64_t seed : {1ull, 42ull, 999ull}) {
        GoodsInstance inst = gen_uniform_multinomial(4, 7, seed);
        for (const auto& row : inst.value) {
            double total = 0.0;
            for (double v : row) total += v;
            CHECK(total == doctest::Approx(200.0));
        }
        GoodsInstance market = gen_dirichlet_multinomial(4, 7, seed);
        for (const auto& row : market.value) {
            double total = 0.0;
            for (double v : row) total += v;
            CHECK(total == doctest::Approx(200.0));
        }
    }
}

TEST_CASE("generators are deterministic per seed") {
    GoodsInstance a = gen_uniform_multinomial(5, 9, 77);
    GoodsInstance b = gen_uniform_multinomial(5, 9, 77);
    CHECK(a.value == b.value);
    GoodsInstance c = gen_uniform_multinomial(5, 9, 78);
    CHECK(a.value != c.value);
    PBInstance e1 = gen_pb_election(8, 30, 5);
    PBInstance e2 = gen_pb_election(8, 30, 5);
    CHECK(e1.budget == e2.budget);
    CHECK(e1.ballots == e2.ballots);
}

TEST_CASE("dirichlet rows correlate more than uniform rows") {
    // mean pairwise row correlation over many seeds
    auto mean_pairwise_correlation = [](auto gen) {
        double total = 0.0;
        int count = 0;
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            GoodsInstance inst = gen(4, 8, seed);
            for (int i = 0; i < inst.n; ++i)
                for (int j = i + 1; j < inst.n; ++j) {
                    double mi = 200.0 / 8, mj = 200.0 / 8;
                    double num = 0.0, di = 0.0, dj = 0.0;
                    for (int g = 0; g < 8; ++g) {
                        num += (inst.value[i][g] - mi) * (inst.value[j][g] - mj);
                        di += (inst.value[i][g] - mi) * (inst.value[i][g] - mi);
                        dj += (inst.value[j][g] - mj) * (inst.value[j][g] - mj);
                    }
                    if (di > 0 && dj > 0) {
                        total += num / std::sqrt(di * dj);
                        ++count;
                    }
                }
        }
        return total / count;
    };
    double uniform = mean_pairwise_correlation(gen_uniform_multinomial);
    double market = mean_pairwise_correlation(gen_dirichlet_multinomial);
    CHECK(market > uniform + 0.1);
}

TEST_CASE("report JSON encodes infinities as strings with flags") {
    FairnessReport report;
    report.ihr = kInf;
    report.per = 2.5;
    report.pf = kInf;
    report.nw = 1.5;
    report.ghr_fractions = {0.0, 0.5};
    report.ghr_values = {kInf, 1.25};
    report.ghr_witnesses = {std::nullopt, std::nullopt};
    json j = report_entry("inst-1", "util", report, 10.0);
    CHECK(j["ihr"] == "inf");
    CHECK(j["ihr_infinite"] == true);
    CHECK(j["per"] == 2.5);
    CHECK(j["per_infinite"] == false);
    CHECK(j["pf"] == "inf");
    CHECK(j["ghr_curve"][0]["value"] == "inf");
    CHECK(j["ghr_curve"][1]["value"] == 1.25);
    std::string csv = reports_to_csv({j});
    CHECK(csv.find("inf") != std::string::npos);
    CHECK(csv.find("inst-1,util") != std::string::npos);
}

TEST_CASE("authorship inference finds a maximum matching on the conflict matrix") {
    // papers 0,1,2 conflict with reviewers forming a chain; a perfect matching exists
    std::vector<std::vector<bool>> conflict = {
        {true, true, false, false},
        {false, true, true, false},
        {false, false, true, true},
    };
    std::vector<int> author = infer_authorship(conflict);
    std::set<int> used(author.begin(), author.end());
    CHECK(used.size() == 3);  // all matched, all distinct
    for (int p = 0; p < 3; ++p) {
        REQUIRE(author[p] >= 0);
        CHECK(conflict[p][author[p]]);
    }
}

TEST_CASE("review subsampling is seeded and keeps author conflicts") {
    const int papers = 12;
    std::vector<std::vector<double>> sim(papers, std::vector<double>(papers, 0.0));
    std::vector<std::vector<bool>> conflict(papers, std::vector<bool>(papers, false));
    Rng rng(3);
    for (int p = 0; p < papers; ++p) {
        for (int r = 0; r < papers; ++r) sim[p][r] = rng.uniform();
        conflict[p][(p + 1) % papers] = true;  // a cyclic perfect matching
    }
    ReviewInstance a = subsample_review_instance(sim, conflict, 5, 99, 1);
    ReviewInstance b = subsample_review_instance(sim, conflict, 5, 99, 1);
    CHECK(a.similarity == b.similarity);
    CHECK(a.n == 5);
    for (int i = 0; i < a.n; ++i) CHECK(a.conflicted(i, i));
    ReviewInstance c = subsample_review_instance(sim, conflict, 5, 100, 1);
    CHECK(a.similarity != c.similarity);
    CHECK_THROWS(subsample_review_instance(sim, conflict, 40, 1));
}

TEST_CASE("seeded permutations are reproducible") {
    CHECK(seeded_permutation(6, 5) == seeded_permutation(6, 5));
    CHECK(seeded_permutation(6, 5) != seeded_permutation(6, 6));
}

TEST_CASE("ghr curve in a report is monotone non-increasing") {
    PBInstance inst = gen_pb_election(6, 15, 11);
    EnumeratedSpace space = enumerate_budget_feasible(inst);
    BudgetSelection none;
    UtilityVector u = utility_vector(inst, none);
    AuditOptions opt;
    opt.ghr_fractions = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
    OutcomeSpace wrapped = space;
    FairnessReport report = audit_space(wrapped, u, opt);
    for (std::size_t k = 1; k < report.ghr_values.size(); ++k)
        CHECK(report.ghr_values[k] <= report.ghr_values[k - 1] + 1e-12);
}
