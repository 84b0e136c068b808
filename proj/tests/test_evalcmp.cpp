#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "ideoaxis/common/error.hpp"
#include "ideoaxis/common/io.hpp"
#include "ideoaxis/evalcmp/evalcmp.hpp"

using namespace ideoaxis;
using evalcmp::AgreementReport;
using evalcmp::CheckSpec;
using evalcmp::ExpertPlacement;
using evalcmp::PartyPosition;

namespace {

scaling::ProjectionResult proj(const std::string& name, const std::string& party,
                               double normalized) {
    scaling::ProjectionResult r;
    r.speaker_name = name;
    r.party = party;
    r.topic_id = "jsdf";
    r.normalized = normalized;
    return r;
}

ExpertPlacement expert(const std::string& party, double stance,
                       const std::string& topic = "jsdf") {
    return ExpertPlacement{topic, party, stance, "test", ""};
}

// The worked Mielka-style setup: six parties, expert knows two groups.
std::vector<PartyPosition> grouped_ours() {
    return {
        PartyPosition{"JCP", 0.1, 0.1, 2},  PartyPosition{"CDP", 0.2, 0.2, 2},
        PartyPosition{"Komeito", 0.5, 0.5, 2}, PartyPosition{"JRP", 0.55, 0.55, 2},
        PartyPosition{"NDP", 0.6, 0.6, 2},  PartyPosition{"LDP", 0.8, 0.8, 2},
    };
}

std::vector<ExpertPlacement> grouped_expert() {
    return {expert("JCP", -1), expert("CDP", -1), expert("LDP", 1),
            expert("Komeito", 1), expert("JRP", 1), expert("NDP", 1)};
}

}  // namespace

TEST_CASE("party positions take the member median") {
    const std::vector<scaling::ProjectionResult> results = {
        proj("a1", "LDP", 0.2), proj("a2", "LDP", 0.8),   // even count -> midpoint
        proj("b1", "JCP", 0.15),                          // single member
        proj("c1", "CDP", 0.3), proj("c2", "CDP", 0.1), proj("c3", "CDP", 0.9),
    };
    const auto positions = evalcmp::party_positions(results);
    REQUIRE(positions.size() == 3);
    // Sorted by median: JCP 0.15, CDP 0.3, LDP 0.5.
    CHECK(positions[0].party == "JCP");
    CHECK(positions[0].median == doctest::Approx(0.15));
    CHECK(positions[0].n_members == 1);
    CHECK(positions[1].party == "CDP");
    CHECK(positions[1].median == doctest::Approx(0.3));
    CHECK(positions[1].mean == doctest::Approx((0.3 + 0.1 + 0.9) / 3.0));
    CHECK(positions[2].party == "LDP");
    CHECK(positions[2].median == doctest::Approx(0.5));

    CHECK_THROWS_AS(evalcmp::party_positions({}), PreconditionError);
    CHECK_THROWS_AS(evalcmp::party_positions({proj("x", "", 0.5)}), PreconditionError);
}

TEST_CASE("party medians recover a planted construction order") {
    std::vector<scaling::ProjectionResult> results;
    const std::vector<std::string> parties = {"JCP", "CDP", "Komeito", "LDP"};
    for (std::size_t p = 0; p < parties.size(); ++p) {
        const double base = 0.1 + 0.2 * static_cast<double>(p);
        for (int m = 0; m < 5; ++m) {
            results.push_back(proj(parties[p] + std::to_string(m), parties[p],
                                   base + 0.01 * (m - 2)));
        }
    }
    const auto positions = evalcmp::party_positions(results);
    REQUIRE(positions.size() == parties.size());
    for (std::size_t p = 0; p < parties.size(); ++p) {
        CHECK(positions[p].party == parties[p]);
        CHECK(positions[p].median == doctest::Approx(0.1 + 0.2 * static_cast<double>(p)));
        CHECK(positions[p].n_members == 5);
    }
}

TEST_CASE("identical orderings score perfectly") {
    std::vector<PartyPosition> ours;
    std::vector<ExpertPlacement> placements;
    const std::vector<std::string> parties = {"JCP", "CDP", "Komeito", "JRP", "NDP", "LDP"};
    for (std::size_t i = 0; i < parties.size(); ++i) {
        const double v = static_cast<double>(i) / 5.0;
        ours.push_back(PartyPosition{parties[i], v, v, 1});
        placements.push_back(expert(parties[i], -1.0 + 2.0 * v));
    }
    const auto report = evalcmp::rank_agreement("jsdf", ours, placements);
    CHECK(report.spearman_rho == doctest::Approx(1.0));
    CHECK(report.kendall_tau == doctest::Approx(1.0));
    CHECK(report.pairwise_accuracy == doctest::Approx(1.0));
    CHECK(report.n_common_parties == 6);
    CHECK(report.n_expert_pairs == 15);
}

TEST_CASE("reversed orderings score at the bottom") {
    std::vector<PartyPosition> ours;
    std::vector<ExpertPlacement> placements;
    const std::vector<std::string> parties = {"JCP", "CDP", "Komeito", "JRP", "NDP", "LDP"};
    for (std::size_t i = 0; i < parties.size(); ++i) {
        const double v = static_cast<double>(i) / 5.0;
        ours.push_back(PartyPosition{parties[i], v, v, 1});
        placements.push_back(expert(parties[i], 1.0 - 2.0 * v));
    }
    const auto report = evalcmp::rank_agreement("jsdf", ours, placements);
    CHECK(report.spearman_rho == doctest::Approx(-1.0));
    CHECK(report.kendall_tau == doctest::Approx(-1.0));
    CHECK(report.pairwise_accuracy == doctest::Approx(0.0));
}

TEST_CASE("grouped expert source: cross-group pairs drive the metrics") {
    const auto report = evalcmp::rank_agreement("jsdf", grouped_ours(), grouped_expert());
    // 2 contra x 4 pro parties -> 8 strictly ordered pairs, all concordant.
    CHECK(report.n_expert_pairs == 8);
    CHECK(report.pairwise_accuracy == doctest::Approx(1.0));
    // Hand-evaluated on average ranks x=(1..6), y=(1.5,1.5,4.5,4.5,4.5,4.5):
    // rho = 12 / sqrt(210). Tau-b: (C-D)=8, ties_y=7, n0=15 -> 8 / sqrt(15*8).
    CHECK(report.spearman_rho == doctest::Approx(12.0 / std::sqrt(210.0)).epsilon(1e-12));
    CHECK(report.kendall_tau == doctest::Approx(8.0 / std::sqrt(120.0)).epsilon(1e-12));
}

TEST_CASE("metrics are invariant under monotone transforms of our scores") {
    const auto baseline = evalcmp::rank_agreement("jsdf", grouped_ours(), grouped_expert());
    auto transformed = grouped_ours();
    for (auto& p : transformed) {
        p.median = std::exp(3.0 * p.median);  // strictly increasing
        p.mean = p.median;
    }
    const auto report = evalcmp::rank_agreement("jsdf", transformed, grouped_expert());
    CHECK(report.spearman_rho == doctest::Approx(baseline.spearman_rho).epsilon(1e-12));
    CHECK(report.kendall_tau == doctest::Approx(baseline.kendall_tau).epsilon(1e-12));
    CHECK(report.pairwise_accuracy == doctest::Approx(baseline.pairwise_accuracy));
}

TEST_CASE("parties unknown to the expert change nothing") {
    const auto baseline = evalcmp::rank_agreement("jsdf", grouped_ours(), grouped_expert());
    auto extended = grouped_ours();
    extended.push_back(PartyPosition{"SDP", 0.35, 0.35, 1});
    const auto report = evalcmp::rank_agreement("jsdf", extended, grouped_expert());
    CHECK(report.spearman_rho == baseline.spearman_rho);
    CHECK(report.kendall_tau == baseline.kendall_tau);
    CHECK(report.pairwise_accuracy == baseline.pairwise_accuracy);
    CHECK(report.n_common_parties == baseline.n_common_parties);
}

TEST_CASE("self-comparison is perfect agreement") {
    std::vector<ExpertPlacement> self;
    for (const auto& p : grouped_ours()) {
        self.push_back(expert(p.party, -1.0 + 2.0 * p.median));
    }
    const auto report = evalcmp::rank_agreement("jsdf", grouped_ours(), self);
    CHECK(report.spearman_rho == doctest::Approx(1.0));
    CHECK(report.kendall_tau == doctest::Approx(1.0));
    CHECK(report.pairwise_accuracy == doctest::Approx(1.0));
}

TEST_CASE("degenerate and invalid comparisons") {
    // Fewer than 3 common parties.
    const std::vector<PartyPosition> two = {PartyPosition{"LDP", 0.8, 0.8, 1},
                                            PartyPosition{"JCP", 0.1, 0.1, 1},
                                            PartyPosition{"SDP", 0.4, 0.4, 1}};
    CHECK_THROWS_AS(evalcmp::rank_agreement("jsdf", two, grouped_expert()), PreconditionError);

    // Expert places a party twice.
    auto doubled = grouped_expert();
    doubled.push_back(expert("LDP", 0.5));
    CHECK_THROWS_AS(evalcmp::rank_agreement("jsdf", grouped_ours(), doubled),
                    PreconditionError);

    // Expert with every stance tied: vacuous accuracy, zero correlations.
    std::vector<ExpertPlacement> tied;
    for (const auto& p : grouped_ours()) tied.push_back(expert(p.party, 0.0));
    const auto report = evalcmp::rank_agreement("jsdf", grouped_ours(), tied);
    CHECK(report.n_expert_pairs == 0);
    CHECK(report.pairwise_accuracy == 1.0);
    CHECK(report.kendall_tau == 0.0);
    CHECK(report.spearman_rho == 0.0);
}

TEST_CASE("sign checks compare configured party pairs") {
    const std::vector<CheckSpec> checks = {
        CheckSpec{"JCP", "LDP", ""},
        CheckSpec{"LDP", "JCP", "expects failure"},
    };
    const auto report =
        evalcmp::rank_agreement("jsdf", grouped_ours(), grouped_expert(), checks);
    REQUIRE(report.sign_checks.size() == 2);
    CHECK(report.sign_checks[0].description == "median(JCP) < median(LDP)");
    CHECK(report.sign_checks[0].passed);
    CHECK(report.sign_checks[1].description == "expects failure");
    CHECK_FALSE(report.sign_checks[1].passed);
    CHECK_FALSE(report.all_checks_passed());

    const std::vector<CheckSpec> unknown = {CheckSpec{"XYZ", "LDP", ""}};
    CHECK_THROWS_AS(evalcmp::rank_agreement("jsdf", grouped_ours(), grouped_expert(), unknown),
                    PreconditionError);
}

TEST_CASE("mean statistic is available behind the flag") {
    auto ours = grouped_ours();
    ours[0].mean = 0.99;  // JCP mean pulled above everyone else's
    const std::vector<CheckSpec> checks = {CheckSpec{"JCP", "LDP", ""}};
    const auto by_mean = evalcmp::rank_agreement("jsdf", ours, grouped_expert(), checks,
                                                 evalcmp::Statistic::MEAN);
    CHECK(by_mean.sign_checks[0].description == "mean(JCP) < mean(LDP)");
    CHECK_FALSE(by_mean.sign_checks[0].passed);
    const auto by_median = evalcmp::rank_agreement("jsdf", ours, grouped_expert(), checks);
    CHECK(by_median.sign_checks[0].passed);
}

TEST_CASE("shipped expert tables load and describe both topics") {
    const std::string dir = std::string(IDEOAXIS_DATA_DIR) + "/expert/";
    const auto jsdf = evalcmp::load_expert(dir + "jsdf.tsv");
    REQUIRE(jsdf.size() == 6);
    int contra = 0, pro = 0;
    for (const auto& p : jsdf) {
        CHECK(p.topic_id == "jsdf");
        CHECK(p.stance >= -1.0);
        CHECK(p.stance <= 1.0);
        if (p.stance < 0) ++contra;
        if (p.stance > 0) ++pro;
    }
    CHECK(contra == 2);
    CHECK(pro == 4);

    const auto npp = evalcmp::load_expert(dir + "npp.tsv");
    REQUIRE(npp.size() == 6);
    int neutral = 0;
    for (const auto& p : npp) {
        if (p.stance == 0.0) ++neutral;
    }
    CHECK(neutral == 3);
    CHECK(evalcmp::filter_expert(npp, "npp").size() == 6);
    CHECK(evalcmp::filter_expert(npp, "jsdf").empty());
}

TEST_CASE("expert table loader rejects malformed rows") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "ideoaxis-evalcmp-test";
    fs::create_directories(dir);

    const std::string header = "topic_id\tparty\tstance\tsource\tnote\n";
    io::write_file_atomic(dir / "bad_header.tsv", "party\tstance\n");
    CHECK_THROWS_AS(evalcmp::load_expert((dir / "bad_header.tsv").string()), ParseError);

    io::write_file_atomic(dir / "out_of_range.tsv", header + "t\tLDP\t2\tsrc\t\n");
    CHECK_THROWS_AS(evalcmp::load_expert((dir / "out_of_range.tsv").string()), ParseError);

    io::write_file_atomic(dir / "dup.tsv",
                          header + "t\tLDP\t1\tsrc\t\nt\tLDP\t0\tsrc\t\n");
    CHECK_THROWS_AS(evalcmp::load_expert((dir / "dup.tsv").string()), ParseError);

    io::write_file_atomic(dir / "short_row.tsv", header + "t\tLDP\t1\n");
    CHECK_THROWS_AS(evalcmp::load_expert((dir / "short_row.tsv").string()), ParseError);

    fs::remove_all(dir);
}

TEST_CASE("checks file loads with defaults and validates") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "ideoaxis-checks-test";
    fs::create_directories(dir);

    const std::string good = R"({"schema_version": 1, "topic_id": "jsdf",
        "checks": [{"lesser": "JCP", "greater": "LDP"},
                   {"lesser": "CDP", "greater": "JRP", "description": "named"}]})";
    io::write_file_atomic(dir / "checks.json", good);
    const auto file = evalcmp::load_checks((dir / "checks.json").string());
    CHECK(file.topic_id == "jsdf");
    REQUIRE(file.checks.size() == 2);
    CHECK(file.checks[0].lesser == "JCP");
    CHECK(file.checks[0].description.empty());
    CHECK(file.checks[1].description == "named");

    io::write_file_atomic(dir / "old.json", R"({"schema_version": 2, "topic_id": "x",
        "checks": []})");
    CHECK_THROWS_AS(evalcmp::load_checks((dir / "old.json").string()), SchemaVersionError);

    io::write_file_atomic(dir / "broken.json", "{nope");
    CHECK_THROWS_AS(evalcmp::load_checks((dir / "broken.json").string()), ParseError);

    fs::remove_all(dir);
}

TEST_CASE("agreement report round trips through json") {
    AgreementReport report;
    report.topic_id = "npp";
    report.spearman_rho = 0.875;
    report.kendall_tau = 12.0 / std::sqrt(210.0);
    report.pairwise_accuracy = 10.0 / 11.0;
    report.n_common_parties = 6;
    report.n_expert_pairs = 11;
    report.sign_checks = {{"median(JCP) < median(LDP)", true}, {"custom", false}};

    const auto j = evalcmp::agreement_to_json(report);
    CHECK(evalcmp::agreement_from_json(j) == report);

    auto tampered = j;
    tampered["schema_version"] = 9;
    CHECK_THROWS_AS(evalcmp::agreement_from_json(tampered), SchemaVersionError);

    const auto file = evalcmp::validation_file_json(report, grouped_ours());
    CHECK(file.at("schema_version") == 1);
    CHECK(file.at("party_positions").size() == 6);
    CHECK(evalcmp::agreement_from_json(file.at("agreement")) == report);
}
