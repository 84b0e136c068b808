#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ideoaxis/scaling/types.hpp"

namespace ideoaxis::evalcmp {

// One party's placement by an external expert source, on a fixed [-1, 1]
// scale (-1 = contra, +1 = pro). Grouped sources give several parties the
// same stance; only strictly ordered pairs enter pairwise accuracy.
struct ExpertPlacement {
    std::string topic_id;
    std::string party;
    double stance = 0.0;
    std::string source;
    std::string note;

    bool operator==(const ExpertPlacement&) const = default;
};

struct PartyPosition {
    std::string party;
    double median = 0.0;
    double mean = 0.0;
    int n_members = 0;

    bool operator==(const PartyPosition&) const = default;
};

enum class Statistic { MEDIAN, MEAN };

std::string to_string(Statistic s);
Statistic statistic_from_string(const std::string& s);

// A configured ordering assertion: the lesser party's position must sit
// strictly below the greater party's.
struct CheckSpec {
    std::string lesser;
    std::string greater;
    std::string description;  // defaults to "median(lesser) < median(greater)"

    bool operator==(const CheckSpec&) const = default;
};

struct SignCheck {
    std::string description;
    bool passed = false;

    bool operator==(const SignCheck&) const = default;
};

struct AgreementReport {
    std::string topic_id;
    double spearman_rho = 0.0;
    double kendall_tau = 0.0;
    double pairwise_accuracy = 0.0;
    int n_common_parties = 0;
    int n_expert_pairs = 0;  // pairs the expert source strictly orders
    std::vector<SignCheck> sign_checks;

    bool operator==(const AgreementReport&) const = default;

    bool all_checks_passed() const;
};

// Per-party position statistics over projected speakers, sorted by median
// (ties by party name). Every projection must carry a nonempty party.
std::vector<PartyPosition> party_positions(const std::vector<scaling::ProjectionResult>& results);

// Rank agreement between our party positions and an expert source, over the
// parties both sides know. Spearman uses average ranks, Kendall is the
// tie-corrected tau-b. Degenerate cases are total rather than errors: with no
// strictly ordered expert pair, pairwise_accuracy is vacuously 1 and tau is
// 0; a side with zero rank variance yields rho = 0.
AgreementReport rank_agreement(const std::string& topic_id,
                               const std::vector<PartyPosition>& ours,
                               const std::vector<ExpertPlacement>& expert,
                               const std::vector<CheckSpec>& checks = {},
                               Statistic statistic = Statistic::MEDIAN);

// Expert table I/O: tab-separated with header
// "topic_id\tparty\tstance\tsource\tnote".
std::vector<ExpertPlacement> load_expert(const std::string& path);

// Entries for one topic only.
std::vector<ExpertPlacement> filter_expert(const std::vector<ExpertPlacement>& placements,
                                           const std::string& topic_id);

// Checks file: {"schema_version": 1, "topic_id": ..., "checks": [{"lesser":
// ..., "greater": ..., "description"?: ...}]}.
struct ChecksFile {
    std::string topic_id;
    std::vector<CheckSpec> checks;
};

ChecksFile load_checks(const std::string& path);

nlohmann::json agreement_to_json(const AgreementReport& report);
AgreementReport agreement_from_json(const nlohmann::json& j);

// Full validation artifact written by the CLI: agreement plus the party
// positions it was computed from.
nlohmann::json validation_file_json(const AgreementReport& report,
                                    const std::vector<PartyPosition>& positions);

}  // namespace ideoaxis::evalcmp
