#include "ideoaxis/evalcmp/evalcmp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "ideoaxis/common/error.hpp"
#include "ideoaxis/common/io.hpp"

namespace ideoaxis::evalcmp {

namespace {

constexpr const char* kExpertHeader = "topic_id\tparty\tstance\tsource\tnote";

double median_of(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

// Ranks 1..n with tied values sharing their average rank.
std::vector<double> average_ranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double shared = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
        i = j + 1;
    }
    return ranks;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double cov = 0.0, vx = 0.0, vy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        cov += (x[i] - mx) * (y[i] - my);
        vx += (x[i] - mx) * (x[i] - mx);
        vy += (y[i] - my) * (y[i] - my);
    }
    if (vx <= 0.0 || vy <= 0.0) return 0.0;
    return cov / std::sqrt(vx * vy);
}

double statistic_of(const PartyPosition& p, Statistic s) {
    return s == Statistic::MEDIAN ? p.median : p.mean;
}

double parse_stance(const std::string& text) {
    try {
        std::size_t used = 0;
        const double value = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return value;
    } catch (const std::exception&) {
        throw ParseError("stance", "not a number: \"" + text + "\"");
    }
}

}  // namespace

std::string to_string(Statistic s) { return s == Statistic::MEDIAN ? "median" : "mean"; }

Statistic statistic_from_string(const std::string& s) {
    if (s == "median") return Statistic::MEDIAN;
    if (s == "mean") return Statistic::MEAN;
    throw ParseError("statistic", "expected \"median\" or \"mean\", got \"" + s + "\"");
}

bool AgreementReport::all_checks_passed() const {
    return std::all_of(sign_checks.begin(), sign_checks.end(),
                       [](const SignCheck& c) { return c.passed; });
}

std::vector<PartyPosition> party_positions(
    const std::vector<scaling::ProjectionResult>& results) {
    if (results.empty()) throw PreconditionError("no projection results to aggregate");
    std::map<std::string, std::vector<double>> by_party;
    for (const auto& r : results) {
        if (r.party.empty()) {
            throw PreconditionError("speaker \"" + r.speaker_name +
                                    "\" has no party; cannot aggregate");
        }
        by_party[r.party].push_back(r.normalized);
    }

    std::vector<PartyPosition> positions;
    positions.reserve(by_party.size());
    for (const auto& [party, values] : by_party) {
        PartyPosition p;
        p.party = party;
        p.median = median_of(values);
        p.mean = std::accumulate(values.begin(), values.end(), 0.0) /
                 static_cast<double>(values.size());
        p.n_members = static_cast<int>(values.size());
        positions.push_back(std::move(p));
    }
    std::sort(positions.begin(), positions.end(), [](const auto& a, const auto& b) {
        if (a.median != b.median) return a.median < b.median;
        return a.party < b.party;
    });
    return positions;
}

AgreementReport rank_agreement(const std::string& topic_id,
                               const std::vector<PartyPosition>& ours,
                               const std::vector<ExpertPlacement>& expert,
                               const std::vector<CheckSpec>& checks, Statistic statistic) {
    std::map<std::string, double> expert_stance;
    for (const auto& e : expert) {
        if (e.topic_id != topic_id) continue;
        if (!expert_stance.emplace(e.party, e.stance).second) {
            throw PreconditionError("expert source places party \"" + e.party +
                                    "\" twice for topic " + topic_id);
        }
    }
    std::map<std::string, double> our_stat;
    for (const auto& p : ours) our_stat.emplace(p.party, statistic_of(p, statistic));

    std::vector<std::string> common;
    for (const auto& [party, stance] : expert_stance) {
        if (our_stat.count(party) > 0) common.push_back(party);
    }
    if (common.size() < 3) {
        throw PreconditionError("need at least 3 parties common to both sources for topic " +
                                topic_id + ", have " + std::to_string(common.size()));
    }

    std::vector<double> x, y;
    for (const auto& party : common) {
        x.push_back(our_stat.at(party));
        y.push_back(expert_stance.at(party));
    }

    AgreementReport report;
    report.topic_id = topic_id;
    report.n_common_parties = static_cast<int>(common.size());
    report.spearman_rho = pearson(average_ranks(x), average_ranks(y));

    long long concordant = 0, discordant = 0, ties_x = 0, ties_y = 0;
    long long comparable = 0, strictly_concordant = 0;
    const std::size_t n = common.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = x[i] - x[j];
            const double dy = y[i] - y[j];
            if (dx == 0.0) ++ties_x;
            if (dy == 0.0) ++ties_y;
            if (dx * dy > 0.0) ++concordant;
            if (dx * dy < 0.0) ++discordant;
            if (dy != 0.0) {
                ++comparable;
                if (dx * dy > 0.0) ++strictly_concordant;
            }
        }
    }
    const long long n0 = static_cast<long long>(n) * (static_cast<long long>(n) - 1) / 2;
    const double denom = std::sqrt(static_cast<double>(n0 - ties_x)) *
                         std::sqrt(static_cast<double>(n0 - ties_y));
    report.kendall_tau =
        denom > 0.0 ? static_cast<double>(concordant - discordant) / denom : 0.0;
    report.n_expert_pairs = static_cast<int>(comparable);
    report.pairwise_accuracy =
        comparable > 0 ? static_cast<double>(strictly_concordant) / comparable : 1.0;

    for (const auto& spec : checks) {
        if (our_stat.count(spec.lesser) == 0) {
            throw PreconditionError("sign check references party \"" + spec.lesser +
                                    "\" absent from the results");
        }
        if (our_stat.count(spec.greater) == 0) {
            throw PreconditionError("sign check references party \"" + spec.greater +
                                    "\" absent from the results");
        }
        SignCheck check;
        check.description = spec.description.empty()
                                ? to_string(statistic) + "(" + spec.lesser + ") < " +
                                      to_string(statistic) + "(" + spec.greater + ")"
                                : spec.description;
        check.passed = our_stat.at(spec.lesser) < our_stat.at(spec.greater);
        report.sign_checks.push_back(std::move(check));
    }
    return report;
}

std::vector<ExpertPlacement> load_expert(const std::string& path) {
    const auto lines = io::read_lines(path);
    std::vector<ExpertPlacement> placements;
    std::set<std::pair<std::string, std::string>> seen;
    bool header_seen = false;
    for (const auto& line : lines) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line != kExpertHeader) {
                throw ParseError("header", "expected \"" + std::string(kExpertHeader) +
                                               "\", got \"" + line + "\"");
            }
            header_seen = true;
            continue;
        }
        const auto fields = io::split(line, '\t');
        if (fields.size() != 5) {
            throw ParseError("row", "expected 5 tab-separated fields, got " +
                                        std::to_string(fields.size()) + ": " + line);
        }
        ExpertPlacement p;
        p.topic_id = fields[0];
        p.party = fields[1];
        p.stance = parse_stance(fields[2]);
        p.source = fields[3];
        p.note = fields[4];
        if (p.topic_id.empty()) throw ParseError("topic_id", "empty topic_id in row: " + line);
        if (p.party.empty()) throw ParseError("party", "empty party in row: " + line);
        if (p.stance < -1.0 || p.stance > 1.0) {
            throw ParseError("stance", "stance " + fields[2] + " outside [-1, 1] for party " +
                                           p.party);
        }
        if (!seen.emplace(p.topic_id, p.party).second) {
            throw ParseError("party", "party " + p.party + " listed twice for topic " +
                                          p.topic_id);
        }
        placements.push_back(std::move(p));
    }
    if (!header_seen) throw ParseError("header", "expert table is empty: " + path);
    return placements;
}

std::vector<ExpertPlacement> filter_expert(const std::vector<ExpertPlacement>& placements,
                                           const std::string& topic_id) {
    std::vector<ExpertPlacement> out;
    for (const auto& p : placements) {
        if (p.topic_id == topic_id) out.push_back(p);
    }
    return out;
}

ChecksFile load_checks(const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(io::read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("checks", std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("schema_version")) {
        throw ParseError("checks", "expected an object with schema_version");
    }
    if (j.at("schema_version").get<int>() != 1) {
        throw SchemaVersionError("unsupported checks schema_version " +
                                 j.at("schema_version").dump());
    }
    ChecksFile file;
    try {
        file.topic_id = j.at("topic_id").get<std::string>();
        for (const auto& entry : j.at("checks")) {
            CheckSpec spec;
            spec.lesser = entry.at("lesser").get<std::string>();
            spec.greater = entry.at("greater").get<std::string>();
            if (entry.contains("description")) {
                spec.description = entry.at("description").get<std::string>();
            }
            if (spec.lesser.empty() || spec.greater.empty()) {
                throw ParseError("checks", "check entries need nonempty lesser and greater");
            }
            file.checks.push_back(std::move(spec));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("checks", e.what());
    }
    if (file.topic_id.empty()) throw ParseError("topic_id", "checks file has empty topic_id");
    return file;
}

nlohmann::json agreement_to_json(const AgreementReport& report) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : report.sign_checks) {
        checks.push_back({{"description", c.description}, {"passed", c.passed}});
    }
    return nlohmann::json{{"schema_version", 1},
                          {"topic_id", report.topic_id},
                          {"spearman_rho", report.spearman_rho},
                          {"kendall_tau", report.kendall_tau},
                          {"pairwise_accuracy", report.pairwise_accuracy},
                          {"n_common_parties", report.n_common_parties},
                          {"n_expert_pairs", report.n_expert_pairs},
                          {"sign_checks", checks}};
}

AgreementReport agreement_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("schema_version")) {
        throw ParseError("agreement", "expected an object with schema_version");
    }
    if (j.at("schema_version").get<int>() != 1) {
        throw SchemaVersionError("unsupported agreement schema_version " +
                                 j.at("schema_version").dump());
    }
    AgreementReport report;
    try {
        report.topic_id = j.at("topic_id").get<std::string>();
        report.spearman_rho = j.at("spearman_rho").get<double>();
        report.kendall_tau = j.at("kendall_tau").get<double>();
        report.pairwise_accuracy = j.at("pairwise_accuracy").get<double>();
        report.n_common_parties = j.at("n_common_parties").get<int>();
        report.n_expert_pairs = j.at("n_expert_pairs").get<int>();
        for (const auto& entry : j.at("sign_checks")) {
            report.sign_checks.push_back(SignCheck{entry.at("description").get<std::string>(),
                                                   entry.at("passed").get<bool>()});
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("agreement", e.what());
    }
    return report;
}

nlohmann::json validation_file_json(const AgreementReport& report,
                                    const std::vector<PartyPosition>& positions) {
    nlohmann::json parties = nlohmann::json::array();
    for (const auto& p : positions) {
        parties.push_back({{"party", p.party},
                           {"median", p.median},
                           {"mean", p.mean},
                           {"n_members", p.n_members}});
    }
    return nlohmann::json{{"schema_version", 1},
                          {"agreement", agreement_to_json(report)},
                          {"party_positions", parties}};
}

}  // namespace ideoaxis::evalcmp
