#include <algorithm>
#include <string>

#include "ideoaxis/common/error.hpp"
#include "ideoaxis/common/io.hpp"
#include "ideoaxis/common/utf8.hpp"
#include "ideoaxis/topics/topics.hpp"

namespace ideoaxis::topics {

namespace {

constexpr const char* kHeaderLine = "# ideoaxis-topics 1";
constexpr const char* kTableHeader = "group\ttopic_index\trank\tterm\tscore";

int parse_int(const std::string& field, const std::string& text) {
    try {
        std::size_t used = 0;
        const int value = std::stoi(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return value;
    } catch (const std::exception&) {
        throw ParseError(field, "not an integer: \"" + text + "\"");
    }
}

std::uint64_t parse_u64(const std::string& field, const std::string& text) {
    try {
        std::size_t used = 0;
        const unsigned long long value = std::stoull(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return value;
    } catch (const std::exception&) {
        throw ParseError(field, "not an unsigned integer: \"" + text + "\"");
    }
}

double parse_score(const std::string& text) {
    try {
        std::size_t used = 0;
        const double value = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return value;
    } catch (const std::exception&) {
        throw ParseError("score", "not a number: \"" + text + "\"");
    }
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto pos = text.find('\n', start);
        if (pos == std::string::npos) {
            if (start < text.size()) lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
    return lines;
}

GroupTopics& find_group(TopicsReport& report, const std::string& name) {
    const auto group = scaling::group_from_string(name);
    for (auto& g : report.groups) {
        if (g.group == group) return g;
    }
    throw ParseError("group", "row references undeclared group \"" + name + "\"");
}

std::string pad_to(const std::string& s, std::size_t width) {
    const auto points = utf8::count_codepoints(s);
    std::string out = s;
    if (points < width) out.append(width - points, ' ');
    return out;
}

}  // namespace

TopicsReport topics_report(const std::vector<GroupSentences>& groups, const Tokenizer& tokenizer,
                           const TopicsOptions& options) {
    if (options.k < 1) throw PreconditionError("cluster count must be at least 1");
    if (options.terms < 1) throw PreconditionError("term count must be at least 1");

    TopicsReport report;
    report.k = options.k;
    report.terms = options.terms;
    report.seed = options.seed;
    report.reducer = options.reducer;

    for (const auto& g : groups) {
        GroupTopics entry;
        entry.group = g.group;
        entry.n_sentences = static_cast<int>(g.sentences.size());
        try {
            if (g.sentences.size() != g.vectors.size()) {
                throw PreconditionError("group " + to_string(g.group) + " has " +
                                        std::to_string(g.sentences.size()) + " sentences but " +
                                        std::to_string(g.vectors.size()) + " vectors");
            }
            if (g.sentences.size() < static_cast<std::size_t>(options.k)) {
                throw PreconditionError(
                    "group " + to_string(g.group) + " has " + std::to_string(g.sentences.size()) +
                    " sentences; rerun with k <= " + std::to_string(g.sentences.size()));
            }

            std::vector<reduce::InputPoint> inputs;
            inputs.reserve(g.vectors.size());
            for (std::size_t i = 0; i < g.vectors.size(); ++i) {
                inputs.push_back(reduce::InputPoint{std::to_string(i),
                                                    reduce::PointKind::SEED_SENTENCE, std::nullopt,
                                                    g.vectors[i]});
            }
            const auto reduced =
                reduce::reduce_2d(inputs, options.reducer, options.seed, options.umap);
            std::vector<std::array<double, 2>> points;
            points.reserve(reduced.points.size());
            for (const auto& p : reduced.points) points.push_back({p.x, p.y});

            const auto labels = cluster_points(points, options.k, options.seed);
            std::vector<std::vector<std::string>> classes(options.k);
            std::vector<int> counts(options.k, 0);
            for (std::size_t i = 0; i < g.sentences.size(); ++i) {
                auto tokens = tokenizer.tokenize(g.sentences[i]);
                auto& cls = classes[labels[i]];
                cls.insert(cls.end(), std::make_move_iterator(tokens.begin()),
                           std::make_move_iterator(tokens.end()));
                ++counts[labels[i]];
            }

            const auto scored = top_terms(ctfidf(classes), static_cast<std::size_t>(options.terms));
            for (int c = 0; c < options.k; ++c) {
                TopicSummary summary;
                summary.group = g.group;
                summary.topic_index = c;
                summary.top_terms = scored[c];
                summary.n_sentences = counts[c];
                entry.topics.push_back(std::move(summary));
            }
        } catch (const Error& e) {
            entry.topics.clear();
            entry.error = e.what();
        }
        report.groups.push_back(std::move(entry));
    }
    return report;
}

std::string render_topics_tsv(const TopicsReport& report) {
    std::string out;
    out += kHeaderLine;
    out += "\n# k=" + std::to_string(report.k);
    out += "\n# terms=" + std::to_string(report.terms);
    out += "\n# seed=" + std::to_string(report.seed);
    out += "\n# reducer=" + to_string(report.reducer);
    out += "\n";
    for (const auto& g : report.groups) {
        out += "# group " + to_string(g.group) + " sentences=" + std::to_string(g.n_sentences) +
               "\n";
        if (g.error) out += "# error " + to_string(g.group) + "=" + *g.error + "\n";
        for (const auto& t : g.topics) {
            out += "# topic " + to_string(g.group) + "/" + std::to_string(t.topic_index) +
                   " sentences=" + std::to_string(t.n_sentences) + "\n";
        }
    }
    out += kTableHeader;
    out += "\n";
    for (const auto& g : report.groups) {
        for (const auto& t : g.topics) {
            for (std::size_t rank = 0; rank < t.top_terms.size(); ++rank) {
                out += to_string(g.group) + "\t" + std::to_string(t.topic_index) + "\t" +
                       std::to_string(rank) + "\t" + t.top_terms[rank].first + "\t" +
                       io::format_double(t.top_terms[rank].second) + "\n";
            }
        }
    }
    return out;
}

TopicsReport parse_topics_tsv(const std::string& text) {
    const auto lines = split_lines(text);
    if (lines.empty() || lines[0] != kHeaderLine) {
        throw SchemaVersionError("unrecognized topics table header; expected \"" +
                                 std::string(kHeaderLine) + "\"");
    }

    TopicsReport report;
    report.groups.clear();
    std::size_t i = 1;
    for (; i < lines.size(); ++i) {
        const auto& line = lines[i];
        if (line == kTableHeader) break;
        if (line.rfind("# ", 0) != 0) {
            throw ParseError("metadata", "expected \"# key=value\" or the table header, got \"" +
                                             line + "\"");
        }
        const std::string body = line.substr(2);
        if (body.rfind("k=", 0) == 0) {
            report.k = parse_int("k", body.substr(2));
        } else if (body.rfind("terms=", 0) == 0) {
            report.terms = parse_int("terms", body.substr(6));
        } else if (body.rfind("seed=", 0) == 0) {
            report.seed = parse_u64("seed", body.substr(5));
        } else if (body.rfind("reducer=", 0) == 0) {
            report.reducer = reduce::method_from_string(body.substr(8));
        } else if (body.rfind("group ", 0) == 0) {
            const std::string rest = body.substr(6);
            const auto sep = rest.find(" sentences=");
            if (sep == std::string::npos) throw ParseError("group", "malformed line: " + line);
            GroupTopics g;
            g.group = scaling::group_from_string(rest.substr(0, sep));
            g.n_sentences = parse_int("sentences", rest.substr(sep + 11));
            report.groups.push_back(std::move(g));
        } else if (body.rfind("error ", 0) == 0) {
            const std::string rest = body.substr(6);
            const auto eq = rest.find('=');
            if (eq == std::string::npos) throw ParseError("error", "malformed line: " + line);
            find_group(report, rest.substr(0, eq)).error = rest.substr(eq + 1);
        } else if (body.rfind("topic ", 0) == 0) {
            const std::string rest = body.substr(6);
            const auto slash = rest.find('/');
            const auto sep = rest.find(" sentences=");
            if (slash == std::string::npos || sep == std::string::npos || slash > sep) {
                throw ParseError("topic", "malformed line: " + line);
            }
            auto& g = find_group(report, rest.substr(0, slash));
            TopicSummary summary;
            summary.group = g.group;
            summary.topic_index = parse_int("topic_index", rest.substr(slash + 1, sep - slash - 1));
            summary.n_sentences = parse_int("sentences", rest.substr(sep + 11));
            g.topics.push_back(std::move(summary));
        } else {
            throw ParseError("metadata", "unknown metadata line: " + line);
        }
    }
    if (i >= lines.size()) throw ParseError("table", "missing table header row");

    for (++i; i < lines.size(); ++i) {
        const auto& line = lines[i];
        if (line.empty()) continue;
        const auto fields = io::split(line, '\t');
        if (fields.size() != 5) {
            throw ParseError("row", "expected 5 tab-separated fields, got " +
                                        std::to_string(fields.size()) + ": " + line);
        }
        auto& g = find_group(report, fields[0]);
        const int topic_index = parse_int("topic_index", fields[1]);
        auto topic = std::find_if(g.topics.begin(), g.topics.end(), [&](const TopicSummary& t) {
            return t.topic_index == topic_index;
        });
        if (topic == g.topics.end()) {
            throw ParseError("topic_index", "row references undeclared topic " + fields[0] + "/" +
                                                fields[1]);
        }
        const int rank = parse_int("rank", fields[2]);
        if (rank != static_cast<int>(topic->top_terms.size())) {
            throw ParseError("rank", "out-of-order rank " + fields[2] + " for topic " + fields[0] +
                                         "/" + fields[1]);
        }
        if (fields[3].empty()) throw ParseError("term", "empty term in row: " + line);
        topic->top_terms.emplace_back(fields[3], parse_score(fields[4]));
    }
    return report;
}

std::string render_topics_text(const TopicsReport& report) {
    std::string out = "topics: k=" + std::to_string(report.k) +
                      " terms=" + std::to_string(report.terms) +
                      " seed=" + std::to_string(report.seed) + " reducer=" +
                      to_string(report.reducer) + "\n\n";

    std::vector<std::string> titles;
    std::vector<std::vector<std::string>> columns;
    std::size_t n_rows = 0;
    for (const auto& g : report.groups) {
        titles.push_back(to_string(g.group) + " (" + std::to_string(g.n_sentences) +
                         " sentences)");
        std::vector<std::string> lines;
        if (g.error) {
            lines.push_back("error: " + *g.error);
        } else {
            for (const auto& t : g.topics) {
                std::string line = std::to_string(t.topic_index) + ": ";
                for (std::size_t r = 0; r < t.top_terms.size(); ++r) {
                    if (r > 0) line += ", ";
                    line += t.top_terms[r].first;
                }
                line += " [" + std::to_string(t.n_sentences) + "]";
                lines.push_back(std::move(line));
            }
        }
        n_rows = std::max(n_rows, lines.size());
        columns.push_back(std::move(lines));
    }

    std::vector<std::size_t> widths(titles.size());
    for (std::size_t c = 0; c < titles.size(); ++c) {
        widths[c] = utf8::count_codepoints(titles[c]);
        for (const auto& line : columns[c]) {
            widths[c] = std::max(widths[c], utf8::count_codepoints(line));
        }
    }

    for (std::size_t c = 0; c < titles.size(); ++c) {
        if (c > 0) out += " | ";
        out += pad_to(titles[c], widths[c]);
    }
    out += "\n";
    for (std::size_t row = 0; row < n_rows; ++row) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (c > 0) out += " | ";
            out += pad_to(row < columns[c].size() ? columns[c][row] : "", widths[c]);
        }
        out += "\n";
    }
    return out;
}

}  // namespace ideoaxis::topics
