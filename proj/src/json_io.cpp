#include "repopulse/json_io.hpp"

#include <cmath>

#include "repopulse/errors.hpp"
#include "repopulse/fsutil.hpp"

namespace repopulse {

using nlohmann::json;
using nlohmann::ordered_json;

IntervalGrid MetricsFile::grid() const {
    IntervalGrid g;
    g.start = start;
    g.bucket_width_days = bucket_width_days;
    g.bucket_count = series.empty() ? 0 : static_cast<int>(series.front().values.size());
    return g;
}

nlohmann::ordered_json to_json(const CommitsFile& file) {
    ordered_json root;
    root["schema"] = commits_schema;
    root["repo"] = file.repo;
    root["branch"] = file.branch;
    ordered_json records = ordered_json::array();
    for (const CommitRecord& r : file.records) {
        ordered_json rec;
        rec["hash"] = r.hash;
        rec["parent_hash"] = r.parent_hash;
        rec["author_name"] = r.author_name;
        rec["author_email"] = r.author_email;
        rec["authored_at"] = r.authored_at;
        rec["committed_at"] = r.committed_at;
        rec["effective_at"] = r.effective_at;
        rec["loc"] = r.loc;
        rec["kloc"] = r.kloc;
        rec["dkloc"] = r.dkloc;
        records.push_back(std::move(rec));
    }
    root["records"] = std::move(records);
    return root;
}

nlohmann::ordered_json to_json(const IssuesFile& file) {
    ordered_json root;
    root["schema"] = issues_schema;
    root["repo"] = file.repo;
    ordered_json records = ordered_json::array();
    for (const IssueRecord& r : file.records) {
        ordered_json rec;
        rec["id"] = r.id;
        rec["number"] = r.number;
        rec["kind"] = to_string(r.kind);
        rec["state"] = to_string(r.state);
        rec["created_at"] = r.created_at;
        if (r.closed_at) rec["closed_at"] = *r.closed_at;
        if (!r.title.empty()) rec["title"] = r.title;
        records.push_back(std::move(rec));
    }
    root["records"] = std::move(records);
    return root;
}

nlohmann::ordered_json to_json(const MetricsFile& file) {
    ordered_json root;
    root["schema"] = metrics_schema;
    root["bucket_width_days"] = file.bucket_width_days;
    root["start"] = file.start;
    ordered_json all = ordered_json::object();
    for (const MetricSeries& s : file.series) {
        ordered_json entry;
        entry["unit"] = s.unit;
        ordered_json values = ordered_json::array();
        for (const auto& v : s.values) {
            if (v && std::isfinite(*v)) {
                values.push_back(*v);
            } else {
                values.push_back(nullptr); // undefined entries are null, never NaN/Inf
            }
        }
        entry["values"] = std::move(values);
        all[std::string(to_string(s.name))] = std::move(entry);
    }
    root["series"] = std::move(all);
    return root;
}

namespace {

[[noreturn]] void bad_file(const std::string& path, const std::string& why) {
    throw PipelineError(ExitCode::invalid_input, path + ": " + why);
}

json load_document(const std::string& path, const char* expected_schema) {
    const auto text = read_file(path);
    if (!text) {
        throw PipelineError(ExitCode::missing_input, "missing input file: " + path);
    }
    json doc = json::parse(*text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) bad_file(path, "not a JSON object");
    if (doc.value("schema", "") != expected_schema) {
        bad_file(path, "expected schema \"" + std::string(expected_schema) + "\"");
    }
    return doc;
}

template <typename T>
T field(const json& obj, const char* name, const std::string& path) {
    const auto it = obj.find(name);
    if (it == obj.end()) bad_file(path, std::string("missing field ") + name);
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        bad_file(path, std::string("bad field ") + name);
    }
}

} // namespace

CommitsFile read_commits_file(const std::string& path) {
    const json doc = load_document(path, commits_schema);
    CommitsFile file;
    file.repo = doc.value("repo", "");
    file.branch = doc.value("branch", "");
    const auto it = doc.find("records");
    if (it == doc.end() || !it->is_array()) bad_file(path, "missing records array");
    for (const json& rec : *it) {
        CommitRecord r;
        r.hash = field<std::string>(rec, "hash", path);
        r.parent_hash = field<std::string>(rec, "parent_hash", path);
        r.author_name = field<std::string>(rec, "author_name", path);
        r.author_email = field<std::string>(rec, "author_email", path);
        r.authored_at = field<std::int64_t>(rec, "authored_at", path);
        r.committed_at = field<std::int64_t>(rec, "committed_at", path);
        r.effective_at = field<std::int64_t>(rec, "effective_at", path);
        r.loc = field<long long>(rec, "loc", path);
        r.kloc = field<double>(rec, "kloc", path);
        r.dkloc = field<double>(rec, "dkloc", path);
        if (!file.records.empty() && r.effective_at < file.records.back().effective_at) {
            bad_file(path, "effective_at is not non-decreasing");
        }
        file.records.push_back(std::move(r));
    }
    return file;
}

IssuesFile read_issues_file(const std::string& path) {
    const json doc = load_document(path, issues_schema);
    IssuesFile file;
    file.repo = doc.value("repo", "");
    const auto it = doc.find("records");
    if (it == doc.end() || !it->is_array()) bad_file(path, "missing records array");
    for (const json& rec : *it) {
        IssueRecord r;
        r.id = field<std::int64_t>(rec, "id", path);
        r.number = field<std::int64_t>(rec, "number", path);
        const auto kind = field<std::string>(rec, "kind", path);
        if (kind == "pull_request") {
            r.kind = IssueKind::pull_request;
        } else if (kind == "issue") {
            r.kind = IssueKind::issue;
        } else {
            bad_file(path, "unknown kind: " + kind);
        }
        const auto state = field<std::string>(rec, "state", path);
        if (state == "closed") {
            r.state = IssueState::closed;
        } else if (state == "open") {
            r.state = IssueState::open;
        } else {
            bad_file(path, "unknown state: " + state);
        }
        r.created_at = field<std::int64_t>(rec, "created_at", path);
        if (const auto c = rec.find("closed_at"); c != rec.end() && !c->is_null()) {
            r.closed_at = field<std::int64_t>(rec, "closed_at", path);
        }
        if (const auto t = rec.find("title"); t != rec.end() && t->is_string()) {
            r.title = t->get<std::string>();
        }
        if ((r.state == IssueState::closed) != r.closed_at.has_value()) {
            bad_file(path, "state and closed_at disagree for id " + std::to_string(r.id));
        }
        if (r.closed_at && *r.closed_at < r.created_at) {
            bad_file(path, "closed_at precedes created_at for id " + std::to_string(r.id));
        }
        file.records.push_back(std::move(r));
    }
    return file;
}

MetricsFile read_metrics_file(const std::string& path) {
    const json doc = load_document(path, metrics_schema);
    MetricsFile file;
    file.bucket_width_days = field<int>(doc, "bucket_width_days", path);
    file.start = field<std::int64_t>(doc, "start", path);
    const auto it = doc.find("series");
    if (it == doc.end() || !it->is_object()) bad_file(path, "missing series object");

    std::optional<std::size_t> length;
    // Iterate in canonical enum order so output is independent of the
    // document's key order.
    for (const Metric metric : all_metrics) {
        const auto entry = it->find(std::string(to_string(metric)));
        if (entry == it->end()) continue;
        MetricSeries s;
        s.name = metric;
        s.unit = field<std::string>(*entry, "unit", path);
        const auto values = entry->find("values");
        if (values == entry->end() || !values->is_array()) bad_file(path, "missing values array");
        for (const json& v : *values) {
            if (v.is_null()) {
                s.values.push_back(std::nullopt);
            } else if (v.is_number()) {
                s.values.push_back(v.get<double>());
            } else {
                bad_file(path, "series value is neither number nor null");
            }
        }
        if (length && *length != s.values.size()) {
            bad_file(path, "series lengths disagree");
        }
        length = s.values.size();
        file.series.push_back(std::move(s));
    }
    return file;
}

void write_commits_file(const std::string& path, const CommitsFile& file) {
    atomic_write_file(path, to_json(file).dump(2) + "\n");
}

void write_issues_file(const std::string& path, const IssuesFile& file) {
    atomic_write_file(path, to_json(file).dump(2) + "\n");
}

void write_metrics_file(const std::string& path, const MetricsFile& file) {
    atomic_write_file(path, to_json(file).dump(2) + "\n");
}

} // namespace repopulse
