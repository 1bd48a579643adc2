#include "pmt/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "pmt/errors.hpp"
#include "pmt/rng.hpp"

namespace pmt {

namespace {

std::string kind_name(FeatureKind k) {
    return k == FeatureKind::Numeric ? "numeric" : "categorical";
}
std::string level_name(FeatureLevel l) {
    return l == FeatureLevel::Dynamic ? "dynamic" : "static";
}
std::string granularity_name(Granularity g) {
    switch (g) {
        case Granularity::Mutant: return "mutant";
        case Granularity::Method: return "method";
        case Granularity::Class: return "class";
        case Granularity::Package: return "package";
    }
    return "mutant";
}

FeatureKind parse_kind(const std::string& s) {
    if (s == "numeric") return FeatureKind::Numeric;
    if (s == "categorical") return FeatureKind::Categorical;
    throw validation_error("unknown feature kind: " + s);
}
FeatureLevel parse_level(const std::string& s) {
    if (s == "dynamic") return FeatureLevel::Dynamic;
    if (s == "static") return FeatureLevel::Static;
    throw validation_error("unknown feature level: " + s);
}
Granularity parse_granularity(const std::string& s) {
    if (s == "mutant") return Granularity::Mutant;
    if (s == "method" || s == "mm") return Granularity::Method;
    if (s == "class" || s == "cc") return Granularity::Class;
    if (s == "package" || s == "pp") return Granularity::Package;
    throw validation_error("unknown feature granularity: " + s);
}

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

} // namespace

FeatureSchema::FeatureSchema(std::vector<FeatureSpec> features)
    : features_(std::move(features)) {
    cat_slot_.assign(features_.size(), -1);
    int slot = 0;
    for (std::size_t i = 0; i < features_.size(); ++i) {
        const auto& f = features_[i];
        if (f.name.empty()) throw validation_error("schema: empty feature name");
        if (!index_.emplace(f.name, i).second)
            throw validation_error("schema: duplicate feature name: " + f.name);
        if (f.kind == FeatureKind::Categorical) cat_slot_[i] = slot++;
    }
}

FeatureSchema FeatureSchema::default_schema() {
    using K = FeatureKind;
    using L = FeatureLevel;
    using G = Granularity;
    std::vector<FeatureSpec> f = {
        {"numExecuted", K::Numeric, L::Dynamic, G::Mutant},
        {"MutatorClass", K::Categorical, L::Static, G::Mutant},
        {"numAssertInTC", K::Numeric, L::Dynamic, G::Mutant},
        {"numTestCover", K::Numeric, L::Dynamic, G::Mutant},
        {"ppavcc", K::Numeric, L::Static, G::Package},
        {"cchalsteadCumulativeBugs", K::Numeric, L::Static, G::Class},
        {"ppRVF", K::Numeric, L::Static, G::Package},
        {"ppnumberOfMethods", K::Numeric, L::Static, G::Package},
        {"ppnumberOfClasses", K::Numeric, L::Static, G::Package},
        {"ppmaintainabilityIndexNC", K::Numeric, L::Static, G::Package},
        {"ppfanout", K::Numeric, L::Static, G::Package},
        {"ccmaintainabilityIndex", K::Numeric, L::Static, G::Class},
        {"mmhalsteadDifficulty", K::Numeric, L::Static, G::Method},
        {"ppabstractness", K::Numeric, L::Static, G::Package},
        {"ppmaintainabilityIndex", K::Numeric, L::Static, G::Package},
        {"ccexternalMethodCalls", K::Numeric, L::Static, G::Class},
        {"mminstanceVariablesReferenced", K::Numeric, L::Static, G::Method},
        {"ccimportedPackages", K::Numeric, L::Static, G::Class},
        {"ppdistance", K::Numeric, L::Static, G::Package},
        {"returnType", K::Categorical, L::Static, G::Method},
        {"ccfanIn", K::Numeric, L::Static, G::Class},
        {"ppfanin", K::Numeric, L::Static, G::Package},
        {"pploc", K::Numeric, L::Static, G::Package},
        {"ccmaintainabilityIndexNC", K::Numeric, L::Static, G::Class},
        {"mmexternalMethodsCalled", K::Numeric, L::Static, G::Method},
        {"ppinstability", K::Numeric, L::Static, G::Package},
        {"ppmaxcc", K::Numeric, L::Static, G::Package},
        {"mmvariablesReferenced", K::Numeric, L::Static, G::Method},
        {"ccunweightedClassSize", K::Numeric, L::Static, G::Class},
        {"numAssertInTM", K::Numeric, L::Dynamic, G::Mutant},
    };
    return FeatureSchema(std::move(f));
}

std::optional<std::size_t> FeatureSchema::index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::size_t> FeatureSchema::categorical_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < features_.size(); ++i)
        if (features_[i].kind == FeatureKind::Categorical) out.push_back(i);
    return out;
}

int FeatureSchema::categorical_slot(std::size_t feature_index) const {
    return cat_slot_[feature_index];
}

std::vector<std::string> FeatureSchema::names() const {
    std::vector<std::string> out;
    out.reserve(features_.size());
    for (const auto& f : features_) out.push_back(f.name);
    return out;
}

FeatureSchema FeatureSchema::subset(const std::vector<std::string>& keep) const {
    std::vector<FeatureSpec> subset;
    subset.reserve(keep.size());
    for (const auto& name : keep) {
        auto idx = index_of(name);
        if (!idx) throw validation_error("schema subset: unknown feature: " + name);
        subset.push_back(features_[*idx]);
    }
    return FeatureSchema(std::move(subset));
}

std::string FeatureSchema::to_json() const {
    nlohmann::json j;
    j["features"] = nlohmann::json::array();
    for (const auto& f : features_) {
        j["features"].push_back({{"name", f.name},
                                 {"kind", kind_name(f.kind)},
                                 {"level", level_name(f.level)},
                                 {"granularity", granularity_name(f.granularity)}});
    }
    return j.dump(2);
}

FeatureSchema FeatureSchema::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw validation_error(std::string("schema: invalid JSON: ") + e.what());
    }
    if (!j.contains("features") || !j["features"].is_array())
        throw validation_error("schema: missing 'features' array");
    std::vector<FeatureSpec> f;
    for (const auto& jf : j["features"]) {
        FeatureSpec spec;
        spec.name = jf.at("name").get<std::string>();
        spec.kind = parse_kind(jf.at("kind").get<std::string>());
        spec.level = parse_level(jf.at("level").get<std::string>());
        spec.granularity = parse_granularity(jf.at("granularity").get<std::string>());
        f.push_back(std::move(spec));
    }
    return FeatureSchema(std::move(f));
}

FeatureSchema FeatureSchema::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open schema file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

void FeatureSchema::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write schema file: " + path);
    out << to_json() << "\n";
}

bool FeatureSchema::operator==(const FeatureSchema& other) const {
    if (features_.size() != other.features_.size()) return false;
    for (std::size_t i = 0; i < features_.size(); ++i) {
        const auto& a = features_[i];
        const auto& b = other.features_[i];
        if (a.name != b.name || a.kind != b.kind || a.level != b.level ||
            a.granularity != b.granularity)
            return false;
    }
    return true;
}

Dataset::Dataset(FeatureSchema schema, std::vector<MutantRecord> records)
    : schema_(std::move(schema)) {
    records_.reserve(records.size());
    for (auto& r : records) add_record(std::move(r));
}

void Dataset::add_record(MutantRecord rec, const std::string& context) {
    const std::string where = context.empty() ? "record" : context;
    if (rec.project.empty())
        throw validation_error(where + ": empty project identifier");
    if (rec.values.size() != schema_.size())
        throw validation_error(where + ": expected " + std::to_string(schema_.size()) +
                               " feature values, got " + std::to_string(rec.values.size()));
    const std::size_t n_cat = schema_.categorical_indices().size();
    if (rec.categories.size() != n_cat)
        throw validation_error(where + ": expected " + std::to_string(n_cat) +
                               " categorical values, got " + std::to_string(rec.categories.size()));
    for (std::size_t i = 0; i < schema_.size(); ++i) {
        if (schema_.at(i).kind == FeatureKind::Numeric && !std::isfinite(rec.values[i]))
            throw validation_error(where + ": column '" + schema_.at(i).name +
                                   "': non-finite value");
    }
    const auto exec_idx = schema_.index_of("numExecuted");
    const auto cover_idx = schema_.index_of("numTestCover");
    if (exec_idx && rec.values[*exec_idx] < 0)
        throw validation_error(where + ": column 'numExecuted': negative count");
    if (cover_idx && rec.values[*cover_idx] < 0)
        throw validation_error(where + ": column 'numTestCover': negative count");
    if (exec_idx && cover_idx) {
        const bool executed = rec.values[*exec_idx] > 0;
        const bool covered = rec.values[*cover_idx] > 0;
        if (executed != covered)
            throw validation_error(where + ": inconsistent coverage: numExecuted=" +
                                   format_double(rec.values[*exec_idx]) + " but numTestCover=" +
                                   format_double(rec.values[*cover_idx]));
    }
    records_.push_back(std::move(rec));
}

std::vector<int> Dataset::labels() const {
    std::vector<int> y;
    y.reserve(records_.size());
    for (const auto& r : records_) y.push_back(r.label == Label::Killed ? 1 : 0);
    return y;
}

std::vector<std::string> Dataset::distinct_projects() const {
    std::set<std::string> seen;
    for (const auto& r : records_) seen.insert(r.project);
    return {seen.begin(), seen.end()};
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

double parse_numeric(const std::string& cell, std::size_t row, const std::string& col) {
    if (cell.empty())
        throw validation_error("row " + std::to_string(row) + ", column '" + col +
                               "': empty numeric cell");
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v))
        throw validation_error("row " + std::to_string(row) + ", column '" + col +
                               "': unparsable numeric value '" + cell + "'");
    return v;
}

} // namespace

Dataset load_csv(const std::string& path, const FeatureSchema& schema) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open CSV file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw validation_error(path + ": empty file");
    const auto header = split_line(line);

    std::map<std::string, std::size_t> col_index;
    for (std::size_t i = 0; i < header.size(); ++i) col_index.emplace(header[i], i);

    auto require = [&](const std::string& name) {
        auto it = col_index.find(name);
        if (it == col_index.end())
            throw validation_error(path + ": missing column '" + name + "'");
        return it->second;
    };
    const std::size_t project_col = require("project");
    const std::size_t label_col = require("label");
    std::vector<std::size_t> feature_cols(schema.size());
    for (std::size_t i = 0; i < schema.size(); ++i)
        feature_cols[i] = require(schema.at(i).name);

    Dataset ds(schema);
    const std::size_t n_cat = schema.categorical_indices().size();
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        if (!line.empty() && line[0] == '#') continue;
        const auto fields = split_line(line);
        if (fields.size() < header.size())
            throw validation_error("row " + std::to_string(row) + ": expected " +
                                   std::to_string(header.size()) + " fields, got " +
                                   std::to_string(fields.size()));
        MutantRecord rec;
        rec.project = fields[project_col];
        const std::string label = lower(fields[label_col]);
        if (label == "killed")
            rec.label = Label::Killed;
        else if (label == "survived")
            rec.label = Label::Survived;
        else
            throw validation_error("row " + std::to_string(row) +
                                   ", column 'label': unknown label token '" +
                                   fields[label_col] + "'");
        rec.values.assign(schema.size(), 0.0);
        rec.categories.assign(n_cat, "");
        for (std::size_t i = 0; i < schema.size(); ++i) {
            const std::string& cell = fields[feature_cols[i]];
            if (schema.at(i).kind == FeatureKind::Categorical) {
                if (cell.empty())
                    throw validation_error("row " + std::to_string(row) + ", column '" +
                                           schema.at(i).name + "': empty category token");
                rec.categories[schema.categorical_slot(i)] = cell;
            } else {
                rec.values[i] = parse_numeric(cell, row, schema.at(i).name);
            }
        }
        ds.add_record(std::move(rec), "row " + std::to_string(row));
    }
    return ds;
}

void write_csv(const Dataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write CSV file: " + path);
    const auto& schema = ds.schema();
    out << "project,label";
    for (const auto& f : schema.features()) out << ',' << f.name;
    out << '\n';
    for (const auto& r : ds.records()) {
        out << r.project << ',' << (r.label == Label::Killed ? "killed" : "survived");
        for (std::size_t i = 0; i < schema.size(); ++i) {
            out << ',';
            if (schema.at(i).kind == FeatureKind::Categorical)
                out << r.categories[schema.categorical_slot(i)];
            else
                out << format_double(r.values[i]);
        }
        out << '\n';
    }
    if (!out) throw io_error("write failed: " + path);
}

Dataset filter_covered(const Dataset& ds) {
    const auto cover_idx = ds.schema().index_of("numTestCover");
    if (!cover_idx)
        throw config_error("filter_covered: schema has no numTestCover feature");
    Dataset out(ds.schema());
    for (const auto& r : ds.records())
        if (r.values[*cover_idx] >= 1.0) out.add_record(r);
    return out;
}

SplitResult split_by_project(const Dataset& ds, const SplitFractions& fractions,
                             std::uint64_t seed) {
    if (fractions.train <= 0 || fractions.valid <= 0 || fractions.test <= 0)
        throw config_error("split_by_project: fractions must be positive");
    const double total = fractions.train + fractions.valid + fractions.test;
    if (std::abs(total - 1.0) > 1e-9)
        throw config_error("split_by_project: fractions must sum to 1");

    auto projects = ds.distinct_projects();
    const std::size_t p = projects.size();
    if (p < 3) throw config_error("split_by_project: need at least 3 distinct projects");

    // Valid/test round up; the remainder goes to train.
    auto n_valid = static_cast<std::size_t>(std::ceil(fractions.valid * static_cast<double>(p) - 1e-9));
    auto n_test = static_cast<std::size_t>(std::ceil(fractions.test * static_cast<double>(p) - 1e-9));
    n_valid = std::max<std::size_t>(1, n_valid);
    n_test = std::max<std::size_t>(1, n_test);
    if (n_valid + n_test + 1 > p)
        throw config_error("split_by_project: fewer projects than partitions");
    const std::size_t n_train = p - n_valid - n_test;

    Rng rng(seed);
    rng.shuffle(projects);

    enum Part : std::uint8_t { kTrain, kValid, kTest };
    std::map<std::string, Part> assignment;
    for (std::size_t i = 0; i < p; ++i) {
        Part part = i < n_train ? kTrain : (i < n_train + n_valid ? kValid : kTest);
        assignment.emplace(projects[i], part);
    }

    SplitResult out{Dataset(ds.schema()), Dataset(ds.schema()), Dataset(ds.schema())};
    for (const auto& r : ds.records()) {
        switch (assignment.at(r.project)) {
            case kTrain: out.train.add_record(r); break;
            case kValid: out.valid.add_record(r); break;
            case kTest: out.test.add_record(r); break;
        }
    }
    return out;
}

EncoderState fit_frequency_encoding(const Dataset& train) {
    if (train.empty()) throw config_error("fit_frequency_encoding: empty training set");
    EncoderState enc;
    const auto& schema = train.schema();
    for (std::size_t i : schema.categorical_indices()) {
        auto& table = enc.counts[schema.at(i).name];
        const int slot = schema.categorical_slot(i);
        for (const auto& r : train.records()) ++table[r.categories[slot]];
    }
    return enc;
}

Matrix apply_encoding(const Dataset& ds, const EncoderState& enc) {
    const auto& schema = ds.schema();
    for (std::size_t i : schema.categorical_indices())
        if (enc.counts.find(schema.at(i).name) == enc.counts.end())
            throw validation_error("apply_encoding: encoder has no table for feature '" +
                                   schema.at(i).name + "'");

    Matrix x(ds.size(), schema.size());
    for (std::size_t r = 0; r < ds.size(); ++r) {
        const auto& rec = ds.records()[r];
        for (std::size_t i = 0; i < schema.size(); ++i) {
            if (schema.at(i).kind == FeatureKind::Categorical) {
                const auto& table = enc.counts.at(schema.at(i).name);
                auto it = table.find(rec.categories[schema.categorical_slot(i)]);
                x(r, i) = it == table.end() ? 0.0 : static_cast<double>(it->second);
            } else {
                x(r, i) = rec.values[i];
            }
        }
    }
    return x;
}

} // namespace pmt
