#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pmt/matrix.hpp"

namespace pmt {

enum class FeatureKind { Numeric, Categorical };
enum class FeatureLevel { Dynamic, Static };
enum class Granularity { Mutant, Method, Class, Package };

struct FeatureSpec {
    std::string name;
    FeatureKind kind = FeatureKind::Numeric;
    FeatureLevel level = FeatureLevel::Static;
    Granularity granularity = Granularity::Mutant;
};

// Ordered feature list. Names are unique; only categorical features may
// carry string values.
class FeatureSchema {
public:
    FeatureSchema() = default;
    explicit FeatureSchema(std::vector<FeatureSpec> features);

    // The 30-feature default: the mutant feature catalogue (4 dynamic
    // counters, 2 categorical descriptors, 24 static code metrics at
    // method/class/package granularity).
    static FeatureSchema default_schema();

    std::size_t size() const { return features_.size(); }
    const FeatureSpec& at(std::size_t i) const { return features_[i]; }
    const std::vector<FeatureSpec>& features() const { return features_; }

    // Index of a feature name; nullopt when absent.
    std::optional<std::size_t> index_of(const std::string& name) const;

    // Indices of categorical features, in schema order.
    std::vector<std::size_t> categorical_indices() const;

    // Maps a feature index to its slot among categorical features
    // (position in categorical_indices()); -1 for numeric features.
    int categorical_slot(std::size_t feature_index) const;

    std::vector<std::string> names() const;

    // Schema with only the named features, in the given order.
    FeatureSchema subset(const std::vector<std::string>& keep) const;

    std::string to_json() const;
    static FeatureSchema from_json(const std::string& text);
    static FeatureSchema load(const std::string& path);
    void save(const std::string& path) const;

    bool operator==(const FeatureSchema& other) const;

private:
    std::vector<FeatureSpec> features_;
    std::map<std::string, std::size_t> index_;
    std::vector<int> cat_slot_;
};

enum class Label : std::uint8_t { Survived = 0, Killed = 1 };

struct MutantRecord {
    std::string project;
    Label label = Label::Survived;
    // One slot per schema feature; categorical slots hold 0 here and the
    // token lives in `categories` at the feature's categorical slot.
    std::vector<double> values;
    std::vector<std::string> categories;
};

// Immutable once built; safe to share across threads for reads.
class Dataset {
public:
    Dataset() = default;
    explicit Dataset(FeatureSchema schema) : schema_(std::move(schema)) {}
    Dataset(FeatureSchema schema, std::vector<MutantRecord> records);

    const FeatureSchema& schema() const { return schema_; }
    const std::vector<MutantRecord>& records() const { return records_; }
    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }

    // Validates and appends. Context (e.g. "row 12") prefixes error
    // messages.
    void add_record(MutantRecord rec, const std::string& context = "");

    // Labels as 0/1 with Killed = 1.
    std::vector<int> labels() const;

    std::vector<std::string> distinct_projects() const;

private:
    FeatureSchema schema_;
    std::vector<MutantRecord> records_;
};

// Fitted frequency-encoding tables: per categorical feature, the exact
// occurrence count of each token in the fitting set. Unseen tokens map
// to 0 at apply time.
struct EncoderState {
    std::map<std::string, std::map<std::string, std::uint64_t>> counts;

    bool operator==(const EncoderState& other) const { return counts == other.counts; }
};

// CSV ingestion. Header must contain `project`, `label`, and every schema
// feature; extra columns are ignored. Labels parse case-insensitively
// from {killed, survived}. Numeric cells must be finite; blank or NaN
// cells are errors. Errors name the offending row and column.
Dataset load_csv(const std::string& path, const FeatureSchema& schema);

// Writes `project,label,<features...>` with shortest round-trip numeric
// formatting, so load_csv(write_csv(ds)) reproduces values bit-exactly.
void write_csv(const Dataset& ds, const std::string& path);

// Records whose numTestCover >= 1, original order. Input unmodified.
Dataset filter_covered(const Dataset& ds);

struct SplitFractions {
    double train = 0.8;
    double valid = 0.1;
    double test = 0.1;
};

struct SplitResult {
    Dataset train;
    Dataset valid;
    Dataset test;
};

// Project-level split: every project's records land wholly in one
// partition. Valid/test project counts round up from their fractions and
// train takes the remainder, which reproduces the 522/66/66 split of 654
// projects at (0.8, 0.1, 0.1). Deterministic under seed.
SplitResult split_by_project(const Dataset& ds, const SplitFractions& fractions,
                             std::uint64_t seed);

// Exact token occurrence counts over the training set.
EncoderState fit_frequency_encoding(const Dataset& train);

// Numeric design matrix in schema column order: numeric features copied
// verbatim, categorical tokens replaced by their fitted count (unseen -> 0).
Matrix apply_encoding(const Dataset& ds, const EncoderState& enc);

} // namespace pmt
