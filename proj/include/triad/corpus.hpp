#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "triad/dates.hpp"
#include "triad/errors.hpp"

namespace triad {

/// One trace record: a news article, an organizational statement, or any
/// other dated text unit.
struct Document {
    std::string id;
    std::string text;
    std::optional<std::string> label;
    std::optional<Date> date;
    std::string source_tag;
};

/// An ordered set of documents plus derived per-document state.
///
/// Dating is all-or-none: either every document carries a date (and
/// day_index holds days since the oldest document, 1-based) or none does
/// (and day_index is empty). Tokens are filled by tokenize_corpus.
struct Corpus {
    std::vector<Document> documents;
    std::vector<int> day_index;
    std::vector<std::vector<std::string>> tokens;

    std::size_t size() const { return documents.size(); }
    bool dated() const { return !day_index.empty(); }
    bool tokenized() const { return tokens.size() == documents.size() && !documents.empty(); }

    /// Sorted distinct labels of the labeled documents.
    std::vector<std::string> class_names() const;
    /// Per-document labels; throws DataError if any document is unlabeled.
    std::vector<std::string> labels() const;
};

/// Stopword policy: a standard language list plus analyst-supplied terms
/// that act as class giveaways. Entries are normalized through the
/// tokenizer, so a policy file may contain phrases like "yemen[-]based";
/// such a line contributes the tokens "yemen" and "based".
struct StopwordPolicy {
    std::vector<std::string> standard_list; // sorted, unique, lowercase
    std::vector<std::string> custom_list;   // sorted, unique, lowercase

    bool contains(const std::string& token) const;

    /// Built-in presets: "none", "english", "aqap_s3", "aqap_s3_alshariah".
    /// The aqap presets add the custom class-descriptor terms on top of the
    /// standard English list.
    static StopwordPolicy preset(const std::string& name);
    static const std::vector<std::string>& preset_names();

    /// Loads custom terms from a plain-text file (one entry per line, '#'
    /// comments allowed) on top of the standard English list.
    static StopwordPolicy from_file(const std::string& path);
};

/// Ordered vocabulary with document frequencies.
struct Vocabulary {
    std::vector<std::string> terms;             // sorted, duplicate-free
    std::vector<std::size_t> doc_frequency;     // parallel to terms
    std::size_t corpus_size = 0;

    std::optional<std::size_t> index_of(std::string_view term) const;
    std::size_t size() const { return terms.size(); }
};

/// Document-term matrix, dense row-major. kind distinguishes tf-idf weights
/// from raw integer counts (the topic-model input).
struct WeightMatrix {
    enum class Kind { tfidf, counts };

    std::vector<std::string> row_ids;
    std::vector<std::string> cols;
    std::vector<double> values; // rows() x n_cols() row-major
    Kind kind = Kind::tfidf;

    std::size_t rows() const { return row_ids.size(); }
    std::size_t n_cols() const { return cols.size(); }
    double at(std::size_t r, std::size_t c) const { return values[r * cols.size() + c]; }
    double& at(std::size_t r, std::size_t c) { return values[r * cols.size() + c]; }
    const double* row(std::size_t r) const { return values.data() + r * cols.size(); }
};

enum class IngestFormat { jsonl, csv };

/// Field mapping from input records to Document fields. label/date/source
/// are optional: an empty mapping name disables the field, and a mapped
/// field may be absent or null in a record.
struct IngestSchema {
    std::string id_field = "id";
    std::string text_field = "text";
    std::string label_field = "label";
    std::string date_field = "date";
    std::string source_field = "source";
};

/// Reads a jsonl or csv file into a Corpus. Preserves input order, rejects
/// duplicate ids and malformed records (naming the line), enforces
/// all-or-none dating, and computes day_index when dates exist.
Corpus ingest_corpus(const std::string& path, IngestFormat format, const IngestSchema& schema = {});

/// Recomputes day_index from document dates; enforces the all-or-none
/// dating invariant. Called by ingest_corpus and the scenario generators.
void compute_day_index(Corpus& corpus);

/// Lowercased alphabetic tokens in original order: markup and entities
/// stripped, digits and punctuation act as separators, then standard and
/// custom stopwords are removed. Hyphenated words split ("yemen-based"
/// yields "yemen", "based").
std::vector<std::string> tokenize(std::string_view text, const StopwordPolicy& policy);

/// Tokenizes every document in place.
void tokenize_corpus(Corpus& corpus, const StopwordPolicy& policy);

/// Terms kept iff min_doc_count <= doc_frequency and
/// doc_frequency / N <= max_doc_fraction. Requires a tokenized corpus.
Vocabulary build_vocabulary(const Corpus& corpus, std::size_t min_doc_count, double max_doc_fraction);

/// value(d, t) = count(t in d) * log2(N / doc_frequency(t)).
WeightMatrix weight_tfidf(const Corpus& corpus, const Vocabulary& vocab);

/// Raw term counts (kind = counts), the topic-model input.
WeightMatrix weight_counts(const Corpus& corpus, const Vocabulary& vocab);

/// Restricts both matrices to the shared term set, identically ordered.
std::pair<WeightMatrix, WeightMatrix> intersect_features(const WeightMatrix& a, const WeightMatrix& b);

} // namespace triad
