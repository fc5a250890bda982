#include "triad/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace triad {

std::vector<std::string> Corpus::class_names() const {
    std::set<std::string> names;
    for (const auto& doc : documents) {
        if (doc.label) names.insert(*doc.label);
    }
    return {names.begin(), names.end()};
}

std::vector<std::string> Corpus::labels() const {
    std::vector<std::string> out;
    out.reserve(documents.size());
    for (const auto& doc : documents) {
        if (!doc.label) throw DataError("document '" + doc.id + "' is unlabeled");
        out.push_back(*doc.label);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Tokenizer
// ---------------------------------------------------------------------------

namespace {

bool is_ascii_letter(char32_t cp) {
    return (cp >= 'A' && cp <= 'Z') || (cp >= 'a' && cp <= 'z');
}

// ASCII plus Latin-1/Latin Extended letters. Other scripts are treated as
// separators; the supported corpora are English-language.
bool is_letter(char32_t cp) {
    if (is_ascii_letter(cp)) return true;
    if (cp == 0xD7 || cp == 0xF7) return false;
    return cp >= 0xC0 && cp <= 0x24F;
}

char32_t to_lower(char32_t cp) {
    if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
    return cp;
}

// Decodes one UTF-8 codepoint at i, advancing i. Invalid sequences decode
// as a single replacement separator byte.
char32_t decode_utf8(std::string_view s, std::size_t& i) {
    const unsigned char b0 = static_cast<unsigned char>(s[i]);
    if (b0 < 0x80) { ++i; return b0; }
    std::size_t len = 0;
    char32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) { len = 2; cp = b0 & 0x1F; }
    else if ((b0 & 0xF0) == 0xE0) { len = 3; cp = b0 & 0x0F; }
    else if ((b0 & 0xF8) == 0xF0) { len = 4; cp = b0 & 0x07; }
    else { ++i; return 0xFFFD; }
    if (i + len > s.size()) { ++i; return 0xFFFD; }
    for (std::size_t k = 1; k < len; ++k) {
        const unsigned char bk = static_cast<unsigned char>(s[i + k]);
        if ((bk & 0xC0) != 0x80) { ++i; return 0xFFFD; }
        cp = (cp << 6) | (bk & 0x3F);
    }
    i += len;
    return cp;
}

void encode_utf8(char32_t cp, std::string& out) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

// Blanks out <...> tag spans and &name;/&#123; entities.
std::string strip_markup(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (c == '<') {
            const std::size_t close = text.find('>', i + 1);
            if (close != std::string_view::npos) {
                out.push_back(' ');
                i = close + 1;
                continue;
            }
        } else if (c == '&') {
            std::size_t j = i + 1;
            while (j < text.size() && j - i <= 12 &&
                   (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '#')) {
                ++j;
            }
            if (j < text.size() && text[j] == ';' && j > i + 1) {
                out.push_back(' ');
                i = j + 1;
                continue;
            }
        }
        out.push_back(c);
        ++i;
    }
    return out;
}

std::vector<std::string> letter_runs(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    std::size_t i = 0;
    while (i < text.size()) {
        const char32_t cp = decode_utf8(text, i);
        if (is_letter(cp)) {
            encode_utf8(to_lower(cp), current);
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

// Normalizes raw policy entries through the tokenizer: an entry like
// "yemen[-]based" contributes the tokens "yemen" and "based".
std::vector<std::string> normalize_policy_terms(const std::vector<std::string>& raw) {
    std::vector<std::string> out;
    for (const auto& entry : raw) {
        for (auto& tok : letter_runs(strip_markup(entry))) out.push_back(std::move(tok));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Snowball English stopword list (contractions normalize to their letter
// runs, e.g. "don't" contributes "don" and "t").
const char* const kEnglishStopwords =
    "i me my myself we our ours ourselves you your yours yourself yourselves he him his himself "
    "she her hers herself it its itself they them their theirs themselves what which who whom "
    "this that these those am is are was were be been being have has had having do does did doing "
    "would should could ought i'm you're he's she's it's we're they're i've you've we've they've "
    "i'd you'd he'd she'd we'd they'd i'll you'll he'll she'll we'll they'll isn't aren't wasn't "
    "weren't hasn't haven't hadn't doesn't don't didn't won't wouldn't shan't shouldn't can't "
    "cannot couldn't mustn't let's that's who's what's here's there's when's where's why's how's "
    "a an the and but if or because as until while of at by for with about against between into "
    "through during before after above below to from up down in out on off over under again "
    "further then once here there when where why how all any both each few more most other some "
    "such no nor not only own same so than too very";

// Custom class-descriptor stopwords for the AQAP news corpus: group-name
// variants, founder names, sectarian identifiers, and the group-locating
// phrases. Listed entries are normalized through the tokenizer.
const std::vector<std::string> kAqapCustomStopwords = {
    "qaeda", "alqaida", "alqaeda", "qaida",
    "houthi", "huthi", "houthis", "zaidi", "alhouthi",
    "ansar", "sharia", "alsharia",
    "laden", "osama",
    "peninsula", "northern", "southern", "arabian", "yemen[-]based",
    "sunni", "shia", "shiite",
};

std::vector<std::string> split_whitespace(const char* s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string word;
    while (in >> word) out.push_back(word);
    return out;
}

const std::vector<std::string>& english_standard_list() {
    static const std::vector<std::string> list = normalize_policy_terms(split_whitespace(kEnglishStopwords));
    return list;
}

} // namespace

bool StopwordPolicy::contains(const std::string& token) const {
    return std::binary_search(standard_list.begin(), standard_list.end(), token) ||
           std::binary_search(custom_list.begin(), custom_list.end(), token);
}

const std::vector<std::string>& StopwordPolicy::preset_names() {
    static const std::vector<std::string> names = {"none", "english", "aqap_s3", "aqap_s3_alshariah"};
    return names;
}

StopwordPolicy StopwordPolicy::preset(const std::string& name) {
    StopwordPolicy policy;
    if (name == "none") return policy;
    if (name == "english") {
        policy.standard_list = english_standard_list();
        return policy;
    }
    if (name == "aqap_s3" || name == "aqap_s3_alshariah") {
        policy.standard_list = english_standard_list();
        std::vector<std::string> custom = kAqapCustomStopwords;
        if (name == "aqap_s3_alshariah") custom.push_back("alshariah");
        policy.custom_list = normalize_policy_terms(custom);
        return policy;
    }
    throw ConfigError("unknown stopword preset '" + name + "'");
}

StopwordPolicy StopwordPolicy::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open stopword file '" + path + "'");
    std::vector<std::string> raw;
    std::string line;
    while (std::getline(in, line)) {
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        raw.push_back(line);
    }
    StopwordPolicy policy;
    policy.standard_list = english_standard_list();
    policy.custom_list = normalize_policy_terms(raw);
    return policy;
}

std::vector<std::string> tokenize(std::string_view text, const StopwordPolicy& policy) {
    std::vector<std::string> tokens = letter_runs(strip_markup(text));
    std::vector<std::string> kept;
    kept.reserve(tokens.size());
    for (auto& tok : tokens) {
        if (!policy.contains(tok)) kept.push_back(std::move(tok));
    }
    return kept;
}

void tokenize_corpus(Corpus& corpus, const StopwordPolicy& policy) {
    corpus.tokens.clear();
    corpus.tokens.reserve(corpus.documents.size());
    for (const auto& doc : corpus.documents) {
        corpus.tokens.push_back(tokenize(doc.text, policy));
    }
}

// ---------------------------------------------------------------------------
// Ingest
// ---------------------------------------------------------------------------

namespace {

// RFC-4180-style CSV records; quoted fields may contain commas, escaped
// quotes ("") and newlines. Returns records with the 1-based line number
// each record started on.
std::vector<std::pair<std::size_t, std::vector<std::string>>> parse_csv(const std::string& content,
                                                                        const std::string& path) {
    std::vector<std::pair<std::size_t, std::vector<std::string>>> records;
    std::vector<std::string> fields;
    std::string field;
    bool in_quotes = false;
    bool record_open = false;
    std::size_t line = 1;
    std::size_t record_line = 1;

    auto end_field = [&] {
        fields.push_back(std::move(field));
        field.clear();
    };
    auto end_record = [&] {
        end_field();
        records.emplace_back(record_line, std::move(fields));
        fields.clear();
        record_open = false;
    };

    for (std::size_t i = 0; i < content.size(); ++i) {
        const char c = content[i];
        if (!record_open) {
            record_open = true;
            record_line = line;
        }
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < content.size() && content[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            end_field();
        } else if (c == '\r') {
            // swallow; \n ends the record
        } else if (c == '\n') {
            ++line;
            end_record();
        } else {
            field.push_back(c);
        }
    }
    if (in_quotes) throw DataError(path + ": unterminated quoted field starting near line " + std::to_string(record_line));
    if (record_open) end_record();
    return records;
}

std::optional<std::string> json_field_string(const nlohmann::json& rec, const std::string& key) {
    if (key.empty()) return std::nullopt;
    const auto it = rec.find(key);
    if (it == rec.end() || it->is_null()) return std::nullopt;
    if (it->is_string()) {
        const auto s = it->get<std::string>();
        if (s.empty()) return std::nullopt;
        return s;
    }
    if (it->is_number_integer()) return std::to_string(it->get<long long>());
    throw DataError("field '" + key + "' is neither string nor integer");
}

void append_document(Corpus& corpus, std::set<std::string>& seen_ids, Document doc, const std::string& where) {
    if (!seen_ids.insert(doc.id).second) {
        throw DataError(where + ": duplicate document id '" + doc.id + "'");
    }
    corpus.documents.push_back(std::move(doc));
}

Corpus ingest_jsonl(const std::string& path, const IngestSchema& schema) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open input file '" + path + "'");
    Corpus corpus;
    std::set<std::string> seen_ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::string where = path + ":" + std::to_string(line_no);
        nlohmann::json rec;
        try {
            rec = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw DataError(where + ": malformed record: " + e.what());
        }
        if (!rec.is_object()) throw DataError(where + ": record is not a json object");
        try {
            Document doc;
            auto id = json_field_string(rec, schema.id_field);
            if (!id) throw DataError("missing mapped field '" + schema.id_field + "'");
            doc.id = *id;
            auto text = json_field_string(rec, schema.text_field);
            if (!text) throw DataError("missing mapped field '" + schema.text_field + "'");
            doc.text = *text;
            doc.label = json_field_string(rec, schema.label_field);
            if (auto date = json_field_string(rec, schema.date_field)) doc.date = parse_date(*date);
            if (auto source = json_field_string(rec, schema.source_field)) doc.source_tag = *source;
            append_document(corpus, seen_ids, std::move(doc), where);
        } catch (const DataError& e) {
            std::string msg = e.what();
            if (msg.rfind(path, 0) == 0) throw;
            throw DataError(where + ": " + msg);
        }
    }
    return corpus;
}

Corpus ingest_csv(const std::string& path, const IngestSchema& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open input file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    const auto records = parse_csv(buf.str(), path);
    if (records.empty()) throw DataError(path + ": missing csv header row");

    const auto& header = records.front().second;
    auto column_of = [&](const std::string& name, bool required) -> std::optional<std::size_t> {
        if (name.empty()) return std::nullopt;
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
            if (required) throw DataError(path + ": mapped field '" + name + "' not found in csv header");
            return std::nullopt;
        }
        return static_cast<std::size_t>(it - header.begin());
    };

    const auto id_col = column_of(schema.id_field, true);
    const auto text_col = column_of(schema.text_field, true);
    const auto label_col = column_of(schema.label_field, false);
    const auto date_col = column_of(schema.date_field, false);
    const auto source_col = column_of(schema.source_field, false);

    Corpus corpus;
    std::set<std::string> seen_ids;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& [line_no, row] = records[r];
        const std::string where = path + ":" + std::to_string(line_no);
        if (row.size() == 1 && row[0].empty()) continue; // trailing blank line
        if (row.size() != header.size()) {
            throw DataError(where + ": record has " + std::to_string(row.size()) + " fields, expected " +
                            std::to_string(header.size()));
        }
        auto cell = [&](std::optional<std::size_t> col) -> std::optional<std::string> {
            if (!col || row[*col].empty()) return std::nullopt;
            return row[*col];
        };
        Document doc;
        auto id = cell(id_col);
        if (!id) throw DataError(where + ": missing mapped field '" + schema.id_field + "'");
        doc.id = *id;
        auto text = cell(text_col);
        if (!text) throw DataError(where + ": missing mapped field '" + schema.text_field + "'");
        doc.text = *text;
        doc.label = cell(label_col);
        try {
            if (auto date = cell(date_col)) doc.date = parse_date(*date);
        } catch (const DataError& e) {
            throw DataError(where + ": " + e.what());
        }
        if (auto source = cell(source_col)) doc.source_tag = *source;
        append_document(corpus, seen_ids, std::move(doc), where);
    }
    return corpus;
}

} // namespace

void compute_day_index(Corpus& corpus) {
    corpus.day_index.clear();
    std::size_t dated = 0;
    for (const auto& doc : corpus.documents) {
        if (doc.date) ++dated;
    }
    if (dated == 0) return;
    if (dated != corpus.documents.size()) {
        throw DataError("mixed dated and undated documents (" + std::to_string(dated) + " of " +
                        std::to_string(corpus.documents.size()) + " dated); dating is all-or-none");
    }
    Date oldest = *corpus.documents.front().date;
    for (const auto& doc : corpus.documents) {
        oldest = std::min(oldest, *doc.date);
    }
    corpus.day_index.reserve(corpus.documents.size());
    for (const auto& doc : corpus.documents) {
        corpus.day_index.push_back(static_cast<int>((*doc.date - oldest).count()) + 1);
    }
}

Corpus ingest_corpus(const std::string& path, IngestFormat format, const IngestSchema& schema) {
    Corpus corpus = format == IngestFormat::jsonl ? ingest_jsonl(path, schema) : ingest_csv(path, schema);
    compute_day_index(corpus);
    return corpus;
}

// ---------------------------------------------------------------------------
// Vocabulary and weighting
// ---------------------------------------------------------------------------

std::optional<std::size_t> Vocabulary::index_of(std::string_view term) const {
    const auto it = std::lower_bound(terms.begin(), terms.end(), term);
    if (it == terms.end() || *it != term) return std::nullopt;
    return static_cast<std::size_t>(it - terms.begin());
}

Vocabulary build_vocabulary(const Corpus& corpus, std::size_t min_doc_count, double max_doc_fraction) {
    if (min_doc_count < 1) throw ConfigError("min_doc_count must be >= 1");
    if (!(max_doc_fraction > 0.0) || max_doc_fraction > 1.0) {
        throw ConfigError("max_doc_fraction must be in (0, 1]");
    }
    if (!corpus.tokenized()) throw DataError("corpus has no tokens; run tokenize_corpus first");

    std::map<std::string, std::size_t> df;
    for (const auto& doc_tokens : corpus.tokens) {
        std::set<std::string_view> distinct(doc_tokens.begin(), doc_tokens.end());
        for (const auto term : distinct) ++df[std::string(term)];
    }
    const double n = static_cast<double>(corpus.size());
    Vocabulary vocab;
    vocab.corpus_size = corpus.size();
    for (const auto& [term, count] : df) {
        if (count >= min_doc_count && static_cast<double>(count) / n <= max_doc_fraction) {
            vocab.terms.push_back(term);
            vocab.doc_frequency.push_back(count);
        }
    }
    if (vocab.terms.empty()) {
        throw DataError("vocabulary is empty after thresholds (min_doc_count=" + std::to_string(min_doc_count) +
                        ", max_doc_fraction=" + std::to_string(max_doc_fraction) +
                        "); relax the thresholds or check tokenization");
    }
    return vocab;
}

namespace {

WeightMatrix count_matrix(const Corpus& corpus, const Vocabulary& vocab) {
    if (!corpus.tokenized()) throw DataError("corpus has no tokens; run tokenize_corpus first");
    WeightMatrix m;
    m.cols = vocab.terms;
    m.row_ids.reserve(corpus.size());
    for (const auto& doc : corpus.documents) m.row_ids.push_back(doc.id);
    m.values.assign(corpus.size() * vocab.size(), 0.0);
    for (std::size_t d = 0; d < corpus.size(); ++d) {
        for (const auto& tok : corpus.tokens[d]) {
            if (auto idx = vocab.index_of(tok)) m.at(d, *idx) += 1.0;
        }
    }
    return m;
}

} // namespace

WeightMatrix weight_counts(const Corpus& corpus, const Vocabulary& vocab) {
    WeightMatrix m = count_matrix(corpus, vocab);
    m.kind = WeightMatrix::Kind::counts;
    return m;
}

WeightMatrix weight_tfidf(const Corpus& corpus, const Vocabulary& vocab) {
    WeightMatrix m = count_matrix(corpus, vocab);
    m.kind = WeightMatrix::Kind::tfidf;
    const double n = static_cast<double>(corpus.size());
    std::vector<double> idf(vocab.size());
    for (std::size_t t = 0; t < vocab.size(); ++t) {
        idf[t] = std::log2(n / static_cast<double>(vocab.doc_frequency[t]));
    }
    for (std::size_t d = 0; d < m.rows(); ++d) {
        for (std::size_t t = 0; t < vocab.size(); ++t) {
            m.at(d, t) *= idf[t];
        }
    }
    return m;
}

std::pair<WeightMatrix, WeightMatrix> intersect_features(const WeightMatrix& a, const WeightMatrix& b) {
    if (a.kind != b.kind) throw DataError("cannot intersect matrices of different kinds");
    std::vector<std::string> a_sorted = a.cols;
    std::sort(a_sorted.begin(), a_sorted.end());
    std::vector<std::string> b_sorted = b.cols;
    std::sort(b_sorted.begin(), b_sorted.end());
    std::vector<std::string> shared;
    std::set_intersection(a_sorted.begin(), a_sorted.end(), b_sorted.begin(), b_sorted.end(),
                          std::back_inserter(shared));
    if (shared.empty()) throw DataError("feature intersection is empty");

    auto restrict_to = [&shared](const WeightMatrix& m) {
        std::map<std::string_view, std::size_t> col_index;
        for (std::size_t c = 0; c < m.cols.size(); ++c) col_index[m.cols[c]] = c;
        WeightMatrix out;
        out.kind = m.kind;
        out.row_ids = m.row_ids;
        out.cols = shared;
        out.values.assign(m.rows() * shared.size(), 0.0);
        for (std::size_t c = 0; c < shared.size(); ++c) {
            const std::size_t src = col_index.at(shared[c]);
            for (std::size_t r = 0; r < m.rows(); ++r) {
                out.at(r, c) = m.at(r, src);
            }
        }
        return out;
    };
    return {restrict_to(a), restrict_to(b)};
}

} // namespace triad
