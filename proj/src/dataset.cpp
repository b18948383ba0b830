#include "xreg/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string_view>

namespace xreg {

namespace {

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

bool parse_u32(std::string_view tok, index_t& out) {
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    return ec == std::errc() && ptr == tok.data() + tok.size();
}

bool parse_f64(std::string_view tok, double& out) {
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    return ec == std::errc() && ptr == tok.data() + tok.size();
}

// "idx:value" or, when allow_bare, just "idx" (value 1.0).
void parse_pair(const std::string& path, std::size_t line_no, std::string_view tok,
                bool allow_bare, index_t& idx, double& value) {
    std::size_t colon = tok.find(':');
    std::string_view idx_part = tok.substr(0, colon == std::string_view::npos ? tok.size() : colon);
    if (!parse_u32(idx_part, idx))
        throw ParseError(path, line_no, "non-numeric index in token '" + std::string(tok) + "'");
    if (colon == std::string_view::npos) {
        if (!allow_bare)
            throw ParseError(path, line_no, "expected index:value, got '" + std::string(tok) + "'");
        value = 1.0;
        return;
    }
    std::string_view val_part = tok.substr(colon + 1);
    if (!parse_f64(val_part, value) || !std::isfinite(value))
        throw ParseError(path, line_no, "non-numeric value in token '" + std::string(tok) + "'");
}

SparseVector build_row(const std::string& path, std::size_t line_no, index_t dim,
                       std::vector<ScoreEntry>& entries, const char* kind) {
    std::sort(entries.begin(), entries.end(),
              [](const ScoreEntry& a, const ScoreEntry& b) { return a.first < b.first; });
    SparseVector v;
    v.dim = dim;
    v.indices.reserve(entries.size());
    v.values.reserve(entries.size());
    for (const auto& [idx, val] : entries) {
        if (idx >= dim)
            throw ParseError(path, line_no,
                             std::string(kind) + " index " + std::to_string(idx) + " >= " +
                                 (kind[0] == 'l' ? "L=" : "D=") + std::to_string(dim));
        if (!v.indices.empty() && v.indices.back() == idx)
            throw ParseError(path, line_no,
                             std::string("duplicate ") + kind + " index " + std::to_string(idx));
        if (val == 0.0) continue;
        v.indices.push_back(idx);
        v.values.push_back(val);
    }
    return v;
}

} // namespace

RelevanceDataset read_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open dataset file: " + path);

    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line)) throw ParseError(path, 1, "missing header");
    strip_cr(line);

    RelevanceDataset d;
    {
        std::string_view sv(line);
        index_t fields[3];
        for (int f = 0; f < 3; ++f) {
            while (!sv.empty() && sv.front() == ' ') sv.remove_prefix(1);
            std::size_t end = sv.find(' ');
            std::string_view tok = sv.substr(0, end);
            if (tok.empty() || !parse_u32(tok, fields[f]))
                throw ParseError(path, 1, "malformed header, expected 'N D L'");
            sv.remove_prefix(end == std::string_view::npos ? sv.size() : end);
        }
        while (!sv.empty() && sv.front() == ' ') sv.remove_prefix(1);
        if (!sv.empty()) throw ParseError(path, 1, "malformed header, expected 'N D L'");
        d.num_points = fields[0];
        d.num_features = fields[1];
        d.num_labels = fields[2];
    }

    d.features.reserve(d.num_points);
    d.relevances.reserve(d.num_points);

    std::vector<ScoreEntry> label_entries, feat_entries;
    for (index_t i = 0; i < d.num_points; ++i) {
        ++line_no;
        if (!std::getline(in, line))
            throw ParseError(path, line_no, "expected " + std::to_string(d.num_points) +
                                                " data lines, file ended after " +
                                                std::to_string(i));
        strip_cr(line);
        label_entries.clear();
        feat_entries.clear();

        std::string_view sv(line);
        // Label section runs to the first space. A leading space means no labels.
        std::size_t space = sv.find(' ');
        std::string_view labels = sv.substr(0, space == std::string_view::npos ? sv.size() : space);
        std::string_view rest =
            space == std::string_view::npos ? std::string_view() : sv.substr(space + 1);

        while (!labels.empty()) {
            std::size_t comma = labels.find(',');
            std::string_view tok =
                labels.substr(0, comma == std::string_view::npos ? labels.size() : comma);
            index_t idx;
            double value;
            parse_pair(path, line_no, tok, /*allow_bare=*/true, idx, value);
            if (value < 0.0)
                throw ParseError(path, line_no,
                                 "negative relevance " + std::to_string(value) + " for label " +
                                     std::to_string(idx));
            label_entries.emplace_back(idx, value);
            labels.remove_prefix(comma == std::string_view::npos ? labels.size() : comma + 1);
        }
        while (!rest.empty()) {
            while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
            if (rest.empty()) break;
            std::size_t end = rest.find(' ');
            std::string_view tok = rest.substr(0, end == std::string_view::npos ? rest.size() : end);
            index_t idx;
            double value;
            parse_pair(path, line_no, tok, /*allow_bare=*/false, idx, value);
            feat_entries.emplace_back(idx, value);
            rest.remove_prefix(end == std::string_view::npos ? rest.size() : end);
        }

        d.relevances.push_back(build_row(path, line_no, d.num_labels, label_entries, "label"));
        d.features.push_back(build_row(path, line_no, d.num_features, feat_entries, "feature"));
    }
    return d;
}

namespace {

// Shortest decimal form that parses back to exactly the same double.
std::string format_exact(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

} // namespace

std::string format_score(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return std::string(buf);
}

void write_dataset(const RelevanceDataset& d, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open for writing: " + path);
    out << d.num_points << ' ' << d.num_features << ' ' << d.num_labels << '\n';
    for (index_t i = 0; i < d.num_points; ++i) {
        const SparseVector& y = d.relevances[i];
        const SparseVector& x = d.features[i];
        std::string line;
        for (std::size_t j = 0; j < y.size(); ++j) {
            if (j > 0) line += ',';
            line += std::to_string(y.indices[j]);
            line += ':';
            line += format_exact(y.values[j]);
        }
        for (std::size_t j = 0; j < x.size(); ++j) {
            line += ' ';
            line += std::to_string(x.indices[j]);
            line += ':';
            line += format_exact(x.values[j]);
        }
        out << line << '\n';
    }
    if (!out) throw DataError("write failed: " + path);
}

void write_predictions(const PredictionFile& p, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open for writing: " + path);
    out << p.rows << ' ' << p.cols << '\n';
    for (const ScoreList& row : p.entries) {
        std::string line;
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j > 0) line += ' ';
            line += std::to_string(row[j].first);
            line += ':';
            line += format_score(row[j].second);
        }
        out << line << '\n';
    }
    if (!out) throw DataError("write failed: " + path);
}

PredictionFile read_predictions(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open prediction file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path, 1, "missing header");
    strip_cr(line);

    PredictionFile p;
    {
        std::string_view sv(line);
        std::size_t space = sv.find(' ');
        if (space == std::string_view::npos || !parse_u32(sv.substr(0, space), p.rows) ||
            !parse_u32(sv.substr(space + 1), p.cols))
            throw ParseError(path, 1, "malformed header, expected 'R C'");
    }
    p.entries.resize(p.rows);
    for (index_t i = 0; i < p.rows; ++i) {
        std::size_t line_no = static_cast<std::size_t>(i) + 2;
        if (!std::getline(in, line))
            throw ParseError(path, line_no, "file ended before row " + std::to_string(i));
        strip_cr(line);
        std::string_view rest(line);
        ScoreList& row = p.entries[i];
        while (!rest.empty()) {
            while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
            if (rest.empty()) break;
            std::size_t end = rest.find(' ');
            std::string_view tok = rest.substr(0, end == std::string_view::npos ? rest.size() : end);
            index_t idx;
            double value;
            parse_pair(path, line_no, tok, /*allow_bare=*/false, idx, value);
            if (idx >= p.cols)
                throw ParseError(path, line_no,
                                 "index " + std::to_string(idx) + " >= C=" + std::to_string(p.cols));
            row.emplace_back(idx, value);
            rest.remove_prefix(end == std::string_view::npos ? rest.size() : end);
        }
    }
    return p;
}

SparseVector augment_with_bias(const SparseVector& x, index_t raw_dim) {
    SparseVector out = x;
    out.dim = raw_dim + 1;
    out.indices.push_back(raw_dim);
    out.values.push_back(1.0);
    return out;
}

SparseVector to_model_space(const SparseVector& x, index_t model_raw_dim) {
    SparseVector out;
    out.dim = model_raw_dim + 1;
    out.indices.reserve(x.size() + 1);
    out.values.reserve(x.size() + 1);
    for (std::size_t i = 0; i < x.size() && x.indices[i] < model_raw_dim; ++i) {
        out.indices.push_back(x.indices[i]);
        out.values.push_back(x.values[i]);
    }
    out.indices.push_back(model_raw_dim);
    out.values.push_back(1.0);
    return out;
}

} // namespace xreg
