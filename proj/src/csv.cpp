#include "netrec/csv.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <iterator>
#include <unordered_set>

namespace netrec {

namespace {

struct RawRow {
    std::vector<std::string> fields;
    std::size_t line = 0;  // physical line the record starts on
};

// Splits the whole stream into records, honouring quoted fields (which may
// contain commas, escaped quotes and newlines).
std::vector<RawRow> split_records(std::istream& source, char quote) {
    std::string data(std::istreambuf_iterator<char>(source), {});

    std::vector<RawRow> rows;
    std::vector<std::string> fields;
    std::string field;
    bool in_quotes = false;
    bool field_was_quoted = false;
    bool record_has_quoted = false;
    bool record_started = false;
    std::size_t line = 1;
    std::size_t record_line = 1;
    std::size_t quote_open_line = 1;

    auto end_field = [&] {
        fields.push_back(std::move(field));
        field.clear();
        field_was_quoted = false;
    };
    auto end_record = [&] {
        if (record_started) {
            // A lone unquoted empty field is a blank line, not a record.
            if (!fields.empty() || !field.empty() || record_has_quoted) {
                end_field();
                rows.push_back({std::move(fields), record_line});
                fields.clear();
            }
            field.clear();
            field_was_quoted = false;
        }
        record_started = false;
        record_has_quoted = false;
    };

    for (std::size_t i = 0; i < data.size(); ++i) {
        const char c = data[i];
        if (!record_started) {
            record_started = true;
            record_line = line;
        }
        if (in_quotes) {
            if (c == quote) {
                if (i + 1 < data.size() && data[i + 1] == quote) {
                    field.push_back(quote);  // escaped quote
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case ',':
                end_field();
                break;
            case '\r':
                if (i + 1 < data.size() && data[i + 1] == '\n') ++i;
                ++line;
                end_record();
                break;
            case '\n':
                ++line;
                end_record();
                break;
            default:
                if (c == quote) {
                    if (!field.empty()) {
                        throw ParseError(line, "unexpected quote inside unquoted field");
                    }
                    in_quotes = true;
                    field_was_quoted = true;
                    record_has_quoted = true;
                    quote_open_line = line;
                } else if (field_was_quoted && !std::isspace(static_cast<unsigned char>(c))) {
                    throw ParseError(line, "unexpected content after closing quote");
                } else {
                    field.push_back(c);
                }
        }
    }
    if (in_quotes) {
        throw ParseError(quote_open_line, "unbalanced quote");
    }
    end_record();
    return rows;
}

std::string_view trimmed(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::optional<double> parse_real(std::string_view raw) {
    const std::string_view s = trimmed(raw);
    if (s.empty()) return std::nullopt;
    // from_chars accepts "inf"/"nan" tokens; a column of those is not numeric data.
    const char first = s.front();
    if (!(std::isdigit(static_cast<unsigned char>(first)) || first == '+' || first == '-' ||
          first == '.')) {
        return std::nullopt;
    }
    double value = 0.0;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || !std::isfinite(value)) return std::nullopt;
    return value;
}

}  // namespace

Dataset read_csv(std::istream& source, const CsvOptions& options, std::string name) {
    std::vector<RawRow> rows = split_records(source, options.quote_char);
    if (rows.empty()) {
        throw ParseError(1, "empty CSV input");
    }

    std::vector<std::string> header;
    std::size_t first_data = 0;
    if (options.has_header) {
        header = rows.front().fields;
        first_data = 1;
    } else {
        header.reserve(rows.front().fields.size());
        for (std::size_t i = 0; i < rows.front().fields.size(); ++i) {
            header.push_back("col_" + std::to_string(i + 1));
        }
    }
    const std::size_t n_cols = header.size();

    for (std::size_t r = first_data; r < rows.size(); ++r) {
        if (rows[r].fields.size() != n_cols) {
            throw ParseError(rows[r].line,
                             "expected " + std::to_string(n_cols) + " columns, found " +
                                 std::to_string(rows[r].fields.size()));
        }
    }

    // Column kind inference: numeric iff all non-empty cells parse as reals,
    // else nominal while the distinct count stays within the threshold.
    std::vector<AttributeSpec> attrs;
    std::vector<std::vector<std::string>> domains(n_cols);
    for (std::size_t c = 0; c < n_cols; ++c) {
        bool all_numeric = true;
        std::unordered_set<std::string_view> distinct;
        std::vector<std::string>& domain = domains[c];
        for (std::size_t r = first_data; r < rows.size(); ++r) {
            const std::string& cell = rows[r].fields[c];
            if (cell.empty()) continue;
            if (all_numeric && !parse_real(cell)) all_numeric = false;
            if (distinct.size() <= options.nominal_threshold && distinct.insert(cell).second) {
                domain.push_back(cell);
            }
        }
        if (all_numeric) {
            attrs.push_back(AttributeSpec::numeric(header[c]));
        } else if (distinct.size() <= options.nominal_threshold) {
            attrs.push_back(AttributeSpec::nominal(header[c], domain));
        } else {
            attrs.push_back(AttributeSpec::text(header[c]));
        }
    }

    Dataset out;
    out.schema = Schema(std::move(attrs));
    out.name = std::move(name);
    out.instances.reserve(rows.size() - first_data);
    for (std::size_t r = first_data; r < rows.size(); ++r) {
        Instance inst;
        inst.values.reserve(n_cols);
        for (std::size_t c = 0; c < n_cols; ++c) {
            const std::string& cell = rows[r].fields[c];
            if (cell.empty()) {
                inst.values.push_back(Cell::missing());
                continue;
            }
            switch (out.schema.attribute(c).kind()) {
                case AttributeKind::Numeric:
                    inst.values.push_back(Cell::number(*parse_real(cell)));
                    break;
                case AttributeKind::Nominal:
                    inst.values.push_back(
                        Cell::category(*out.schema.attribute(c).index_of(cell)));
                    break;
                case AttributeKind::Text:
                    inst.values.push_back(Cell::text(cell));
                    break;
            }
        }
        out.instances.push_back(std::move(inst));
    }
    return out;
}

}  // namespace netrec
