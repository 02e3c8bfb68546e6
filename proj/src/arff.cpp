#include "netrec/arff.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace netrec {

namespace {

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string_view trimmed(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool starts_with_keyword(std::string_view line, std::string_view keyword) {
    if (line.size() < keyword.size()) return false;
    return to_lower(line.substr(0, keyword.size())) == keyword;
}

// Token reader shared by attribute declarations, domain lists and data rows.
// Supports 'single' and "double" quoted tokens with backslash escapes.
struct TokenReader {
    std::string_view input;
    std::size_t pos = 0;
    std::size_t line;

    void skip_ws() {
        while (pos < input.size() && (input[pos] == ' ' || input[pos] == '\t')) ++pos;
    }

    bool at_end() {
        skip_ws();
        return pos >= input.size();
    }

    char peek() {
        skip_ws();
        return pos < input.size() ? input[pos] : '\0';
    }

    void expect(char c, const char* what) {
        if (peek() != c) throw ParseError(line, std::string("expected ") + what);
        ++pos;
    }

    bool consume(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }

    // Reads a token terminated by any of `stops`; quoted tokens may contain
    // the stop characters. Returns (text, was_quoted).
    std::pair<std::string, bool> token(std::string_view stops) {
        skip_ws();
        std::string out;
        if (pos < input.size() && (input[pos] == '\'' || input[pos] == '"')) {
            const char quote = input[pos++];
            bool closed = false;
            while (pos < input.size()) {
                char c = input[pos++];
                if (c == '\\' && pos < input.size()) {
                    char e = input[pos++];
                    switch (e) {
                        case 'n': out.push_back('\n'); break;
                        case 't': out.push_back('\t'); break;
                        case 'r': out.push_back('\r'); break;
                        default: out.push_back(e);
                    }
                } else if (c == quote) {
                    closed = true;
                    break;
                } else {
                    out.push_back(c);
                }
            }
            if (!closed) throw ParseError(line, "unterminated quoted value");
            return {out, true};
        }
        while (pos < input.size() && stops.find(input[pos]) == std::string_view::npos) {
            out.push_back(input[pos++]);
        }
        std::string_view t = trimmed(out);
        return {std::string(t), false};
    }
};

std::optional<double> parse_real(std::string_view raw) {
    const std::string_view s = trimmed(raw);
    if (s.empty()) return std::nullopt;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return value;
}

bool needs_quoting(std::string_view value) {
    if (value.empty() || value == "?") return true;
    return value.find_first_of(" ,'\"{}%\t\n\r") != std::string_view::npos;
}

void write_quoted(std::ostream& os, std::string_view value) {
    if (!needs_quoting(value)) {
        os << value;
        return;
    }
    os << '\'';
    for (char c : value) {
        switch (c) {
            case '\'': os << "\\'"; break;
            case '\\': os << "\\\\"; break;
            case '\n': os << "\\n"; break;
            case '\t': os << "\\t"; break;
            case '\r': os << "\\r"; break;
            default: os << c;
        }
    }
    os << '\'';
}

void write_real(std::ostream& os, double value) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    os.write(buf, ptr - buf);
}

}  // namespace

Dataset read_arff(std::istream& source) {
    std::string relation = "dataset";
    std::vector<AttributeSpec> attrs;
    std::optional<std::string> class_name;
    std::vector<Instance> instances;
    bool in_data = false;

    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(source, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        std::string_view line = trimmed(raw);
        if (line.empty()) continue;
        if (line.front() == '%') {
            // %@class <name> designates the class attribute on round-trips.
            std::string_view directive = line.substr(1);
            if (starts_with_keyword(directive, "@class")) {
                TokenReader r{directive.substr(6), 0, line_no};
                class_name = r.token("").first;
            }
            continue;
        }

        if (!in_data) {
            if (starts_with_keyword(line, "@relation")) {
                TokenReader r{line.substr(9), 0, line_no};
                relation = r.token("").first;
            } else if (starts_with_keyword(line, "@attribute")) {
                TokenReader r{line.substr(10), 0, line_no};
                auto [name, quoted] = r.token(" \t{");
                if (name.empty()) throw ParseError(line_no, "attribute without a name");
                if (r.consume('{')) {
                    std::vector<std::string> domain;
                    while (true) {
                        auto [value, vq] = r.token(",}");
                        domain.push_back(value);
                        if (r.consume(',')) continue;
                        r.expect('}', "'}' closing the nominal domain");
                        break;
                    }
                    attrs.push_back(AttributeSpec::nominal(name, std::move(domain)));
                } else {
                    auto [kind, kq] = r.token(" \t%");
                    const std::string k = to_lower(kind);
                    if (k == "numeric" || k == "real" || k == "integer") {
                        attrs.push_back(AttributeSpec::numeric(name));
                    } else if (k == "string") {
                        attrs.push_back(AttributeSpec::text(name));
                    } else {
                        throw ParseError(line_no, "unknown attribute kind '" + kind +
                                                      "' for '" + name + "'");
                    }
                }
            } else if (starts_with_keyword(line, "@data")) {
                if (attrs.empty()) throw ParseError(line_no, "@data before any @attribute");
                in_data = true;
            } else {
                throw ParseError(line_no, "unrecognized header line");
            }
            continue;
        }

        if (line.front() == '{') {
            throw ParseError(line_no, "sparse ARFF rows are not supported");
        }
        TokenReader r{line, 0, line_no};
        Instance inst;
        inst.values.reserve(attrs.size());
        for (std::size_t a = 0; a < attrs.size(); ++a) {
            auto [value, quoted] = r.token(",");
            if (!quoted && value == "?") {
                inst.values.push_back(Cell::missing());
            } else {
                switch (attrs[a].kind()) {
                    case AttributeKind::Numeric: {
                        const auto num = parse_real(value);
                        if (!num) {
                            throw ParseError(line_no, "'" + value + "' is not numeric (attribute '" +
                                                          attrs[a].name() + "')");
                        }
                        inst.values.push_back(Cell::number(*num));
                        break;
                    }
                    case AttributeKind::Nominal: {
                        const auto idx = attrs[a].index_of(value);
                        if (!idx) {
                            throw ParseError(line_no, "'" + value + "' is not in the domain of '" +
                                                          attrs[a].name() + "'");
                        }
                        inst.values.push_back(Cell::category(*idx));
                        break;
                    }
                    case AttributeKind::Text:
                        inst.values.push_back(Cell::text(std::move(value)));
                        break;
                }
            }
            if (a + 1 < attrs.size()) {
                if (!r.consume(',')) {
                    throw ParseError(line_no, "expected " + std::to_string(attrs.size()) +
                                                  " values, found " + std::to_string(a + 1));
                }
            }
        }
        if (!r.at_end()) {
            throw ParseError(line_no, "extra values beyond the " + std::to_string(attrs.size()) +
                                          " declared attributes");
        }
        instances.push_back(std::move(inst));
    }

    if (!in_data) throw ParseError(line_no, "missing @data section");

    std::optional<std::size_t> class_index;
    if (class_name) {
        for (std::size_t i = 0; i < attrs.size(); ++i) {
            if (attrs[i].name() == *class_name) class_index = i;
        }
        if (!class_index) {
            throw ParseError(line_no, "class attribute '" + *class_name + "' is not declared");
        }
    }

    Dataset out;
    out.schema = Schema(std::move(attrs), class_index);
    out.instances = std::move(instances);
    out.name = std::move(relation);
    out.validate();
    return out;
}

void write_arff(const Dataset& dataset, std::ostream& sink) {
    sink << "@relation ";
    write_quoted(sink, dataset.name);
    sink << "\n\n";
    for (const AttributeSpec& attr : dataset.schema.attributes()) {
        sink << "@attribute ";
        write_quoted(sink, attr.name());
        sink << ' ';
        switch (attr.kind()) {
            case AttributeKind::Numeric:
                sink << "numeric";
                break;
            case AttributeKind::Text:
                sink << "string";
                break;
            case AttributeKind::Nominal: {
                sink << '{';
                for (std::size_t i = 0; i < attr.domain().size(); ++i) {
                    if (i) sink << ',';
                    write_quoted(sink, attr.domain()[i]);
                }
                sink << '}';
                break;
            }
        }
        sink << '\n';
    }
    if (dataset.schema.class_index()) {
        sink << "%@class ";
        write_quoted(sink, dataset.schema.class_attribute().name());
        sink << '\n';
    }
    sink << "\n@data\n";

    for (const Instance& inst : dataset.instances) {
        for (std::size_t a = 0; a < inst.values.size(); ++a) {
            if (a) sink << ',';
            const Cell& cell = inst.values[a];
            if (cell.is_missing()) {
                sink << '?';
            } else if (cell.is_number()) {
                write_real(sink, cell.number());
            } else if (cell.is_category()) {
                write_quoted(sink, dataset.schema.attribute(a).domain()[cell.category()]);
            } else {
                write_quoted(sink, cell.text());
            }
        }
        sink << '\n';
    }
}

}  // namespace netrec
