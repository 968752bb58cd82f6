#include "mms/mms_table.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_map>

#include "mms/error.hpp"

namespace mms {
namespace {

using Slot = std::function<double&(InflectionSet&)>;

struct InflectionColumn {
    std::string name;
    Slot slot;
    double default_value;
};

void add_vec(std::vector<InflectionColumn>& out, const std::string& prefix,
             std::function<Vec3&(InflectionSet&)> member, double def) {
    const char axes[] = {'x', 'y', 'z'};
    for (int a = 0; a < 3; ++a) {
        out.push_back({prefix + axes[a],
                       [member, a](InflectionSet& s) -> double& { return member(s)[a]; }, def});
    }
}

const std::vector<InflectionColumn>& inflection_columns() {
    static const std::vector<InflectionColumn> columns = [] {
        std::vector<InflectionColumn> c;
        for (const bool dom : {true, false}) {
            const std::string side = dom ? "dom" : "ndom";
            auto reloc = [dom](InflectionSet& s) -> TrajectoryParams& {
                return dom ? s.dom_hand_reloc : s.ndom_hand_reloc;
            };
            add_vec(c, side + "handreloc", [reloc](InflectionSet& s) -> Vec3& { return reloc(s).translation; }, 0.0);
            add_vec(c, side + "handreloca", [reloc](InflectionSet& s) -> Vec3& { return reloc(s).rotation_deg; }, 0.0);
            add_vec(c, side + "handrelocs", [reloc](InflectionSet& s) -> Vec3& { return reloc(s).scale; }, 1.0);
        }
        add_vec(c, "domhandrot", [](InflectionSet& s) -> Vec3& { return s.dom_hand_rot; }, 0.0);
        add_vec(c, "ndomhandrot", [](InflectionSet& s) -> Vec3& { return s.ndom_hand_rot; }, 0.0);
        add_vec(c, "domshoulderreloc", [](InflectionSet& s) -> Vec3& { return s.dom_shoulder_reloc; }, 0.0);
        add_vec(c, "ndomshoulderreloc", [](InflectionSet& s) -> Vec3& { return s.ndom_shoulder_reloc; }, 0.0);
        add_vec(c, "torsoreloc", [](InflectionSet& s) -> Vec3& { return s.torso_reloc.translation; }, 0.0);
        add_vec(c, "torsoreloca", [](InflectionSet& s) -> Vec3& { return s.torso_reloc.rotation_deg; }, 0.0);
        add_vec(c, "headrot", [](InflectionSet& s) -> Vec3& { return s.head_rot; }, 0.0);
        return c;
    }();
    return columns;
}

enum class Column {
    MainGloss, DomGloss, NdomGloss, FrameStart, FrameEnd, Transition, Duration, Inflection
};

const std::vector<std::pair<std::string, Column>>& fixed_columns() {
    static const std::vector<std::pair<std::string, Column>> cols = {
        {"maingloss", Column::MainGloss},   {"domgloss", Column::DomGloss},
        {"ndomgloss", Column::NdomGloss},   {"framestart", Column::FrameStart},
        {"frameend", Column::FrameEnd},     {"transition", Column::Transition},
        {"duration", Column::Duration},
    };
    return cols;
}

struct Record {
    std::size_t line = 0;
    std::vector<std::string> fields;
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

// RFC 4180 style: quoted fields may hold delimiters, doubled quotes and newlines.
std::vector<Record> split_records(std::string_view text, char delim) {
    if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
    std::vector<Record> records;
    Record cur;
    std::string field;
    bool quoted = false;
    bool was_quoted = false;
    std::size_t line = 1;
    cur.line = 1;

    auto end_field = [&] {
        cur.fields.push_back(was_quoted ? field : std::string(trim(field)));
        field.clear();
        was_quoted = false;
    };
    auto end_record = [&] {
        end_field();
        const bool blank = cur.fields.size() == 1 && cur.fields[0].empty();
        if (!blank) records.push_back(std::move(cur));
        cur = Record{};
        cur.line = line;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
            continue;
        }
        if (c == '"' && trim(field).empty()) {
            field.clear();
            quoted = true;
            was_quoted = true;
        } else if (c == delim) {
            end_field();
        } else if (c == '\r') {
            // swallowed; '\n' ends the record
        } else if (c == '\n') {
            ++line;
            end_record();
        } else {
            field.push_back(c);
        }
    }
    if (!field.empty() || !cur.fields.empty() || was_quoted) end_record();
    return records;
}

std::optional<double> parse_number(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string quote_if_needed(const std::string& s, char delim) {
    if (s.find_first_of(std::string{delim, '"', '\n', '\r'}) == std::string::npos &&
        trim(s) == s) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

bool InflectionSet::is_identity() const {
    return dom_hand_reloc.is_identity() && ndom_hand_reloc.is_identity() &&
           dom_hand_rot.isZero(0.0) && ndom_hand_rot.isZero(0.0) &&
           dom_shoulder_reloc.isZero(0.0) && ndom_shoulder_reloc.isZero(0.0) &&
           torso_reloc.is_identity() && head_rot.isZero(0.0);
}

bool InflectionSet::operator==(const InflectionSet& o) const {
    return dom_hand_reloc == o.dom_hand_reloc && ndom_hand_reloc == o.ndom_hand_reloc &&
           dom_hand_rot == o.dom_hand_rot && ndom_hand_rot == o.ndom_hand_rot &&
           dom_shoulder_reloc == o.dom_shoulder_reloc &&
           ndom_shoulder_reloc == o.ndom_shoulder_reloc && torso_reloc == o.torso_reloc &&
           head_rot == o.head_rot;
}

std::string Diagnostic::to_string() const {
    std::ostringstream os;
    os << (severity == Severity::Error ? "error" : "warning");
    if (row) os << ": row " << *row;
    if (line) os << " (line " << line << ")";
    if (!column.empty()) os << " [" << column << "]";
    os << ": " << message;
    return os.str();
}

std::size_t count_errors(const std::vector<Diagnostic>& diagnostics) {
    return static_cast<std::size_t>(std::count_if(
        diagnostics.begin(), diagnostics.end(),
        [](const Diagnostic& d) { return d.severity == Severity::Error; }));
}

std::size_t count_warnings(const std::vector<Diagnostic>& diagnostics) {
    return diagnostics.size() - count_errors(diagnostics);
}

const std::vector<std::string>& all_column_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& [name, col] : fixed_columns()) n.push_back(name);
        for (const auto& c : inflection_columns()) n.push_back(c.name);
        return n;
    }();
    return names;
}

const std::vector<std::string>& inflection_column_patterns() {
    static const std::vector<std::string> patterns = {
        "[ n]domhandreloc[ as][xyz]", "[ n]domhandrot[xyz]", "[ n]domshoulderreloc[xyz]",
        "torsoreloc[ a][xyz]", "headrot[xyz]",
    };
    return patterns;
}

std::vector<std::string> expand_column_name(std::string_view compact) {
    std::vector<std::string> names{""};
    std::size_t i = 0;
    while (i < compact.size()) {
        const char c = compact[i];
        if (c == '[') {
            const std::size_t close = compact.find(']', i);
            if (close == std::string_view::npos) {
                throw MmsParseError("unterminated '[' in column pattern: " + std::string(compact));
            }
            const std::string_view alts = compact.substr(i + 1, close - i - 1);
            if (alts.empty()) {
                throw MmsParseError("empty group in column pattern: " + std::string(compact));
            }
            std::vector<std::string> next;
            for (const auto& prefix : names) {
                for (char a : alts) {
                    next.push_back(a == ' ' ? prefix : prefix + a);
                }
            }
            names = std::move(next);
            i = close + 1;
        } else if (c == ']' || std::isspace(static_cast<unsigned char>(c))) {
            throw MmsParseError("unexpected character in column pattern: " + std::string(compact));
        } else {
            for (auto& n : names) n.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
            ++i;
        }
    }
    const auto& known = all_column_names();
    for (const auto& n : names) {
        if (std::find(known.begin(), known.end(), n) == known.end()) {
            throw MmsParseError("pattern '" + std::string(compact) + "' yields unknown column '" + n + "'");
        }
    }
    return names;
}

ParseResult parse_mms(std::string_view text, Dialect dialect) {
    ParseResult result;
    result.document.dialect = dialect;
    const auto records = split_records(text, dialect.delimiter);
    if (records.empty()) {
        throw MmsParseError("empty MMS table: missing header with maingloss column");
    }

    struct Binding {
        Column kind;
        std::size_t inflection = 0;
    };
    std::unordered_map<std::string, Binding> known;
    for (const auto& [name, col] : fixed_columns()) known.emplace(name, Binding{col});
    for (std::size_t k = 0; k < inflection_columns().size(); ++k) {
        known.emplace(inflection_columns()[k].name, Binding{Column::Inflection, k});
    }

    const Record& header = records.front();
    std::vector<std::optional<Binding>> bindings;
    std::set<std::string> seen;
    bool has_main = false;
    for (const auto& raw : header.fields) {
        const std::string name = lowercase(trim(raw));
        result.document.header.push_back(name);
        if (!name.empty() && !seen.insert(name).second) {
            throw MmsParseError("duplicate header column: " + name);
        }
        auto it = known.find(name);
        if (it == known.end()) {
            bindings.emplace_back();
            result.diagnostics.push_back({Severity::Warning, std::nullopt, header.line, name,
                                          "unknown column ignored"});
            continue;
        }
        has_main = has_main || it->second.kind == Column::MainGloss;
        bindings.emplace_back(it->second);
    }
    if (!has_main) throw MmsParseError("missing maingloss column");

    for (std::size_t r = 1; r < records.size(); ++r) {
        const Record& rec = records[r];
        const std::size_t row_index = r - 1;
        MmsRow row;
        row.line = rec.line;
        auto report = [&](const std::string& column, const std::string& msg) {
            result.diagnostics.push_back({Severity::Error, row_index, rec.line, column, msg});
        };
        if (rec.fields.size() > bindings.size()) {
            result.diagnostics.push_back({Severity::Warning, row_index, rec.line, "",
                                          "row has more cells than the header; extra cells ignored"});
        }
        for (std::size_t c = 0; c < bindings.size() && c < rec.fields.size(); ++c) {
            if (!bindings[c]) continue;
            const std::string& cell = rec.fields[c];
            if (cell.empty()) continue;
            const std::string& column = result.document.header[c];
            auto number = [&]() -> std::optional<double> {
                auto v = parse_number(cell);
                if (!v) report(column, "malformed number '" + cell + "'");
                return v;
            };
            switch (bindings[c]->kind) {
                case Column::MainGloss: row.maingloss = cell; break;
                case Column::DomGloss: row.domgloss = cell; break;
                case Column::NdomGloss: row.ndomgloss = cell; break;
                case Column::FrameStart: row.timing.frame_start = number(); break;
                case Column::FrameEnd: row.timing.frame_end = number(); break;
                case Column::Transition: row.timing.transition = number(); break;
                case Column::Duration: {
                    std::string_view body = trim(cell);
                    DurationValue d;
                    if (!body.empty() && body.back() == '%') {
                        d.kind = DurationValue::Kind::SpeedPercent;
                        body.remove_suffix(1);
                    }
                    if (auto v = parse_number(body)) {
                        d.value = *v;
                        row.timing.duration = d;
                    } else {
                        report(column, "malformed duration '" + cell + "'");
                    }
                    break;
                }
                case Column::Inflection: {
                    if (auto v = number()) {
                        inflection_columns()[bindings[c]->inflection].slot(row.inflections) = *v;
                    }
                    break;
                }
            }
        }
        result.document.rows.push_back(std::move(row));
    }
    return result;
}

std::string serialize_mms(const MmsDocument& doc) {
    const char delim = doc.dialect.delimiter;
    const auto& inflections = inflection_columns();

    std::vector<std::string> header{"maingloss"};
    auto any = [&](auto pred) { return std::any_of(doc.rows.begin(), doc.rows.end(), pred); };
    if (any([](const MmsRow& r) { return r.domgloss.has_value(); })) header.push_back("domgloss");
    if (any([](const MmsRow& r) { return r.ndomgloss.has_value(); })) header.push_back("ndomgloss");
    if (any([](const MmsRow& r) { return r.timing.frame_start.has_value(); })) header.push_back("framestart");
    if (any([](const MmsRow& r) { return r.timing.frame_end.has_value(); })) header.push_back("frameend");
    if (any([](const MmsRow& r) { return r.timing.transition.has_value(); })) header.push_back("transition");
    if (any([](const MmsRow& r) { return r.timing.duration.has_value(); })) header.push_back("duration");
    std::vector<std::size_t> used_inflections;
    for (std::size_t k = 0; k < inflections.size(); ++k) {
        const bool used = any([&](const MmsRow& r) {
            InflectionSet copy = r.inflections;
            return inflections[k].slot(copy) != inflections[k].default_value;
        });
        if (used) {
            used_inflections.push_back(k);
            header.push_back(inflections[k].name);
        }
    }

    std::ostringstream os;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c) os << delim;
        os << header[c];
    }
    os << '\n';

    auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
    for (const MmsRow& row : doc.rows) {
        std::vector<std::string> cells{quote_if_needed(row.maingloss, delim)};
        for (std::size_t c = 1; c < header.size() - used_inflections.size(); ++c) {
            const std::string& h = header[c];
            if (h == "domgloss") cells.push_back(row.domgloss ? quote_if_needed(*row.domgloss, delim) : "");
            else if (h == "ndomgloss") cells.push_back(row.ndomgloss ? quote_if_needed(*row.ndomgloss, delim) : "");
            else if (h == "framestart") cells.push_back(opt(row.timing.frame_start));
            else if (h == "frameend") cells.push_back(opt(row.timing.frame_end));
            else if (h == "transition") cells.push_back(opt(row.timing.transition));
            else if (h == "duration") {
                if (!row.timing.duration) {
                    cells.emplace_back();
                } else {
                    std::string v = format_number(row.timing.duration->value);
                    if (row.timing.duration->kind == DurationValue::Kind::SpeedPercent) v += '%';
                    cells.push_back(v);
                }
            }
        }
        for (std::size_t k : used_inflections) {
            InflectionSet copy = row.inflections;
            const double v = inflections[k].slot(copy);
            cells.push_back(v == inflections[k].default_value ? "" : format_number(v));
        }
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (c) os << delim;
            os << cells[c];
        }
        os << '\n';
    }
    return os.str();
}

std::vector<Diagnostic> validate(const MmsDocument& doc, const GlossCatalog* catalog) {
    std::vector<Diagnostic> out;
    std::optional<std::size_t> last_absolute;

    for (std::size_t r = 0; r < doc.rows.size(); ++r) {
        const MmsRow& row = doc.rows[r];
        const TimingSpec& t = row.timing;
        auto error = [&](const std::string& column, const std::string& msg) {
            out.push_back({Severity::Error, r, row.line, column, msg});
        };
        auto warning = [&](const std::string& column, const std::string& msg) {
            out.push_back({Severity::Warning, r, row.line, column, msg});
        };

        if (row.maingloss.empty()) error("maingloss", "missing maingloss");

        if (t.is_mixed()) {
            error("", "mixed timing modes: framestart/frameend cannot be combined with duration/transition");
        } else if (t.has_absolute()) {
            if (!t.frame_start || !t.frame_end) {
                error(t.frame_start ? "frameend" : "framestart",
                      "incomplete absolute timing: framestart and frameend are both required");
            } else {
                if (*t.frame_start < 0.0) error("framestart", "framestart must not be negative");
                if (!(*t.frame_end > *t.frame_start)) {
                    error("frameend", "frameend must be later than framestart");
                }
                if (last_absolute) {
                    const TimingSpec& prev = doc.rows[*last_absolute].timing;
                    if (prev.frame_start && prev.frame_end) {
                        if (!(*t.frame_start > *prev.frame_start) || *t.frame_start < *prev.frame_end) {
                            std::ostringstream msg;
                            msg << "non-monotonic timestamps: framestart " << *t.frame_start
                                << " precedes the end of row " << *last_absolute << " ("
                                << *prev.frame_end << ")";
                            error("framestart", msg.str());
                        } else if (*t.frame_start == *prev.frame_end && *last_absolute + 1 == r) {
                            warning("framestart", "no gap after previous row (hard cut); consider at least 0.1 s");
                        }
                    }
                }
                last_absolute = r;
            }
        }

        if (t.duration && !(t.duration->value > 0.0)) error("duration", "duration must be positive");
        if (t.transition && *t.transition < 0.0) error("transition", "transition must not be negative");

        if (is_hold(row.maingloss)) {
            if (t.duration && t.duration->kind == DurationValue::Kind::SpeedPercent) {
                error("duration", "<HOLD> has no nominal duration; give duration in seconds, not percent");
            } else if (!t.has_absolute() && !t.duration) {
                error("duration", "<HOLD> in maingloss requires a duration in seconds");
            }
        }
        if (r == 0) {
            if (is_hold(row.maingloss)) error("maingloss", "<HOLD> in the first row has no previous pose");
            if (row.domgloss && is_hold(*row.domgloss)) error("domgloss", "<HOLD> in the first row has no previous pose");
            if (row.ndomgloss && is_hold(*row.ndomgloss)) error("ndomgloss", "<HOLD> in the first row has no previous pose");
        }

        if (catalog) {
            auto check = [&](const char* column, const std::optional<std::string>& gloss) {
                if (gloss && !gloss->empty() && !is_hold(*gloss) && !catalog->contains(*gloss)) {
                    error(column, "unknown gloss '" + *gloss + "'");
                }
            };
            check("maingloss", row.maingloss);
            check("domgloss", row.domgloss);
            check("ndomgloss", row.ndomgloss);
        }
    }
    return out;
}

}  // namespace mms
