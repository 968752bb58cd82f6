#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mms/math.hpp"

namespace mms {

// Reserved gloss token: freezes the full body (maingloss) or one arm.
inline constexpr std::string_view kHoldGloss = "<HOLD>";

inline bool is_hold(std::string_view gloss) { return gloss == kHoldGloss; }

enum class TimingMode { Absolute, Relative };

struct DurationValue {
    enum class Kind { Seconds, SpeedPercent };
    Kind kind = Kind::Seconds;
    double value = 0.0;

    // Placed length for a clip of the given nominal duration.
    double resolve(double nominal_duration) const {
        return kind == Kind::Seconds ? value : nominal_duration * (100.0 / value);
    }

    bool operator==(const DurationValue&) const = default;
};

// Cells are kept as written; validate() reports rows that mix modes or
// leave an absolute range incomplete.
struct TimingSpec {
    std::optional<double> frame_start;
    std::optional<double> frame_end;
    std::optional<DurationValue> duration;
    std::optional<double> transition;

    bool has_absolute() const { return frame_start || frame_end; }
    bool has_relative() const { return duration || transition; }
    bool is_mixed() const { return has_absolute() && has_relative(); }
    TimingMode mode() const { return has_absolute() ? TimingMode::Absolute : TimingMode::Relative; }

    bool operator==(const TimingSpec&) const = default;
};

// Hand trajectory edit: translation, rotation (degrees) and scale about
// the first trajectory point.
struct TrajectoryParams {
    Vec3 translation = Vec3::Zero();
    Vec3 rotation_deg = Vec3::Zero();
    Vec3 scale = Vec3::Ones();

    bool is_identity() const {
        return translation.isZero(0.0) && rotation_deg.isZero(0.0) && scale == Vec3::Ones();
    }
    bool operator==(const TrajectoryParams& o) const {
        return translation == o.translation && rotation_deg == o.rotation_deg && scale == o.scale;
    }
};

struct LocRotParams {
    Vec3 translation = Vec3::Zero();
    Vec3 rotation_deg = Vec3::Zero();

    bool is_identity() const { return translation.isZero(0.0) && rotation_deg.isZero(0.0); }
    bool operator==(const LocRotParams& o) const {
        return translation == o.translation && rotation_deg == o.rotation_deg;
    }
};

struct InflectionSet {
    TrajectoryParams dom_hand_reloc;
    TrajectoryParams ndom_hand_reloc;
    Vec3 dom_hand_rot = Vec3::Zero();        // degrees
    Vec3 ndom_hand_rot = Vec3::Zero();       // degrees
    Vec3 dom_shoulder_reloc = Vec3::Zero();
    Vec3 ndom_shoulder_reloc = Vec3::Zero();
    LocRotParams torso_reloc;
    Vec3 head_rot = Vec3::Zero();            // degrees

    bool is_identity() const;
    bool operator==(const InflectionSet& o) const;
};

struct MmsRow {
    std::string maingloss;
    std::optional<std::string> domgloss;
    std::optional<std::string> ndomgloss;
    TimingSpec timing;
    InflectionSet inflections;
    std::size_t line = 0;  // 1-based source line, 0 when built in code

    bool operator==(const MmsRow& o) const {
        return maingloss == o.maingloss && domgloss == o.domgloss && ndomgloss == o.ndomgloss &&
               timing == o.timing && inflections == o.inflections;
    }
};

struct Dialect {
    char delimiter = ',';

    static Dialect csv() { return {','}; }
    static Dialect tsv() { return {'\t'}; }
};

struct MmsDocument {
    std::vector<MmsRow> rows;
    Dialect dialect;
    std::vector<std::string> header;  // as read, normalized to lowercase

    // Structural equality: rows only.
    bool operator==(const MmsDocument& o) const { return rows == o.rows; }
};

enum class Severity { Error, Warning };

struct Diagnostic {
    Severity severity = Severity::Error;
    std::optional<std::size_t> row;  // zero-based data row
    std::size_t line = 0;
    std::string column;
    std::string message;

    std::string to_string() const;
};

std::size_t count_errors(const std::vector<Diagnostic>& diagnostics);
std::size_t count_warnings(const std::vector<Diagnostic>& diagnostics);

struct ParseResult {
    MmsDocument document;
    std::vector<Diagnostic> diagnostics;

    bool has_errors() const { return count_errors(diagnostics) > 0; }
};

// Anything that can tell whether a gloss id exists.
class GlossCatalog {
public:
    virtual ~GlossCatalog() = default;
    virtual bool contains(std::string_view gloss) const = 0;
};

// Every concrete column name, in canonical order (46 names).
const std::vector<std::string>& all_column_names();

// Expands a compact column pattern such as "[ n]domhandreloc[ as][xyz]".
// Bracket groups list single-character alternatives; a space stands for the
// empty alternative. Throws MmsParseError when the pattern is malformed or
// yields a name that is not an MMS column.
std::vector<std::string> expand_column_name(std::string_view compact);

// The compact patterns of the inflection column families.
const std::vector<std::string>& inflection_column_patterns();

// Header errors (duplicate column, missing maingloss) throw MmsParseError;
// cell-level problems become diagnostics and the cell takes its default.
ParseResult parse_mms(std::string_view text, Dialect dialect = {});

// Writes the header and every row; columns whose cells are all default are
// left out, except maingloss.
std::string serialize_mms(const MmsDocument& doc);

std::vector<Diagnostic> validate(const MmsDocument& doc, const GlossCatalog* catalog = nullptr);

}  // namespace mms
