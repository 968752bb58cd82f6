#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "mms/error.hpp"
#include "mms/mms_table.hpp"

using namespace mms;

namespace {

class SetCatalog : public GlossCatalog {
public:
    explicit SetCatalog(std::set<std::string, std::less<>> g) : glosses_(std::move(g)) {}
    bool contains(std::string_view gloss) const override { return glosses_.find(gloss) != glosses_.end(); }

private:
    std::set<std::string, std::less<>> glosses_;
};

bool has_message(const std::vector<Diagnostic>& d, const std::string& text, Severity sev = Severity::Error) {
    return std::any_of(d.begin(), d.end(), [&](const Diagnostic& x) {
        return x.severity == sev && x.message.find(text) != std::string::npos;
    });
}

// Independent statement of the expected column set.
std::vector<std::string> expected_columns() {
    std::vector<std::string> out = {"maingloss", "domgloss", "ndomgloss", "framestart", "frameend",
                                    "transition", "duration"};
    for (std::string side : {"dom", "ndom"}) {
        for (std::string s : {"x", "y", "z", "ax", "ay", "az", "sx", "sy", "sz"}) out.push_back(side + "handreloc" + s);
    }
    for (std::string side : {"dom", "ndom"}) {
        for (std::string a : {"x", "y", "z"}) out.push_back(side + "handrot" + a);
    }
    for (std::string side : {"dom", "ndom"}) {
        for (std::string a : {"x", "y", "z"}) out.push_back(side + "shoulderreloc" + a);
    }
    for (std::string s : {"x", "y", "z", "ax", "ay", "az"}) out.push_back("torsoreloc" + s);
    for (std::string a : {"x", "y", "z"}) out.push_back("headrot" + a);
    return out;
}

}  // namespace

TEST(Columns, ExpandTablePatterns) {
    EXPECT_EQ(expand_column_name("headrot[xyz]"), (std::vector<std::string>{"headrotx", "headroty", "headrotz"}));
    EXPECT_EQ(expand_column_name("torsoreloc[ a][xyz]"),
              (std::vector<std::string>{"torsorelocx", "torsorelocy", "torsorelocz", "torsorelocax", "torsorelocay",
                                        "torsorelocaz"}));
    const auto rot = expand_column_name("[ n]domhandrot[xyz]");
    EXPECT_EQ(rot.size(), 6u);
    EXPECT_EQ(rot.front(), "domhandrotx");
    EXPECT_EQ(rot.back(), "ndomhandrotz");
    const auto reloc = expand_column_name("[ n]domhandreloc[ as][xyz]");
    EXPECT_EQ(reloc.size(), 18u);
    EXPECT_EQ(reloc.front(), "domhandrelocx");
    EXPECT_EQ(reloc.back(), "ndomhandrelocsz");
}

TEST(Columns, UnknownPatternThrows) {
    EXPECT_THROW(expand_column_name("elbowrot[xyz]"), MmsParseError);
    EXPECT_THROW(expand_column_name("headrot[xyz"), MmsParseError);
}

TEST(Columns, FullSetIs46UniqueNames) {
    const auto& all = all_column_names();
    EXPECT_EQ(all.size(), 46u);
    EXPECT_EQ(std::set<std::string>(all.begin(), all.end()).size(), 46u);
    auto want = expected_columns();
    auto got = all;
    std::sort(want.begin(), want.end());
    std::sort(got.begin(), got.end());
    EXPECT_EQ(got, want);

    // Patterns plus the fixed columns cover every name exactly once.
    std::vector<std::string> expanded = {"maingloss", "domgloss", "ndomgloss", "framestart", "frameend",
                                         "transition", "duration"};
    for (const auto& p : inflection_column_patterns()) {
        for (auto& n : expand_column_name(p)) expanded.push_back(n);
    }
    std::sort(expanded.begin(), expanded.end());
    EXPECT_EQ(expanded, want);
}

TEST(Parse, SimpleRelativeRow) {
    const ParseResult r = parse_mms("maingloss,duration\nNICHT,2.0\n");
    ASSERT_FALSE(r.has_errors());
    ASSERT_EQ(r.document.rows.size(), 1u);
    const MmsRow& row = r.document.rows[0];
    EXPECT_EQ(row.maingloss, "NICHT");
    EXPECT_EQ(row.timing.mode(), TimingMode::Relative);
    ASSERT_TRUE(row.timing.duration);
    EXPECT_EQ(row.timing.duration->kind, DurationValue::Kind::Seconds);
    EXPECT_DOUBLE_EQ(row.timing.duration->value, 2.0);
    EXPECT_TRUE(row.inflections.is_identity());
    EXPECT_EQ(row.inflections, InflectionSet{});
    EXPECT_EQ(row.line, 2u);
}

TEST(Parse, HoldRowWithAllColumns) {
    const auto& cols = all_column_names();
    std::string header, cells;
    for (std::size_t i = 0; i < cols.size(); ++i) {
        header += (i ? "," : "") + cols[i];
        std::string v;
        if (cols[i] == "maingloss") v = "<HOLD>";
        if (cols[i] == "duration") v = "0.5";
        cells += (i ? "," : "") + v;
    }
    const ParseResult r = parse_mms(header + "\n" + cells + "\n");
    ASSERT_FALSE(r.has_errors());
    ASSERT_EQ(r.document.rows.size(), 1u);
    const MmsRow& row = r.document.rows[0];
    EXPECT_TRUE(is_hold(row.maingloss));
    EXPECT_DOUBLE_EQ(row.timing.duration->value, 0.5);
    EXPECT_FALSE(row.domgloss);
    EXPECT_TRUE(row.inflections.is_identity());
}

TEST(Parse, MixedTimingIsReported) {
    const ParseResult r = parse_mms("maingloss,framestart,duration\nINDEX,1.0,2.0\n");
    const auto d = validate(r.document);
    EXPECT_TRUE(has_message(d, "mixed timing modes"));
}

TEST(Parse, SpeedPercent) {
    const ParseResult r = parse_mms("maingloss,duration\nINDEX,50%\n");
    ASSERT_FALSE(r.has_errors());
    const DurationValue d = *r.document.rows[0].timing.duration;
    EXPECT_EQ(d.kind, DurationValue::Kind::SpeedPercent);
    EXPECT_DOUBLE_EQ(d.value, 50.0);
    EXPECT_DOUBLE_EQ(d.resolve(2.0), 4.0);
    const DurationValue nominal{DurationValue::Kind::SpeedPercent, 100.0};
    EXPECT_DOUBLE_EQ(nominal.resolve(1.7), 1.7);
}

TEST(Parse, InflectionCells) {
    const ParseResult r = parse_mms(
        "maingloss,domhandrelocx,domhandrelocay,domhandrelocsz,ndomhandrotz,domshoulderrelocy,torsorelocay,"
        "torsorelocz,headrotx\n"
        "INDEX,0.1,-30,1.5,12,0.02,15,0.05,-10\n");
    ASSERT_FALSE(r.has_errors());
    const InflectionSet& inf = r.document.rows[0].inflections;
    EXPECT_EQ(inf.dom_hand_reloc.translation, Vec3(0.1, 0, 0));
    EXPECT_EQ(inf.dom_hand_reloc.rotation_deg, Vec3(0, -30, 0));
    EXPECT_EQ(inf.dom_hand_reloc.scale, Vec3(1, 1, 1.5));
    EXPECT_EQ(inf.ndom_hand_rot, Vec3(0, 0, 12));
    EXPECT_EQ(inf.dom_shoulder_reloc, Vec3(0, 0.02, 0));
    EXPECT_EQ(inf.torso_reloc.rotation_deg, Vec3(0, 15, 0));
    EXPECT_EQ(inf.torso_reloc.translation, Vec3(0, 0, 0.05));
    EXPECT_EQ(inf.head_rot, Vec3(-10, 0, 0));
    EXPECT_TRUE(inf.ndom_hand_reloc.is_identity());
    EXPECT_FALSE(inf.is_identity());
}

TEST(Parse, HeaderProblemsThrow) {
    EXPECT_THROW(parse_mms("duration,transition\n1,2\n"), MmsParseError);
    EXPECT_THROW(parse_mms("maingloss,duration,duration\nA,1,2\n"), MmsParseError);
    EXPECT_THROW(parse_mms(""), MmsParseError);
}

TEST(Parse, UnknownColumnWarns) {
    const ParseResult r = parse_mms("maingloss,mouthing\nINDEX,pa\n");
    EXPECT_FALSE(r.has_errors());
    EXPECT_EQ(count_warnings(r.diagnostics), 1u);
    EXPECT_EQ(r.diagnostics[0].column, "mouthing");
}

TEST(Parse, MalformedNumberIsOneDiagnostic) {
    const ParseResult r = parse_mms("maingloss,duration,headroty\nINDEX,abc,1.5.2\n");
    EXPECT_EQ(count_errors(r.diagnostics), 2u);
    ASSERT_EQ(r.document.rows.size(), 1u);
    EXPECT_FALSE(r.document.rows[0].timing.duration);
    EXPECT_EQ(r.document.rows[0].inflections.head_rot, Vec3::Zero());
    for (const auto& d : r.diagnostics) {
        EXPECT_EQ(d.line, 2u);
        EXPECT_NE(d.to_string().find("line 2"), std::string::npos);
    }
}

TEST(Parse, TabDialectQuotesBomAndCrlf) {
    const ParseResult tsv = parse_mms("maingloss\tduration\r\nINDEX\t1.5\r\n", Dialect::tsv());
    ASSERT_FALSE(tsv.has_errors());
    EXPECT_DOUBLE_EQ(tsv.document.rows[0].timing.duration->value, 1.5);

    const ParseResult quoted = parse_mms("\xEF\xBB\xBFMainGloss,DomGloss\n\"A,B\",\"say \"\"hi\"\"\"\n");
    ASSERT_FALSE(quoted.has_errors());
    EXPECT_EQ(quoted.document.rows[0].maingloss, "A,B");
    EXPECT_EQ(*quoted.document.rows[0].domgloss, "say \"hi\"");
}

TEST(Parse, ColumnsInAnyOrderAndBlankLines) {
    const ParseResult r = parse_mms("transition,maingloss\n0.3,INDEX\n\n,NICHT\n");
    ASSERT_FALSE(r.has_errors());
    ASSERT_EQ(r.document.rows.size(), 2u);
    EXPECT_DOUBLE_EQ(*r.document.rows[0].timing.transition, 0.3);
    EXPECT_EQ(r.document.rows[1].maingloss, "NICHT");
    EXPECT_EQ(r.document.rows[1].line, 4u);
}

TEST(RoundTrip, SerializeParse) {
    const std::string text =
        "maingloss,domgloss,ndomgloss,framestart,frameend,domhandrelocx,domhandrelocsy,torsorelocay,headrotz\n"
        "INDEX,,,0,1,0.1,,30,\n"
        "NICHT,INDEX,<HOLD>,1.5,2.5,,0.6,,-12.25\n";
    const ParseResult a = parse_mms(text);
    ASSERT_FALSE(a.has_errors());
    const ParseResult b = parse_mms(serialize_mms(a.document));
    ASSERT_FALSE(b.has_errors());
    EXPECT_EQ(a.document, b.document);

    const ParseResult rel = parse_mms("maingloss,duration,transition\nA,50%,0.25\nB,1.125,\n");
    EXPECT_EQ(parse_mms(serialize_mms(rel.document)).document, rel.document);
}

TEST(RoundTrip, AllColumnsSurvive) {
    const auto& cols = all_column_names();
    MmsRow row;
    row.maingloss = "A";
    row.domgloss = "B";
    row.ndomgloss = "C";
    row.timing.duration = DurationValue{DurationValue::Kind::SpeedPercent, 80.0};
    row.timing.transition = 0.2;
    double v = 0.5;
    auto next = [&] { return v += 0.25; };
    auto fill = [&](Vec3& x) { x = Vec3(next(), next(), next()); };
    fill(row.inflections.dom_hand_reloc.translation);
    fill(row.inflections.dom_hand_reloc.rotation_deg);
    fill(row.inflections.dom_hand_reloc.scale);
    fill(row.inflections.ndom_hand_reloc.translation);
    fill(row.inflections.ndom_hand_reloc.rotation_deg);
    fill(row.inflections.ndom_hand_reloc.scale);
    fill(row.inflections.dom_hand_rot);
    fill(row.inflections.ndom_hand_rot);
    fill(row.inflections.dom_shoulder_reloc);
    fill(row.inflections.ndom_shoulder_reloc);
    fill(row.inflections.torso_reloc.translation);
    fill(row.inflections.torso_reloc.rotation_deg);
    fill(row.inflections.head_rot);
    MmsDocument doc;
    doc.rows.push_back(row);
    const std::string text = serialize_mms(doc);
    const ParseResult back = parse_mms(text);
    ASSERT_FALSE(back.has_errors());
    EXPECT_EQ(back.document, doc);
    // Every column except the absolute timing pair is in the header.
    EXPECT_EQ(back.document.header.size(), cols.size() - 2);
}

TEST(Validate, NonMonotonicTimestamps) {
    const ParseResult r = parse_mms("maingloss,framestart,frameend\nA,2.0,3.0\nB,1.0,1.5\n");
    EXPECT_TRUE(has_message(validate(r.document), "non-monotonic timestamps"));
}

TEST(Validate, OverlapWithPreviousEnd) {
    const ParseResult r = parse_mms("maingloss,framestart,frameend\nA,0,2.0\nB,1.0,3.0\n");
    EXPECT_TRUE(has_message(validate(r.document), "non-monotonic timestamps"));
}

TEST(Validate, UnknownGlossNeedsCatalog) {
    const ParseResult r = parse_mms("maingloss,domgloss\nXYZZY,INDEX\n");
    EXPECT_TRUE(validate(r.document).empty());
    SetCatalog catalog({"INDEX", "NICHT"});
    const auto d = validate(r.document, &catalog);
    ASSERT_EQ(d.size(), 1u);
    EXPECT_NE(d[0].message.find("unknown gloss"), std::string::npos);
    EXPECT_NE(d[0].message.find("XYZZY"), std::string::npos);
}

TEST(Validate, WellFormedThreeRows) {
    const ParseResult r = parse_mms(
        "maingloss,ndomgloss,duration,transition,domhandrelocay\n"
        "INDEX,,,,\n"
        "NICHT,<HOLD>,50%,0.3,-20\n"
        "<HOLD>,,0.5,0,\n");
    SetCatalog catalog({"INDEX", "NICHT"});
    EXPECT_TRUE(validate(r.document, &catalog).empty());
}

TEST(Validate, AbsoluteTimingRules) {
    EXPECT_TRUE(has_message(validate(parse_mms("maingloss,framestart\nA,1\n").document), "incomplete absolute timing"));
    EXPECT_TRUE(has_message(validate(parse_mms("maingloss,framestart,frameend\nA,1,1\n").document),
                            "frameend must be later"));
    EXPECT_TRUE(has_message(validate(parse_mms("maingloss,framestart,frameend\nA,-1,1\n").document),
                            "must not be negative"));
    const auto touching = validate(parse_mms("maingloss,framestart,frameend\nA,0,1\nB,1,2\n").document);
    EXPECT_EQ(count_errors(touching), 0u);
    EXPECT_TRUE(has_message(touching, "hard cut", Severity::Warning));
}

TEST(Validate, HoldRules) {
    EXPECT_TRUE(has_message(validate(parse_mms("maingloss,duration\nA,\n<HOLD>,50%\n").document),
                            "not percent"));
    EXPECT_TRUE(has_message(validate(parse_mms("maingloss,duration\nA,\n<HOLD>,\n").document),
                            "requires a duration in seconds"));
    EXPECT_TRUE(has_message(validate(parse_mms("maingloss,duration\n<HOLD>,1\n").document),
                            "first row"));
    EXPECT_TRUE(has_message(validate(parse_mms("maingloss,ndomgloss\nA,<HOLD>\n").document), "first row"));
}

TEST(Validate, NegativeAndZeroValues) {
    EXPECT_TRUE(has_message(validate(parse_mms("maingloss,duration\nA,0\n").document), "duration must be positive"));
    EXPECT_TRUE(has_message(validate(parse_mms("maingloss,transition\nA,-0.1\n").document),
                            "transition must not be negative"));
}

TEST(Diagnostic, TextFormat) {
    const Diagnostic d{Severity::Error, 1, 3, "duration", "duration must be positive"};
    EXPECT_EQ(d.to_string(), "error: row 1 (line 3) [duration]: duration must be positive");
}
