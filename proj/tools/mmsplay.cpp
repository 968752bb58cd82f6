// mmsplay: realize an MMS table into a BVH or JSON animation.
//
// Exit codes: 0 ok, 1 validation failure, 2 I/O failure, 3 realization failure.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "mms/error.hpp"
#include "mms/service.hpp"

namespace {

enum Exit { kOk = 0, kInvalid = 1, kIo = 2, kRealize = 3 };

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw mms::IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& bytes) {
    if (path == "-") {
        std::cout << bytes;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw mms::IoError("cannot write " + path);
    out << bytes;
    if (!out) throw mms::IoError("cannot write " + path);
}

void print_diagnostics(const std::vector<mms::Diagnostic>& diagnostics, std::ostream& os) {
    for (const auto& d : diagnostics) os << d.to_string() << '\n';
    os << mms::count_errors(diagnostics) << " errors, " << mms::count_warnings(diagnostics)
       << " warnings\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Realize MMS sign-language tables into skeletal animation"};
    app.set_version_flag("--version", std::string(mms::kVersion));

    std::string mms_path;
    std::string dict_dir;
    std::string out_path;
    std::string format_name = "bvh";
    std::string profile_path;
    std::string segments_path;
    double fps = mms::kDefaultFps;
    bool validate_only = false;
    bool tsv = false;

    app.add_option("--mms", mms_path, "MMS table (CSV, or TSV with --tsv)")->required();
    app.add_option("--dict", dict_dir, "Dictionary directory with one <GLOSS>.bvh per sign");
    app.add_option("--out", out_path, "Output file, '-' for standard output");
    app.add_option("--format", format_name, "Output format")->check(CLI::IsMember({"bvh", "json"}));
    app.add_option("--profile", profile_path, "Skeleton profile file");
    app.add_option("--fps", fps, "Output frame rate")->check(CLI::PositiveNumber);
    app.add_option("--segments", segments_path, "Also write the segment index as JSON");
    app.add_flag("--validate-only", validate_only, "Print diagnostics and exit");
    app.add_flag("--tsv", tsv, "Tab-separated input");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    const mms::Dialect dialect = tsv ? mms::Dialect::tsv() : mms::Dialect::csv();
    std::shared_ptr<mms::GlossDictionary> dict;
    try {
        const mms::SkeletonProfile profile =
            profile_path.empty() ? mms::SkeletonProfile::default_profile()
                                 : mms::SkeletonProfile::load_file(profile_path);
        const std::string text = read_file(mms_path);
        if (!dict_dir.empty()) dict = mms::GlossDictionary::open(dict_dir, profile);

        if (validate_only) {
            const mms::ParseResult parsed = mms::parse_mms(text, dialect);
            const auto diagnostics =
                dict ? mms::check_mms(parsed, *dict) : [&] {
                    auto d = parsed.diagnostics;
                    for (auto& v : mms::validate(parsed.document)) d.push_back(std::move(v));
                    return d;
                }();
            print_diagnostics(diagnostics, std::cout);
            return mms::count_errors(diagnostics) > 0 ? kInvalid : kOk;
        }

        if (!dict) {
            std::cerr << "error: --dict is required for realization\n";
            return kInvalid;
        }
        if (out_path.empty()) {
            std::cerr << "error: --out is required for realization\n";
            return kInvalid;
        }
        const auto format = *mms::parse_export_format(format_name);
        const mms::Artifact artifact = mms::realize_to_artifact(text, dialect, *dict, profile, fps, format);
        write_file(out_path, artifact.bytes);
        std::ostream& log = out_path == "-" ? std::cerr : std::cout;
        for (const auto& w : artifact.warnings) log << w.to_string() << '\n';
        if (!segments_path.empty()) write_file(segments_path, artifact.segments.dump(2) + "\n");
        log << "wrote " << out_path << " (" << artifact.frame_count << " frames at " << fps << " fps)\n";
        return kOk;
    } catch (const mms::ValidationFailed& e) {
        print_diagnostics(e.diagnostics(), std::cout);
        return kInvalid;
    } catch (const mms::MmsParseError& e) {
        std::cout << "error: " << e.what() << '\n' << "1 errors, 0 warnings\n";
        return kInvalid;
    } catch (const mms::ProfileError& e) {
        std::cerr << "error: profile: " << e.what() << '\n';
        return kInvalid;
    } catch (const mms::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    } catch (const mms::BvhError& e) {
        std::cerr << "error: dictionary clip: " << e.what() << '\n';
        return kIo;
    } catch (const mms::RealizeError& e) {
        std::cerr << "error: realization failed at " << e.what() << '\n';
        return kRealize;
    } catch (const std::exception& e) {
        std::cerr << "error: realization failed: " << e.what() << '\n';
        return kRealize;
    }
}
