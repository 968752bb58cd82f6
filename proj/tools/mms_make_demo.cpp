// mms-make-demo: write the procedural demo dictionary and sample MMS tables.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "mms/error.hpp"
#include "mms/synthetic.hpp"

namespace {

// Citation form, torso and pointing turned left, torso left but pointing right.
constexpr const char* kIndexVariants =
    "maingloss,duration,transition,torsorelocay,domhandrelocay\n"
    "INDEX,,0.5,,\n"
    "INDEX,,0.5,30,30\n"
    "INDEX,,0.5,30,-60\n";

constexpr const char* kNichtSizes =
    "maingloss,framestart,frameend,domhandrelocsx,domhandrelocsy,domhandrelocsz\n"
    "NICHT,0,0.8,,,\n"
    "NICHT,1.3,2.1,0.6,0.6,0.6\n"
    "NICHT,2.6,3.4,1.5,1.5,1.5\n";

constexpr const char* kParallel =
    "maingloss,domgloss,ndomgloss,duration,transition\n"
    "HAUS,,,,\n"
    "MOTION01,INDEX,<HOLD>,1.0,0.4\n"
    "<HOLD>,,,0.5,0\n";

void write(const std::filesystem::path& path, const char* text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) throw mms::IoError("cannot write " + path.string());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Write the demo sign dictionary and example MMS tables"};
    std::string out_dir = "demo";
    app.add_option("--out", out_dir, "Target directory");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    try {
        const std::filesystem::path root(out_dir);
        const auto files = mms::synthetic::write_demo_dictionary(root / "dict");
        write(root / "index_variants.csv", kIndexVariants);
        write(root / "nicht_sizes.csv", kNichtSizes);
        write(root / "parallel.csv", kParallel);
        std::cout << "wrote " << files.size() << " glosses to " << (root / "dict").string()
                  << " and 3 tables to " << root.string() << '\n';
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
