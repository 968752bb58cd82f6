// mms-server: HTTP front end for realization.
//
//   POST /realize   JSON request -> animation bytes | 400 | 422 diagnostics | 500
//   GET  /glosses   dictionary gloss ids with nominal durations
//   GET  /health    status and version
//
// MMS_PORT and MMS_DICT supply the port and dictionary when the matching
// flags are not given.

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"

#include "mms/error.hpp"
#include "mms/service.hpp"

namespace {

mms::HttpServer* g_server = nullptr;

void on_signal(int) {
    if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MMS realization service"};
    app.set_version_flag("--version", std::string(mms::kVersion));

    std::string host = "127.0.0.1";
    int port = -1;
    std::string dict_dir;
    std::vector<std::string> profile_paths;
    app.add_option("--host", host, "Listen address");
    app.add_option("--port", port, "Listen port, 0 for any free port (env MMS_PORT, default 8080)");
    app.add_option("--dict", dict_dir, "Dictionary directory (env MMS_DICT)");
    app.add_option("--profile", profile_paths,
                   "Skeleton profile file, selectable in requests by its file stem");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    if (port < 0) {
        const char* env = std::getenv("MMS_PORT");
        port = env ? std::atoi(env) : 8080;
    }
    if (dict_dir.empty()) {
        if (const char* env = std::getenv("MMS_DICT")) dict_dir = env;
    }
    if (dict_dir.empty()) {
        std::cerr << "error: no dictionary (use --dict or MMS_DICT)\n";
        return 2;
    }

    try {
        std::map<std::string, mms::SkeletonProfile> profiles;
        for (const auto& p : profile_paths) {
            profiles.emplace(std::filesystem::path(p).stem().string(), mms::SkeletonProfile::load_file(p));
        }
        auto dict = mms::GlossDictionary::open(dict_dir, mms::SkeletonProfile::default_profile());
        dict->preload();
        auto service = std::make_shared<const mms::RealizeService>(dict, std::move(profiles));

        mms::HttpServer server(service, {host, port});
        const int bound = server.bind();
        g_server = &server;
        std::signal(SIGINT, on_signal);
        std::signal(SIGTERM, on_signal);
        std::cout << "listening on " << host << ":" << bound << " with " << dict->glosses().size()
                  << " glosses from " << dict_dir << std::endl;
        server.listen();
        g_server = nullptr;
    } catch (const mms::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
