#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "mms/compose.hpp"
#include "mms/dictionary.hpp"
#include "mms/mms_table.hpp"
#include "mms/profile.hpp"

namespace mms {

inline constexpr std::string_view kVersion = "mmsplay 1.0.0";

enum class ExportFormat { Bvh, Json };

std::optional<ExportFormat> parse_export_format(std::string_view name);
std::string_view to_string(ExportFormat format);
std::string_view content_type(ExportFormat format);

struct Artifact {
    std::string bytes;
    std::string content_type;
    std::vector<Diagnostic> warnings;
    std::size_t frame_count = 0;
    nlohmann::json segments;
};

// Parse diagnostics plus validation against the dictionary.
std::vector<Diagnostic> check_mms(const ParseResult& parsed, const GlossDictionary& dict);

// The one realization path used by both the CLI and the HTTP service:
// parse, validate, realize, export. Throws MmsParseError, ValidationFailed
// (all diagnostics), RealizeError.
Artifact realize_to_artifact(std::string_view mms_text, Dialect dialect, const GlossDictionary& dict,
                             const SkeletonProfile& profile, double fps, ExportFormat format);

std::string export_timeline(const Timeline& timeline, ExportFormat format);

nlohmann::json diagnostics_to_json(const std::vector<Diagnostic>& diagnostics);

// Plain-data response so handlers can be tested without a socket.
struct HttpReply {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
};

// POST /realize body:
//   { "mms": "<table text>", "dialect": "csv"|"tsv", "dictionary": "<name>",
//     "profile": "<name>", "fps": <number>, "output_format": "bvh"|"json" }
// Only "mms" is required. "dictionary" must name the served dictionary
// (directory name or path); "profile" must be a registered profile name.
class RealizeService {
public:
    RealizeService(std::shared_ptr<const GlossDictionary> dict,
                   std::map<std::string, SkeletonProfile> profiles = {});

    HttpReply realize(std::string_view request_body) const;
    HttpReply glosses() const;
    HttpReply health() const;

private:
    std::shared_ptr<const GlossDictionary> dict_;
    std::map<std::string, SkeletonProfile> profiles_;
};

struct ServerConfig {
    std::string host = "127.0.0.1";
    int port = 8080;  // 0 picks a free port
};

// Blocking HTTP front end over RealizeService.
class HttpServer {
public:
    HttpServer(std::shared_ptr<const RealizeService> service, ServerConfig config);
    ~HttpServer();

    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    // Binds the socket; returns the bound port. Throws IoError.
    int bind();
    // Serves until stop(). Binds first if bind() was not called.
    void listen();
    // Blocks until a concurrent listen() accepts connections.
    void wait_until_ready() const;
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace mms
