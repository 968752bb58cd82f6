#include "mms/service.hpp"

#include "httplib.h"

#include "mms/bvh.hpp"
#include "mms/clip_json.hpp"
#include "mms/error.hpp"

namespace mms {

using nlohmann::json;

std::optional<ExportFormat> parse_export_format(std::string_view name) {
    if (name == "bvh") return ExportFormat::Bvh;
    if (name == "json") return ExportFormat::Json;
    return std::nullopt;
}

std::string_view to_string(ExportFormat format) {
    return format == ExportFormat::Bvh ? "bvh" : "json";
}

std::string_view content_type(ExportFormat format) {
    return format == ExportFormat::Bvh ? "application/x-bvh" : "application/json";
}

std::vector<Diagnostic> check_mms(const ParseResult& parsed, const GlossDictionary& dict) {
    std::vector<Diagnostic> out = parsed.diagnostics;
    for (auto& d : validate(parsed.document, &dict)) out.push_back(std::move(d));
    return out;
}

std::string export_timeline(const Timeline& timeline, ExportFormat format) {
    if (format == ExportFormat::Bvh) return save_bvh(timeline.clip);
    return save_clip_json(timeline.clip, segments_to_json(timeline));
}

Artifact realize_to_artifact(std::string_view mms_text, Dialect dialect, const GlossDictionary& dict,
                             const SkeletonProfile& profile, double fps, ExportFormat format) {
    const ParseResult parsed = parse_mms(mms_text, dialect);
    std::vector<Diagnostic> diagnostics = check_mms(parsed, dict);
    if (count_errors(diagnostics) > 0) throw ValidationFailed(std::move(diagnostics));

    RealizeOptions options;
    options.fps = fps;
    Timeline timeline = realize(parsed.document, dict, profile, options);

    Artifact out;
    out.bytes = export_timeline(timeline, format);
    out.content_type = std::string(content_type(format));
    out.frame_count = timeline.clip.frame_count();
    out.segments = segments_to_json(timeline);
    out.warnings = parsed.diagnostics;
    for (auto& w : timeline.warnings) out.warnings.push_back(std::move(w));
    return out;
}

json diagnostics_to_json(const std::vector<Diagnostic>& diagnostics) {
    json list = json::array();
    for (const Diagnostic& d : diagnostics) {
        list.push_back({{"severity", d.severity == Severity::Error ? "error" : "warning"},
                        {"row", d.row ? json(*d.row) : json(nullptr)},
                        {"line", d.line},
                        {"column", d.column},
                        {"message", d.message},
                        {"text", d.to_string()}});
    }
    return {{"errors", count_errors(diagnostics)},
            {"warnings", count_warnings(diagnostics)},
            {"diagnostics", std::move(list)}};
}

namespace {

HttpReply json_reply(int status, const json& body) {
    return {status, "application/json", body.dump(2) + "\n"};
}

HttpReply bad_request(const std::string& message) {
    return json_reply(400, {{"error", message}});
}

}  // namespace

RealizeService::RealizeService(std::shared_ptr<const GlossDictionary> dict,
                               std::map<std::string, SkeletonProfile> profiles)
    : dict_(std::move(dict)), profiles_(std::move(profiles)) {
    profiles_.emplace("default", dict_->profile());
}

HttpReply RealizeService::realize(std::string_view request_body) const {
    json req = json::parse(request_body, nullptr, false);
    if (req.is_discarded()) return bad_request("request body is not valid JSON");
    if (!req.is_object()) return bad_request("request body must be a JSON object");
    if (!req.contains("mms") || !req["mms"].is_string()) return bad_request("missing string field 'mms'");

    Dialect dialect = Dialect::csv();
    if (req.contains("dialect")) {
        const json& d = req["dialect"];
        if (d == "csv") dialect = Dialect::csv();
        else if (d == "tsv") dialect = Dialect::tsv();
        else return bad_request("dialect must be \"csv\" or \"tsv\"");
    }
    if (req.contains("dictionary")) {
        const json& d = req["dictionary"];
        if (!d.is_string()) return bad_request("'dictionary' must be a string");
        const auto& dir = dict_->directory();
        const std::string name = d.get<std::string>();
        if (name != dir.filename().string() && name != dir.string()) {
            return bad_request("unknown dictionary: " + name);
        }
    }
    const SkeletonProfile* profile = &dict_->profile();
    if (req.contains("profile")) {
        const json& p = req["profile"];
        if (!p.is_string()) return bad_request("'profile' must be a string");
        auto it = profiles_.find(p.get<std::string>());
        if (it == profiles_.end()) return bad_request("unknown profile: " + p.get<std::string>());
        profile = &it->second;
    }
    double fps = kDefaultFps;
    if (req.contains("fps")) {
        const json& f = req["fps"];
        if (!f.is_number() || !(f.get<double>() > 0.0)) return bad_request("'fps' must be a positive number");
        fps = f.get<double>();
    }
    ExportFormat format = ExportFormat::Bvh;
    if (req.contains("output_format")) {
        const json& f = req["output_format"];
        auto parsed = f.is_string() ? parse_export_format(f.get<std::string>()) : std::nullopt;
        if (!parsed) return bad_request("output_format must be \"bvh\" or \"json\"");
        format = *parsed;
    }

    try {
        Artifact artifact =
            realize_to_artifact(req["mms"].get<std::string>(), dialect, *dict_, *profile, fps, format);
        return {200, artifact.content_type, std::move(artifact.bytes)};
    } catch (const ValidationFailed& e) {
        return json_reply(422, diagnostics_to_json(e.diagnostics()));
    } catch (const MmsParseError& e) {
        return json_reply(422, diagnostics_to_json({{Severity::Error, std::nullopt, 0, "", e.what()}}));
    } catch (const RealizeError& e) {
        return json_reply(500, {{"error", e.what()}, {"row", e.row()}});
    } catch (const std::exception& e) {
        return json_reply(500, {{"error", e.what()}});
    }
}

HttpReply RealizeService::glosses() const {
    json list = json::array();
    try {
        for (const std::string& g : dict_->glosses()) {
            list.push_back({{"gloss", g}, {"nominal_duration", dict_->lookup(g)->nominal_duration()}});
        }
    } catch (const std::exception& e) {
        return json_reply(500, {{"error", e.what()}});
    }
    return json_reply(200, {{"glosses", std::move(list)}});
}

HttpReply RealizeService::health() const {
    return json_reply(200, {{"status", "ok"}, {"version", kVersion}});
}

struct HttpServer::Impl {
    std::shared_ptr<const RealizeService> service;
    ServerConfig config;
    httplib::Server server;
    bool bound = false;
};

namespace {

void send(httplib::Response& res, const HttpReply& reply) {
    res.status = reply.status;
    res.set_content(reply.body, reply.content_type);
}

}  // namespace

HttpServer::HttpServer(std::shared_ptr<const RealizeService> service, ServerConfig config)
    : impl_(std::make_unique<Impl>()) {
    impl_->service = std::move(service);
    impl_->config = std::move(config);

    auto& svr = impl_->server;
    const RealizeService* svc = impl_->service.get();
    svr.Post("/realize", [svc](const httplib::Request& req, httplib::Response& res) {
        send(res, svc->realize(req.body));
    });
    svr.Get("/glosses", [svc](const httplib::Request&, httplib::Response& res) { send(res, svc->glosses()); });
    svr.Get("/health", [svc](const httplib::Request&, httplib::Response& res) { send(res, svc->health()); });
    // No SO_REUSEPORT: a second server on a taken port must fail.
    svr.set_socket_options([](int sock) {
        int yes = 1;
        ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
    });
    svr.set_post_routing_handler([](const httplib::Request&, httplib::Response& res) {
        res.set_header("X-MMS-Version", std::string(kVersion));
    });
}

HttpServer::~HttpServer() {
    stop();
}

int HttpServer::bind() {
    auto& cfg = impl_->config;
    int port = cfg.port;
    if (port == 0) {
        port = impl_->server.bind_to_any_port(cfg.host);
        if (port < 0) throw IoError("cannot bind " + cfg.host);
    } else if (!impl_->server.bind_to_port(cfg.host, port)) {
        throw IoError("cannot bind " + cfg.host + ":" + std::to_string(port));
    }
    impl_->bound = true;
    cfg.port = port;
    return port;
}

void HttpServer::listen() {
    if (!impl_->bound) bind();
    impl_->server.listen_after_bind();
}

void HttpServer::wait_until_ready() const {
    impl_->server.wait_until_ready();
}

void HttpServer::stop() {
    if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace mms
