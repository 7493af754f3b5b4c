#include "nwfc/server.hpp"

#include <httplib.h>

#include "nwfc/error.hpp"
#include "nwfc/nested.hpp"

namespace nwfc {

using nlohmann::json;

namespace {

WorldConfig checked_config(WorldConfig cfg, const Tileset& ts)
{
    if (cfg.tileset_hash.empty()) {
        cfg.tileset_hash = ts.hash();
    }
    if (cfg.tileset_hash != ts.hash()) {
        throw Error("hash_mismatch", "configured tileset hash does not match the tileset");
    }
    return cfg;
}

ChunkStore open_store(const WorldConfig& cfg, const Tileset& ts)
{
    if (cfg.save_dir && std::filesystem::exists(*cfg.save_dir / "manifest.json")) {
        return load_world(cfg, ts);
    }
    return ChunkStore{};
}

} // namespace

Session::Session(Tileset ts, WorldConfig cfg)
    : tileset_(std::move(ts)),
      config_(checked_config(std::move(cfg), tileset_)),
      store_(open_store(config_, tileset_)),
      brush_(std::make_shared<const WeightField>())
{
}

std::shared_ptr<const WeightField> Session::brush() const
{
    std::lock_guard lock(brush_mutex_);
    return brush_;
}

std::uint64_t Session::paint(const std::string& tag, CellRect rect, double multiplier)
{
    std::lock_guard lock(brush_mutex_);
    auto next = std::make_shared<WeightField>(*brush_);
    next->paint(tag, rect, multiplier);
    brush_ = std::move(next);
    return store_.bump_brush_epoch();
}

std::shared_ptr<const Chunk> Session::chunk(int a, int b)
{
    const auto before = store_.chunks_generated();
    auto c = ensure_chunk(store_, config_, tileset_, *brush(), a, b);
    if (config_.save_dir && store_.chunks_generated() != before) {
        save_world(store_, config_);
    }
    return c;
}

void Session::flush()
{
    if (config_.save_dir) {
        save_world(store_, config_);
    }
}

int http_status_for(const std::string& code)
{
    if (code == "hash_mismatch") {
        return 409;
    }
    if (code == "invalid_brush" || code == "invalid_argument" || code == "parse" || code == "plan" ||
        code == "unknown_edge" || code == "invalid_boundary" || code == "invalid_config") {
        return 400;
    }
    return 500;
}

namespace {

constexpr const char* kJson = "application/json";

constexpr const char* kPlaceholderPage =
    "<!doctype html><html><head><title>nwfc</title></head><body>"
    "<p>N-WFC world service. The designer console is not installed; the JSON API lives under "
    "<code>/api</code>.</p></body></html>";

void send_error(httplib::Response& res, const std::string& code, const std::string& detail)
{
    res.status = http_status_for(code);
    res.set_content(json{{"error", code}, {"detail", detail}}.dump(), kJson);
}

template <typename F>
httplib::Server::Handler guarded(F f)
{
    return [f](const httplib::Request& req, httplib::Response& res) {
        try {
            f(req, res);
        } catch (const Error& e) {
            send_error(res, e.code(), e.what());
        } catch (const json::exception& e) {
            send_error(res, "parse", e.what());
        } catch (const std::exception& e) {
            send_error(res, "internal", e.what());
        }
    };
}

json parse_body(const httplib::Request& req)
{
    try {
        return json::parse(req.body);
    } catch (const json::exception& e) {
        throw Error("parse", std::string("request body is not valid JSON: ") + e.what());
    }
}

int parse_index(const std::string& text)
{
    try {
        std::size_t used = 0;
        const int v = std::stoi(text, &used);
        if (used == text.size()) {
            return v;
        }
    } catch (const std::exception&) {
    }
    throw Error("invalid_argument", "chunk index '" + text + "' is not an integer");
}

void install_routes(httplib::Server& http, Session& session)
{
    http.Get("/api/tileset", guarded([&](const httplib::Request&, httplib::Response& res) {
                 res.set_content(to_json(session.tileset()).dump(), kJson);
             }));

    http.Post("/api/generate", guarded([&](const httplib::Request& req, httplib::Response& res) {
                  const json body = parse_body(req);
                  if (body.contains("tileset_hash") &&
                      body.at("tileset_hash").get<std::string>() != session.tileset().hash()) {
                      throw Error("hash_mismatch", "request targets a different tileset");
                  }
                  const int width = body.at("width").get<int>();
                  const int height = body.at("height").get<int>();
                  const int C = body.value("chunk", 5);
                  const auto seed = body.at("seed").get<std::uint64_t>();
                  const WeightField wf = body.contains("brush") ? parse_brush(body.at("brush")) : WeightField{};
                  const GenerateResult out = generate(plan(height, width, C), session.tileset(), wf, seed);
                  json doc = to_json(out.tiling);
                  doc["stats"] = to_json(out.stats);
                  res.set_content(doc.dump(), kJson);
              }));

    http.Get(R"(/api/chunk/([^/]+)/([^/]+))", guarded([&](const httplib::Request& req, httplib::Response& res) {
                 const int a = parse_index(req.matches[1]);
                 const int b = parse_index(req.matches[2]);
                 if (a < 1 || b < 1) {
                     throw Error("invalid_argument", "chunk indices start at (1,1)");
                 }
                 res.set_content(chunk_to_json(*session.chunk(a, b)).dump(), kJson);
             }));

    http.Get("/api/world", guarded([&](const httplib::Request&, httplib::Response& res) {
                 res.set_content(manifest_json(session.store(), session.config()).dump(), kJson);
             }));

    http.Get("/api/layers", guarded([&](const httplib::Request&, httplib::Response& res) {
                 json doc = to_json(*session.brush());
                 doc["brush_epoch"] = session.store().brush_epoch();
                 res.set_content(doc.dump(), kJson);
             }));

    http.Post("/api/brush", guarded([&](const httplib::Request& req, httplib::Response& res) {
                  const json body = parse_body(req);
                  const json& r = body.at("rect");
                  const CellRect rect{r.at("m0").get<int>(), r.at("n0").get<int>(), r.at("m1").get<int>(),
                                      r.at("n1").get<int>()};
                  const auto epoch = session.paint(body.at("tag").get<std::string>(), rect,
                                                   body.at("mul").get<double>());
                  res.set_content(json{{"brush_epoch", epoch}}.dump(), kJson);
              }));
}

} // namespace

struct Service::Impl {
    Impl(Tileset ts, WorldConfig cfg) : session(std::move(ts), std::move(cfg)) {}
    Session session;
    httplib::Server http;
    bool stopped = false;
};

Service::Service(Tileset ts, WorldConfig cfg, std::optional<std::filesystem::path> static_dir)
    : impl_(std::make_unique<Impl>(std::move(ts), std::move(cfg)))
{
    install_routes(impl_->http, impl_->session);
    if (static_dir) {
        if (!impl_->http.set_mount_point("/", static_dir->string())) {
            throw Error("io", "static directory '" + static_dir->string() + "' does not exist");
        }
    } else {
        impl_->http.Get("/", [](const httplib::Request&, httplib::Response& res) {
            res.set_content(kPlaceholderPage, "text/html");
        });
    }
}

Service::~Service()
{
    try {
        stop();
    } catch (...) {
    }
}

int Service::bind(const std::string& host, int port)
{
    if (port == 0) {
        const int bound = impl_->http.bind_to_any_port(host.c_str());
        if (bound < 0) {
            throw Error("io", "cannot bind to " + host);
        }
        return bound;
    }
    if (!impl_->http.bind_to_port(host.c_str(), port)) {
        throw Error("io", "cannot bind to " + host + ":" + std::to_string(port));
    }
    return port;
}

void Service::listen() { impl_->http.listen_after_bind(); }

void Service::stop()
{
    if (impl_->stopped) {
        return;
    }
    impl_->stopped = true;
    impl_->http.stop();
    impl_->session.flush();
}

Session& Service::session() noexcept { return impl_->session; }

} // namespace nwfc
