#include "http_server.hpp"

#include <httplib.h>

namespace sentinel::http {

namespace {

void reply(httplib::Response& res, const ApiResponse& api_response) {
  res.status = api_response.status;
  res.set_content(api_response.body.dump(), "application/json");
}

}  // namespace

std::unique_ptr<httplib::Server> make_server(Api& api, const std::optional<std::filesystem::path>& static_dir) {
  auto server = std::make_unique<httplib::Server>();

  auto forward = [&api](const httplib::Request& req, httplib::Response& res) {
    reply(res, api.handle(req.method, req.path, req.body));
  };
  server->Get(R"(/api/.*)", forward);
  server->Post(R"(/api/.*)", forward);

  if (static_dir) server->set_mount_point("/", static_dir->string());
  return server;
}

}  // namespace sentinel::http
