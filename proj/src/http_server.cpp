#include "rubik/http_server.hpp"

namespace rubik::service {

namespace {

void forward(Service& service, const httplib::Request& req, httplib::Response& res) {
  const Response out = service.handle(req.method, req.path, req.body);
  res.status = out.status;
  res.set_content(out.body.dump(), "application/json");
}

}  // namespace

void install_routes(httplib::Server& server, Service& service) {
  const auto handler = [&service](const httplib::Request& req, httplib::Response& res) { forward(service, req, res); };
  server.Get(".*", handler);
  server.Post(".*", handler);
}

bool serve(Service& service, const std::string& host, int port) {
  httplib::Server server;
  install_routes(server, service);
  return server.listen(host, port);
}

}  // namespace rubik::service
