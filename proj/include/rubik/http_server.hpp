#pragma once

#include <string>

#include <httplib.h>

#include "rubik/service.hpp"

namespace rubik::service {

// Routes every GET/POST on `server` into `service.handle`.
void install_routes(httplib::Server& server, Service& service);

// Blocks until the server stops. Returns false if the address cannot be bound.
bool serve(Service& service, const std::string& host, int port);

}  // namespace rubik::service
