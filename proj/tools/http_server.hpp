#pragma once

#include <filesystem>
#include <memory>
#include <optional>

#include "sentinel/api.hpp"

namespace httplib {
class Server;
}

namespace sentinel::http {

/// Binds every /api route to `api`. When `static_dir` is set, its files
/// (the built trader console) are served from "/".
std::unique_ptr<httplib::Server> make_server(Api& api,
                                             const std::optional<std::filesystem::path>& static_dir = {});

}  // namespace sentinel::http
