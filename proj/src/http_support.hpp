#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace webharvest::detail {

// GET the URL and return the raw body. Timeouts, 429 and 5xx raise
// RetriableError; other failures raise Error with an http_<code> reason.
std::vector<std::uint8_t> http_get_bytes(const std::string& url,
                                         std::chrono::milliseconds timeout);

// GET returning (body, content type) for text backends.
std::pair<std::string, std::string> http_get_text(const std::string& url,
                                                  std::chrono::milliseconds timeout);

} // namespace webharvest::detail
