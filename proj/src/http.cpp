#include "http_support.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "webharvest/acquisition.hpp"
#include "webharvest/errors.hpp"

namespace webharvest::detail {

namespace {

struct SplitUrl {
    std::string origin; // scheme://host[:port]
    std::string path;   // /path?query
};

SplitUrl split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw Error("unsupported_scheme");
    const auto path_start = url.find('/', scheme_end + 3);
    SplitUrl out;
    if (path_start == std::string::npos) {
        out.origin = url;
        out.path = "/";
    } else {
        out.origin = url.substr(0, path_start);
        out.path = url.substr(path_start);
    }
    return out;
}

httplib::Result get(const std::string& url, std::chrono::milliseconds timeout) {
    const SplitUrl split = split_url(url);
    httplib::Client client(split.origin);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_follow_location(true);
    return client.Get(split.path);
}

void raise_on_error(const httplib::Result& res) {
    if (!res) {
        const auto err = res.error();
        if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read ||
            err == httplib::Error::Write || err == httplib::Error::Connection) {
            throw RetriableError("timeout");
        }
        throw Error("http_transport_error");
    }
    if (res->status == 429 || res->status >= 500) {
        throw RetriableError("http_" + std::to_string(res->status));
    }
    if (res->status != 200) {
        throw Error("http_" + std::to_string(res->status));
    }
}

} // namespace

std::vector<std::uint8_t> http_get_bytes(const std::string& url,
                                         std::chrono::milliseconds timeout) {
    auto res = get(url, timeout);
    raise_on_error(res);
    return {res->body.begin(), res->body.end()};
}

std::pair<std::string, std::string> http_get_text(const std::string& url,
                                                  std::chrono::milliseconds timeout) {
    auto res = get(url, timeout);
    raise_on_error(res);
    return {res->body, res->get_header_value("Content-Type")};
}

} // namespace webharvest::detail
