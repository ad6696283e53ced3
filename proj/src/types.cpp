#include "webharvest/types.hpp"

#include <algorithm>
#include <cctype>

#include "webharvest/errors.hpp"

namespace webharvest {

void validate(const ConceptClass& cls) {
    if (cls.class_id.empty()) throw ConfigError("class with empty class_id");
    if (cls.name.empty()) throw ConfigError("class '" + cls.class_id + "' has an empty name");
    if (std::any_of(cls.name.begin(), cls.name.end(),
                    [](unsigned char c) { return std::isupper(c); })) {
        throw ConfigError("class name '" + cls.name + "' must be lowercase");
    }
    if (cls.target_count < 1) {
        throw ConfigError("class '" + cls.class_id + "' has target_count < 1");
    }
}

std::string encode_origin(const Origin& origin) {
    return origin.is_base() ? "base" : "expansion:" + origin.keyword;
}

Origin decode_origin(const std::string& text) {
    if (text == "base") return Origin{};
    constexpr std::string_view prefix = "expansion:";
    if (text.rfind(prefix, 0) == 0 && text.size() > prefix.size()) {
        return Origin{text.substr(prefix.size())};
    }
    throw Error("unrecognized origin '" + text + "'");
}

std::string to_string(FetchStatus status) {
    switch (status) {
        case FetchStatus::pending: return "pending";
        case FetchStatus::fetched: return "fetched";
        case FetchStatus::failed: return "failed";
    }
    return "unknown";
}

} // namespace webharvest
